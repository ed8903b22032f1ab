#include "evsp/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "evsp/heuristics.hpp"
#include "evsp/validator.hpp"

namespace evsp::bench {

std::string_view to_string(Algo a) {
  switch (a) {
    case Algo::Evsp3:
      return "evsp3";
    case Algo::Lrbvf:
      return "lrbvf";
    case Algo::Rcbvf:
      return "rcbvf";
  }
  return "?";
}

Algo parse_algo(std::string_view name) {
  if (name == "evsp3") return Algo::Evsp3;
  if (name == "lrbvf") return Algo::Lrbvf;
  if (name == "rcbvf") return Algo::Rcbvf;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

AlgorithmResult run_algorithm(const Instance& inst, Algo algo, const milp::SolverParams& params,
                              const RcbvfOptions& rcbvf_options, milp::Backend* backend, RcbvfTrace* trace) {
  switch (algo) {
    case Algo::Evsp3:
      return solve_evsp3(inst, params, backend);
    case Algo::Lrbvf:
      return lrbvf(inst, params, backend);
    case Algo::Rcbvf:
      return rcbvf(inst, params, rcbvf_options, backend, trace);
  }
  throw std::invalid_argument("unknown algorithm");
}

std::optional<double> gap_percent(double upper, double lower) {
  if (!(lower > 0.0)) return std::nullopt;
  return (upper - lower) / lower * 100.0;
}

std::string describe_params(const milp::SolverParams& params) {
  std::ostringstream os;
  os << "time_limit=" << params.time_limit_seconds << ";threads=" << params.threads
     << ";cuts=" << (params.cuts == milp::CutSetting::Off ? "off" : "default")
     << ";focus=" << (params.focus == milp::Focus::Feasibility ? "feasibility" : "default");
  return os.str();
}

RunReport make_report(const std::string& instance, Algo algo, const milp::SolverParams& params, const Instance& inst,
                      const AlgorithmResult& result) {
  RunReport r;
  r.instance = instance;
  r.algorithm = std::string(to_string(algo));
  r.status = std::string(milp::to_string(result.stats.status));
  r.has_incumbent = result.stats.status == milp::SolveStatus::Optimal || result.stats.status == milp::SolveStatus::FeasibleLimit;
  r.objective = result.stats.objective;
  r.best_bound = result.stats.best_bound;
  if (r.has_incumbent) r.gap = gap_percent(r.best_bound, r.objective);
  r.solve_seconds = result.stats.solve_seconds;
  r.total_seconds = result.stats.total_seconds;
  r.valid = validate(inst, result.solution).ok();
  r.params = describe_params(params);
  return r;
}

std::vector<RunReport> run_batch(const std::vector<std::filesystem::path>& files, Algo algo,
                                 const milp::SolverParams& params, const RcbvfOptions& rcbvf_options) {
  std::vector<RunReport> out;
  for (const auto& f : files) {
    try {
      const auto inst = load_instance(f);
      out.push_back(make_report(inst.name(), algo, params, inst, run_algorithm(inst, algo, params, rcbvf_options)));
    } catch (const std::exception& e) {
      RunReport r;
      r.instance = f.stem().string();
      r.algorithm = std::string(to_string(algo));
      r.status = "error";
      r.params = describe_params(params);
      r.error = e.what();
      out.push_back(std::move(r));
    }
  }
  return out;
}

namespace {

std::string num(double v, const char* fmt = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (const char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

double percent_optimal(const std::vector<RunReport>& reports) {
  if (reports.empty()) return 0.0;
  const auto n = std::count_if(reports.begin(), reports.end(), [](const RunReport& r) { return r.optimal(); });
  return 100.0 * static_cast<double>(n) / static_cast<double>(reports.size());
}

double average_solve_seconds(const std::vector<RunReport>& reports) {
  if (reports.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : reports) sum += r.solve_seconds;
  return sum / static_cast<double>(reports.size());
}

std::string reports_csv(const std::vector<RunReport>& reports) {
  std::ostringstream os;
  os << "instance,algorithm,status,objective,best_bound,gap_percent,solve_seconds,total_seconds,valid,params,error\n";
  for (const auto& r : reports) {
    os << csv_field(r.instance) << ',' << r.algorithm << ',' << r.status << ',';
    if (r.has_incumbent) {
      os << num(r.objective) << ',' << num(r.best_bound) << ',' << (r.gap ? num(*r.gap, "%.4f") : "undefined");
    } else {
      os << ",,";
    }
    os << ',' << num(r.solve_seconds, "%.3f") << ',' << num(r.total_seconds, "%.3f") << ',' << (r.valid ? "yes" : "no")
       << ',' << csv_field(r.params) << ',' << csv_field(r.error) << '\n';
  }
  std::string algos;
  for (const auto& r : reports) {
    if (algos.empty()) {
      algos = r.algorithm;
    } else if (algos != r.algorithm) {
      algos = "mixed";
    }
  }
  os << "SUMMARY," << algos << ",opt_percent=" << num(percent_optimal(reports), "%.1f") << ",,,,"
     << num(average_solve_seconds(reports), "%.3f") << ",,,,\n";
  return os.str();
}

std::vector<ProfilePoint> performance_profile(const std::vector<RunReport>& reports) {
  std::vector<ProfilePoint> points{{0.0, 0.0}};
  if (reports.empty()) return points;
  std::vector<double> times;
  for (const auto& r : reports) {
    if (r.optimal()) times.push_back(r.solve_seconds);
  }
  std::sort(times.begin(), times.end());
  const double n = static_cast<double>(reports.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double pct = 100.0 * static_cast<double>(i + 1) / n;
    if (points.back().seconds == times[i]) {
      points.back().percent_solved = pct;
    } else {
      points.push_back({times[i], pct});
    }
  }
  return points;
}

std::string profile_csv(const std::vector<ProfilePoint>& points) {
  std::ostringstream os;
  os << "seconds,percent_solved\n";
  for (const auto& p : points) os << num(p.seconds, "%.3f") << ',' << num(p.percent_solved, "%.4f") << '\n';
  return os.str();
}

}  // namespace evsp::bench
