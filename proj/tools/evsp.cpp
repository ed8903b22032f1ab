#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "evsp/bench.hpp"
#include "evsp/generator.hpp"
#include "evsp/oracle.hpp"
#include "evsp/reduction.hpp"
#include "evsp/validator.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;

struct SolveFlags {
  std::string algo = "evsp3";
  double time_limit = 3600.0;
  double maxrun = 720.0;
  std::string cuts = "default";
  std::string focus = "default";
  int threads = 1;
  bool verbose = false;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--time-limit", f.time_limit, "Wall-clock limit in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--maxrun-seconds", f.maxrun, "Bounded incumbent search of rcbvf, seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--cuts", f.cuts, "Cutting planes at nodes")->check(CLI::IsMember({"default", "off"}));
  cmd->add_option("--focus", f.focus, "Search emphasis")->check(CLI::IsMember({"default", "feasibility"}));
  cmd->add_option("--threads", f.threads, "Solver threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--verbose", f.verbose, "Show solver log");
}

evsp::milp::SolverParams params_from(const SolveFlags& f) {
  evsp::milp::SolverParams p;
  p.time_limit_seconds = f.time_limit;
  p.threads = f.threads;
  p.cuts = f.cuts == "off" ? evsp::milp::CutSetting::Off : evsp::milp::CutSetting::Default;
  p.focus = f.focus == "feasibility" ? evsp::milp::Focus::Feasibility : evsp::milp::Focus::Default;
  p.verbose = f.verbose;
  return p;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

int cmd_solve(const std::string& file, const SolveFlags& flags, const std::string& out, const std::string& fixings,
              const std::string& lp_out) {
  const auto inst = evsp::load_instance(file);
  const auto algo = evsp::bench::parse_algo(flags.algo);
  const auto params = params_from(flags);
  if (!lp_out.empty()) evsp::build_model(inst).model.write_lp(lp_out);
  evsp::RcbvfTrace trace;
  const auto result = evsp::bench::run_algorithm(inst, algo, params, evsp::RcbvfOptions{flags.maxrun}, nullptr, &trace);
  const auto report = evsp::validate(inst, result.solution);
  std::cout << "instance " << inst.name() << "\n"
            << "algorithm " << flags.algo << "\n"
            << "status " << evsp::milp::to_string(result.stats.status) << "\n"
            << "objective " << result.solution.objective << "\n"
            << "best_bound " << result.stats.best_bound << "\n"
            << "served " << join(result.solution.served_ids(inst)) << "\n"
            << "solve_seconds " << result.stats.solve_seconds << "\n"
            << "valid " << (report.ok() ? "yes" : "no") << "\n";
  if (!out.empty()) evsp::save_solution(inst, result.solution, out);
  if (!fixings.empty()) {
    if (algo != evsp::bench::Algo::Rcbvf) throw std::runtime_error("--dump-fixings needs --algo rcbvf");
    write_text(fixings, trace.ledger.dump(inst, evsp::TimeGrid(inst)));
  }
  if (!report.ok()) {
    std::cerr << report.summary();
    return kExitValidation;
  }
  return 0;
}

int cmd_generate(const std::string& kind, int customers, std::uint64_t seed, const std::string& out) {
  std::optional<evsp::Instance> inst;
  if (kind == "grid") {
    inst = evsp::gen::generate_grid(customers, seed);
  } else if (kind == "small") {
    inst = evsp::gen::generate_small(seed);
  } else {
    inst = evsp::gen::generate_vamo(kind.back() - '0', customers, seed);
  }
  write_text(out, evsp::dump_instance(*inst));
  return 0;
}

int cmd_validate(const std::string& inst_file, const std::string& sol_file) {
  const auto inst = evsp::load_instance(inst_file);
  const auto sol = evsp::load_solution(inst, sol_file);
  const auto report = evsp::validate(inst, sol);
  std::cout << report.summary();
  return report.ok() ? 0 : kExitValidation;
}

int cmd_oracle_solve(const std::string& file, std::size_t max_demands) {
  const auto inst = evsp::load_instance(file);
  evsp::oracle::Limits limits;
  limits.max_demands = max_demands;
  const auto r = evsp::oracle::solve_exhaustive(inst, limits);
  std::vector<std::string> ids;
  for (const auto c : r.served) ids.push_back(inst.customers()[c].id);
  std::cout << "objective " << r.objective << "\nserved " << join(ids) << "\n";
  return 0;
}

int cmd_oracle_witness(std::uint64_t seed, std::size_t count, const std::string& mode, const std::string& out) {
  const auto m = mode == "cardinality" ? evsp::oracle::WitnessMode::Cardinality : evsp::oracle::WitnessMode::Subset;
  const auto w = evsp::oracle::find_nonmonotone_witness([](std::uint64_t s) { return evsp::gen::generate_small(s); }, seed,
                                                        count, m);
  if (!w) {
    std::cout << "no witness\n";
    return 0;
  }
  auto ids = [&](const std::vector<std::size_t>& cs) {
    std::vector<std::string> out_ids;
    for (const auto c : cs) out_ids.push_back(w->instance.customers()[c].id);
    return join(out_ids);
  };
  std::cout << "seed " << w->seed << "\ninfeasible " << ids(w->smaller) << "\nfeasible " << ids(w->larger) << "\n";
  if (!out.empty()) evsp::save_instance(w->instance, out);
  return 0;
}

int cmd_reduce(const std::string& graph_file, const std::string& out) {
  const auto g = evsp::reduction::parse_edge_list(read_text(graph_file));
  const auto r = evsp::reduction::misp_to_evsp(g);
  std::size_t isolated = 0;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) isolated += g.degree(v) == 0 ? 1 : 0;
  std::cerr << "scale " << r.scale << " (optimum = scale * independence number; " << isolated
            << " isolated vertices each add one scale unit)\n";
  write_text(out, evsp::dump_instance(r.instance));
  return 0;
}

int cmd_bench(const std::vector<std::string>& files, const SolveFlags& flags, const std::string& settings,
              const std::string& csv, const std::string& profile) {
  std::vector<std::filesystem::path> paths(files.begin(), files.end());
  std::vector<evsp::bench::Algo> algos;
  if (flags.algo == "all") {
    algos = {evsp::bench::Algo::Evsp3, evsp::bench::Algo::Lrbvf, evsp::bench::Algo::Rcbvf};
  } else {
    algos = {evsp::bench::parse_algo(flags.algo)};
  }
  std::vector<evsp::milp::SolverParams> profiles;
  auto base = params_from(flags);
  if (settings == "default" || settings == "both") {
    auto p = base;
    p.cuts = evsp::milp::CutSetting::Default;
    p.focus = evsp::milp::Focus::Default;
    profiles.push_back(settings == "both" ? p : base);
  }
  if (settings == "tuned" || settings == "both") {
    auto p = base;
    p.cuts = evsp::milp::CutSetting::Off;
    p.focus = evsp::milp::Focus::Feasibility;
    profiles.push_back(p);
  }
  std::vector<evsp::bench::RunReport> all;
  for (const auto& p : profiles) {
    for (const auto a : algos) {
      auto reports = evsp::bench::run_batch(paths, a, p, evsp::RcbvfOptions{flags.maxrun});
      all.insert(all.end(), reports.begin(), reports.end());
    }
  }
  write_text(csv, evsp::bench::reports_csv(all));
  if (!profile.empty()) write_text(profile, evsp::bench::profile_csv(evsp::bench::performance_profile(all)));
  const bool solver_error = std::any_of(all.begin(), all.end(), [](const auto& r) { return r.status == "error"; });
  const bool invalid = std::any_of(all.begin(), all.end(), [](const auto& r) { return r.status != "error" && !r.valid; });
  if (invalid) return kExitValidation;
  return solver_error ? kExitSolver : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electric vehicle sharing: models, algorithms, validation and benchmarks"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  std::string solve_file, solve_out, solve_fixings, solve_lp;
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("instance", solve_file, "Instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--algo", solve_flags.algo, "Algorithm")->check(CLI::IsMember({"evsp3", "lrbvf", "rcbvf"}));
  add_solver_flags(solve, solve_flags);
  solve->add_option("--out", solve_out, "Write the solution file");
  solve->add_option("--dump-fixings", solve_fixings, "Write the rcbvf fixing ledger as text");
  solve->add_option("--write-lp", solve_lp, "Write the model in LP format");

  std::string gen_kind, gen_out = "-";
  int gen_customers = 30;
  std::uint64_t gen_seed = 1;
  auto* generate = app.add_subcommand("generate", "Generate a random instance");
  generate->add_option("kind", gen_kind, "grid, vamo1..vamo4 or small")
      ->required()
      ->check(CLI::IsMember({"grid", "vamo1", "vamo2", "vamo3", "vamo4", "small"}));
  generate->add_option("--customers", gen_customers, "Number of customers")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen_seed, "Random seed");
  generate->add_option("--out", gen_out, "Output file (default stdout)");

  std::string val_inst, val_sol;
  auto* validate = app.add_subcommand("validate", "Check a solution against an instance");
  validate->add_option("instance", val_inst)->required()->check(CLI::ExistingFile);
  validate->add_option("solution", val_sol)->required()->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle", "Brute-force referee for tiny instances");
  oracle->require_subcommand(1);
  std::string oracle_file;
  std::size_t oracle_max_demands = 12;
  auto* oracle_solve = oracle->add_subcommand("solve", "Optimum by enumeration");
  oracle_solve->add_option("instance", oracle_file)->required()->check(CLI::ExistingFile);
  oracle_solve->add_option("--max-demands", oracle_max_demands, "Demand cap");
  std::uint64_t wit_seed = 1;
  std::size_t wit_count = 200;
  std::string wit_mode = "subset", wit_out;
  auto* oracle_witness = oracle->add_subcommand("witness", "Search small random instances for non-monotone feasibility");
  oracle_witness->add_option("--seed", wit_seed, "First seed");
  oracle_witness->add_option("--count", wit_count, "Number of seeds to try");
  oracle_witness->add_option("--mode", wit_mode)->check(CLI::IsMember({"subset", "cardinality"}));
  oracle_witness->add_option("--out", wit_out, "Write the witness instance");

  auto* reduce = app.add_subcommand("reduce", "Build an instance from another problem");
  reduce->require_subcommand(1);
  std::string graph_file, reduce_out = "-";
  auto* misp = reduce->add_subcommand("misp", "Maximum independent set to vehicle sharing");
  misp->add_option("graph", graph_file, "Edge list, one 'u v' pair per line")->required()->check(CLI::ExistingFile);
  misp->add_option("--out", reduce_out, "Output file (default stdout)");

  SolveFlags bench_flags;
  std::vector<std::string> bench_files;
  std::string bench_settings = "default", bench_csv = "-", bench_profile;
  auto* bench = app.add_subcommand("bench", "Batch-solve instances and write CSV reports");
  bench->add_option("instances", bench_files)->required()->check(CLI::ExistingFile);
  bench->add_option("--algo", bench_flags.algo, "Algorithm or 'all'")
      ->check(CLI::IsMember({"evsp3", "lrbvf", "rcbvf", "all"}));
  add_solver_flags(bench, bench_flags);
  bench->add_option("--settings", bench_settings, "default, tuned (cuts off, feasibility focus) or both")
      ->check(CLI::IsMember({"default", "tuned", "both"}));
  bench->add_option("--out", bench_csv, "CSV report (default stdout)");
  bench->add_option("--profile", bench_profile, "Performance-profile CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return cmd_solve(solve_file, solve_flags, solve_out, solve_fixings, solve_lp);
    if (*generate) return cmd_generate(gen_kind, gen_customers, gen_seed, gen_out);
    if (*validate) return cmd_validate(val_inst, val_sol);
    if (*oracle_solve) return cmd_oracle_solve(oracle_file, oracle_max_demands);
    if (*oracle_witness) return cmd_oracle_witness(wit_seed, wit_count, wit_mode, wit_out);
    if (*misp) return cmd_reduce(graph_file, reduce_out);
    if (*bench) return cmd_bench(bench_files, bench_flags, bench_settings, bench_csv, bench_profile);
  } catch (const evsp::milp::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const evsp::milp::CapabilityError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const evsp::IntegralityError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
