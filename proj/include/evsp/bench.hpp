#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evsp/exact.hpp"

namespace evsp::bench {

enum class Algo { Evsp3, Lrbvf, Rcbvf };

std::string_view to_string(Algo a);
/// Throws std::invalid_argument for unknown names.
Algo parse_algo(std::string_view name);

/// Runs one algorithm on one instance.
AlgorithmResult run_algorithm(const Instance& inst, Algo algo, const milp::SolverParams& params,
                              const RcbvfOptions& rcbvf_options = {}, milp::Backend* backend = nullptr,
                              RcbvfTrace* trace = nullptr);

/// ((ub - lb) / lb) * 100, or nothing when lb is not positive.
std::optional<double> gap_percent(double upper, double lower);

struct RunReport {
  std::string instance;
  std::string algorithm;
  /// Solver status name, or "error" when the run failed.
  std::string status;
  bool has_incumbent = false;
  double objective = 0.0;   // lower bound
  double best_bound = 0.0;  // upper bound
  /// Set only when there is an incumbent with a positive objective.
  std::optional<double> gap;
  double solve_seconds = 0.0;
  double total_seconds = 0.0;
  bool valid = false;
  std::string params;
  std::string error;

  bool optimal() const { return status == "optimal"; }
};

std::string describe_params(const milp::SolverParams& params);

RunReport make_report(const std::string& instance, Algo algo, const milp::SolverParams& params,
                      const Instance& inst, const AlgorithmResult& result);

/// Solves every file; a failing instance becomes an "error" row and the
/// batch continues.
std::vector<RunReport> run_batch(const std::vector<std::filesystem::path>& files, Algo algo,
                                 const milp::SolverParams& params, const RcbvfOptions& rcbvf_options = {});

/// Header, one row per report, then a SUMMARY row carrying the percentage of
/// optimal runs (status column) and the mean solve time.
std::string reports_csv(const std::vector<RunReport>& reports);
double percent_optimal(const std::vector<RunReport>& reports);
double average_solve_seconds(const std::vector<RunReport>& reports);

struct ProfilePoint {
  double seconds = 0.0;
  double percent_solved = 0.0;
};

/// Cumulative share of runs solved to optimality against solve time, as a
/// step function starting at (0, 0).
std::vector<ProfilePoint> performance_profile(const std::vector<RunReport>& reports);
std::string profile_csv(const std::vector<ProfilePoint>& points);

}  // namespace evsp::bench
