#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "omd/instance.hpp"
#include "omd/types.hpp"

namespace omd {

enum class Algorithm { NonAdaptive, Adaptive, AdaptiveMulti };

struct RunConfig {
  std::int64_t n_productive = 1;  // N, required productive steps
  double eps = 1.0;               // productivity threshold
  Algorithm algorithm = Algorithm::Adaptive;
  std::uint64_t max_total_steps = 0;  // 0 = automatic worst-case cap
  std::uint64_t seed = 0;             // instance seed, echoed into reports

  /// eps = C / sqrt(N) for a given budget constant C > 0.
  static double eps_from_budget(double c, std::int64_t n_productive);
};

/// One iteration of the log. `iterate` is x^k, the point the step's
/// decisions were taken at; `constraint_value` is g(x^k) of the aggregate
/// max-constraint; `m_k` is the dual norm of the subgradient actually used
/// (the global M for the non-adaptive method).
struct StepRecord {
  std::int64_t k = 0;
  bool productive = false;
  std::optional<std::int64_t> objective_index;  // 0-based, set on productive steps
  double m_k = 0.0;
  double h_k = 0.0;
  double constraint_value = 0.0;
  Vector iterate;
};

struct RunReport {
  Algorithm algorithm = Algorithm::Adaptive;
  std::vector<StepRecord> trace;
  std::int64_t n_productive = 0;     // N
  std::int64_t n_nonproductive = 0;  // N_J
  double delta = 0.0;                // guaranteed accuracy, recomputable from trace
  double elapsed_seconds = 0.0;

  std::int64_t total_steps() const {
    return static_cast<std::int64_t>(trace.size());
  }
  /// The (objective index, iterate) pairs of the productive steps, in order.
  std::vector<std::pair<std::int64_t, Vector>> productive_iterates() const;
};

/// Raised when the step cap is hit before N productive steps; carries the
/// partial trace (delta is NaN there).
class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(std::string message, RunReport partial);
  const RunReport& partial() const { return partial_; }

 private:
  RunReport partial_;
};

/// Raised by the offline comparator when no point with g <= 0 is found.
class NoFeasiblePoint : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Fixed step h = eps / M^2; requires instance.lipschitz > 0.
RunReport run_nonadaptive(const ProblemInstance& instance,
                          const RunConfig& config);

/// Adaptive steps h_k = theta0 (sum_{t<=k} M_t^2)^{-1/2}; non-productive
/// steps follow the subgradient of the max-aggregate constraint.
RunReport run_adaptive(const ProblemInstance& instance, const RunConfig& config);

/// As run_adaptive, but non-productive steps follow the smallest-index
/// violated component's own subgradient.
RunReport run_adaptive_multi(const ProblemInstance& instance,
                             const RunConfig& config);

/// Dispatch on config.algorithm.
RunReport run(const ProblemInstance& instance, const RunConfig& config);

/// Recomputes the guaranteed accuracy from a complete trace. Summation
/// follows trace order, so the result is bit-identical to the delta the run
/// itself reported.
///
///   NonAdaptive:          eps/2 + M^2 theta0^2 / (eps N) - eps N_J / (2N)
///   Adaptive(+Multi):     (2 theta0 / N) sqrt(sum_k M_k^2) - eps N_J / N
double certificate(std::span<const StepRecord> trace, Algorithm algorithm,
                   double eps, double theta0, double lipschitz,
                   std::int64_t n_productive);

struct ComparatorResult {
  Vector minimizer;
  double value = 0.0;
  bool constrained = true;  // minimized over {x in Q : g(x) <= 0} vs all of Q
};

/// Approximate offline minimizer of the average objective, by a long run of
/// switching-subgradient mirror descent with decreasing constraint
/// thresholds. With respect_constraint the candidates are forced into
/// {g <= 0} by mixing toward the most feasible point seen. Accuracy target
/// 1e-4 on desk-scale instances when given enough iterations.
ComparatorResult offline_comparator(const ProblemInstance& instance,
                                    std::int64_t iterations,
                                    bool respect_constraint = true);

/// (1/N) sum over productive pairs (i, x^k) of f_i(x^k), minus the
/// comparator value.
double regret(const RunReport& report, const ProblemInstance& instance,
              double comparator_value);

struct BoundCheckResult {
  bool regret_nonnegative = false;  // whether check (a) applies
  // (a) N_J <= N (1 + 2 M^2 theta0^2 / C^2) with C = eps sqrt(N); vacuously
  // true when the regret is negative.
  bool nonproductive_bound_nonneg_ok = true;
  // (b) longest consecutive non-productive run < 2 M^2 theta0^2 / eps^2 + 1,
  // and N_J <= (2 M^2 theta0^2 / eps^2) N.
  bool max_nonproductive_run_ok = true;
  bool nonproductive_total_ok = true;
  // (c) regret <= delta (+ comparator tolerance).
  bool regret_within_delta = true;

  std::int64_t max_nonproductive_run = 0;
  double run_length_bound = 0.0;
  double nonproductive_total_bound = 0.0;

  bool all_passed() const {
    return nonproductive_bound_nonneg_ok && max_nonproductive_run_ok &&
           nonproductive_total_ok && regret_within_delta;
  }
};

BoundCheckResult check_bounds(const RunReport& report, const RunConfig& config,
                              double lipschitz, double theta0,
                              double regret_value,
                              double comparator_tol = 1e-4);

/// A stored run: everything needed to re-audit the trace offline.
struct TraceFile {
  RunConfig config;
  ProxSetup setup;
  double lipschitz = 0.0;
  RunReport report;
  std::optional<double> regret;
  std::optional<double> comparator_value;
};

/// Re-audits a stored run: certificate recomputation, productive /
/// non-productive dichotomy, step-rule fidelity, counts, the section-5
/// non-productive bounds, feasibility of stored iterates, and regret vs
/// delta when both are present. Returns one named diagnostic per failed
/// check; empty means the file is consistent.
std::vector<std::string> audit_trace(const TraceFile& file);

}  // namespace omd
