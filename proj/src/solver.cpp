#include "omd/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <utility>

namespace omd {

namespace {

constexpr double kFeasTol = 1e-9;

std::uint64_t default_step_cap(std::int64_t n_productive, double eps,
                               double lipschitz, double theta0) {
  // Worst case from the negative-regret analysis: at most
  // 2 M^2 theta0^2 / eps^2 non-productive steps between productive ones.
  const double burst =
      2.0 * lipschitz * lipschitz * theta0 * theta0 / (eps * eps);
  const double cap =
      static_cast<double>(n_productive) * (1.0 + std::ceil(burst)) + 1.0;
  return static_cast<std::uint64_t>(std::min(cap, 1e18));
}

void validate_config(const ProblemInstance& instance, const RunConfig& config) {
  if (config.n_productive < 1)
    throw std::invalid_argument("run: n_productive must be at least 1");
  if (!(config.eps > 0.0)) throw std::invalid_argument("run: eps must be positive");
  if (instance.objectives.size() < config.n_productive)
    throw std::invalid_argument(
        "run: instance has fewer objectives than requested productive steps");
  if (config.max_total_steps != 0 &&
      config.max_total_steps < static_cast<std::uint64_t>(config.n_productive))
    throw std::invalid_argument("run: max_total_steps below n_productive");
}

RunReport run_impl(const ProblemInstance& instance, const RunConfig& config) {
  validate_config(instance, config);
  const auto start = std::chrono::steady_clock::now();

  const ProxSetup& setup = instance.setup;
  const double theta0 = setup.theta0();
  const double m_global = instance.lipschitz;
  const double eps = config.eps;
  const Algorithm alg = config.algorithm;

  if (alg == Algorithm::NonAdaptive && !(m_global > 0.0))
    throw std::invalid_argument(
        "run: the non-adaptive step eps/M^2 needs a positive Lipschitz bound");
  const double h_fixed =
      alg == Algorithm::NonAdaptive ? eps / (m_global * m_global) : 0.0;

  const std::uint64_t cap =
      config.max_total_steps != 0
          ? config.max_total_steps
          : default_step_cap(config.n_productive, eps, m_global, theta0);

  Vector x = clamp_to_interior(setup, instance.x0);
  if (!is_feasible(setup, x, kFeasTol))
    throw std::invalid_argument("run: x0 is not feasible for the setup");

  std::vector<StepRecord> trace;
  std::int64_t i = 0;  // completed productive steps
  std::int64_t k = 0;
  double sum_m2 = 0.0;

  auto elapsed = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  while (i < config.n_productive) {
    if (static_cast<std::uint64_t>(k) >= cap) {
      RunReport partial;
      partial.algorithm = alg;
      partial.trace = std::move(trace);
      partial.n_productive = i;
      partial.n_nonproductive = k - i;
      partial.delta = std::numeric_limits<double>::quiet_NaN();
      partial.elapsed_seconds = elapsed();
      throw BudgetExhausted(
          "run: step cap reached before the requested productive steps",
          std::move(partial));
    }

    const FirstOrderAnswer aggregate = eval_max_affine(instance.constraint, x);
    const bool productive = aggregate.value <= eps;

    FirstOrderAnswer direction;
    std::optional<std::int64_t> objective_index;
    if (productive) {
      direction = instance.objectives.eval(i, x);
      objective_index = i;
    } else if (alg == Algorithm::AdaptiveMulti) {
      direction = eval_violated_component(instance.constraint, x, eps).second;
    } else {
      direction = aggregate;
    }

    double m_k, h_k;
    if (alg == Algorithm::NonAdaptive) {
      m_k = m_global;
      h_k = h_fixed;
    } else {
      m_k = dual_norm(setup, direction.subgradient);
      sum_m2 += m_k * m_k;
      // With an all-zero gradient prefix the step formula divides by zero;
      // the current point already minimizes what was queried, so stand still.
      h_k = sum_m2 > 0.0 ? theta0 / std::sqrt(sum_m2) : 0.0;
    }

    trace.push_back(
        {k, productive, objective_index, m_k, h_k, aggregate.value, x});

    if (h_k > 0.0) x = mirror_step(setup, x, direction.subgradient, h_k);
    if (productive) ++i;
    ++k;
  }

  RunReport report;
  report.algorithm = alg;
  report.trace = std::move(trace);
  report.n_productive = config.n_productive;
  report.n_nonproductive = k - config.n_productive;
  report.delta = certificate(report.trace, alg, eps, theta0, m_global,
                             config.n_productive);
  report.elapsed_seconds = elapsed();
  return report;
}

}  // namespace

double RunConfig::eps_from_budget(double c, std::int64_t n_productive) {
  if (!(c > 0.0)) throw std::invalid_argument("eps_from_budget: C must be positive");
  if (n_productive < 1)
    throw std::invalid_argument("eps_from_budget: N must be at least 1");
  return c / std::sqrt(static_cast<double>(n_productive));
}

std::vector<std::pair<std::int64_t, Vector>> RunReport::productive_iterates()
    const {
  std::vector<std::pair<std::int64_t, Vector>> out;
  out.reserve(static_cast<std::size_t>(n_productive));
  for (const StepRecord& rec : trace)
    if (rec.productive) out.emplace_back(*rec.objective_index, rec.iterate);
  return out;
}

BudgetExhausted::BudgetExhausted(std::string message, RunReport partial)
    : std::runtime_error(std::move(message)), partial_(std::move(partial)) {}

RunReport run_nonadaptive(const ProblemInstance& instance,
                          const RunConfig& config) {
  if (config.algorithm != Algorithm::NonAdaptive)
    throw std::invalid_argument("run_nonadaptive: config selects another algorithm");
  return run_impl(instance, config);
}

RunReport run_adaptive(const ProblemInstance& instance,
                       const RunConfig& config) {
  if (config.algorithm != Algorithm::Adaptive)
    throw std::invalid_argument("run_adaptive: config selects another algorithm");
  return run_impl(instance, config);
}

RunReport run_adaptive_multi(const ProblemInstance& instance,
                             const RunConfig& config) {
  if (config.algorithm != Algorithm::AdaptiveMulti)
    throw std::invalid_argument("run_adaptive_multi: config selects another algorithm");
  return run_impl(instance, config);
}

RunReport run(const ProblemInstance& instance, const RunConfig& config) {
  return run_impl(instance, config);
}

double certificate(std::span<const StepRecord> trace, Algorithm algorithm,
                   double eps, double theta0, double lipschitz,
                   std::int64_t n_productive) {
  std::int64_t productive = 0;
  for (const StepRecord& rec : trace) productive += rec.productive ? 1 : 0;
  if (productive != n_productive)
    throw std::invalid_argument(
        "certificate: trace does not contain exactly N productive steps");

  const double n = static_cast<double>(n_productive);
  const double nj =
      static_cast<double>(static_cast<std::int64_t>(trace.size()) - n_productive);
  if (algorithm == Algorithm::NonAdaptive) {
    return eps / 2.0 + lipschitz * lipschitz * theta0 * theta0 / (eps * n) -
           eps * nj / (2.0 * n);
  }
  double sum_m2 = 0.0;
  for (const StepRecord& rec : trace) sum_m2 += rec.m_k * rec.m_k;
  return 2.0 * theta0 / n * std::sqrt(sum_m2) - eps * nj / n;
}

ComparatorResult offline_comparator(const ProblemInstance& instance,
                                    std::int64_t iterations,
                                    bool respect_constraint) {
  if (iterations < 1)
    throw std::invalid_argument("offline_comparator: iterations must be positive");

  const ProxSetup& setup = instance.setup;
  const double theta0 = setup.theta0();
  Vector x = clamp_to_interior(setup, instance.x0);
  if (!is_feasible(setup, x, kFeasTol))
    throw std::invalid_argument("offline_comparator: x0 is not feasible");

  double best_value = std::numeric_limits<double>::infinity();
  Vector best_x;
  double anchor_g = std::numeric_limits<double>::infinity();
  Vector anchor;

  auto consider = [&](const Vector& point, double value) {
    if (value < best_value) {
      best_value = value;
      best_x = point;
    }
  };

  auto consider_constrained = [&](const Vector& point, double g_value,
                                  double f_value) {
    if (g_value <= 0.0) {
      consider(point, f_value);
    } else if (anchor_g <= 0.0 && g_value > anchor_g) {
      // Pull the candidate into {g <= 0} along the segment to the most
      // feasible point seen; convexity of g keeps the mix feasible.
      const double mix = g_value / (g_value - anchor_g);
      const Vector pulled = (1.0 - mix) * point + mix * anchor;
      consider(pulled, instance.objectives.eval_average(pulled).value);
    }
  };

  // Anchor phase: descend the constraint alone until strictly inside it.
  if (respect_constraint) {
    Vector y = x;
    double sum_m2 = 0.0;
    const std::int64_t budget = std::max<std::int64_t>(iterations / 10, 100);
    for (std::int64_t t = 0; t < budget; ++t) {
      const FirstOrderAnswer g = eval_max_affine(instance.constraint, y);
      if (g.value < anchor_g) {
        anchor_g = g.value;
        anchor = y;
      }
      if (g.value < 0.0) break;
      const double m = dual_norm(setup, g.subgradient);
      sum_m2 += m * m;
      if (!(sum_m2 > 0.0)) break;  // constant constraint, nothing to descend
      y = mirror_step(setup, y, g.subgradient, theta0 / std::sqrt(sum_m2));
    }
  }

  const double g_start = eval_max_affine(instance.constraint, x).value;
  const double eps_scale = std::max(1.0, g_start);
  double sum_m2 = 0.0;

  for (std::int64_t t = 0; t < iterations; ++t) {
    const FirstOrderAnswer g = eval_max_affine(instance.constraint, x);
    if (g.value < anchor_g) {
      anchor_g = g.value;
      anchor = x;
    }
    const double eps_t =
        eps_scale / std::sqrt(static_cast<double>(t) + 1.0);

    const Vector* step_direction = nullptr;
    FirstOrderAnswer f;
    if (!respect_constraint || g.value <= eps_t) {
      f = instance.objectives.eval_average(x);
      if (respect_constraint) {
        consider_constrained(x, g.value, f.value);
      } else {
        consider(x, f.value);
      }
      step_direction = &f.subgradient;
    } else {
      step_direction = &g.subgradient;
    }

    const double m = dual_norm(setup, *step_direction);
    sum_m2 += m * m;
    if (sum_m2 > 0.0)
      x = mirror_step(setup, x, *step_direction, theta0 / std::sqrt(sum_m2));
  }

  {
    const double g_final = eval_max_affine(instance.constraint, x).value;
    const double f_final = instance.objectives.eval_average(x).value;
    if (respect_constraint)
      consider_constrained(x, g_final, f_final);
    else
      consider(x, f_final);
  }

  if (!std::isfinite(best_value))
    throw NoFeasiblePoint(
        "offline_comparator: no point with g <= 0 found within the iteration "
        "budget");
  return {std::move(best_x), best_value, respect_constraint};
}

double regret(const RunReport& report, const ProblemInstance& instance,
              double comparator_value) {
  double sum = 0.0;
  std::int64_t seen = 0;
  for (const StepRecord& rec : report.trace) {
    if (!rec.productive) continue;
    sum += instance.objectives.eval(*rec.objective_index, rec.iterate).value;
    ++seen;
  }
  if (seen != report.n_productive)
    throw std::invalid_argument("regret: report trace is incomplete");
  return sum / static_cast<double>(report.n_productive) - comparator_value;
}

BoundCheckResult check_bounds(const RunReport& report, const RunConfig& config,
                              double lipschitz, double theta0,
                              double regret_value, double comparator_tol) {
  BoundCheckResult out;
  const double eps = config.eps;
  const double n = static_cast<double>(report.n_productive);
  const double nj = static_cast<double>(report.n_nonproductive);
  const double burst =
      2.0 * lipschitz * lipschitz * theta0 * theta0 / (eps * eps);

  out.regret_nonnegative = regret_value >= 0.0;
  // With C = eps sqrt(N), N (1 + 2 M^2 theta0^2 / C^2) = N + burst.
  out.nonproductive_bound_nonneg_ok =
      !out.regret_nonnegative || nj <= n + burst + 1e-9;

  std::int64_t current = 0, longest = 0;
  for (const StepRecord& rec : report.trace) {
    current = rec.productive ? 0 : current + 1;
    longest = std::max(longest, current);
  }
  out.max_nonproductive_run = longest;
  out.run_length_bound = burst + 1.0;
  out.max_nonproductive_run_ok =
      static_cast<double>(longest) < burst + 1.0 + 1e-9;
  out.nonproductive_total_bound = burst * n;
  out.nonproductive_total_ok = nj <= burst * n + 1e-9;
  out.regret_within_delta = regret_value <= report.delta + comparator_tol;
  return out;
}

std::vector<std::string> audit_trace(const TraceFile& file) {
  std::vector<std::string> failures;
  const RunReport& report = file.report;
  const RunConfig& config = file.config;
  const double eps = config.eps;
  const double theta0 = file.setup.theta0();
  const double m_global = file.lipschitz;

  std::int64_t productive = 0;
  for (const StepRecord& rec : report.trace) productive += rec.productive ? 1 : 0;
  const std::int64_t nonproductive = report.total_steps() - productive;
  if (productive != report.n_productive)
    failures.push_back("productive count mismatch");
  if (nonproductive != report.n_nonproductive)
    failures.push_back("non-productive count mismatch");

  bool indices_ok = true;
  for (std::int64_t k = 0; k < report.total_steps(); ++k)
    indices_ok = indices_ok && report.trace[static_cast<std::size_t>(k)].k == k;
  if (!indices_ok) failures.push_back("step indices inconsistent");

  bool dichotomy_ok = true;
  for (const StepRecord& rec : report.trace)
    dichotomy_ok = dichotomy_ok && rec.productive == (rec.constraint_value <= eps);
  if (!dichotomy_ok) failures.push_back("productivity dichotomy violated");

  bool steps_ok = true;
  if (config.algorithm == Algorithm::NonAdaptive) {
    const double h_fixed = eps / (m_global * m_global);
    for (const StepRecord& rec : report.trace)
      steps_ok = steps_ok && rec.h_k == h_fixed && rec.m_k == m_global;
  } else {
    double sum_m2 = 0.0;
    for (const StepRecord& rec : report.trace) {
      sum_m2 += rec.m_k * rec.m_k;
      if (sum_m2 > 0.0) {
        steps_ok = steps_ok && std::abs(rec.h_k * std::sqrt(sum_m2) - theta0) <=
                                   1e-12 * std::max(1.0, theta0);
      } else {
        steps_ok = steps_ok && rec.h_k == 0.0;
      }
    }
  }
  if (!steps_ok) failures.push_back("step rule violated");

  if (productive == report.n_productive) {
    const double recomputed =
        certificate(report.trace, config.algorithm, eps, theta0, m_global,
                    report.n_productive);
    if (recomputed != report.delta) failures.push_back("certificate mismatch");
  } else {
    failures.push_back("certificate not recomputable from incomplete trace");
  }

  const double burst = 2.0 * m_global * m_global * theta0 * theta0 / (eps * eps);
  std::int64_t current = 0, longest = 0;
  for (const StepRecord& rec : report.trace) {
    current = rec.productive ? 0 : current + 1;
    longest = std::max(longest, current);
  }
  if (!(static_cast<double>(longest) < burst + 1.0 + 1e-9))
    failures.push_back("consecutive non-productive run exceeds bound");
  if (!(static_cast<double>(nonproductive) <=
        burst * static_cast<double>(report.n_productive) + 1e-9))
    failures.push_back("total non-productive steps exceed bound");

  bool feasible_ok = true;
  for (const StepRecord& rec : report.trace)
    if (rec.iterate.size() > 0)
      feasible_ok = feasible_ok && is_feasible(file.setup, rec.iterate, kFeasTol);
  if (!feasible_ok) failures.push_back("infeasible iterate");

  if (file.regret.has_value() && *file.regret > report.delta + 1e-4)
    failures.push_back("regret exceeds delta");

  return failures;
}

ProblemInstance make_instance(ObjectiveList objectives,
                              MaxAffineConstraint constraint, ProxSetup setup,
                              Vector x0) {
  const Index dim = setup.dimension();
  if (objectives.dimension() != dim)
    throw std::invalid_argument("make_instance: objective dimension mismatch");
  if (constraint.dimension() != dim)
    throw std::invalid_argument("make_instance: constraint dimension mismatch");
  if (x0.size() != dim)
    throw std::invalid_argument("make_instance: x0 dimension mismatch");
  if (!is_feasible(setup, x0, kFeasTol))
    throw std::invalid_argument("make_instance: x0 is not feasible");
  const double m = lipschitz_bound(objectives, constraint, setup);
  return ProblemInstance{std::move(objectives), std::move(constraint),
                         std::move(setup), std::move(x0), m};
}

}  // namespace omd
