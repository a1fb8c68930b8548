#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <vector>

#include "omd/problem_gen.hpp"
#include "omd/rng.hpp"
#include "omd/solver.hpp"
#include "support/random_points.hpp"

using omd::Algorithm;
using omd::Matrix;
using omd::MaxAffineConstraint;
using omd::ObjectiveList;
using omd::ProblemInstance;
using omd::ProxSetup;
using omd::RunConfig;
using omd::RunReport;
using omd::Vector;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<omd::Index>(values.size()));
  omd::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

MaxAffineConstraint never_violated(omd::Index n) {
  return MaxAffineConstraint(Matrix::Zero(1, n), vec({-1.0}));
}

// All objectives sit at their kink at x0, so every queried subgradient is
// zero and the iterate never moves.
ProblemInstance kink_instance(std::int64_t n_objectives) {
  const Vector x0 = vec({0.1, 0.2});
  Matrix a(n_objectives, 2);
  Vector b(n_objectives);
  for (std::int64_t i = 0; i < n_objectives; ++i) {
    a.row(i) << 1.0, 1.0;
    b(i) = a.row(i).dot(x0);
  }
  return omd::make_instance(ObjectiveList::affine_abs(a, b), never_violated(2),
                            ProxSetup::euclidean_ball(2), x0);
}

ProblemInstance seeded_benchmark(std::int64_t n, std::uint64_t seed) {
  return omd::generate({omd::Family::Normal, n, 10, seed});
}

void check_trace_invariants(const RunReport& report, const RunConfig& config,
                            const ProblemInstance& instance) {
  REQUIRE(report.total_steps() ==
          report.n_productive + report.n_nonproductive);
  std::int64_t productive = 0;
  double sum_m2 = 0.0;
  for (const auto& rec : report.trace) {
    productive += rec.productive ? 1 : 0;
    CHECK(rec.productive == (rec.constraint_value <= config.eps));
    CHECK(omd::is_feasible(instance.setup, rec.iterate, 1e-9));
    if (config.algorithm == Algorithm::NonAdaptive) {
      CHECK(rec.h_k ==
            config.eps / (instance.lipschitz * instance.lipschitz));
      CHECK(rec.m_k == instance.lipschitz);
    } else {
      sum_m2 += rec.m_k * rec.m_k;
      if (sum_m2 > 0.0) {
        CHECK(std::abs(rec.h_k * std::sqrt(sum_m2) -
                       instance.setup.theta0()) <=
              1e-12 * std::max(1.0, instance.setup.theta0()));
      } else {
        CHECK(rec.h_k == 0.0);
      }
    }
  }
  CHECK(productive == config.n_productive);
  CHECK(report.n_productive == config.n_productive);
  REQUIRE(!report.trace.empty());
  CHECK(report.trace.back().productive);  // the loop exits right after step N
  // The reported accuracy is recomputable bit-for-bit.
  CHECK(omd::certificate(report.trace, config.algorithm, config.eps,
                         instance.setup.theta0(), instance.lipschitz,
                         config.n_productive) == report.delta);
}

}  // namespace

TEST_CASE("non-adaptive degenerate run") {
  const ProblemInstance instance = kink_instance(1);
  RunConfig config;
  config.algorithm = Algorithm::NonAdaptive;
  config.n_productive = 1;
  config.eps = 0.25;

  const RunReport report = omd::run_nonadaptive(instance, config);
  CHECK(report.n_nonproductive == 0);
  CHECK(report.total_steps() == 1);
  const double m = instance.lipschitz;
  const double theta0 = instance.setup.theta0();
  CHECK(m == doctest::Approx(std::sqrt(2.0)));
  CHECK(report.delta ==
        config.eps / 2.0 + m * m * theta0 * theta0 / (config.eps * 1.0));

  // Zero subgradient: the iterate never moves.
  const ProblemInstance two = kink_instance(2);
  RunConfig config2 = config;
  config2.n_productive = 2;
  const RunReport report2 = omd::run_nonadaptive(two, config2);
  CHECK(report2.trace.size() == 2);
  CHECK((report2.trace[1].iterate - two.x0).norm() == 0.0);
}

TEST_CASE("adaptive degenerate run guards the zero-gradient prefix") {
  const ProblemInstance instance = kink_instance(1);
  RunConfig config;
  config.algorithm = Algorithm::Adaptive;
  config.n_productive = 1;
  config.eps = 0.25;

  const RunReport report = omd::run_adaptive(instance, config);
  CHECK(report.total_steps() == 1);
  CHECK(report.trace[0].productive);
  CHECK(report.trace[0].m_k == 0.0);
  CHECK(report.trace[0].h_k == 0.0);
  CHECK(report.delta == 0.0);
}

TEST_CASE("zero-gradient prefix followed by a real gradient") {
  const Vector x0 = vec({0.1, 0.2});
  Matrix a(2, 2);
  a << 1, 1, 1, 0;
  Vector b(2);
  b << a.row(0).dot(x0), 5.0;  // first objective kinks exactly at x0
  const ProblemInstance instance =
      omd::make_instance(ObjectiveList::affine_abs(a, b), never_violated(2),
                         ProxSetup::euclidean_ball(2), x0);
  RunConfig config;
  config.algorithm = Algorithm::Adaptive;
  config.n_productive = 2;
  config.eps = 0.25;

  const RunReport report = omd::run_adaptive(instance, config);
  REQUIRE(report.trace.size() == 2);
  CHECK(report.trace[0].h_k == 0.0);
  CHECK(report.trace[1].h_k > 0.0);
  CHECK(report.trace[1].m_k == doctest::Approx(1.0));
}

TEST_CASE("benchmark runs satisfy the trace invariants") {
  const ProblemInstance instance = seeded_benchmark(50, 0);
  for (Algorithm alg : {Algorithm::NonAdaptive, Algorithm::Adaptive,
                        Algorithm::AdaptiveMulti}) {
    RunConfig config;
    config.algorithm = alg;
    config.n_productive = 50;
    config.eps = RunConfig::eps_from_budget(1.0, 50);
    const RunReport report = omd::run(instance, config);
    check_trace_invariants(report, config, instance);
  }
}

TEST_CASE("adaptive step sizes are non-increasing once positive") {
  const ProblemInstance instance = seeded_benchmark(80, 3);
  RunConfig config;
  config.algorithm = Algorithm::Adaptive;
  config.n_productive = 80;
  config.eps = RunConfig::eps_from_budget(1.0, 80);
  const RunReport report = omd::run_adaptive(instance, config);
  double previous = std::numeric_limits<double>::infinity();
  for (const auto& rec : report.trace) {
    if (rec.h_k > 0.0) {
      CHECK(rec.h_k <= previous + 1e-15);
      previous = rec.h_k;
    }
  }
}

TEST_CASE("certificate closed forms") {
  SUBCASE("adaptive with constant gradient norms") {
    const double m = 2.5, eps = 0.1, theta0 = 1.5;
    const std::int64_t n = 3, nj = 2;
    std::vector<omd::StepRecord> trace;
    for (std::int64_t k = 0; k < n + nj; ++k) {
      omd::StepRecord rec;
      rec.k = k;
      rec.productive = k >= nj;  // last record productive
      rec.m_k = m;
      rec.h_k = 1.0;
      trace.push_back(rec);
    }
    const double expected =
        2.0 * theta0 * m / static_cast<double>(n) *
            std::sqrt(static_cast<double>(n + nj)) -
        eps * static_cast<double>(nj) / static_cast<double>(n);
    CHECK(omd::certificate(trace, Algorithm::Adaptive, eps, theta0, 9.9, n) ==
          doctest::Approx(expected).epsilon(1e-14));
  }
  SUBCASE("incomplete traces are rejected") {
    std::vector<omd::StepRecord> trace(3);
    trace[0].productive = true;
    CHECK_THROWS_AS(
        omd::certificate(trace, Algorithm::Adaptive, 0.1, 1.0, 1.0, 2),
        std::invalid_argument);
  }
}

TEST_CASE("single-constraint instance: adaptive and multi coincide") {
  omd::PortableSampler sampler(42);
  const omd::Index n = 6;
  Matrix a(10, n);
  for (int r = 0; r < 10; ++r)
    a.row(r) = testsupport::random_gaussian(sampler, n).transpose();
  Matrix row(1, n);
  row = testsupport::random_gaussian(sampler, n).transpose();
  const ProblemInstance instance = omd::make_instance(
      ObjectiveList::affine_abs(a, testsupport::random_gaussian(sampler, 10)),
      MaxAffineConstraint(row, vec({0.0})), ProxSetup::euclidean_ball(n),
      Vector::Zero(n));

  RunConfig config;
  config.n_productive = 10;
  config.eps = 0.2;
  config.algorithm = Algorithm::Adaptive;
  const RunReport a2 = omd::run(instance, config);
  config.algorithm = Algorithm::AdaptiveMulti;
  const RunReport a3 = omd::run(instance, config);

  REQUIRE(a2.trace.size() == a3.trace.size());
  for (std::size_t k = 0; k < a2.trace.size(); ++k) {
    CHECK(a2.trace[k].productive == a3.trace[k].productive);
    CHECK(a2.trace[k].m_k == a3.trace[k].m_k);
    CHECK(a2.trace[k].h_k == a3.trace[k].h_k);
    CHECK(a2.trace[k].constraint_value == a3.trace[k].constraint_value);
    CHECK((a2.trace[k].iterate - a3.trace[k].iterate).norm() == 0.0);
  }
  CHECK(a2.delta == a3.delta);
}

TEST_CASE("productive iterate extraction") {
  const ProblemInstance instance = seeded_benchmark(30, 4);
  RunConfig config;
  config.algorithm = Algorithm::Adaptive;
  config.n_productive = 30;
  config.eps = RunConfig::eps_from_budget(1.0, 30);
  const RunReport report = omd::run(instance, config);
  const auto pairs = report.productive_iterates();
  REQUIRE(static_cast<std::int64_t>(pairs.size()) == 30);
  for (std::int64_t i = 0; i < 30; ++i) {
    CHECK(pairs[static_cast<std::size_t>(i)].first == i);  // strict order
    CHECK(omd::is_feasible(instance.setup, pairs[static_cast<std::size_t>(i)].second));
  }
}

TEST_CASE("identical inputs give bit-identical traces") {
  const ProblemInstance instance = seeded_benchmark(60, 9);
  RunConfig config;
  config.algorithm = Algorithm::Adaptive;
  config.n_productive = 60;
  config.eps = RunConfig::eps_from_budget(1.0, 60);

  const RunReport first = omd::run(instance, config);
  const RunReport second = omd::run(instance, config);
  REQUIRE(first.trace.size() == second.trace.size());
  CHECK(first.delta == second.delta);
  for (std::size_t k = 0; k < first.trace.size(); ++k) {
    CHECK(first.trace[k].m_k == second.trace[k].m_k);
    CHECK(first.trace[k].h_k == second.trace[k].h_k);
    CHECK((first.trace[k].iterate - second.trace[k].iterate).norm() == 0.0);
  }
}

TEST_CASE("budget exhaustion carries the partial trace") {
  // Constant constraint g = 10: never productive, nothing to descend.
  const Vector x0 = vec({0.0, 0.0});
  Matrix a(1, 2);
  a << 1, 0;
  const ProblemInstance instance = omd::make_instance(
      ObjectiveList::affine_abs(a, vec({0.0})),
      MaxAffineConstraint(Matrix::Zero(1, 2), vec({10.0})),
      ProxSetup::euclidean_ball(2), x0);
  RunConfig config;
  config.algorithm = Algorithm::Adaptive;
  config.n_productive = 1;
  config.eps = 0.5;
  config.max_total_steps = 5;

  try {
    omd::run(instance, config);
    FAIL("expected BudgetExhausted");
  } catch (const omd::BudgetExhausted& e) {
    CHECK(e.partial().trace.size() == 5);
    CHECK(e.partial().n_productive == 0);
    CHECK(e.partial().n_nonproductive == 5);
    CHECK(std::isnan(e.partial().delta));
  }
}

TEST_CASE("config validation") {
  const ProblemInstance instance = kink_instance(1);
  RunConfig config;
  config.algorithm = Algorithm::Adaptive;
  config.n_productive = 2;  // more than the single objective
  config.eps = 0.1;
  CHECK_THROWS_AS(omd::run(instance, config), std::invalid_argument);
  config.n_productive = 1;
  config.eps = -1.0;
  CHECK_THROWS_AS(omd::run(instance, config), std::invalid_argument);
  config.eps = 0.1;
  config.max_total_steps = 0;  // auto cap is fine
  CHECK_NOTHROW(omd::run(instance, config));
  config.algorithm = Algorithm::NonAdaptive;
  CHECK_THROWS_AS(omd::run_adaptive(instance, config), std::invalid_argument);
  CHECK(RunConfig::eps_from_budget(1.0, 3000) ==
        doctest::Approx(1.0 / std::sqrt(3000.0)));
  CHECK_THROWS_AS(RunConfig::eps_from_budget(0.0, 10), std::invalid_argument);
}

TEST_CASE("offline comparator") {
  SUBCASE("unconstrained minimum of the Euclidean norm is the origin") {
    std::vector<omd::SqrtQuadraticObjective> forms;
    forms.emplace_back(Matrix::Identity(2, 2));
    const ProblemInstance instance = omd::make_instance(
        ObjectiveList::sqrt_quadratic(std::move(forms)), never_violated(2),
        ProxSetup::euclidean_ball(2), vec({0.6, 0.3}));
    const auto result = omd::offline_comparator(instance, 200000);
    CHECK(result.value <= 2e-3);
    CHECK(result.value >= 0.0);
  }
  SUBCASE("one-dimensional constrained instance against a grid oracle") {
    Matrix a(1, 1);
    a << 1;
    Matrix row(1, 1);
    row << 1;
    const ProblemInstance instance = omd::make_instance(
        ObjectiveList::affine_abs(a, vec({0.5})),
        MaxAffineConstraint(row, vec({0.0})), ProxSetup::euclidean_ball(1),
        vec({0.4}));
    // Grid oracle over the feasible interval [-1, 0].
    double grid_best = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 1000000; ++i) {
      const double x = -1.0 + static_cast<double>(i) * 1e-6;
      if (x > 0.0) break;
      grid_best = std::min(grid_best, std::abs(x - 0.5));
    }
    CHECK(grid_best == doctest::Approx(0.5));
    const auto result = omd::offline_comparator(instance, 60000000);
    CHECK(std::abs(result.value - grid_best) <= 1e-4);
    CHECK(result.minimizer(0) <= 1e-12);
  }
  SUBCASE("nonnegative objectives keep the comparator nonnegative") {
    const ProblemInstance trio =
        omd::generate({omd::Family::SqrtQuadraticTrio, 3, 10, 0});
    const auto result = omd::offline_comparator(trio, 50000);
    CHECK(result.value >= 0.0);
  }
  SUBCASE("relaxing the constraint can only lower the value") {
    const ProblemInstance instance = seeded_benchmark(40, 5);
    const auto constrained = omd::offline_comparator(instance, 30000, true);
    const auto relaxed = omd::offline_comparator(instance, 30000, false);
    CHECK(relaxed.value <= constrained.value + 1e-9);
  }
  SUBCASE("an everywhere-violated constraint reports infeasibility") {
    Matrix a(1, 2);
    a << 1, 0;
    const ProblemInstance instance = omd::make_instance(
        ObjectiveList::affine_abs(a, vec({0.0})),
        MaxAffineConstraint(Matrix::Zero(1, 2), vec({10.0})),
        ProxSetup::euclidean_ball(2), vec({0.0, 0.0}));
    CHECK_THROWS_AS(omd::offline_comparator(instance, 5000),
                    omd::NoFeasiblePoint);
  }
}

TEST_CASE("regret accounting") {
  SUBCASE("starting at the optimum gives zero regret") {
    std::vector<omd::SqrtQuadraticObjective> forms;
    forms.emplace_back(Matrix::Identity(2, 2));
    const ProblemInstance instance = omd::make_instance(
        ObjectiveList::sqrt_quadratic(std::move(forms)), never_violated(2),
        ProxSetup::euclidean_ball(2), Vector::Zero(2));
    RunConfig config;
    config.algorithm = Algorithm::Adaptive;
    config.n_productive = 1;
    config.eps = 0.5;
    const RunReport report = omd::run(instance, config);
    CHECK(omd::regret(report, instance, 0.0) == doctest::Approx(0.0));
  }
  SUBCASE("regret stays below the certificate on seeded runs") {
    const ProblemInstance instance = seeded_benchmark(60, 1);
    const double comparator = omd::offline_comparator(instance, 30000).value;
    for (Algorithm alg : {Algorithm::NonAdaptive, Algorithm::Adaptive,
                          Algorithm::AdaptiveMulti}) {
      RunConfig config;
      config.algorithm = alg;
      config.n_productive = 60;
      config.eps = RunConfig::eps_from_budget(1.0, 60);
      const RunReport report = omd::run(instance, config);
      const double r = omd::regret(report, instance, comparator);
      CHECK(r <= report.delta + 1e-4);
    }
  }
}

TEST_CASE("bound checks") {
  SUBCASE("no non-productive steps passes everything") {
    const ProblemInstance instance = kink_instance(1);
    RunConfig config;
    config.algorithm = Algorithm::Adaptive;
    config.n_productive = 1;
    config.eps = 0.25;
    const RunReport report = omd::run(instance, config);
    const auto bounds = omd::check_bounds(report, config, instance.lipschitz,
                                          instance.setup.theta0(), 0.0);
    CHECK(bounds.all_passed());
    CHECK(bounds.max_nonproductive_run == 0);
  }
  SUBCASE("a planted over-long non-productive run is flagged") {
    RunReport synthetic;
    synthetic.algorithm = Algorithm::Adaptive;
    synthetic.n_productive = 1;
    synthetic.n_nonproductive = 2;
    for (std::int64_t k = 0; k < 3; ++k) {
      omd::StepRecord rec;
      rec.k = k;
      rec.productive = k == 2;
      rec.m_k = 1.0;
      synthetic.trace.push_back(rec);
    }
    synthetic.delta = 1.0;
    RunConfig config;
    config.algorithm = Algorithm::Adaptive;
    config.n_productive = 1;
    config.eps = 2.0;  // burst bound 2 M^2 theta0^2 / eps^2 = 0.5
    const auto bounds = omd::check_bounds(synthetic, config, 1.0, 1.0, -1.0);
    CHECK_FALSE(bounds.max_nonproductive_run_ok);
    CHECK_FALSE(bounds.nonproductive_total_ok);
    CHECK(bounds.max_nonproductive_run == 2);
    CHECK_FALSE(bounds.all_passed());
  }
}

TEST_CASE("entropy-simplex end-to-end run") {
  omd::PortableSampler sampler(123);
  const omd::Index n = 3;
  Matrix a(5, n);
  for (int r = 0; r < 5; ++r)
    for (omd::Index c = 0; c < n; ++c) a(r, c) = sampler.uniform();
  Matrix row(1, n);
  row << 1, 0, 0;
  const ProblemInstance instance = omd::make_instance(
      ObjectiveList::affine_abs(a, Vector::Zero(5)),
      MaxAffineConstraint(row, vec({-0.4})), ProxSetup::entropy_simplex(n),
      Vector::Constant(n, 1.0 / 3.0));

  RunConfig config;
  config.algorithm = Algorithm::Adaptive;
  config.n_productive = 5;
  config.eps = 0.1;
  const RunReport report = omd::run(instance, config);
  check_trace_invariants(report, config, instance);

  const double comparator = omd::offline_comparator(instance, 20000).value;
  const double r = omd::regret(report, instance, comparator);
  const auto bounds = omd::check_bounds(report, config, instance.lipschitz,
                                        instance.setup.theta0(), r);
  CHECK(bounds.all_passed());
}

TEST_CASE("p-norm ball end-to-end run") {
  omd::PortableSampler sampler(321);
  const omd::Index n = 4;
  Matrix a(4, n);
  for (int r = 0; r < 4; ++r)
    a.row(r) = testsupport::random_gaussian(sampler, n).transpose();
  Matrix row(1, n);
  row = testsupport::random_gaussian(sampler, n).transpose();
  const ProblemInstance instance = omd::make_instance(
      ObjectiveList::affine_abs(a, testsupport::random_gaussian(sampler, 4)),
      MaxAffineConstraint(row, vec({-0.2})), ProxSetup::pnorm_ball(n, 1.5),
      Vector::Zero(n));

  for (Algorithm alg : {Algorithm::Adaptive, Algorithm::AdaptiveMulti}) {
    RunConfig config;
    config.algorithm = alg;
    config.n_productive = 4;
    config.eps = 0.3;
    const RunReport report = omd::run(instance, config);
    check_trace_invariants(report, config, instance);
  }
}

TEST_CASE("deterministic trio instance: pinned certificates") {
  const omd::GeneratorSpec spec{omd::Family::SqrtQuadraticTrio, 3, 10, 0};
  const ProblemInstance trio = omd::generate(spec);
  RunConfig config = omd::default_run_params(spec);

  config.algorithm = Algorithm::Adaptive;
  const RunReport alg2 = omd::run(trio, config);
  config.algorithm = Algorithm::AdaptiveMulti;
  const RunReport alg3 = omd::run(trio, config);

  // The first step is non-productive for both; the aggregate subgradient is
  // the heaviest constraint row (norm 50 sqrt(385)) while the smallest
  // violated component is the lightest (norm sqrt(385)), which is the whole
  // separation between the two certificates.
  CHECK(alg2.n_nonproductive == 1);
  CHECK(alg3.n_nonproductive == 1);
  CHECK(alg2.trace[0].m_k == doctest::Approx(50.0 * std::sqrt(385.0)));
  CHECK(alg3.trace[0].m_k == doctest::Approx(std::sqrt(385.0)));

  // Regression pins for the exact certificates this trajectory yields.
  CHECK(alg2.delta == doctest::Approx(1961.9799158112398).epsilon(1e-12));
  CHECK(alg3.delta == doctest::Approx(39.31999515386939).epsilon(1e-12));
}

TEST_CASE("induction inequality for adaptive step sums") {
  omd::PortableSampler sampler(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const int length = 1 + static_cast<int>(sampler.uniform() * 1000);
    double prefix = 0.0, lhs = 0.0, total = 0.0;
    for (int i = 0; i < length; ++i) {
      const double m = sampler.exponential() + 1e-12;
      const double m2 = m * m;
      prefix += m2;
      lhs += m2 / std::sqrt(prefix);
      total += m2;
    }
    CHECK(lhs <= 2.0 * std::sqrt(total) * (1.0 + 1e-12) + 1e-12);
  }
}
