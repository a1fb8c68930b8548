#include "omd/problem_gen.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "omd/rng.hpp"

namespace omd {

namespace {

constexpr Index kBenchmarkDim = 10;

double draw(PortableSampler& sampler, Family family) {
  switch (family) {
    case Family::Normal:
      return sampler.normal();
    case Family::Uniform:
      return sampler.uniform();
    case Family::Exponential:
      return sampler.exponential();
    case Family::Gumbel:
      return sampler.gumbel(1.0, 2.0);
    case Family::SqrtQuadraticTrio:
      break;
  }
  throw std::invalid_argument("draw: family is not a random family");
}

Vector benchmark_start(Index dim) {
  return Vector::Ones(dim) / std::sqrt(static_cast<double>(dim));
}

// f1: sum of squared sums of adjacent coordinates, (x_i + x_{i+1})^2.
Matrix adjacent_sum_form(Index n) {
  Matrix b = Matrix::Zero(n - 1, n);
  for (Index i = 0; i < n - 1; ++i) {
    b(i, i) = 1.0;
    b(i, i + 1) = 1.0;
  }
  return b.transpose() * b;
}

// f2: 0.1 (sum x_i^2 + sum x_i x_{i+1}).
Matrix damped_chain_form(Index n) {
  Matrix q = Matrix::Identity(n, n);
  for (Index i = 0; i < n - 1; ++i) {
    q(i, i + 1) += 0.5;
    q(i + 1, i) += 0.5;
  }
  return 0.1 * q;
}

ProblemInstance deterministic_trio_instance() {
  const Index n = kBenchmarkDim;
  std::vector<SqrtQuadraticObjective> forms;
  forms.emplace_back(adjacent_sum_form(n));
  forms.emplace_back(damped_chain_form(n));
  forms.emplace_back(Matrix::Identity(n, n));  // f3 is the Euclidean norm

  // Three scaled copies of the same direction; the first carries a +1
  // offset, which is what separates the per-component and max-aggregate
  // subgradient choices.
  Matrix rows(3, n);
  for (Index j = 0; j < n; ++j) {
    const double base = static_cast<double>(j + 1);
    rows(0, j) = base;
    rows(1, j) = 10.0 * base;
    rows(2, j) = 50.0 * base;
  }
  Vector offsets(3);
  offsets << 1.0, 0.0, 0.0;

  return make_instance(ObjectiveList::sqrt_quadratic(std::move(forms)),
                       MaxAffineConstraint(std::move(rows), std::move(offsets)),
                       ProxSetup::euclidean_ball(n).with_theta0(3.0),
                       benchmark_start(n));
}

}  // namespace

Matrix benchmark_constraint_rows() {
  Matrix rows(3, kBenchmarkDim);
  rows << 1, 1, 1, 1, 1, 1, 1, 1, 1, 1,
          1, 2, 3, 4, 5, 6, 7, 8, 9, 10,
          1, 2, 4, 6, 8, 10, 12, 14, 16, 18;
  return rows;
}

ProblemInstance generate(const GeneratorSpec& spec) {
  if (spec.dimension != kBenchmarkDim)
    throw std::invalid_argument("generate: benchmark families are 10-dimensional");
  if (spec.family == Family::SqrtQuadraticTrio) return deterministic_trio_instance();
  if (spec.n_objectives < 1)
    throw std::invalid_argument("generate: n_objectives must be at least 1");

  // One draw per entry of the N x 11 matrix, row-major; the first ten
  // columns are the objective rows, the last column the offsets.
  PortableSampler sampler(spec.seed);
  Matrix a(spec.n_objectives, kBenchmarkDim);
  Vector b(spec.n_objectives);
  for (std::int64_t r = 0; r < spec.n_objectives; ++r) {
    for (Index c = 0; c < kBenchmarkDim; ++c) a(r, c) = draw(sampler, spec.family);
    b(r) = draw(sampler, spec.family);
  }

  return make_instance(
      ObjectiveList::affine_abs(std::move(a), std::move(b)),
      MaxAffineConstraint(benchmark_constraint_rows(), Vector::Zero(3)),
      ProxSetup::euclidean_ball(kBenchmarkDim).with_theta0(3.0),
      benchmark_start(kBenchmarkDim));
}

RunConfig default_run_params(const GeneratorSpec& spec) {
  RunConfig config;
  config.seed = spec.seed;
  if (spec.family == Family::SqrtQuadraticTrio) {
    config.n_productive = 3;
    config.eps = 0.5;
  } else {
    if (spec.n_objectives < 1)
      throw std::invalid_argument("default_run_params: n_objectives must be >= 1");
    config.n_productive = spec.n_objectives;
    config.eps = RunConfig::eps_from_budget(1.0, spec.n_objectives);
  }
  return config;
}

}  // namespace omd
