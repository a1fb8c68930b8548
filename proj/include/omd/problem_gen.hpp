#pragma once

#include <cstdint>

#include "omd/instance.hpp"
#include "omd/solver.hpp"
#include "omd/types.hpp"

namespace omd {

/// The benchmark instance families. The first four draw an N x 11 matrix A
/// from the named distribution, split it into objective rows a_i (first ten
/// columns) and offsets b_i (last column), and pair the resulting
/// affine-abs objectives with the fixed three-row constraint matrix on the
/// unit Euclidean ball in R^10. SqrtQuadraticTrio is the fully
/// deterministic three-objective instance with three scaled linear
/// constraints; it ignores N and the seed.
enum class Family {
  Normal,         // standard normal, mean 0, sd 1
  Uniform,        // uniform over [0, 1)
  Exponential,    // standard exponential, scale 1
  Gumbel,         // Gumbel, location 1, scale 2
  SqrtQuadraticTrio,
};

struct GeneratorSpec {
  Family family = Family::Normal;
  std::int64_t n_objectives = 1;  // N; ignored by SqrtQuadraticTrio
  Index dimension = 10;           // must be 10 for all current families
  std::uint64_t seed = 0;         // ignored by SqrtQuadraticTrio
};

/// The fixed 3 x 10 integer constraint matrix used by the random families.
Matrix benchmark_constraint_rows();

/// Builds the instance for a spec: seeded sampling via PortableSampler (so
/// results are identical across platforms), the fixed constraint rows with
/// zero offsets, Q = unit Euclidean ball in R^10, x0 = (1,...,1)/sqrt(10)
/// and theta0 = 3.
ProblemInstance generate(const GeneratorSpec& spec);

/// The benchmark run parameters: eps = 1/sqrt(N) for the random families;
/// N = 3 and eps = 0.5 for SqrtQuadraticTrio. The algorithm field is left
/// at its default for the caller to set.
RunConfig default_run_params(const GeneratorSpec& spec);

}  // namespace omd
