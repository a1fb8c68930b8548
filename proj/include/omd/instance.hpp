#pragma once

#include "omd/oracles.hpp"
#include "omd/prox.hpp"
#include "omd/types.hpp"

namespace omd {

/// One constrained online problem: the objective sequence, the (multi-)
/// constraint, the proximal geometry, the starting point and the Lipschitz
/// bound M shared by all components.
struct ProblemInstance {
  ObjectiveList objectives;
  MaxAffineConstraint constraint;
  ProxSetup setup;
  Vector x0;
  double lipschitz = 0.0;
};

/// Validates dimensions and x0 feasibility and fills in the Lipschitz bound.
ProblemInstance make_instance(ObjectiveList objectives,
                              MaxAffineConstraint constraint, ProxSetup setup,
                              Vector x0);

}  // namespace omd
