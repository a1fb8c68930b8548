#pragma once

#include <Eigen/Core>

namespace omd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

}  // namespace omd
