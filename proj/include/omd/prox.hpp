#pragma once

#include <Eigen/Core>

#include "omd/types.hpp"

namespace omd {

enum class ProxKind { EuclideanBall, EntropySimplex, PNormBall };

/// A proximal geometry: the feasible set, its norm and dual norm, the
/// distance generating function d (1-strongly convex w.r.t. that norm), the
/// Bregman divergence V(x, y) = d(y) - d(x) - <grad d(x), y - x>, and the
/// constant theta0 with d(x*) <= theta0^2.
///
/// Supported setups:
///   EuclideanBall   unit l2 ball, d(x) = ||x||_2^2 / 2
///   EntropySimplex  unit simplex, d(x) = ln n + sum_k x_k ln x_k
///   PNormBall       unit lp ball, p in (1, 2], d(x) = ||x||_p^2 / (2(p-1))
class ProxSetup {
 public:
  static ProxSetup euclidean_ball(Index dimension);
  static ProxSetup entropy_simplex(Index dimension);
  static ProxSetup pnorm_ball(Index dimension, double p);
  /// p-norm ball with exponent p = 2 ln n / (2 ln n - 1), which keeps the
  /// default theta0 at sqrt(ln n - 1/2). Requires n >= 3 so that p <= 2.
  static ProxSetup pnorm_ball_log_exponent(Index dimension);

  ProxKind kind() const { return kind_; }
  Index dimension() const { return dimension_; }
  double theta0() const { return theta0_; }
  double p_exponent() const { return p_; }
  double q_exponent() const { return p_ / (p_ - 1.0); }

  /// Same geometry with a caller-supplied theta0 (> 0).
  ProxSetup with_theta0(double theta0) const;

 private:
  ProxSetup(ProxKind kind, Index dimension, double p);

  ProxKind kind_;
  Index dimension_;
  double theta0_;
  double p_;  // primal norm exponent; 2 for EuclideanBall, 1 for EntropySimplex
};

/// Dual norm of y: l2 for EuclideanBall, l_inf for EntropySimplex (primal
/// l1), lq with 1/p + 1/q = 1 for PNormBall.
double dual_norm(const ProxSetup& setup, const Eigen::Ref<const Vector>& y);

/// Value of the distance generating function at a feasible point.
double dgf_value(const ProxSetup& setup, const Eigen::Ref<const Vector>& x);

/// Gradient of the d.g.f. For EntropySimplex x must be entrywise positive.
Vector dgf_gradient(const ProxSetup& setup, const Eigen::Ref<const Vector>& x);

/// Bregman divergence V(x, y) with x the center: d(y) - d(x) - <grad d(x), y-x>.
/// EuclideanBall: ||x - y||^2 / 2. EntropySimplex: sum_k y_k ln(y_k / x_k).
double bregman(const ProxSetup& setup, const Eigen::Ref<const Vector>& x,
               const Eigen::Ref<const Vector>& y);

/// One mirror-descent step: argmin over the feasible set of
/// <h p, u> + V(x, u), for h > 0.
///
/// EuclideanBall: Euclidean projection of x - h p onto the unit ball.
/// EntropySimplex: multiplicative update x_k exp(-h p_k), renormalized;
/// computed in the log domain with max-subtraction so it cannot overflow.
/// PNormBall: dual-averaging form solved by bisection on the ball-constraint
/// multiplier, tolerance 1e-10 on the boundary condition.
Vector mirror_step(const ProxSetup& setup, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& p, double h);

/// Default theta0: the tight bound sqrt(max over the feasible set of d).
/// EuclideanBall -> sqrt(1/2), EntropySimplex -> sqrt(ln n),
/// PNormBall -> sqrt(1 / (2(p-1))), which for the log-exponent ball equals
/// sqrt(ln n - 1/2) <= sqrt(ln n).
double suggested_theta0(const ProxSetup& setup);

/// Set membership within an additive tolerance. NaN/Inf entries fail.
bool is_feasible(const ProxSetup& setup, const Eigen::Ref<const Vector>& x,
                 double tol = 1e-9);

/// For EntropySimplex, mixes x with the uniform point at weight 1e-12 so the
/// entropy gradient stays finite; other setups return x unchanged.
Vector clamp_to_interior(const ProxSetup& setup,
                         const Eigen::Ref<const Vector>& x);

}  // namespace omd
