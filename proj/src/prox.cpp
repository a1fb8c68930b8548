#include "omd/prox.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace omd {

namespace {

double lp_norm(const Eigen::Ref<const Vector>& v, double p) {
  // Max-factored so large exponents cannot overflow.
  const double m = v.size() > 0 ? v.cwiseAbs().maxCoeff() : 0.0;
  if (m == 0.0) return 0.0;
  return m * std::pow((v.cwiseAbs() / m).array().pow(p).sum(), 1.0 / p);
}

void check_dimension(const ProxSetup& setup, const Eigen::Ref<const Vector>& v,
                     const char* what) {
  if (v.size() != setup.dimension())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

void check_feasible(const ProxSetup& setup, const Eigen::Ref<const Vector>& x,
                    const char* what) {
  if (!is_feasible(setup, x))
    throw std::domain_error(std::string(what) + ": point not in the feasible set");
}

// sign(y_k) |y_k|^(q-1), the coordinate map whose normalization inverts the
// d.g.f. gradient of the lp setup.
Vector signed_power(const Eigen::Ref<const Vector>& y, double exponent) {
  return y.array().sign() * y.array().abs().pow(exponent);
}

// Gradient of the conjugate of d(x) = ||x||_p^2 / (2(p-1)); positively
// homogeneous of degree one, computed in normalized units for stability.
Vector pnorm_dual_map(const Eigen::Ref<const Vector>& y, double p) {
  const double m = y.size() > 0 ? y.cwiseAbs().maxCoeff() : 0.0;
  if (m == 0.0) return Vector::Zero(y.size());
  const double q = p / (p - 1.0);
  const Vector yn = y / m;
  const double norm_q = lp_norm(yn, q);
  return (p - 1.0) * m * std::pow(norm_q, 2.0 - q) * signed_power(yn, q - 1.0);
}

}  // namespace

ProxSetup::ProxSetup(ProxKind kind, Index dimension, double p)
    : kind_(kind), dimension_(dimension), theta0_(1.0), p_(p) {
  theta0_ = suggested_theta0(*this);
}

ProxSetup ProxSetup::euclidean_ball(Index dimension) {
  if (dimension < 1) throw std::invalid_argument("euclidean_ball: dimension < 1");
  return ProxSetup(ProxKind::EuclideanBall, dimension, 2.0);
}

ProxSetup ProxSetup::entropy_simplex(Index dimension) {
  if (dimension < 2)
    throw std::invalid_argument("entropy_simplex: dimension < 2");
  return ProxSetup(ProxKind::EntropySimplex, dimension, 1.0);
}

ProxSetup ProxSetup::pnorm_ball(Index dimension, double p) {
  if (dimension < 1) throw std::invalid_argument("pnorm_ball: dimension < 1");
  if (!(p > 1.0 && p <= 2.0))
    throw std::invalid_argument("pnorm_ball: p must lie in (1, 2]");
  return ProxSetup(ProxKind::PNormBall, dimension, p);
}

ProxSetup ProxSetup::pnorm_ball_log_exponent(Index dimension) {
  if (dimension < 3)
    throw std::invalid_argument("pnorm_ball_log_exponent: needs dimension >= 3");
  const double ln_n = std::log(static_cast<double>(dimension));
  return pnorm_ball(dimension, 2.0 * ln_n / (2.0 * ln_n - 1.0));
}

ProxSetup ProxSetup::with_theta0(double theta0) const {
  if (!(theta0 > 0.0)) throw std::invalid_argument("theta0 must be positive");
  ProxSetup out = *this;
  out.theta0_ = theta0;
  return out;
}

double dual_norm(const ProxSetup& setup, const Eigen::Ref<const Vector>& y) {
  check_dimension(setup, y, "dual_norm");
  switch (setup.kind()) {
    case ProxKind::EuclideanBall:
      return y.norm();
    case ProxKind::EntropySimplex:
      return y.size() > 0 ? y.cwiseAbs().maxCoeff() : 0.0;
    case ProxKind::PNormBall:
      return lp_norm(y, setup.q_exponent());
  }
  throw std::logic_error("dual_norm: unknown setup");
}

double dgf_value(const ProxSetup& setup, const Eigen::Ref<const Vector>& x) {
  check_dimension(setup, x, "dgf_value");
  check_feasible(setup, x, "dgf_value");
  switch (setup.kind()) {
    case ProxKind::EuclideanBall:
      return 0.5 * x.squaredNorm();
    case ProxKind::EntropySimplex: {
      // 0 ln 0 := 0; tolerated slightly negative entries count as zero.
      const double neg_entropy =
          (x.array() > 0.0).select(x.array() * x.array().log(), 0.0).sum();
      return std::log(static_cast<double>(setup.dimension())) + neg_entropy;
    }
    case ProxKind::PNormBall: {
      const double n = lp_norm(x, setup.p_exponent());
      return n * n / (2.0 * (setup.p_exponent() - 1.0));
    }
  }
  throw std::logic_error("dgf_value: unknown setup");
}

Vector dgf_gradient(const ProxSetup& setup, const Eigen::Ref<const Vector>& x) {
  check_dimension(setup, x, "dgf_gradient");
  switch (setup.kind()) {
    case ProxKind::EuclideanBall:
      return x;
    case ProxKind::EntropySimplex: {
      if ((x.array() <= 0.0).any())
        throw std::domain_error("dgf_gradient: entropy gradient needs x > 0");
      return (1.0 + x.array().log()).matrix();
    }
    case ProxKind::PNormBall: {
      const double p = setup.p_exponent();
      const double n = lp_norm(x, p);
      if (n == 0.0) return Vector::Zero(x.size());
      return std::pow(n, 2.0 - p) / (p - 1.0) * signed_power(x, p - 1.0);
    }
  }
  throw std::logic_error("dgf_gradient: unknown setup");
}

double bregman(const ProxSetup& setup, const Eigen::Ref<const Vector>& x,
               const Eigen::Ref<const Vector>& y) {
  check_dimension(setup, x, "bregman");
  check_dimension(setup, y, "bregman");
  check_feasible(setup, x, "bregman");
  check_feasible(setup, y, "bregman");
  switch (setup.kind()) {
    case ProxKind::EuclideanBall:
      return 0.5 * (x - y).squaredNorm();
    case ProxKind::EntropySimplex: {
      if ((x.array() <= 0.0).any())
        throw std::domain_error("bregman: entropy center must be entrywise positive");
      return (y.array() > 0.0)
          .select(y.array() * (y.array() / x.array()).log(), 0.0)
          .sum();
    }
    case ProxKind::PNormBall:
      return dgf_value(setup, y) - dgf_value(setup, x) -
             dgf_gradient(setup, x).dot(y - x);
  }
  throw std::logic_error("bregman: unknown setup");
}

Vector mirror_step(const ProxSetup& setup, const Eigen::Ref<const Vector>& x,
                   const Eigen::Ref<const Vector>& p, double h) {
  check_dimension(setup, x, "mirror_step");
  check_dimension(setup, p, "mirror_step");
  if (!(h > 0.0)) throw std::invalid_argument("mirror_step: h must be positive");
  if (!p.allFinite()) throw std::invalid_argument("mirror_step: p must be finite");
  check_feasible(setup, x, "mirror_step");

  switch (setup.kind()) {
    case ProxKind::EuclideanBall: {
      Vector z = x - h * p;
      const double n = z.norm();
      if (n > 1.0) z /= n;
      return z;
    }
    case ProxKind::EntropySimplex: {
      // z_k proportional to x_k exp(-h p_k), in the log domain with
      // max-subtraction: exponents never exceed zero and the normalizer is
      // at least one.
      Eigen::ArrayXd logits =
          x.array().max(0.0).log() - h * p.array();  // log 0 = -inf is fine
      const double shift = logits.maxCoeff();
      if (!std::isfinite(shift))
        throw std::runtime_error("mirror_step: degenerate simplex point");
      const Eigen::ArrayXd w = (logits - shift).exp();
      Vector z = (w / w.sum()).matrix();
      if (!z.allFinite())
        throw std::runtime_error("mirror_step: overflow after safeguards");
      return z;
    }
    case ProxKind::PNormBall: {
      // argmin <hp, u> + V(x, u)  =  argmin d(u) - <w, u>  with
      // w = grad d(x) - h p. The unconstrained solution is the conjugate
      // gradient map of w; on the boundary the multiplier only rescales w,
      // so bisect the scale until ||u||_p = 1.
      const double pe = setup.p_exponent();
      const Vector w = dgf_gradient(setup, x) - h * p;
      Vector u = pnorm_dual_map(w, pe);
      double norm_u = lp_norm(u, pe);
      if (norm_u <= 1.0) return u;

      double lo = 1.0, hi = 2.0;
      while (lp_norm(pnorm_dual_map(w / hi, pe), pe) > 1.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e18)
          throw std::runtime_error("mirror_step: multiplier bracket failed");
      }
      constexpr double kBoundaryTol = 1e-10;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        u = pnorm_dual_map(w / mid, pe);
        norm_u = lp_norm(u, pe);
        if (std::abs(norm_u - 1.0) <= kBoundaryTol) return u;
        (norm_u > 1.0 ? lo : hi) = mid;
      }
      return u;
    }
  }
  throw std::logic_error("mirror_step: unknown setup");
}

double suggested_theta0(const ProxSetup& setup) {
  switch (setup.kind()) {
    case ProxKind::EuclideanBall:
      return std::sqrt(0.5);  // max of ||x||^2/2 over the unit ball
    case ProxKind::EntropySimplex:
      return std::sqrt(std::log(static_cast<double>(setup.dimension())));
    case ProxKind::PNormBall:
      return std::sqrt(1.0 / (2.0 * (setup.p_exponent() - 1.0)));
  }
  throw std::logic_error("suggested_theta0: unknown setup");
}

bool is_feasible(const ProxSetup& setup, const Eigen::Ref<const Vector>& x,
                 double tol) {
  if (x.size() != setup.dimension() || !x.allFinite()) return false;
  switch (setup.kind()) {
    case ProxKind::EuclideanBall:
      return x.norm() <= 1.0 + tol;
    case ProxKind::EntropySimplex:
      return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol;
    case ProxKind::PNormBall:
      return lp_norm(x, setup.p_exponent()) <= 1.0 + tol;
  }
  return false;
}

Vector clamp_to_interior(const ProxSetup& setup,
                         const Eigen::Ref<const Vector>& x) {
  if (setup.kind() != ProxKind::EntropySimplex) return x;
  constexpr double kMix = 1e-12;
  const double uniform = 1.0 / static_cast<double>(setup.dimension());
  return ((1.0 - kMix) * x.array().max(0.0) + kMix * uniform).matrix();
}

}  // namespace omd
