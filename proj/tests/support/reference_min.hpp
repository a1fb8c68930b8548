#pragma once

// Independent reference machinery for the prox tests. Everything here is
// computed from first principles (its own d.g.f. formulas, its own
// projections, its own minimizers) so it shares no code path with the
// mirror-step implementation it is used to check.

#include <Eigen/Core>
#include <cmath>
#include <functional>
#include <limits>

namespace refmin {

using Vector = Eigen::VectorXd;

enum class Geometry { Ball2, Simplex, BallP };

inline double ref_dgf(Geometry geo, double p, const Vector& x) {
  switch (geo) {
    case Geometry::Ball2:
      return 0.5 * x.squaredNorm();
    case Geometry::Simplex: {
      double s = std::log(static_cast<double>(x.size()));
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x(i) > 0.0) s += x(i) * std::log(x(i));
      return s;
    }
    case Geometry::BallP: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        s += std::pow(std::abs(x(i)), p);
      const double norm = std::pow(s, 1.0 / p);
      return norm * norm / (2.0 * (p - 1.0));
    }
  }
  return 0.0;
}

inline Vector ref_dgf_grad(Geometry geo, double p, const Vector& x) {
  switch (geo) {
    case Geometry::Ball2:
      return x;
    case Geometry::Simplex: {
      Vector g(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) g(i) = 1.0 + std::log(x(i));
      return g;
    }
    case Geometry::BallP: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        s += std::pow(std::abs(x(i)), p);
      if (s == 0.0) return Vector::Zero(x.size());
      const double norm = std::pow(s, 1.0 / p);
      Vector g(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double mag = std::pow(std::abs(x(i)), p - 1.0);
        g(i) = std::pow(norm, 2.0 - p) / (p - 1.0) *
               (x(i) > 0 ? mag : x(i) < 0 ? -mag : 0.0);
      }
      return g;
    }
  }
  return Vector();
}

inline double ref_bregman(Geometry geo, double p, const Vector& x,
                          const Vector& y) {
  switch (geo) {
    case Geometry::Ball2:
      return 0.5 * (x - y).squaredNorm();
    case Geometry::Simplex: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (y(i) > 0.0) s += y(i) * std::log(y(i) / x(i));
      return s;
    }
    case Geometry::BallP:
      return ref_dgf(geo, p, y) - ref_dgf(geo, p, x) -
             ref_dgf_grad(geo, p, x).dot(y - x);
  }
  return 0.0;
}

inline double ternary_min(const std::function<double(double)>& f, double lo,
                          double hi) {
  while (hi - lo > 1e-13 * std::max(1.0, std::abs(hi))) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return 0.5 * (lo + hi);
}

// Minimizes F(u) = <s, u> + V(x, u) over the unit l2 ball by projected
// gradient descent: an affine contraction followed by the (nonexpansive)
// radial projection, so the error halves every step.
inline Vector minimize_ball2(const Vector& x, const Vector& s) {
  Vector u = x;
  const Vector target = x - s;
  for (int it = 0; it < 200; ++it) {
    u = 0.5 * u + 0.5 * target;
    const double norm = u.norm();
    if (norm > 1.0) u /= norm;
  }
  return u;
}

// Minimizes F over the simplex by cyclic exact line searches that exchange
// mass between coordinate j and the last coordinate; those directions span
// the simplex and the entropy term keeps the optimum strictly interior, so
// the exchanges never jam against the boundary.
inline Vector minimize_simplex(const Vector& x, const Vector& s) {
  const Eigen::Index n = x.size();
  Vector u = x;
  const auto objective = [&](const Vector& v) {
    return s.dot(v) + ref_bregman(Geometry::Simplex, 1.0, x, v);
  };
  double previous = objective(u);
  for (int cycle = 0; cycle < 3000; ++cycle) {
    for (Eigen::Index j = 0; j + 1 < n; ++j) {
      const double mass = u(j) + u(n - 1);
      if (mass <= 0.0) continue;
      const double best = ternary_min(
          [&](double t) {
            Vector v = u;
            v(j) = t;
            v(n - 1) = mass - t;
            return objective(v);
          },
          0.0, mass);
      u(j) = best;
      u(n - 1) = mass - best;
    }
    const double current = objective(u);
    if (previous - current < 1e-16) break;
    previous = current;
  }
  return u;
}

// Minimizes F over the unit lp ball by an augmented Lagrangian on the
// smooth constraint c(u) = sum |u_i|^p - 1 <= 0, with backtracking gradient
// descent inner loops and a final radial pull for the residual violation.
inline Vector minimize_ballp(double p, const Vector& x, const Vector& s) {
  const Eigen::Index n = x.size();
  const Vector grad_at_center = ref_dgf_grad(Geometry::BallP, p, x);

  const auto constraint = [&](const Vector& u) {
    double c = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) c += std::pow(std::abs(u(i)), p);
    return c;
  };
  const auto constraint_grad = [&](const Vector& u) {
    Vector g(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mag = p * std::pow(std::abs(u(i)), p - 1.0);
      g(i) = u(i) > 0 ? mag : u(i) < 0 ? -mag : 0.0;
    }
    return g;
  };
  const auto objective = [&](const Vector& u) {
    return s.dot(u) + ref_dgf(Geometry::BallP, p, u) -
           grad_at_center.dot(u);  // constants in x dropped
  };
  const auto objective_grad = [&](const Vector& u) {
    return Vector(s + ref_dgf_grad(Geometry::BallP, p, u) - grad_at_center);
  };

  const double rho = 50.0;
  double lambda = 0.0;
  Vector u = x;
  for (int outer = 0; outer < 25; ++outer) {
    const auto al_value = [&](const Vector& v) {
      const double slack = std::max(0.0, constraint(v) + lambda / rho);
      return objective(v) + 0.5 * rho * slack * slack;
    };
    const auto al_grad = [&](const Vector& v) {
      const double slack = std::max(0.0, constraint(v) + lambda / rho);
      if (slack == 0.0) return objective_grad(v);
      return Vector(objective_grad(v) + rho * slack * constraint_grad(v));
    };

    for (int it = 0; it < 2000; ++it) {
      const Vector g = al_grad(u);
      const double gn2 = g.squaredNorm();
      if (gn2 < 1e-26) break;
      double t = 1.0;
      const double base = al_value(u);
      while (t > 1e-20 && al_value(u - t * g) > base - 0.25 * t * gn2)
        t *= 0.5;
      u -= t * g;
    }
    lambda = std::max(0.0, lambda + rho * constraint(u));
  }

  double norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) norm += std::pow(std::abs(u(i)), p);
  norm = std::pow(norm, 1.0 / p);
  if (norm > 1.0) u /= norm;
  return u;
}

inline Vector minimize_prox_objective(Geometry geo, double p, const Vector& x,
                                      const Vector& s) {
  switch (geo) {
    case Geometry::Ball2:
      return minimize_ball2(x, s);
    case Geometry::Simplex:
      return minimize_simplex(x, s);
    case Geometry::BallP:
      return minimize_ballp(p, x, s);
  }
  return Vector();
}

}  // namespace refmin
