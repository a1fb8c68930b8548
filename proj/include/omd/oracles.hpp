#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "omd/prox.hpp"
#include "omd/types.hpp"

namespace omd {

/// Value and one subgradient of a convex function at a point.
struct FirstOrderAnswer {
  double value = 0.0;
  Vector subgradient;
};

/// f(x) = |<a, x> - b|. Subgradient sign(<a,x> - b) * a with sign(0) = 0.
class AffineAbsObjective {
 public:
  AffineAbsObjective(Vector a, double b);

  const Vector& a() const { return a_; }
  double b() const { return b_; }
  Index dimension() const { return a_.size(); }

 private:
  Vector a_;
  double b_;
};

FirstOrderAnswer eval_affine_abs(const AffineAbsObjective& obj,
                                 const Eigen::Ref<const Vector>& x);

/// g(x) = max_m (<row_m, x> + offset_m). Ties and the "some violated
/// component" choice are both resolved to the smallest index, so every run
/// is reproducible.
class MaxAffineConstraint {
 public:
  MaxAffineConstraint(Matrix rows, Vector offsets);

  const Matrix& rows() const { return rows_; }
  const Vector& offsets() const { return offsets_; }
  Index component_count() const { return rows_.rows(); }
  Index dimension() const { return rows_.cols(); }

  double component_value(Index m, const Eigen::Ref<const Vector>& x) const;

 private:
  Matrix rows_;
  Vector offsets_;
};

FirstOrderAnswer eval_max_affine(const MaxAffineConstraint& con,
                                 const Eigen::Ref<const Vector>& x);

/// Smallest index m with g_m(x) > eps, together with that component's value
/// and gradient. Caller must have established max_m g_m(x) > eps; throws
/// std::logic_error otherwise.
std::pair<Index, FirstOrderAnswer> eval_violated_component(
    const MaxAffineConstraint& con, const Eigen::Ref<const Vector>& x,
    double eps);

/// f(x) = sqrt(x' Q x) for a symmetric positive semidefinite form Q.
/// Subgradient Q x / f(x) when f(x) > 0, the zero vector at f(x) = 0.
class SqrtQuadraticObjective {
 public:
  explicit SqrtQuadraticObjective(Matrix form);

  const Matrix& form() const { return form_; }
  Index dimension() const { return form_.rows(); }

 private:
  Matrix form_;
};

FirstOrderAnswer eval_sqrt_quadratic(const SqrtQuadraticObjective& obj,
                                     const Eigen::Ref<const Vector>& x);

/// The ordered objective sequence f_1, ..., f_N consumed by the online
/// protocol. Either one matrix-backed affine-abs family (rows of A paired
/// with entries of b) or a list of sqrt-quadratic forms.
class ObjectiveList {
 public:
  static ObjectiveList affine_abs(Matrix a_rows, Vector b);
  static ObjectiveList sqrt_quadratic(std::vector<SqrtQuadraticObjective> forms);

  std::int64_t size() const;
  Index dimension() const;

  /// Value and subgradient of f_i, i in [0, size()).
  FirstOrderAnswer eval(std::int64_t i, const Eigen::Ref<const Vector>& x) const;

  /// Value and subgradient of the average (1/N) sum_i f_i, evaluated in one
  /// matrix pass for the affine family.
  FirstOrderAnswer eval_average(const Eigen::Ref<const Vector>& x) const;

  bool is_affine_abs() const;
  const Matrix& affine_rows() const;
  const Vector& affine_offsets() const;
  const std::vector<SqrtQuadraticObjective>& quadratic_forms() const;

 private:
  struct AffineAbsFamily {
    Matrix a;  // N x n
    Vector b;  // N
  };
  using Storage = std::variant<AffineAbsFamily, std::vector<SqrtQuadraticObjective>>;

  explicit ObjectiveList(Storage storage) : storage_(std::move(storage)) {}

  Storage storage_;
};

/// Uniform Lipschitz bound M over all objective and constraint components,
/// in the setup's dual norm: ||a_i||_* per affine-abs objective,
/// max_m ||row_m||_* for the constraint, and the spectral norm of the
/// form's square root for sqrt-quadratic objectives (an l2 bound, which is
/// also valid for the l1 and lp (p <= 2) geometries since those norms
/// dominate l2 on the primal side).
double lipschitz_bound(const ObjectiveList& objectives,
                       const MaxAffineConstraint& constraint,
                       const ProxSetup& setup);

}  // namespace omd
