#include "omd/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace omd {

namespace {

void check_dim(Index expected, Index got, const char* what) {
  if (expected != got)
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double sign_or_zero(double r) { return (r > 0.0) - (r < 0.0); }

FirstOrderAnswer affine_abs_answer(const Eigen::Ref<const Vector>& a, double b,
                                   const Eigen::Ref<const Vector>& x) {
  const double residual = a.dot(x) - b;
  return {std::abs(residual), sign_or_zero(residual) * a};
}

}  // namespace

AffineAbsObjective::AffineAbsObjective(Vector a, double b)
    : a_(std::move(a)), b_(b) {
  if (!a_.allFinite() || !std::isfinite(b_))
    throw std::invalid_argument("AffineAbsObjective: coefficients must be finite");
}

FirstOrderAnswer eval_affine_abs(const AffineAbsObjective& obj,
                                 const Eigen::Ref<const Vector>& x) {
  check_dim(obj.dimension(), x.size(), "eval_affine_abs");
  return affine_abs_answer(obj.a(), obj.b(), x);
}

MaxAffineConstraint::MaxAffineConstraint(Matrix rows, Vector offsets)
    : rows_(std::move(rows)), offsets_(std::move(offsets)) {
  if (rows_.rows() < 1)
    throw std::invalid_argument("MaxAffineConstraint: needs at least one row");
  if (offsets_.size() != rows_.rows())
    throw std::invalid_argument("MaxAffineConstraint: one offset per row");
  if (!rows_.allFinite() || !offsets_.allFinite())
    throw std::invalid_argument("MaxAffineConstraint: entries must be finite");
}

double MaxAffineConstraint::component_value(
    Index m, const Eigen::Ref<const Vector>& x) const {
  return rows_.row(m).dot(x) + offsets_(m);
}

FirstOrderAnswer eval_max_affine(const MaxAffineConstraint& con,
                                 const Eigen::Ref<const Vector>& x) {
  check_dim(con.dimension(), x.size(), "eval_max_affine");
  const Vector values = con.rows() * x + con.offsets();
  Index best = 0;
  for (Index m = 1; m < values.size(); ++m)
    if (values(m) > values(best)) best = m;  // ties keep the smallest index
  return {values(best), con.rows().row(best).transpose()};
}

std::pair<Index, FirstOrderAnswer> eval_violated_component(
    const MaxAffineConstraint& con, const Eigen::Ref<const Vector>& x,
    double eps) {
  check_dim(con.dimension(), x.size(), "eval_violated_component");
  const Vector values = con.rows() * x + con.offsets();
  for (Index m = 0; m < values.size(); ++m) {
    if (values(m) > eps)
      return {m, {values(m), con.rows().row(m).transpose()}};
  }
  throw std::logic_error(
      "eval_violated_component: no component exceeds eps; caller must check "
      "non-productivity first");
}

SqrtQuadraticObjective::SqrtQuadraticObjective(Matrix form)
    : form_(std::move(form)) {
  if (form_.rows() != form_.cols())
    throw std::invalid_argument("SqrtQuadraticObjective: form must be square");
  if (!form_.allFinite())
    throw std::invalid_argument("SqrtQuadraticObjective: form must be finite");
  const double scale = std::max(1.0, form_.cwiseAbs().maxCoeff());
  if ((form_ - form_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("SqrtQuadraticObjective: form must be symmetric");
  form_ = 0.5 * (form_ + form_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eigs(form_, Eigen::EigenvaluesOnly);
  if (eigs.eigenvalues().minCoeff() < -1e-10 * scale)
    throw std::invalid_argument("SqrtQuadraticObjective: form must be PSD");
}

FirstOrderAnswer eval_sqrt_quadratic(const SqrtQuadraticObjective& obj,
                                     const Eigen::Ref<const Vector>& x) {
  check_dim(obj.dimension(), x.size(), "eval_sqrt_quadratic");
  const Vector qx = obj.form() * x;
  double s = x.dot(qx);
  if (s < -1e-12)
    throw std::logic_error("eval_sqrt_quadratic: form evaluated negative");
  s = std::max(s, 0.0);
  const double value = std::sqrt(s);
  if (value > 0.0) return {value, qx / value};
  return {0.0, Vector::Zero(x.size())};
}

ObjectiveList ObjectiveList::affine_abs(Matrix a_rows, Vector b) {
  if (a_rows.rows() != b.size())
    throw std::invalid_argument("ObjectiveList: one offset per objective row");
  if (a_rows.rows() < 1)
    throw std::invalid_argument("ObjectiveList: needs at least one objective");
  if (!a_rows.allFinite() || !b.allFinite())
    throw std::invalid_argument("ObjectiveList: entries must be finite");
  return ObjectiveList(AffineAbsFamily{std::move(a_rows), std::move(b)});
}

ObjectiveList ObjectiveList::sqrt_quadratic(
    std::vector<SqrtQuadraticObjective> forms) {
  if (forms.empty())
    throw std::invalid_argument("ObjectiveList: needs at least one objective");
  const Index dim = forms.front().dimension();
  for (const auto& f : forms)
    if (f.dimension() != dim)
      throw std::invalid_argument("ObjectiveList: forms differ in dimension");
  return ObjectiveList(Storage{std::move(forms)});
}

std::int64_t ObjectiveList::size() const {
  if (const auto* fam = std::get_if<AffineAbsFamily>(&storage_))
    return fam->a.rows();
  return static_cast<std::int64_t>(
      std::get<std::vector<SqrtQuadraticObjective>>(storage_).size());
}

Index ObjectiveList::dimension() const {
  if (const auto* fam = std::get_if<AffineAbsFamily>(&storage_))
    return fam->a.cols();
  return std::get<std::vector<SqrtQuadraticObjective>>(storage_)
      .front()
      .dimension();
}

FirstOrderAnswer ObjectiveList::eval(std::int64_t i,
                                     const Eigen::Ref<const Vector>& x) const {
  if (i < 0 || i >= size())
    throw std::out_of_range("ObjectiveList::eval: index out of range");
  check_dim(dimension(), x.size(), "ObjectiveList::eval");
  if (const auto* fam = std::get_if<AffineAbsFamily>(&storage_))
    return affine_abs_answer(fam->a.row(i).transpose(), fam->b(i), x);
  return eval_sqrt_quadratic(
      std::get<std::vector<SqrtQuadraticObjective>>(storage_)[i], x);
}

FirstOrderAnswer ObjectiveList::eval_average(
    const Eigen::Ref<const Vector>& x) const {
  check_dim(dimension(), x.size(), "ObjectiveList::eval_average");
  const double n = static_cast<double>(size());
  if (const auto* fam = std::get_if<AffineAbsFamily>(&storage_)) {
    const Vector residuals = fam->a * x - fam->b;
    const Vector signs = residuals.array().sign().matrix();
    return {residuals.cwiseAbs().sum() / n, fam->a.transpose() * signs / n};
  }
  FirstOrderAnswer out{0.0, Vector::Zero(x.size())};
  for (const auto& f : std::get<std::vector<SqrtQuadraticObjective>>(storage_)) {
    const FirstOrderAnswer a = eval_sqrt_quadratic(f, x);
    out.value += a.value / n;
    out.subgradient += a.subgradient / n;
  }
  return out;
}

bool ObjectiveList::is_affine_abs() const {
  return std::holds_alternative<AffineAbsFamily>(storage_);
}

const Matrix& ObjectiveList::affine_rows() const {
  return std::get<AffineAbsFamily>(storage_).a;
}

const Vector& ObjectiveList::affine_offsets() const {
  return std::get<AffineAbsFamily>(storage_).b;
}

const std::vector<SqrtQuadraticObjective>& ObjectiveList::quadratic_forms()
    const {
  return std::get<std::vector<SqrtQuadraticObjective>>(storage_);
}

double lipschitz_bound(const ObjectiveList& objectives,
                       const MaxAffineConstraint& constraint,
                       const ProxSetup& setup) {
  double bound = 0.0;
  if (objectives.is_affine_abs()) {
    const Matrix& a = objectives.affine_rows();
    for (Index i = 0; i < a.rows(); ++i)
      bound = std::max(bound, dual_norm(setup, a.row(i).transpose()));
  } else {
    // Spectral bound sqrt(lambda_max(Q)): ||Qx|| / sqrt(x'Qx) <= sqrt(lmax),
    // and the l2 bound stays valid for the l1 / lp (p <= 2) primal norms.
    for (const auto& f : objectives.quadratic_forms()) {
      Eigen::SelfAdjointEigenSolver<Matrix> eigs(f.form(),
                                                 Eigen::EigenvaluesOnly);
      bound = std::max(bound,
                       std::sqrt(std::max(0.0, eigs.eigenvalues().maxCoeff())));
    }
  }
  for (Index m = 0; m < constraint.component_count(); ++m)
    bound =
        std::max(bound, dual_norm(setup, constraint.rows().row(m).transpose()));
  return bound;
}

}  // namespace omd
