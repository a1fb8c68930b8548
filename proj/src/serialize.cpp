#include "omd/serialize.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <vector>

namespace omd {

namespace {

using nlohmann::json;

json vector_to_json(const Eigen::Ref<const Vector>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const json& j) {
  Vector v(static_cast<Index>(j.size()));
  Index i = 0;
  for (const auto& entry : j) v(i++) = entry.get<double>();
  return v;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

Matrix matrix_from_json(const json& j) {
  const Index rows = static_cast<Index>(j.size());
  if (rows == 0) throw std::invalid_argument("matrix_from_json: empty matrix");
  const Index cols = static_cast<Index>(j.front().size());
  Matrix m(rows, cols);
  Index r = 0;
  for (const auto& row : j) {
    if (static_cast<Index>(row.size()) != cols)
      throw std::invalid_argument("matrix_from_json: ragged rows");
    Index c = 0;
    for (const auto& entry : row) m(r, c++) = entry.get<double>();
    ++r;
  }
  return m;
}

std::string kind_name(ProxKind kind) {
  switch (kind) {
    case ProxKind::EuclideanBall:
      return "euclidean_ball";
    case ProxKind::EntropySimplex:
      return "entropy_simplex";
    case ProxKind::PNormBall:
      return "pnorm_ball";
  }
  throw std::logic_error("kind_name: unknown kind");
}

}  // namespace

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::NonAdaptive:
      return "nonadaptive";
    case Algorithm::Adaptive:
      return "adaptive";
    case Algorithm::AdaptiveMulti:
      return "adaptive_multi";
  }
  throw std::logic_error("algorithm_name: unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "nonadaptive") return Algorithm::NonAdaptive;
  if (name == "adaptive") return Algorithm::Adaptive;
  if (name == "adaptive_multi") return Algorithm::AdaptiveMulti;
  throw std::invalid_argument("algorithm_from_name: unknown algorithm '" + name +
                              "'");
}

json to_json(const ProxSetup& setup) {
  json j{{"kind", kind_name(setup.kind())},
         {"dimension", setup.dimension()},
         {"theta0", setup.theta0()}};
  if (setup.kind() == ProxKind::PNormBall) j["p"] = setup.p_exponent();
  return j;
}

ProxSetup setup_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const Index dim = j.at("dimension").get<Index>();
  ProxSetup setup = [&] {
    if (kind == "euclidean_ball") return ProxSetup::euclidean_ball(dim);
    if (kind == "entropy_simplex") return ProxSetup::entropy_simplex(dim);
    if (kind == "pnorm_ball")
      return ProxSetup::pnorm_ball(dim, j.at("p").get<double>());
    throw std::invalid_argument("setup_from_json: unknown kind '" + kind + "'");
  }();
  if (j.contains("theta0")) setup = setup.with_theta0(j["theta0"].get<double>());
  return setup;
}

json to_json(const ProblemInstance& instance) {
  json objectives;
  if (instance.objectives.is_affine_abs()) {
    objectives = {{"family", "affine_abs"},
                  {"a_rows", matrix_to_json(instance.objectives.affine_rows())},
                  {"b", vector_to_json(instance.objectives.affine_offsets())}};
  } else {
    json forms = json::array();
    for (const auto& f : instance.objectives.quadratic_forms())
      forms.push_back(matrix_to_json(f.form()));
    objectives = {{"family", "sqrt_quadratic"}, {"forms", std::move(forms)}};
  }
  return json{{"objectives", std::move(objectives)},
              {"constraint",
               {{"rows", matrix_to_json(instance.constraint.rows())},
                {"offsets", vector_to_json(instance.constraint.offsets())}}},
              {"setup", to_json(instance.setup)},
              {"x0", vector_to_json(instance.x0)},
              {"lipschitz", instance.lipschitz}};
}

ProblemInstance instance_from_json(const json& j) {
  const json& jo = j.at("objectives");
  const std::string family = jo.at("family").get<std::string>();
  ObjectiveList objectives = [&] {
    if (family == "affine_abs")
      return ObjectiveList::affine_abs(matrix_from_json(jo.at("a_rows")),
                                       vector_from_json(jo.at("b")));
    if (family == "sqrt_quadratic") {
      std::vector<SqrtQuadraticObjective> forms;
      for (const auto& f : jo.at("forms"))
        forms.emplace_back(matrix_from_json(f));
      return ObjectiveList::sqrt_quadratic(std::move(forms));
    }
    throw std::invalid_argument("instance_from_json: unknown family '" + family +
                                "'");
  }();

  MaxAffineConstraint constraint(matrix_from_json(j.at("constraint").at("rows")),
                                 vector_from_json(j.at("constraint").at("offsets")));
  ProxSetup setup = setup_from_json(j.at("setup"));
  ProblemInstance instance{std::move(objectives), std::move(constraint),
                           std::move(setup), vector_from_json(j.at("x0")), 0.0};
  instance.lipschitz =
      j.contains("lipschitz")
          ? j["lipschitz"].get<double>()
          : lipschitz_bound(instance.objectives, instance.constraint,
                            instance.setup);
  return instance;
}

json to_json(const RunConfig& config) {
  return json{{"algorithm", algorithm_name(config.algorithm)},
              {"n_productive", config.n_productive},
              {"eps", config.eps},
              {"seed", config.seed},
              {"max_total_steps", config.max_total_steps}};
}

RunConfig config_from_json(const json& j) {
  RunConfig config;
  config.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
  config.n_productive = j.at("n_productive").get<std::int64_t>();
  config.eps = j.at("eps").get<double>();
  config.seed = j.value("seed", std::uint64_t{0});
  config.max_total_steps = j.value("max_total_steps", std::uint64_t{0});
  return config;
}

json to_json(const TraceFile& file, bool include_iterates) {
  json steps = json::array();
  for (const StepRecord& rec : file.report.trace) {
    json step{{"k", rec.k},
              {"productive", rec.productive},
              {"m_k", rec.m_k},
              {"h_k", rec.h_k},
              {"g_value", rec.constraint_value}};
    if (rec.objective_index.has_value())
      step["objective_index"] = *rec.objective_index;
    if (include_iterates && rec.iterate.size() > 0)
      step["iterate"] = vector_to_json(rec.iterate);
    steps.push_back(std::move(step));
  }

  json summary{{"n_productive", file.report.n_productive},
               {"n_nonproductive", file.report.n_nonproductive},
               {"total_steps", file.report.total_steps()},
               {"elapsed_seconds", file.report.elapsed_seconds}};
  if (std::isfinite(file.report.delta)) summary["delta"] = file.report.delta;
  if (file.regret.has_value()) summary["regret"] = *file.regret;
  if (file.comparator_value.has_value())
    summary["comparator_value"] = *file.comparator_value;

  return json{{"config", to_json(file.config)},
              {"setup", to_json(file.setup)},
              {"lipschitz", file.lipschitz},
              {"steps", std::move(steps)},
              {"summary", std::move(summary)}};
}

TraceFile trace_from_json(const json& j) {
  TraceFile file{config_from_json(j.at("config")), setup_from_json(j.at("setup")),
                 j.at("lipschitz").get<double>(), RunReport{}, std::nullopt,
                 std::nullopt};
  file.report.algorithm = file.config.algorithm;

  for (const auto& step : j.at("steps")) {
    StepRecord rec;
    rec.k = step.at("k").get<std::int64_t>();
    rec.productive = step.at("productive").get<bool>();
    if (step.contains("objective_index"))
      rec.objective_index = step["objective_index"].get<std::int64_t>();
    rec.m_k = step.at("m_k").get<double>();
    rec.h_k = step.at("h_k").get<double>();
    rec.constraint_value = step.at("g_value").get<double>();
    if (step.contains("iterate")) rec.iterate = vector_from_json(step["iterate"]);
    file.report.trace.push_back(std::move(rec));
  }

  const json& summary = j.at("summary");
  file.report.n_productive = summary.at("n_productive").get<std::int64_t>();
  file.report.n_nonproductive = summary.at("n_nonproductive").get<std::int64_t>();
  file.report.delta = summary.contains("delta")
                          ? summary["delta"].get<double>()
                          : std::numeric_limits<double>::quiet_NaN();
  file.report.elapsed_seconds = summary.value("elapsed_seconds", 0.0);
  if (summary.contains("regret")) file.regret = summary["regret"].get<double>();
  if (summary.contains("comparator_value"))
    file.comparator_value = summary["comparator_value"].get<double>();
  return file;
}

void save_trace(const TraceFile& file, const std::string& path,
                bool include_iterates) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_trace: cannot open '" + path + "'");
  out << to_json(file, include_iterates).dump(2) << '\n';
}

TraceFile load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_trace: cannot open '" + path + "'");
  json j;
  in >> j;
  return trace_from_json(j);
}

}  // namespace omd
