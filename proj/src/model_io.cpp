#include "ramanpcr/model_io.hpp"

#include <limits>

#include <json.hpp>

#include "csv.hpp"

namespace ramanpcr {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormat = "ramanpcr-pcr-model";
constexpr int kVersion = 1;

Json vector_json(const Eigen::VectorXd& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Eigen::VectorXd json_vector(const Json& j, const char* key) {
  const auto values = j.at(key).get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Index>(values.size()));
}

// Stored as a list of columns.
Json columns_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Index c = 0; c < m.cols(); ++c) out.push_back(vector_json(m.col(c)));
  return out;
}

// Stored as a list of rows.
Json rows_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

Eigen::MatrixXd json_columns(const Json& j, Index rows) {
  Eigen::MatrixXd m(rows, static_cast<Index>(j.size()));
  for (Index c = 0; c < m.cols(); ++c) {
    const auto values = j.at(static_cast<std::size_t>(c)).get<std::vector<double>>();
    if (static_cast<Index>(values.size()) != rows) throw Error(ErrorCode::ModelFormat, "ragged loadings");
    m.col(c) = Eigen::Map<const Eigen::VectorXd>(values.data(), rows);
  }
  return m;
}

Eigen::MatrixXd json_rows(const Json& j, Index cols) {
  Eigen::MatrixXd m(static_cast<Index>(j.size()), cols);
  for (Index r = 0; r < m.rows(); ++r) {
    const auto values = j.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
    if (static_cast<Index>(values.size()) != cols) throw Error(ErrorCode::ModelFormat, "ragged coefficients");
    m.row(r) = Eigen::Map<const Eigen::RowVectorXd>(values.data(), cols);
  }
  return m;
}

}  // namespace

std::string model_to_json(const PcrModel& model) {
  Json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["pipeline"] = model.pipeline.name();
  doc["components"] = model.components();
  Json species = Json::array();
  for (std::size_t s = 0; s < model.species.size(); ++s)
    species.push_back({{"name", model.species[s]}, {"unit", s < model.units.size() ? model.units[s] : ""}});
  doc["species"] = species;
  doc["axis"] = vector_json(model.pca.axis);
  doc["mean_spectrum"] = vector_json(model.pca.mean_spectrum);
  doc["explained_variance"] = vector_json(model.pca.explained_variance);
  doc["loadings"] = columns_json(model.pca.loadings);
  doc["coefficients"] = rows_json(model.coefficients);
  doc["mean_conc"] = vector_json(model.mean_conc);
  return doc.dump(1) + "\n";
}

PcrModel model_from_json(const std::string& text) {
  try {
    const Json doc = Json::parse(text);
    if (doc.at("format").get<std::string>() != kFormat)
      throw Error(ErrorCode::ModelFormat, "not a PCR model file");
    if (doc.at("version").get<int>() != kVersion)
      throw Error(ErrorCode::ModelFormat, "unsupported model version");
    PcrModel model;
    model.pipeline = Pipeline::parse(doc.at("pipeline").get<std::string>());
    for (const auto& s : doc.at("species")) {
      model.species.push_back(s.at("name").get<std::string>());
      model.units.push_back(s.at("unit").get<std::string>());
    }
    model.pca.axis = json_vector(doc, "axis");
    model.pca.mean_spectrum = json_vector(doc, "mean_spectrum");
    model.pca.explained_variance = json_vector(doc, "explained_variance");
    const Index channels = model.pca.mean_spectrum.size();
    model.pca.loadings = json_columns(doc.at("loadings"), channels);
    const Index k = model.pca.loadings.cols();
    model.coefficients = json_rows(doc.at("coefficients"), k);
    model.mean_conc = json_vector(doc, "mean_conc");
    if (model.pca.axis.size() != channels || model.coefficients.rows() != model.mean_conc.size() ||
        static_cast<Index>(model.species.size()) != model.mean_conc.size() ||
        model.pca.explained_variance.size() != k)
      throw Error(ErrorCode::ModelFormat, "inconsistent dimensions");
    model.pca.residual_path = Eigen::VectorXd::Constant(k + 1, std::numeric_limits<double>::quiet_NaN());
    model.pca.residual_fro = std::numeric_limits<double>::quiet_NaN();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ModelFormat, e.what());
  }
}

void save_model(const std::filesystem::path& path, const PcrModel& model) {
  detail::write_text(path, model_to_json(model));
}

PcrModel load_model(const std::filesystem::path& path) { return model_from_json(detail::read_text(path)); }

}  // namespace ramanpcr
