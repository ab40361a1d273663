#include "mmph/model_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace mmph {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("model file: expected an array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("model file: expected a matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (j[i].size() != cols) throw ValidationError("model file: ragged matrix");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

}  // namespace

std::string to_json(const ModelDocument& doc) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = {{"p", doc.model.dim()},
                {"eplus_size", doc.model.eplus_size()},
                {"alpha", vector_to_json(doc.model.ph().initial())},
                {"t_mat", matrix_to_json(doc.model.ph().sub_intensity())}};
  j["standardization_shift"] = doc.shift;
  j["label"] = doc.label;
  if (doc.fit) {
    j["fit"] = {{"loglik", doc.fit->loglik},
                {"aic", doc.fit->aic},
                {"iterations", doc.fit->iterations},
                {"restarts", doc.fit->restarts},
                {"seed", doc.fit->seed}};
  }
  if (doc.independent) {
    j["independent"] = {{"ph",
                         {{"alpha", vector_to_json(doc.independent->ph.initial())},
                          {"t_mat", matrix_to_json(doc.independent->ph.sub_intensity())}}},
                        {"dph",
                         {{"alpha", vector_to_json(doc.independent->dph.initial())},
                          {"q_mat", matrix_to_json(doc.independent->dph.sub_transition())}}},
                        {"loglik_y", doc.independent->loglik_y},
                        {"loglik_n", doc.independent->loglik_n},
                        {"aic", doc.independent->aic}};
  }
  return j.dump(2);
}

ModelDocument model_document_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model file: ") + e.what());
  }
  try {
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw ValidationError("model file: unsupported schema version");
    }
    const json& jm = j.at("model");
    JointModel model(PhRep(vector_from_json(jm.at("alpha")), matrix_from_json(jm.at("t_mat"))),
                     jm.at("eplus_size").get<int>());
    ModelDocument doc{std::move(model), j.at("standardization_shift").get<double>(),
                      j.value("label", std::string{}), std::nullopt, std::nullopt};
    if (j.contains("fit")) {
      const json& jf = j["fit"];
      doc.fit = FitMetadata{jf.value("loglik", 0.0), jf.value("aic", 0.0),
                            jf.value("iterations", 0), jf.value("restarts", 0),
                            jf.value("seed", std::uint64_t{0})};
    }
    if (j.contains("independent")) {
      const json& ji = j["independent"];
      doc.independent = IndependentParts{
          PhRep(vector_from_json(ji.at("ph").at("alpha")),
                matrix_from_json(ji.at("ph").at("t_mat"))),
          DphRep(vector_from_json(ji.at("dph").at("alpha")),
                 matrix_from_json(ji.at("dph").at("q_mat"))),
          ji.value("loglik_y", 0.0), ji.value("loglik_n", 0.0), ji.value("aic", 0.0)};
    }
    return doc;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model file: ") + e.what());
  }
}

void save_model_document(const ModelDocument& doc, const std::string& path) {
  const std::string payload = to_json(doc);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp + "'");
    out << payload << '\n';
    if (!out) throw IoError("failed writing '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

ModelDocument load_model_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return model_document_from_json(text);
}

}  // namespace mmph
