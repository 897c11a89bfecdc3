#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "rescomp/reservoir.hpp"

namespace rescomp {

namespace {

constexpr int kFormatVersion = 1;

nlohmann::json matrix_to_row_major(const Eigen::MatrixXd& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  return arr;
}

Eigen::MatrixXd matrix_from_row_major(const nlohmann::json& arr, Eigen::Index rows,
                                      Eigen::Index cols, const char* what) {
  if (static_cast<Eigen::Index>(arr.size()) != rows * cols)
    throw std::runtime_error(std::string("reservoir JSON: ") + what + " has wrong length");
  Eigen::MatrixXd m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = arr[k++].get<double>();
  return m;
}

}  // namespace

std::string reservoir_to_json(const Reservoir& r) {
  nlohmann::json j;
  j["format_version"] = kFormatVersion;
  j["params"] = {
      {"n_units", r.params.n_units},
      {"input_dim", r.params.input_dim},
      {"spectral_radius", r.params.spectral_radius},
      {"input_scaling", r.params.input_scaling},
      {"connection_density", r.params.connection_density},
      {"nonlinearity", to_string(r.params.nonlinearity)},
      {"leak_rate", r.params.leak_rate},
      {"seed", r.params.seed},
  };
  j["w_in"] = matrix_to_row_major(r.w_in);
  j["w_res"] = matrix_to_row_major(r.w_res);
  return j.dump();
}

Reservoir reservoir_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.at("format_version").get<int>() != kFormatVersion)
    throw std::runtime_error("reservoir JSON: unsupported format_version");
  const auto& p = j.at("params");
  ReservoirParams params;
  params.n_units = p.at("n_units").get<int>();
  params.input_dim = p.at("input_dim").get<int>();
  params.spectral_radius = p.at("spectral_radius").get<double>();
  params.input_scaling = p.at("input_scaling").get<double>();
  params.connection_density = p.at("connection_density").get<double>();
  params.nonlinearity = nonlinearity_from_string(p.at("nonlinearity").get<std::string>());
  params.leak_rate = p.at("leak_rate").get<double>();
  params.seed = p.at("seed").get<std::uint64_t>();
  Eigen::MatrixXd w_in =
      matrix_from_row_major(j.at("w_in"), params.n_units, params.input_dim, "w_in");
  Eigen::MatrixXd w_res =
      matrix_from_row_major(j.at("w_res"), params.n_units, params.n_units, "w_res");
  return Reservoir::from_matrices(params, std::move(w_in), std::move(w_res));
}

void save_reservoir(const Reservoir& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << reservoir_to_json(r);
}

Reservoir load_reservoir(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return reservoir_from_json(text);
}

}  // namespace rescomp
