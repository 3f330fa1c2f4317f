#include "distlab/json_io.hpp"

#include <fstream>
#include <json.hpp>

namespace distlab {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, int n) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rows.at(i).at(j).get<double>();
  return m;
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  nlohmann::json obj;
  obj["n"] = inst.prefs.n;
  obj["men_ranks"] = inst.prefs.men_ranks;
  obj["women_ranks"] = inst.prefs.women_ranks;
  obj["men_values"] = matrix_to_json(inst.values.men_values);
  obj["women_values"] = matrix_to_json(inst.values.women_values);
  return obj.dump(2);
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json obj = nlohmann::json::parse(text);
  const int n = obj.at("n").get<int>();
  PreferenceProfile prefs;
  prefs.n = n;
  prefs.men_ranks = obj.at("men_ranks").get<std::vector<std::vector<int>>>();
  prefs.women_ranks = obj.at("women_ranks").get<std::vector<std::vector<int>>>();
  ValuationProfile vals;
  vals.men_values = matrix_from_json(obj.at("men_values"), n);
  vals.women_values = matrix_from_json(obj.at("women_values"), n);
  return validate_instance(std::move(prefs), std::move(vals));
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("IO", "cannot read " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return instance_from_json(text);
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("IO", "cannot write " + path);
  out << instance_to_json(inst) << "\n";
}

}  // namespace distlab
