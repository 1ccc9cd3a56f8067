#include "eglasso/io.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace eglasso::io {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::vector<double> parse_csv_line(const std::string& line, int line_no,
                                   const std::string& path) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": cannot parse '" + cell + "' as a number");
    }
  }
  return out;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    rows.push_back(parse_csv_line(line, line_no, path));
    if (rows.back().size() != rows.front().size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": ragged row");
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("matrix JSON format requires a square matrix");
  json j;
  j["d"] = static_cast<int>(m.rows());
  std::vector<double> entries;
  entries.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) entries.push_back(m(i, k));
  j["entries"] = entries;
  return j;
}

Eigen::MatrixXd read_matrix_json(const std::string& path) {
  auto in = open_in(path);
  json j;
  in >> j;
  const int d = j.at("d").get<int>();
  const auto entries = j.at("entries").get<std::vector<double>>();
  if (static_cast<int>(entries.size()) != d * d)
    throw std::runtime_error(path + ": entries length does not match d*d");
  Eigen::MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) m(i, k) = entries[i * d + k];
  return m;
}

void write_matrix_json(const Eigen::MatrixXd& m, const std::string& path) {
  write_json(matrix_to_json(m), path);
}

Eigen::MatrixXd read_matrix_auto(const std::string& path) {
  return has_suffix(path, ".json") ? read_matrix_json(path)
                                   : read_matrix_csv(path);
}

EdgeSet read_edges_json(const std::string& path) {
  auto in = open_in(path);
  json j;
  in >> j;
  EdgeSet out;
  out.d = j.at("d").get<int>();
  for (const auto& pair : j.at("edges")) {
    const int i = pair.at(0).get<int>();
    const int k = pair.at(1).get<int>();
    if (i < 1 || k < 1 || i > out.d || k > out.d || i == k)
      throw std::runtime_error(path + ": invalid edge [" + std::to_string(i) +
                               "," + std::to_string(k) + "]");
    out.add(i - 1, k - 1);  // file is 1-based
  }
  return out;
}

nlohmann::json edges_to_json(const EdgeSet& edges) {
  json j;
  j["d"] = edges.d;
  json list = json::array();
  for (const auto& [i, k] : edges.edges) list.push_back({i + 1, k + 1});
  j["edges"] = list;
  return j;
}

void write_edges_json(const EdgeSet& edges, const std::string& path) {
  write_json(edges_to_json(edges), path);
}

void write_edges_dot(const EdgeSet& edges, const std::string& path,
                     const std::vector<std::string>& labels) {
  auto out = open_out(path);
  out << "graph extremal {\n";
  for (int v = 0; v < edges.d; ++v) {
    const std::string label =
        v < static_cast<int>(labels.size()) ? labels[v] : std::to_string(v + 1);
    out << "  n" << v + 1 << " [label=\"" << label << "\"];\n";
  }
  for (const auto& [i, k] : edges.edges)
    out << "  n" << i + 1 << " -- n" << k + 1 << ";\n";
  out << "}\n";
}

SampleMatrix read_samples_csv(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty sample file");
  SampleMatrix out;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.labels.push_back(cell);
  }
  const std::size_t d = out.labels.size();
  if (d < 2) throw std::runtime_error(path + ": need at least 2 columns");
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    rows.push_back(parse_csv_line(line, line_no, path));
    if (rows.back().size() != d)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(d) + " columns");
  }
  if (rows.size() < 2)
    throw std::runtime_error(path + ": need at least 2 observations");
  out.values.resize(rows.size(), d);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < d; ++j) out.values(i, j) = rows[i][j];
  return out;
}

void write_samples_csv(const SampleMatrix& sample, const std::string& path) {
  auto out = open_out(path);
  for (int j = 0; j < sample.d(); ++j) {
    if (j) out << ',';
    out << (j < static_cast<int>(sample.labels.size())
                ? sample.labels[j]
                : "X" + std::to_string(j + 1));
  }
  out << '\n';
  for (int i = 0; i < sample.n(); ++i) {
    for (int j = 0; j < sample.d(); ++j) {
      if (j) out << ',';
      out << format_double(sample.values(i, j));
    }
    out << '\n';
  }
}

nlohmann::json fit_to_json(const FitResult& fit) {
  json j;
  j["theta_lasso"] = matrix_to_json(fit.theta_lasso.entries);
  j["theta_star"] = matrix_to_json(fit.theta_star);
  j["edges"] = edges_to_json(fit.edges);
  j["objective"] = fit.objective;
  j["kkt_residual"] = fit.kkt_residual;
  j["converged"] = fit.converged;
  j["sweeps"] = fit.sweeps;
  return j;
}

nlohmann::json tail_to_json(const TailCovariance& tail) {
  json j;
  j["S"] = matrix_to_json(tail.S.entries);
  j["n"] = tail.n;
  j["k_n"] = tail.k_n;
  j["M"] = tail.M;
  return j;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace eglasso::io
