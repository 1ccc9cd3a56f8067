#pragma once

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>
#include <string>

#include "eglasso/hr_core.hpp"
#include "eglasso/solver.hpp"
#include "eglasso/tail_estimator.hpp"

// File formats shared by the library and the CLI.
//
//   matrix CSV   dense, one matrix row per line, no header
//   matrix JSON  {"d": int, "entries": row-major array}
//   edges JSON   {"d": int, "edges": [[i,j],...]} with 1-based indices
//   sample CSV   header row of column labels, one observation per line
//
// All floating-point output uses 17 significant digits.

namespace eglasso::io {

std::string format_double(double v);

Eigen::MatrixXd read_matrix_csv(const std::string& path);
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);

Eigen::MatrixXd read_matrix_json(const std::string& path);
void write_matrix_json(const Eigen::MatrixXd& m, const std::string& path);

// Reads either format, dispatching on the file extension (.json vs .csv).
Eigen::MatrixXd read_matrix_auto(const std::string& path);

EdgeSet read_edges_json(const std::string& path);
void write_edges_json(const EdgeSet& edges, const std::string& path);

// Graphviz rendering of an edge set; labels default to 1-based indices.
void write_edges_dot(const EdgeSet& edges, const std::string& path,
                     const std::vector<std::string>& labels = {});

SampleMatrix read_samples_csv(const std::string& path);
void write_samples_csv(const SampleMatrix& sample, const std::string& path);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
nlohmann::json edges_to_json(const EdgeSet& edges);
nlohmann::json fit_to_json(const FitResult& fit);
nlohmann::json tail_to_json(const TailCovariance& tail);

void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace eglasso::io
