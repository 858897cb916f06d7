#include "sls/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sls {

std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void save_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << format_full(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Matrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 0)
    throw std::runtime_error("bad matrix header in " + path);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (!(in >> m(i, j))) throw std::runtime_error("truncated matrix file " + path);
  if (!m.allFinite()) throw std::runtime_error("non-finite entries in " + path);
  return m;
}

void save_dictionary(const std::string& path, const Dictionary& d) { save_matrix(path, d.atoms); }

Dictionary load_dictionary(const std::string& path) {
  Matrix m = load_matrix(path);
  bool unit = true;
  for (Index j = 0; j < m.cols() && unit; ++j) unit = std::abs(m.col(j).norm() - 1.0) <= 1e-12;
  return Dictionary::from_matrix(std::move(m), unit);
}

void save_vector(const std::string& path, const Vector& v) { save_matrix(path, v); }

Vector load_vector(const std::string& path) {
  Matrix m = load_matrix(path);
  if (m.cols() != 1) throw std::runtime_error("expected a single-column file: " + path);
  return m.col(0);
}

}  // namespace sls
