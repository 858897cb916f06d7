#ifndef SLS_MATRIX_IO_HPP
#define SLS_MATRIX_IO_HPP

#include <string>

#include "sls/dictionary.hpp"
#include "sls/types.hpp"

namespace sls {

/// Text matrix file: header line "rows cols", then row-major values in
/// decimal text.  Values are written with 17 significant digits, so a
/// save/load round trip reproduces every entry exactly.
void save_matrix(const std::string& path, const Matrix& m);
Matrix load_matrix(const std::string& path);

void save_dictionary(const std::string& path, const Dictionary& d);
/// Loads the matrix and marks the dictionary normalized when every column
/// norm is within 1e-12 of one.
Dictionary load_dictionary(const std::string& path);

void save_vector(const std::string& path, const Vector& v);
Vector load_vector(const std::string& path);

/// Shortest decimal text that round-trips a double (17 significant digits).
std::string format_full(double v);

}  // namespace sls

#endif
