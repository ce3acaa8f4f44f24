#pragma once

#include <iosfwd>
#include <string>

#include "ppk/operators.hpp"

namespace ppk {

struct MatrixMarketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Coordinate-format Matrix Market I/O.  Real (and integer) general/symmetric/
// skew-symmetric matrices are supported; symmetric storage is expanded.
SparseMatrix read_matrix_market(const std::string& path);
SparseMatrix read_matrix_market(std::istream& in, const std::string& name = "<stream>");

void write_matrix_market(const SparseMatrix& m, const std::string& path);
void write_matrix_market(const SparseMatrix& m, std::ostream& out);

}  // namespace ppk
