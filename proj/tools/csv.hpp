#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace permwalk::cli {

/// Raised for malformed or inconsistent input files; messages carry
/// path/line/column context and map to the input-error exit code.
class input_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Rectangular data matrix: one header row of subject ids, then one row of
/// S values per vertex.
struct DataMatrix {
  std::vector<std::string> subject_ids;
  std::size_t n_vertices = 0;
  std::vector<double> values;  // row-major n_vertices x subject_ids.size()

  std::size_t n_subjects() const { return subject_ids.size(); }
};

/// Parse a matrix CSV. Requires unique nonempty subject ids, rectangular
/// rows, and finite values; errors cite path, line and column.
DataMatrix read_matrix(const std::string& path);

/// Serialize with shortest round-trip number formatting; read_matrix of the
/// output reproduces the input exactly.
void write_matrix(const std::string& path, const DataMatrix& matrix);

/// Two-column subject,group CSV (no header); group is "x" or "y".
/// Returns one label per matrix subject column: 0 = x, 1 = y. Every subject
/// must be labeled exactly once and both groups need >= 2 members.
std::vector<std::uint8_t> read_group_labels(const std::string& path, const DataMatrix& matrix);

/// Two-column idA,idB CSV (no header) of twin pairs. Returns column indices
/// (a[k], b[k]); each subject appears in at most one pair.
struct PairIndices {
  std::vector<std::uint32_t> a;
  std::vector<std::uint32_t> b;
};
PairIndices read_pair_labels(const std::string& path, const DataMatrix& matrix);

/// Shortest round-trip decimal form of a double ("nan" for NaN).
std::string format_double(double value);

}  // namespace permwalk::cli
