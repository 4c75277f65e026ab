#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dantzig/types.hpp"

namespace dantzig {

/// Scientific notation with 17 significant digits, so doubles round-trip exactly.
std::string format_real(double value);

/// Comma-separated table preceded by '#'-prefixed comment lines.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

void write_csv(std::ostream& out, const CsvTable& table);
/// Creates missing parent directories.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

/// Numeric matrix from CSV: '#' lines and blank lines are skipped, and a first row that
/// does not parse as numbers is taken as a header. Throws FormatError (1-based line) on a
/// malformed or ragged row and std::runtime_error if the file cannot be opened.
RealMat read_real_matrix_csv(const std::filesystem::path& path);

/// Vector file: one column (real values) or two columns (real, imaginary parts).
struct VectorFile {
  ComplexVec values;
  bool complex = false;
};

VectorFile read_vector_csv(const std::filesystem::path& path);

/// One `value` column, or `re,im` columns for complex vectors; read_vector_csv() reads it back.
template <typename Scalar>
CsvTable vector_table(const Vec<Scalar>& v, std::vector<std::string> comments = {});

}  // namespace dantzig
