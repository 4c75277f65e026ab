#include "dantzig/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include "dantzig/errors.hpp"

namespace dantzig {

std::string format_real(double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.16e", value);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (const auto& c : table.comments) out << "# " << c << '\n';
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  if (!table.header.empty()) line(table.header);
  for (const auto& r : table.rows) line(r);
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  write_csv(out, table);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                           : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

bool parse(std::string_view token, double& value) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size() && !token.empty();
}

}  // namespace

RealMat read_real_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");

  std::vector<double> values;
  std::size_t width = 0;
  std::size_t rows = 0;
  bool header_allowed = true;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    const auto fields = split(view);
    std::vector<double> parsed(fields.size());
    bool ok = true;
    for (std::size_t i = 0; i < fields.size() && ok; ++i) ok = parse(fields[i], parsed[i]);
    if (!ok) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw FormatError("non-numeric field", lineno);
    }
    header_allowed = false;
    if (rows == 0) width = fields.size();
    if (fields.size() != width) {
      throw FormatError("expected " + std::to_string(width) + " fields, found " +
                            std::to_string(fields.size()),
                        lineno);
    }
    for (double v : parsed) {
      if (!std::isfinite(v)) throw FormatError("non-finite value", lineno);
    }
    values.insert(values.end(), parsed.begin(), parsed.end());
    ++rows;
  }
  if (rows == 0) throw FormatError("'" + path.string() + "' contains no data rows", 0);
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(values.data(), static_cast<Index>(rows),
                                    static_cast<Index>(width));
}

VectorFile read_vector_csv(const std::filesystem::path& path) {
  const RealMat m = read_real_matrix_csv(path);
  VectorFile out;
  switch (m.cols()) {
    case 1:
      out.values = m.col(0).cast<Complex>();
      break;
    case 2:
      out.complex = true;
      out.values.resize(m.rows());
      for (Index i = 0; i < m.rows(); ++i) out.values[i] = Complex(m(i, 0), m(i, 1));
      break;
    default:
      throw FormatError("'" + path.string() + "': a vector file has one or two columns", 0);
  }
  return out;
}

template <typename Scalar>
CsvTable vector_table(const Vec<Scalar>& v, std::vector<std::string> comments) {
  CsvTable t;
  t.comments = std::move(comments);
  if constexpr (is_complex_v<Scalar>) {
    t.header = {"re", "im"};
  } else {
    t.header = {"value"};
  }
  t.rows.reserve(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    if constexpr (is_complex_v<Scalar>) {
      t.add_row({format_real(v[i].real()), format_real(v[i].imag())});
    } else {
      t.add_row({format_real(v[i])});
    }
  }
  return t;
}

template CsvTable vector_table<double>(const RealVec&, std::vector<std::string>);
template CsvTable vector_table<Complex>(const ComplexVec&, std::vector<std::string>);

}  // namespace dantzig
