#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "dantzig/errors.hpp"
#include "dantzig/io.hpp"

namespace {

using namespace dantzig;
namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dantzig_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir / name;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

TEST(FormatReal, RoundTripsExactly) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::numeric_limits<double>::min(),
                   std::numeric_limits<double>::max()}) {
    EXPECT_EQ(std::stod(format_real(v)), v);
  }
}

TEST(Csv, CommentsHeaderRows) {
  CsvTable t;
  t.comments = {"command: test"};
  t.header = {"a", "b"};
  t.add_row({"1", "2"});
  std::ostringstream out;
  write_csv(out, t);
  EXPECT_EQ(out.str(), "# command: test\na,b\n1,2\n");
}

TEST(Csv, MatrixRoundTripWithNestedDirectory) {
  const fs::path path = scratch("nested/dir/m.csv");
  CsvTable t;
  t.comments = {"x"};
  t.header = {"c0", "c1", "c2"};
  RealMat m(2, 3);
  m << 1.5, -2.0, 1e-17, 0.1, 3.0, -4.25;
  for (Index i = 0; i < 2; ++i) {
    std::vector<std::string> row;
    for (Index j = 0; j < 3; ++j) row.push_back(format_real(m(i, j)));
    t.add_row(row);
  }
  write_csv(path, t);
  EXPECT_EQ(read_real_matrix_csv(path), m);
}

TEST(Csv, HeaderlessAndBlankLines) {
  const fs::path path = scratch("plain.csv");
  write_text(path, "1,2\n\n3,4\n");
  RealMat expected(2, 2);
  expected << 1, 2, 3, 4;
  EXPECT_EQ(read_real_matrix_csv(path), expected);
}

TEST(Csv, RaggedAndGarbageRowsReportLine) {
  const fs::path ragged = scratch("ragged.csv");
  write_text(ragged, "# c\n1,2\n3\n");
  try {
    read_real_matrix_csv(ragged);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.row(), 3u);
  }
  const fs::path garbage = scratch("garbage.csv");
  write_text(garbage, "1,2\n3,x\n");
  try {
    read_real_matrix_csv(garbage);
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  EXPECT_THROW(read_real_matrix_csv(scratch("absent.csv")), std::runtime_error);
}

TEST(VectorFile, RealAndComplexRoundTrip) {
  RealVec r(3);
  r << 1.25, -0.5, 1.0 / 7.0;
  write_csv(scratch("r.csv"), vector_table<double>(r, {"note"}));
  const auto rf = read_vector_csv(scratch("r.csv"));
  EXPECT_FALSE(rf.complex);
  EXPECT_EQ(rf.values.real(), r);

  ComplexVec c(2);
  c << Complex(1, -1), Complex(0.1, 1e-300);
  write_csv(scratch("c.csv"), vector_table<Complex>(c));
  const auto cf = read_vector_csv(scratch("c.csv"));
  EXPECT_TRUE(cf.complex);
  EXPECT_EQ(cf.values, c);

  write_text(scratch("three.csv"), "1,2,3\n");
  EXPECT_THROW(read_vector_csv(scratch("three.csv")), FormatError);
}

}  // namespace
