#include <sstream>

#include <gtest/gtest.h>

#include "dantzig/dictionary.hpp"
#include "dantzig/errors.hpp"
#include "dantzig/rng.hpp"
#include "support/oracles.hpp"

namespace {

using namespace dantzig;

ComplexVec random_complex(Index n, std::uint64_t seed) {
  Rng rng(seed);
  ComplexVec v(n);
  for (auto& z : v) z = Complex(rng.normal(), rng.normal());
  return v;
}

RealVec random_real(Index n, std::uint64_t seed) {
  Rng rng(seed);
  RealVec v(n);
  for (auto& z : v) z = rng.normal();
  return v;
}

double max_abs(const ComplexMat& m) { return m.cwiseAbs().maxCoeff(); }

ComplexMat identity_dev(const ComplexMat& b) {
  return b.adjoint() * b - ComplexMat::Identity(b.cols(), b.cols());
}

TEST(IdentityBlock, SmallSizes) {
  EXPECT_EQ(TransformBlock::identity(1).materialize(), ComplexMat::Identity(1, 1));
  EXPECT_EQ(TransformBlock::identity(3).materialize(), ComplexMat::Identity(3, 3));
  const auto v = random_complex(4, 1);
  ComplexVec out(4);
  TransformBlock::identity(4).apply<Complex>(v, out);
  EXPECT_EQ(out, v);
}

TEST(DftBlock, SmallSizes) {
  EXPECT_NEAR(std::abs(TransformBlock::dft(1).materialize()(0, 0) - 1.0), 0.0, 1e-15);
  const ComplexMat f2 = TransformBlock::dft(2).materialize();
  const double r = std::sqrt(0.5);
  ComplexMat expected(2, 2);
  expected << r, r, r, -r;
  EXPECT_LE(max_abs(f2 - expected), 1e-15);
}

TEST(DftBlock, MatchesEntryFormula) {
  for (int p : {3, 8, 17, 64, 256}) {
    const ComplexMat f = TransformBlock::dft(p).materialize();
    EXPECT_LE(max_abs(f - oracle::dft_matrix(p)), 1e-12) << "p=" << p;
  }
}

TEST(DftBlock, UnitaryAtEight) {
  EXPECT_LE(max_abs(identity_dev(oracle::dft_matrix(8))), 1e-12);
  EXPECT_LE(max_abs(identity_dev(TransformBlock::dft(8).materialize())), 1e-12);
}

TEST(DctBlock, SmallSizes) {
  EXPECT_NEAR(TransformBlock::dct(1).materialize()(0, 0).real(), 1.0, 1e-15);
  const ComplexMat c2 = TransformBlock::dct(2).materialize();
  const double r = std::sqrt(0.5);
  EXPECT_NEAR(c2(0, 0).real(), r, 1e-15);
  EXPECT_NEAR(c2(1, 0).real(), r, 1e-15);
  EXPECT_NEAR(c2(0, 1).real(), r, 1e-15);
  EXPECT_NEAR(c2(1, 1).real(), -r, 1e-15);
}

TEST(DctBlock, MatchesEntryFormula) {
  for (int p : {2, 5, 16, 100, 512}) {
    const ComplexMat c = TransformBlock::dct(p).materialize();
    EXPECT_LE(max_abs(c - oracle::dct_matrix(p).cast<Complex>()), 1e-12) << "p=" << p;
  }
  const oracle::RealMat c16 = oracle::dct_matrix(16);
  EXPECT_LE((c16.transpose() * c16 - oracle::RealMat::Identity(16, 16)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(HaarBlock, SingleStep) {
  const ComplexMat h = TransformBlock::haar(2, 1).materialize();
  const double r = std::sqrt(0.5);
  ComplexMat expected(2, 2);
  expected << r, r, r, -r;
  EXPECT_LE(max_abs(h - expected), 1e-15);
}

TEST(HaarBlock, ConstantSignalIsAllScaling) {
  const RealVec ones = RealVec::Ones(4);
  RealVec out(4);
  TransformBlock::haar(4, 2).adjoint_apply<double>(ones, out);
  EXPECT_NEAR(out(0), 2.0, 1e-15);
  EXPECT_NEAR(out.tail(3).norm(), 0.0, 1e-15);
}

TEST(HaarBlock, MatchesBoxFunctionConstruction) {
  for (auto [p, levels] : {std::pair{32, 5}, {64, 3}, {8, 1}, {1024, 5}}) {
    const ComplexMat h = TransformBlock::haar(p, levels).materialize();
    EXPECT_LE(max_abs(h - oracle::haar_matrix(p, levels).cast<Complex>()), 1e-12)
        << "p=" << p << " levels=" << levels;
  }
  const oracle::RealMat h32 = oracle::haar_matrix(32, 5);
  EXPECT_LE((h32.transpose() * h32 - oracle::RealMat::Identity(32, 32)).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(HaarBlock, RejectsIndivisibleLength) {
  EXPECT_THROW(TransformBlock::haar(48, 5), DimensionError);
  EXPECT_THROW(TransformBlock::haar(6, 2), DimensionError);
  EXPECT_THROW(TransformBlock::haar(8, 0), DimensionError);
  EXPECT_NO_THROW(TransformBlock::haar(768, 5));
}

TEST(LearnedBlock, ValidatesOrthonormality) {
  RealMat q = Eigen::HouseholderQR<RealMat>(RealMat::Random(20, 6)).householderQ() *
              RealMat::Identity(20, 6);
  const auto block = TransformBlock::learned(q);
  EXPECT_EQ(block.rows(), 20);
  EXPECT_EQ(block.cols(), 6);
  q(0, 0) += 1e-4;
  EXPECT_THROW(TransformBlock::learned(q), DimensionError);
}

TEST(Concat, ShapeBookkeeping) {
  const Dictionary d({TransformBlock::identity(4), TransformBlock::identity(4)});
  EXPECT_EQ(d.rows(), 4);
  EXPECT_EQ(d.cols(), 8);
  EXPECT_EQ(d.offset(1), 4);

  const Dictionary exp2({TransformBlock::identity(256), TransformBlock::dft(256)});
  EXPECT_EQ(exp2.cols(), 512);
  EXPECT_FALSE(exp2.is_real());

  std::vector<TransformBlock> learned;
  for (int j = 0; j < 10; ++j) {
    learned.push_back(TransformBlock::learned(RealMat::Identity(256, 30)));
  }
  const Dictionary full(learned);
  EXPECT_EQ(full.rows(), 256);
  EXPECT_EQ(full.cols(), 300);
}

TEST(Concat, RejectsMismatchedRows) {
  EXPECT_THROW(Dictionary({TransformBlock::identity(4), TransformBlock::dct(5)}), DimensionError);
  EXPECT_THROW(Dictionary(std::vector<TransformBlock>{}), DimensionError);
}

TEST(DictionaryApply, IdentityPairs) {
  const Dictionary d({TransformBlock::identity(2), TransformBlock::identity(2)});
  EXPECT_EQ(d.apply<double>(RealVec::Zero(4)), RealVec::Zero(2));
  RealVec c(4);
  c << 1, 0, 0, 1;
  EXPECT_EQ(d.apply<double>(c), RealVec::Ones(2));
  EXPECT_EQ(d.adjoint_apply<double>(RealVec::Zero(2)), RealVec::Zero(4));
  RealVec v(2);
  v << 3, 5;
  RealVec expected(4);
  expected << 3, 5, 3, 5;
  EXPECT_EQ(d.adjoint_apply<double>(v), expected);
}

TEST(DictionaryApply, LengthMismatchThrows) {
  const Dictionary d({TransformBlock::identity(4), TransformBlock::dct(4)});
  EXPECT_THROW(d.apply<double>(RealVec::Zero(5)), DimensionError);
  EXPECT_THROW(d.adjoint_apply<double>(RealVec::Zero(8)), DimensionError);
}

TEST(DictionaryApply, MatchesDenseFormulaMatrix) {
  const int p = 64;
  const Dictionary d({TransformBlock::haar(p, 5), TransformBlock::dct(p), TransformBlock::dft(p)});
  ComplexMat dense(p, 3 * p);
  dense << oracle::haar_matrix(p, 5).cast<Complex>(), oracle::dct_matrix(p).cast<Complex>(),
      oracle::dft_matrix(p);
  const ComplexVec c = random_complex(3 * p, 11);
  const ComplexVec v = random_complex(p, 12);
  EXPECT_LE((d.apply<Complex>(c) - dense * c).norm(), 1e-12 * c.norm());
  EXPECT_LE((d.adjoint_apply<Complex>(v) - dense.adjoint() * v).norm(), 1e-12 * v.norm());
}

TEST(DictionaryApply, ComponentAndColumns) {
  const Dictionary d({TransformBlock::identity(8), TransformBlock::dct(8)});
  const RealVec c = random_real(16, 3);
  const RealVec sum = d.component<double>(c, 0) + d.component<double>(c, 1);
  EXPECT_LE((sum - d.apply<double>(c)).norm(), 1e-14);
  const RealMat cols = d.columns<double>({0, 9});
  EXPECT_LE((cols.col(1) - oracle::dct_matrix(8).col(1)).norm(), 1e-14);
}

TEST(Materialize, BinaryRoundTrip) {
  const ComplexMat m = TransformBlock::dft(6).materialize();
  std::stringstream buf;
  write_materialized(buf, m);
  EXPECT_EQ(buf.str().size(), 8u + 16u * 36u);
  EXPECT_EQ(read_materialized(buf), m);
}

// ---- properties ----

TEST(DictionaryProperty, BlocksAreUnitary) {
  for (int p : {1, 2, 7, 32, 160, 1024}) {
    std::vector<TransformBlock> blocks{TransformBlock::identity(p), TransformBlock::dft(p),
                                       TransformBlock::dct(p)};
    if (p % 32 == 0) blocks.push_back(TransformBlock::haar(p, 5));
    for (const auto& b : blocks) {
      if (p <= 160) {
        EXPECT_LE(max_abs(identity_dev(b.materialize())), 1e-10) << to_string(b.kind());
      }
      const ComplexVec v = random_complex(p, static_cast<std::uint64_t>(p));
      ComplexVec coeffs(p), back(p);
      b.adjoint_apply<Complex>(v, coeffs);
      b.apply<Complex>(coeffs, back);
      EXPECT_LE((back - v).norm(), 1e-10 * v.norm()) << to_string(b.kind()) << " p=" << p;
    }
  }
}

TEST(DictionaryProperty, AdjointIdentity) {
  const int p = 256;
  const Dictionary d({TransformBlock::identity(p), TransformBlock::dft(p), TransformBlock::dct(p),
                      TransformBlock::haar(p, 5)});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ComplexVec u = random_complex(d.cols(), 100 + seed);
    const ComplexVec v = random_complex(p, 200 + seed);
    const Complex lhs = d.apply<Complex>(u).dot(v);  // ⟨Bu, v⟩ (conjugate-linear in the first)
    const Complex rhs = u.dot(d.adjoint_apply<Complex>(v));
    EXPECT_LE(std::abs(lhs - rhs), 1e-10 * std::abs(lhs));
  }
}

TEST(DictionaryProperty, RealKindsAreRealAndDftIsConjugateSymmetric) {
  const int p = 32;
  for (const auto& b : {TransformBlock::dct(p), TransformBlock::haar(p, 5)}) {
    EXPECT_TRUE(b.is_real());
    EXPECT_EQ(b.materialize().imag().cwiseAbs().maxCoeff(), 0.0);
  }
  const ComplexMat f = TransformBlock::dft(p).materialize();
  for (int k = 1; k < p; ++k) {
    EXPECT_LE((f.col(k) - f.col(p - k).conjugate()).cwiseAbs().maxCoeff(), 1e-14) << k;
  }
}

TEST(DictionaryProperty, RealAndComplexPathsAgree) {
  const int p = 96;
  const Dictionary d({TransformBlock::haar(p, 5), TransformBlock::dct(p)});
  const RealVec c = random_real(2 * p, 8);
  const ComplexVec cc = c.cast<Complex>();
  EXPECT_LE((d.apply<Complex>(cc).real() - d.apply<double>(c)).norm(), 1e-12);
  EXPECT_LE(d.apply<Complex>(cc).imag().norm(), 1e-12);
}

}  // namespace
