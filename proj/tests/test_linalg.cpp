#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ptope/linalg.hpp"

using namespace ptope;

namespace {

double residual_vs_identity(const DenseMatrix& a, const DenseMatrix& b) {
  return oracle::max_abs_diff(oracle::matmul(a, b), DenseMatrix::identity(a.rows()));
}

}  // namespace

TEST(Invert, Identity) { EXPECT_EQ(invert(DenseMatrix::identity(4)), DenseMatrix::identity(4)); }

TEST(Invert, Diagonal) { EXPECT_EQ(invert(DenseMatrix::diagonal({2, 4})), DenseMatrix::diagonal({0.5, 0.25})); }

TEST(Invert, SingularNamesPivot) {
  try {
    (void)invert(DenseMatrix{{1, 2, 3}, {2, 4, 6}, {0, 0, 1}});
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_EQ(e.pivot(), 1u);
    EXPECT_NE(std::string(e.what()).find("pivot 1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(invert(DenseMatrix(2, 2)), SingularMatrixError);
  EXPECT_THROW(invert(DenseMatrix(2, 3)), DimensionError);
}

// Residual oracle on 100 random well-conditioned 4x4 matrices.
TEST(Invert, ResidualOnRandomMatrices) {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 100; ++t) {
    const DenseMatrix a = oracle::random_well_conditioned(4, rng);
    const DenseMatrix inv = invert(a);
    EXPECT_LE(oracle::inf_norm(oracle::matmul(a, inv) - DenseMatrix::identity(4)), 1e-8);
    EXPECT_LE(oracle::max_abs_diff(invert(inv), a), 1e-7);
  }
}

TEST(InverseEnclosure, ContainsExactInverse) {
  // exact inverse of [[2,1],[1,1]] is [[1,-1],[-1,2]]; of [[3,0],[0,7]] is diag(1/3, 1/7)
  const auto enc = inverse_enclosure(DenseMatrix{{2, 1}, {1, 1}});
  EXPECT_TRUE(enc(0, 0).contains(1.0));
  EXPECT_TRUE(enc(0, 1).contains(-1.0));
  EXPECT_TRUE(enc(1, 1).contains(2.0));
  const auto d = inverse_enclosure(DenseMatrix::diagonal({3, 7}));
  EXPECT_TRUE(oracle::contains_exact(d(0, 0), mpq_class(1, 3)));
  EXPECT_TRUE(oracle::contains_exact(d(1, 1), mpq_class(1, 7)));
  EXPECT_TRUE(oracle::contains_exact(d(0, 1), mpq_class(0)));
  EXPECT_LT(d(0, 0).width(), 1e-15);
}

// Exact rational check: the enclosure times the matrix must contain I.
TEST(InverseEnclosure, RandomMatricesExactCheck) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 50; ++t) {
    const DenseMatrix a = oracle::random_well_conditioned(3, rng);
    const auto enc = inverse_enclosure(a);
    // Exact inverse by Gaussian elimination over the rationals.
    std::vector<std::vector<mpq_class>> m(3, std::vector<mpq_class>(6));
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] = a(i, j);
      m[i][3 + i] = 1;
    }
    for (int k = 0; k < 3; ++k) {
      int p = k;
      while (m[p][k] == 0) ++p;
      std::swap(m[p], m[k]);
      for (int i = 0; i < 3; ++i) {
        if (i == k) continue;
        const mpq_class f = m[i][k] / m[k][k];
        for (int j = 0; j < 6; ++j) m[i][j] -= f * m[k][j];
      }
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) ASSERT_TRUE(oracle::contains_exact(enc(i, j), m[i][3 + j] / m[i][i]));
  }
}

TEST(EigSym, Diagonal) {
  const auto e = eig_sym(DenseMatrix::diagonal({1, 2}));
  EXPECT_EQ(e.values, (std::vector<double>{2, 1}));
}

TEST(EigSym, Zero) {
  const auto e = eig_sym(DenseMatrix(3, 3));
  for (double v : e.values) EXPECT_EQ(v, 0.0);
}

TEST(EigSym, SymmetrizesInput) {
  // (M + M^T)/2 = [[0, 1], [1, 0]] -> eigenvalues 1, -1
  const auto e = eig_sym(DenseMatrix{{0, 2}, {0, 0}});
  EXPECT_NEAR(e.values[0], 1.0, 1e-15);
  EXPECT_NEAR(e.values[1], -1.0, 1e-15);
}

// Residual and orthogonality on 100 random symmetric 4x4 matrices.
TEST(EigSym, ResidualAndOrthogonality) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const DenseMatrix m = oracle::random_symmetric(4, rng);
    const auto e = eig_sym(m);
    const double norm = oracle::inf_norm(m);
    for (std::size_t i = 0; i + 1 < 4; ++i) EXPECT_GE(e.values[i], e.values[i + 1]);
    for (std::size_t k = 0; k < 4; ++k) {
      std::vector<double> v(4);
      for (std::size_t i = 0; i < 4; ++i) v[i] = e.vectors(i, k);
      const auto mv = oracle::matvec(m, v);
      double r = 0.0;
      for (std::size_t i = 0; i < 4; ++i) r += (mv[i] - e.values[k] * v[i]) * (mv[i] - e.values[k] * v[i]);
      EXPECT_LE(std::sqrt(r), 1e-8 * norm);
    }
    EXPECT_LE(residual_vs_identity(transpose(e.vectors), e.vectors), 1e-8);
  }
}

TEST(EigSym, ShiftInvariance) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> shift(-5.0, 5.0);
  for (int t = 0; t < 100; ++t) {
    const DenseMatrix a = oracle::random_symmetric(4, rng);
    const double c = shift(rng);
    DenseMatrix b = a;
    for (std::size_t i = 0; i < 4; ++i) b(i, i) += c;
    EXPECT_NEAR(lambda_max(b), lambda_max(a) + c, 1e-9);
  }
}

TEST(EigSym, NonConvergenceOnNonFinite) {
  EXPECT_THROW(eig_sym(DenseMatrix{{1, NAN}, {NAN, 1}}), Error);
}

TEST(SqrtSymPsd, Identity) { EXPECT_EQ(sqrt_sym_psd(DenseMatrix::identity(3)), DenseMatrix::identity(3)); }

TEST(SqrtSymPsd, Diagonal) {
  EXPECT_LT(oracle::max_abs_diff(sqrt_sym_psd(DenseMatrix::diagonal({4, 9})), DenseMatrix::diagonal({2, 3})), 1e-15);
}

TEST(SqrtSymPsd, RandomGramMatrices) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const DenseMatrix a = oracle::random_matrix(4, 4, rng);
    const DenseMatrix m = oracle::matmul(transpose(a), a);
    const DenseMatrix r = sqrt_sym_psd(m);
    EXPECT_EQ(r, transpose(r));
    EXPECT_LE(oracle::inf_norm(oracle::matmul(r, r) - m), 1e-8 * oracle::inf_norm(m));
  }
}

TEST(SqrtSymPsd, ClampsTinyNegativeRejectsLarge) {
  const DenseMatrix tiny = DenseMatrix::diagonal({1.0, -1e-12});
  EXPECT_EQ(sqrt_sym_psd(tiny)(1, 1), 0.0);
  EXPECT_THROW(sqrt_sym_psd(DenseMatrix::diagonal({1.0, -1e-3})), Error);
}
