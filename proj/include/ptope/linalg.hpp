#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ptope/errors.hpp"
#include "ptope/interval.hpp"
#include "ptope/matrix.hpp"

namespace ptope {

// Relative pivot threshold below which a matrix is treated as singular.
inline constexpr double kSingularPivotTolerance = 1e-12;

// Inverse by LU with partial pivoting. Throws SingularMatrixError naming the
// pivot column when |pivot| <= 1e-12 * max|entry|.
inline DenseMatrix invert(const DenseMatrix& m) {
  if (!m.is_square()) throw DimensionError("invert: matrix must be square");
  const std::size_t n = m.rows();
  const double scale = max_abs(m);
  if (n == 0) return m;
  if (!(scale > 0.0) || !std::isfinite(scale)) throw SingularMatrixError(0);

  DenseMatrix lu = m;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::fabs(lu(i, k)) > std::fabs(lu(p, k))) p = i;
    }
    if (!(std::fabs(lu(p, k)) > kSingularPivotTolerance * scale)) throw SingularMatrixError(k);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(p, j), lu(k, j));
      std::swap(perm[p], perm[k]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      lu(i, k) /= lu(k, k);
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= lu(i, k) * lu(k, j);
    }
  }

  DenseMatrix inv(n, n);
  std::vector<double> col(n);
  for (std::size_t c = 0; c < n; ++c) {
    // Solve L U x = P e_c.
    for (std::size_t i = 0; i < n; ++i) col[i] = perm[i] == c ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) col[i] -= lu(i, j) * col[j];
    for (std::size_t ii = n; ii-- > 0;) {
      for (std::size_t j = ii + 1; j < n; ++j) col[ii] -= lu(ii, j) * col[j];
      col[ii] /= lu(ii, ii);
    }
    for (std::size_t i = 0; i < n; ++i) inv(i, c) = col[i];
  }
  return inv;
}

// Interval matrix guaranteed to contain the exact inverse of m. With R the
// floating-point inverse and E = I - m R enclosed in interval arithmetic,
// |inv(m) - R|_ij <= ||R||_inf ||E||_inf / (1 - ||E||_inf).
inline IntervalMatrix inverse_enclosure(const DenseMatrix& m) {
  const DenseMatrix r = invert(m);
  const std::size_t n = m.rows();
  const IntervalMatrix residual = to_intervals(DenseMatrix::identity(n)) - to_intervals(m) * to_intervals(r);

  Interval e_norm(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Interval row_sum(0.0);
    for (std::size_t j = 0; j < n; ++j) row_sum += Interval(residual(i, j).mag());
    e_norm = Interval(std::max(e_norm.hi(), row_sum.hi()));
  }
  if (!(e_norm.hi() < 1.0)) throw SingularMatrixError(n ? n - 1 : 0);

  Interval r_norm(0.0);
  for (std::size_t i = 0; i < n; ++i) {
    Interval row_sum(0.0);
    for (std::size_t j = 0; j < n; ++j) row_sum += Interval(std::fabs(r(i, j)));
    r_norm = Interval(std::max(r_norm.hi(), row_sum.hi()));
  }

  double delta = 0.0;
  if (e_norm.hi() > 0.0) {
    const Interval bound = r_norm * e_norm / (Interval(1.0) - e_norm);
    delta = bound.hi();
  }

  IntervalMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = Interval(r(i, j)) + Interval::symmetric(delta);
  return out;
}

struct SymmetricEigen {
  std::vector<double> values;  // descending
  DenseMatrix vectors;         // column i pairs with values[i]
};

inline constexpr int kJacobiMaxSweeps = 100;

// Cyclic Jacobi eigensolver. The input is symmetrized as (M + M^T)/2 first.
inline SymmetricEigen eig_sym(const DenseMatrix& m) {
  if (!m.is_square()) throw DimensionError("eig_sym: matrix must be square");
  for (double x : m.data())
    if (!std::isfinite(x)) throw ConvergenceError("eig_sym: non-finite entry");
  const std::size_t n = m.rows();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  DenseMatrix v = DenseMatrix::identity(n);

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return s;
  };
  double total = 0.0;
  for (double x : a.data()) total += x * x;

  bool converged = false;
  for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
    const double off = off_diagonal();
    if (off == 0.0 || off <= 1e-34 * total) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    const double off = off_diagonal();
    if (!(off == 0.0 || off <= 1e-34 * total)) throw ConvergenceError("eig_sym: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymmetricEigen out{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = a(idx[c], idx[c]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, c) = v(k, idx[c]);
  }
  return out;
}

inline double lambda_max(const DenseMatrix& m) {
  if (m.rows() == 0) return 0.0;
  return eig_sym(m).values.front();
}

// Symmetric square root of a PSD matrix. Eigenvalues in [-1e-10, 0) are
// clamped to zero; anything more negative is rejected.
inline DenseMatrix sqrt_sym_psd(const DenseMatrix& m) {
  const auto eig = eig_sym(m);
  const std::size_t n = m.rows();
  const double tol = 1e-10 * std::max(1.0, max_abs(m));
  std::vector<double> roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (eig.values[i] < -tol) throw Error("sqrt_sym_psd: matrix has a negative eigenvalue");
    roots[i] = std::sqrt(std::max(0.0, eig.values[i]));
  }
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += eig.vectors(i, k) * roots[k] * eig.vectors(j, k);
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

}  // namespace ptope
