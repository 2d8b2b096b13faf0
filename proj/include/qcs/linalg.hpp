#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcs {

using cplx = std::complex<double>;

/// Column vector of complex amplitudes. Entry i is the coefficient of the
/// i-th basis direction.
using CVector = std::vector<cplx>;

constexpr double kEpsUnitary = 1e-10;
constexpr double kEpsRank = 1e-8;

/// Dense row-major complex matrix.
struct CMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> a;

  CMatrix() = default;
  CMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix from_rows(std::size_t r, std::size_t c,
                           std::initializer_list<cplx> entries) {
    if (entries.size() != r * c)
      throw std::invalid_argument("CMatrix::from_rows: entry count mismatch");
    CMatrix m(r, c);
    std::copy(entries.begin(), entries.end(), m.a.begin());
    return m;
  }

  cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }

  bool square() const { return rows == cols; }
};

inline CMatrix operator*(const CMatrix& x, const CMatrix& y) {
  if (x.cols != y.rows)
    throw std::invalid_argument("matrix product: inner dimension mismatch");
  CMatrix z(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const cplx xik = x(i, k);
      if (xik == cplx{}) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += xik * y(k, j);
    }
  return z;
}

inline CVector operator*(const CMatrix& m, const CVector& v) {
  if (m.cols != v.size())
    throw std::invalid_argument("matrix-vector product: dimension mismatch");
  CVector w(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    w[i] = s;
  }
  return w;
}

inline CMatrix operator*(cplx s, const CMatrix& m) {
  CMatrix z = m;
  for (auto& e : z.a) e *= s;
  return z;
}

inline CMatrix operator+(const CMatrix& x, const CMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("matrix sum: shape mismatch");
  CMatrix z = x;
  for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] += y.a[i];
  return z;
}

inline CMatrix operator-(const CMatrix& x, const CMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("matrix difference: shape mismatch");
  CMatrix z = x;
  for (std::size_t i = 0; i < z.a.size(); ++i) z.a[i] -= y.a[i];
  return z;
}

/// Conjugate transpose.
inline CMatrix adjoint(const CMatrix& m) {
  CMatrix t(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = std::conj(m(i, j));
  return t;
}

/// Entrywise max-abs norm; the comparison norm used by all tolerance checks.
inline double max_abs(const CMatrix& m) {
  double mx = 0.0;
  for (const auto& e : m.a) mx = std::max(mx, std::abs(e));
  return mx;
}

inline double max_abs_diff(const CMatrix& x, const CMatrix& y) {
  return max_abs(x - y);
}

inline bool is_unitary(const CMatrix& m, double eps = kEpsUnitary) {
  if (!m.square()) return false;
  return max_abs_diff(adjoint(m) * m, CMatrix::identity(m.rows)) <= eps;
}

inline bool is_hermitean(const CMatrix& m, double eps = kEpsUnitary) {
  if (!m.square()) return false;
  return max_abs_diff(m, adjoint(m)) <= eps;
}

inline bool is_normal(const CMatrix& m, double eps = kEpsUnitary) {
  if (!m.square()) return false;
  CMatrix ad = adjoint(m);
  return max_abs_diff(ad * m, m * ad) <= eps;
}

/// <a, b> = sum_i conj(a_i) b_i; conjugate-linear in the first slot.
inline cplx inner(const CVector& a, const CVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("inner: dimension mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double norm(const CVector& v) { return std::sqrt(std::real(inner(v, v))); }

inline CVector scaled(const CVector& v, cplx s) {
  CVector w = v;
  for (auto& e : w) e *= s;
  return w;
}

inline CVector vsub(const CVector& x, const CVector& y) {
  CVector z = x;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] -= y[i];
  return z;
}

inline CVector vadd(const CVector& x, const CVector& y) {
  CVector z = x;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] += y[i];
  return z;
}

/// Kronecker product of vectors; the left factor varies slowest:
/// (a ox b)[i*dim(b)+j] = a_i b_j.
inline CVector tensor_vec(const CVector& a, const CVector& b) {
  CVector t(a.size() * b.size());
  std::size_t k = 0;
  for (const auto& ai : a)
    for (const auto& bj : b) t[k++] = ai * bj;
  return t;
}

/// Kronecker product of matrices in block form (a_11 B, a_12 B; ...).
inline CMatrix tensor_mat(const CMatrix& x, const CMatrix& y) {
  CMatrix t(x.rows * y.rows, x.cols * y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) {
      const cplx xij = x(i, j);
      if (xij == cplx{}) continue;
      for (std::size_t k = 0; k < y.rows; ++k)
        for (std::size_t l = 0; l < y.cols; ++l)
          t(i * y.rows + k, j * y.cols + l) = xij * y(k, l);
    }
  return t;
}

/// |x><y|, i.e. M_ij = x_i conj(y_j).
inline CMatrix outer(const CVector& x, const CVector& y) {
  CMatrix m(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      m(i, j) = x[i] * std::conj(y[j]);
  return m;
}

/// Orthonormalizes a linearly independent family in order, preserving the
/// span. Throws when a residual collapses below eps_rank (dependent input).
inline std::vector<CVector> gram_schmidt(const std::vector<CVector>& vs,
                                         double eps_rank = kEpsRank) {
  std::vector<CVector> es;
  es.reserve(vs.size());
  for (const auto& v : vs) {
    CVector r = v;
    for (const auto& e : es) r = vsub(r, scaled(e, inner(e, v)));
    const double n = norm(r);
    if (n < eps_rank)
      throw std::invalid_argument("gram_schmidt: rank-deficient input");
    es.push_back(scaled(r, 1.0 / n));
  }
  return es;
}

/// Projector onto the span of a subset of computational basis directions.
struct Projector {
  CMatrix matrix;
  std::vector<std::size_t> subset;
};

inline Projector projector_onto(std::size_t dim,
                                std::vector<std::size_t> subset) {
  Projector p;
  p.matrix = CMatrix(dim, dim);
  for (std::size_t i : subset) {
    if (i >= dim) throw std::invalid_argument("projector_onto: index out of range");
    p.matrix(i, i) = 1.0;
  }
  p.subset = std::move(subset);
  return p;
}

struct Eig2 {
  cplx values[2];
  CVector vectors[2];
};

namespace detail {

// Fix the free phase of a unit vector: largest-modulus entry made real
// positive. Keeps eigenvector output deterministic.
inline CVector canonical_phase(CVector v) {
  std::size_t imax = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
  const double m = std::abs(v[imax]);
  if (m > 0.0) {
    const cplx ph = std::conj(v[imax]) / m;
    for (auto& e : v) e *= ph;
  }
  return v;
}

}  // namespace detail

/// Eigendecomposition of a 2x2 normal matrix via its secular equation
/// det(A - lambda I) = 0. Eigenvectors come out orthonormal; a (near-)
/// degenerate spectrum returns the canonical basis.
inline Eig2 eig2_normal(const CMatrix& m, double eps = kEpsUnitary) {
  if (m.rows != 2 || m.cols != 2)
    throw std::invalid_argument("eig2_normal: matrix must be 2x2");
  if (!is_normal(m, eps))
    throw std::invalid_argument("eig2_normal: matrix not normal within eps");

  const cplx tr = m(0, 0) + m(1, 1);
  const cplx det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  Eig2 out;
  out.values[0] = (tr + disc) / 2.0;
  out.values[1] = (tr - disc) / 2.0;

  const double scale = std::max(1.0, max_abs(m));
  if (std::abs(out.values[0] - out.values[1]) <= 10.0 * eps * scale) {
    out.vectors[0] = {1.0, 0.0};
    out.vectors[1] = {0.0, 1.0};
    return out;
  }

  // Null-space direction of (A - lambda I); the candidate rows are
  // proportional, so take the larger for stability.
  const cplx l = out.values[0];
  CVector c1 = {m(0, 1), l - m(0, 0)};
  CVector c2 = {l - m(1, 1), m(1, 0)};
  CVector v = (norm(c1) >= norm(c2)) ? c1 : c2;
  v = scaled(v, 1.0 / norm(v));
  v = detail::canonical_phase(std::move(v));
  out.vectors[0] = v;
  // Normal with distinct eigenvalues: the second eigenvector is the
  // orthogonal complement in C^2.
  out.vectors[1] =
      detail::canonical_phase({-std::conj(v[1]), std::conj(v[0])});
  return out;
}

namespace detail {

// Principal square root, with the branch cut argument in (-pi, pi].
inline cplx principal_sqrt(cplx z) {
  const double r = std::abs(z);
  const double th = std::atan2(z.imag(), z.real());
  return std::polar(std::sqrt(r), th / 2.0);
}

}  // namespace detail

/// V with V*V = U for 2x2 unitary U, built from the spectral decomposition
/// with principal-branch roots of the eigenvalues.
inline CMatrix sqrt_unitary2(const CMatrix& u, double eps = kEpsUnitary) {
  if (u.rows != 2 || u.cols != 2)
    throw std::invalid_argument("sqrt_unitary2: matrix must be 2x2");
  if (!is_unitary(u, eps))
    throw std::invalid_argument("sqrt_unitary2: matrix not unitary within eps");
  const Eig2 e = eig2_normal(u, eps);
  CMatrix v(2, 2);
  for (int k = 0; k < 2; ++k) {
    const cplx s = detail::principal_sqrt(e.values[k]);
    const CMatrix p = outer(e.vectors[k], e.vectors[k]);
    for (std::size_t i = 0; i < 4; ++i) v.a[i] += s * p.a[i];
  }
  return v;
}

namespace detail {

// Eigenvalues of an NxN hermitean matrix by cyclic Jacobi sweeps. Internal
// helper for spectral-norm and positivity checks; not part of the public
// decomposition surface, which stays 2x2.
inline std::vector<double> hermitian_eigenvalues(CMatrix m,
                                                 int max_sweeps = 60) {
  if (!m.square())
    throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
  const std::size_t n = m.rows;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(m(p, q));
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = m(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        // Unitary 2x2 rotation diag(1, e^{i phi}) * Givens that zeroes (p,q).
        const double absapq = std::abs(apq);
        const cplx phase = apq / absapq;
        const double tau = (aqq - app) / (2.0 * absapq);
        const double t = (tau >= 0.0)
                             ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                             : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx sp = s * phase;
        for (std::size_t k = 0; k < n; ++k) {
          const cplx mkp = m(k, p), mkq = m(k, q);
          m(k, p) = c * mkp - std::conj(sp) * mkq;
          m(k, q) = sp * mkp + c * mkq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx mpk = m(p, k), mqk = m(q, k);
          m(p, k) = c * mpk - sp * mqk;
          m(q, k) = std::conj(sp) * mpk + c * mqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace detail

/// Largest singular value of m.
inline double spectral_norm(const CMatrix& m) {
  const CMatrix g = adjoint(m) * m;
  const auto ev = detail::hermitian_eigenvalues(g);
  const double top = ev.empty() ? 0.0 : std::max(0.0, ev.back());
  return std::sqrt(top);
}

/// Hermitean with spectrum bounded below by -eps.
inline bool is_positive_semidefinite(const CMatrix& m,
                                     double eps = kEpsUnitary) {
  if (!is_hermitean(m, eps)) return false;
  const auto ev = detail::hermitian_eigenvalues(m);
  return ev.empty() || ev.front() >= -eps;
}

}  // namespace qcs
