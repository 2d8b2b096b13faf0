#pragma once

#include "qcs/linalg.hpp"
#include "qcs/qstate.hpp"
#include "qcs/rng.hpp"

namespace qcs {

/// Unitary drawn by orthonormalizing a complex Gaussian matrix; column
/// distribution is rotation-invariant, which is all the tests need.
inline CMatrix random_unitary(std::size_t n, Rng& rng) {
  std::vector<CVector> cols(n, CVector(n));
  for (auto& c : cols)
    for (auto& e : c) e = cplx(rng.normal(), rng.normal());
  cols = gram_schmidt(cols, 1e-12);
  CMatrix u(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) u(i, j) = cols[j][i];
  return u;
}

inline QuantumRegister random_state(int n_qubits, Rng& rng) {
  QuantumRegister q;
  q.n_qubits = n_qubits;
  q.amplitudes.resize(std::size_t{1} << n_qubits);
  for (auto& a : q.amplitudes) a = cplx(rng.normal(), rng.normal());
  const double n = norm(q.amplitudes);
  for (auto& a : q.amplitudes) a /= n;
  return q;
}

inline CVector random_qubit(Rng& rng) {
  CVector v = {cplx(rng.normal(), rng.normal()), cplx(rng.normal(), rng.normal())};
  const double n = norm(v);
  return {v[0] / n, v[1] / n};
}

}  // namespace qcs
