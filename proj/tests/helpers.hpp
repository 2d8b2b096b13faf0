#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "qcs/qcs.hpp"

namespace qcs_test {

inline double vec_diff(const qcs::CVector& a, const qcs::CVector& b) {
  REQUIRE(a.size() == b.size());
  double mx = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    mx = std::max(mx, std::abs(a[i] - b[i]));
  return mx;
}

inline qcs::CMatrix mat2(qcs::cplx a, qcs::cplx b, qcs::cplx c, qcs::cplx d) {
  return qcs::CMatrix::from_rows(2, 2, {a, b, c, d});
}

/// Distance between states ignoring a global phase.
inline double ray_distance(const qcs::CVector& a, const qcs::CVector& b) {
  const qcs::cplx ip = qcs::inner(a, b);
  const double na = qcs::norm(a), nb = qcs::norm(b);
  if (std::abs(ip) == 0.0) return std::max(na, nb);
  const qcs::cplx phase = ip / std::abs(ip);
  return vec_diff(qcs::scaled(b, std::conj(phase)), a);
}

}  // namespace qcs_test
