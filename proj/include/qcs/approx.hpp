#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <unordered_map>
#include <vector>

#include "qcs/circuit.hpp"
#include "qcs/gates.hpp"
#include "qcs/linalg.hpp"

namespace qcs {

/// Result of a discrete-set search: the gate word (letters applied left to
/// right, printed as concatenated gate names) and its distance from the
/// target up to global phase.
struct ApproxResult {
  std::string word;
  double error = 0.0;
  CMatrix matrix;
};

/// Distance min over phases of ||u - e^{i phi} w|| for 2x2 unitaries. With
/// A = w^dag u unitary and eigenvalue angle gap dTheta, the minimum sits at
/// the midpoint of the shorter arc: 2 |sin(dTheta / 4)|. The gap is read off
/// the special-unitary form of A (sin of the half-gap comes straight from
/// the off-diagonal entries), which stays accurate when u and w coincide up
/// to phase; a secular-equation route would lose half the digits there.
inline double phase_invariant_error2(const CMatrix& u, const CMatrix& w) {
  cplx a00 = 0, a01 = 0, a10 = 0, a11 = 0;
  for (int k = 0; k < 2; ++k) {
    a00 += std::conj(w(k, 0)) * u(k, 0);
    a01 += std::conj(w(k, 0)) * u(k, 1);
    a10 += std::conj(w(k, 1)) * u(k, 0);
    a11 += std::conj(w(k, 1)) * u(k, 1);
  }
  const cplx det = a00 * a11 - a01 * a10;
  const cplx ph = std::polar(1.0, -std::arg(det) / 2.0);
  const cplx b00 = ph * a00;
  const cplx b01 = ph * a01;
  const cplx b11 = ph * a11;
  // B = cos(k) I + i sin(k) n.sigma: |sin k| from the traceless part,
  // |cos k| from the trace; eigenvalue angles are +-k, gap 2k.
  const double s = std::sqrt(std::norm(b01) + 0.25 * std::norm(b00 - b11));
  const double c = std::abs((b00 + b11).real()) / 2.0;
  const double half_gap = std::atan2(s, c);  // in [0, pi/2]
  return 2.0 * std::sin(half_gap / 2.0);
}

/// Breadth-first closure of words over a one-qubit gate set (adjoints
/// included), deduplicated modulo global phase. Entries are ordered level by
/// level and, within a level, by the word's letter sequence, so the first
/// entry attaining the minimum error is the shortest, lexicographically
/// smallest word.
class ApproxDictionary {
 public:
  ApproxDictionary(const std::vector<GateSpec>& gate_set, int max_len) {
    if (gate_set.empty())
      throw std::invalid_argument("approx: empty gate set");
    if (max_len < 0 || max_len > 14)
      throw std::invalid_argument("approx: max_len out of range (0..14)");
    build_alphabet(gate_set);
    build(max_len);
  }

  int max_len() const { return max_len_; }
  std::size_t size() const { return entries_.size(); }

  ApproxResult search(const CMatrix& target) const {
    if (target.rows != 2 || target.cols != 2)
      throw std::invalid_argument("approx: target must be 2x2");
    std::size_t best = 0;
    double best_err = std::numeric_limits<double>::infinity();
    CMatrix w(2, 2);
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      std::copy(entries_[i].u.begin(), entries_[i].u.end(), w.a.begin());
      const double err = phase_invariant_error2(target, w);
      if (err < best_err) {
        best_err = err;
        best = i;
      }
    }
    ApproxResult res;
    res.error = best_err;
    res.word = word_of(best);
    res.matrix = CMatrix(2, 2);
    std::copy(entries_[best].u.begin(), entries_[best].u.end(),
              res.matrix.a.begin());
    return res;
  }

 private:
  struct Entry {
    std::array<cplx, 4> u;
    std::int32_t parent = -1;
    std::int16_t letter = -1;
  };

  void build_alphabet(const std::vector<GateSpec>& gate_set) {
    auto have = [&](const CMatrix& m) {
      for (const auto& g : alphabet_)
        if (max_abs_diff(g.matrix, m) <= 1e-12) return true;
      return false;
    };
    for (const auto& g : gate_set) {
      if (g.matrix.rows != 2 || g.matrix.cols != 2)
        throw std::invalid_argument("approx: gate set must be single-qubit");
      if (!have(g.matrix)) alphabet_.push_back(g);
    }
    for (const auto& g : gate_set) {
      const GateSpec ad = adjoint_gate(g);
      if (!have(ad.matrix)) alphabet_.push_back(ad);
    }
    std::sort(alphabet_.begin(), alphabet_.end(),
              [](const GateSpec& x, const GateSpec& y) { return x.name < y.name; });
  }

  static std::string key_of(const std::array<cplx, 4>& u) {
    // Normalize the free phase (largest entry real positive), then snap to a
    // coarse grid; equal-up-to-phase words collapse to one entry.
    std::size_t imax = 0;
    for (std::size_t i = 1; i < 4; ++i)
      if (std::abs(u[i]) > std::abs(u[imax])) imax = i;
    const cplx ph = std::conj(u[imax]) / std::abs(u[imax]);
    std::array<std::int64_t, 8> q{};
    for (std::size_t i = 0; i < 4; ++i) {
      const cplx e = u[i] * ph;
      q[2 * i] = std::llround(e.real() * 1e9);
      q[2 * i + 1] = std::llround(e.imag() * 1e9);
    }
    std::string k(sizeof(q), '\0');
    std::memcpy(k.data(), q.data(), sizeof(q));
    return k;
  }

  void build(int max_len) {
    max_len_ = max_len;
    std::unordered_map<std::string, std::size_t> seen;
    Entry id;
    id.u = {1.0, 0.0, 0.0, 1.0};
    entries_.push_back(id);
    seen.emplace(key_of(id.u), 0);
    std::size_t level_begin = 0, level_end = 1;
    for (int len = 1; len <= max_len; ++len) {
      for (std::size_t p = level_begin; p < level_end; ++p) {
        const std::array<cplx, 4> pu = entries_[p].u;
        for (std::size_t g = 0; g < alphabet_.size(); ++g) {
          const CMatrix& gm = alphabet_[g].matrix;
          Entry e;
          // letter appended to the word acts after the parent word
          e.u[0] = gm(0, 0) * pu[0] + gm(0, 1) * pu[2];
          e.u[1] = gm(0, 0) * pu[1] + gm(0, 1) * pu[3];
          e.u[2] = gm(1, 0) * pu[0] + gm(1, 1) * pu[2];
          e.u[3] = gm(1, 0) * pu[1] + gm(1, 1) * pu[3];
          const std::string k = key_of(e.u);
          if (seen.contains(k)) continue;
          e.parent = static_cast<std::int32_t>(p);
          e.letter = static_cast<std::int16_t>(g);
          seen.emplace(k, entries_.size());
          entries_.push_back(e);
        }
      }
      level_begin = level_end;
      level_end = entries_.size();
      if (level_begin == level_end) break;  // closure reached early
    }
  }

  std::string word_of(std::size_t i) const {
    std::vector<std::int16_t> letters;
    for (std::size_t cur = i; entries_[cur].parent >= 0;
         cur = static_cast<std::size_t>(entries_[cur].parent))
      letters.push_back(entries_[cur].letter);
    std::string w;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
      w += alphabet_[static_cast<std::size_t>(*it)].name;
    return w;
  }

  std::vector<GateSpec> alphabet_;
  std::vector<Entry> entries_;
  int max_len_ = 0;
};

/// One-shot search: best word over the set (with adjoints) up to max_len.
inline ApproxResult approx_search(const CMatrix& target,
                                  const std::vector<GateSpec>& gate_set,
                                  int max_len) {
  return ApproxDictionary(gate_set, max_len).search(target);
}

/// H, S, T: the standard discrete set.
inline std::vector<GateSpec> standard_gate_set() {
  return {hadamard(), phase_s(), t_gate()};
}

}  // namespace qcs
