#pragma once

#include <sstream>
#include <string>

#include "qcs/error.hpp"
#include "qcs/linalg.hpp"
#include "qcs/rng.hpp"

namespace qcs {

/// Tool-level knobs loaded from a `key=value` file: the RNG algorithm and
/// the numerical tolerances.
struct RunConfig {
  std::string rng_algorithm = "mt19937_64";
  double eps_unitary = kEpsUnitary;
  double eps_rank = kEpsRank;

  Rng make_rng(std::uint64_t seed) const {
    return Rng::named(rng_algorithm, seed);
  }
};

inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = (hash == std::string::npos) ? raw : raw.substr(0, hash);
    std::string stripped;
    for (char ch : line)
      if (!std::isspace(static_cast<unsigned char>(ch))) stripped += ch;
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ParseError(line_no, "expected key=value");
    const std::string key = stripped.substr(0, eq);
    const std::string value = stripped.substr(eq + 1);
    if (key == "rng") {
      cfg.rng_algorithm = value;
    } else if (key == "eps_unitary" || key == "eps_rank") {
      double v;
      try {
        v = std::stod(value);
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad number: " + value);
      }
      (key == "eps_unitary" ? cfg.eps_unitary : cfg.eps_rank) = v;
    } else {
      throw ParseError(line_no, "unknown key: " + key);
    }
  }
  return cfg;
}

}  // namespace qcs
