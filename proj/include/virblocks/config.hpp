#pragma once

namespace vb {

// Numeric tolerances used across modules, kept in one place.
struct Tolerances {
  // |den(t0)| below this fraction of the sum of |den coefficient * t0^i| is a pole.
  static constexpr double pole = 1e-12;
  // distance from a nonpositive integer at which Gamma reports a pole.
  static constexpr double gamma_pole = 1e-10;
  // default generic kappa for numerics: sqrt(7).
  static constexpr double default_kappa = 2.6457513110645906;
  // default truncation and tolerance for associativity checks.
  static constexpr int default_trunc = 24;
  static constexpr double assoc_tol = 1e-8;
  static constexpr double descendant_tol = 1e-7;
};

}  // namespace vb
