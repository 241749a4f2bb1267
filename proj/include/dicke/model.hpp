#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dicke/errors.hpp"

namespace dicke {

// Parameters of the k-mode Dicke Hamiltonian
//   H = wA Jz + sum_i W_i a_i^+ a_i - (1/sqrt N) sum_i g_i (J- + J+)(a_i + a_i^+)
// with hbar = 1 and all energies in one arbitrary unit.
struct ModelParams {
  int atoms = 18;                        // N
  int two_j = 18;                        // cooperation number 2j
  double omega_a = 2.0;                  // atomic level splitting
  std::vector<double> mode_freq{2.0, 2.0};  // Omega_i
  std::vector<double> coupling{0.5, 1.0};   // gamma_i

  double j() const { return 0.5 * two_j; }
  std::size_t modes() const { return mode_freq.size(); }

  // Throws InvalidParams when an invariant of the parameter set is broken.
  void validate() const {
    if (atoms < 1) throw InvalidParams("N must be a positive integer");
    if (two_j < 0) throw InvalidParams("j must be non-negative");
    if (two_j > atoms) throw InvalidParams("j must not exceed N/2");
    if ((atoms - two_j) % 2 != 0)
      throw InvalidParams("j must be integer for even N and half-odd for odd N");
    if (mode_freq.empty()) throw InvalidParams("at least one field mode is required");
    if (coupling.size() != mode_freq.size())
      throw InvalidParams("gamma and Omega must have one entry per mode");
    if (!(omega_a >= 0.0) || !std::isfinite(omega_a))
      throw InvalidParams("omega_A must be finite and non-negative");
    for (double w : mode_freq)
      if (!(w > 0.0) || !std::isfinite(w)) throw InvalidParams("mode frequencies must be positive");
    for (double g : coupling)
      if (!(g >= 0.0) || !std::isfinite(g)) throw InvalidParams("couplings must be non-negative");
  }
};

struct DerivedScalars {
  double varsigma = 0.0;  // sum_i gamma_i^2 / Omega_i
  double sigma = 0.0;     // sum_i gamma_i^2 / Omega_i^2
  std::optional<double> delta;    // N omega_A / (8 j varsigma)
  std::optional<double> epsilon;  // exp(-j omega_A sigma / varsigma)

  double require_delta() const {
    if (!delta) throw DegenerateCoupling("delta is undefined for vanishing coupling or j = 0");
    return *delta;
  }
};

inline double mode_varsigma(const ModelParams& p, std::size_t i) {
  return p.coupling[i] * p.coupling[i] / p.mode_freq[i];
}

inline double mode_sigma(const ModelParams& p, std::size_t i) {
  return p.coupling[i] * p.coupling[i] / (p.mode_freq[i] * p.mode_freq[i]);
}

inline DerivedScalars derived_scalars(const ModelParams& p) {
  DerivedScalars d;
  for (std::size_t i = 0; i < p.modes(); ++i) {
    d.varsigma += mode_varsigma(p, i);
    d.sigma += mode_sigma(p, i);
  }
  if (d.varsigma > 0.0 && p.two_j > 0) {
    d.delta = p.atoms * p.omega_a / (4.0 * p.two_j * d.varsigma);
    d.epsilon = std::exp(-p.j() * p.omega_a * d.sigma / d.varsigma);
  }
  return d;
}

// delta with the failure modes of the closed-form expressions.
inline double delta_of(const ModelParams& p) {
  if (p.two_j == 0) throw ZeroCooperation("j = 0 leaves delta undefined");
  return derived_scalars(p).require_delta();
}

}  // namespace dicke
