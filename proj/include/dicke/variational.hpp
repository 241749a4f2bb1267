#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/hilbert.hpp"
#include "dicke/model.hpp"
#include "dicke/nelder_mead.hpp"

namespace dicke {

// Labels of the trial state |alpha_1..alpha_k> (x) |xi>_j with
// alpha_i = q_i + i p_i and xi = tan(theta/2) e^{i phi}.
struct VariationalPoint {
  std::vector<double> q;
  std::vector<double> p;
  double theta = 0.0;
  double phi = 0.0;

  static VariationalPoint zero(std::size_t modes) {
    VariationalPoint pt;
    pt.q.assign(modes, 0.0);
    pt.p.assign(modes, 0.0);
    return pt;
  }

  std::size_t modes() const { return q.size(); }

  double alpha_norm2() const {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * q[i] + p[i] * p[i];
    return s;
  }

  // Maps (theta, phi) into [0, pi] x [0, 2 pi) using (theta, phi) ~ (2 pi - theta, phi + pi).
  VariationalPoint normalized() const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    VariationalPoint out = *this;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    double f = phi;
    if (t > std::numbers::pi) {
      t = two_pi - t;
      f += std::numbers::pi;
    }
    f = std::fmod(f, two_pi);
    if (f < 0.0) f += two_pi;
    if (f >= two_pi) f = 0.0;
    out.theta = t;
    out.phi = f;
    return out;
  }

  // Flat coordinates (q_1..q_k, p_1..p_k, theta, phi) for the simplex search.
  std::vector<double> pack() const {
    std::vector<double> x(q);
    x.insert(x.end(), p.begin(), p.end());
    x.push_back(theta);
    x.push_back(phi);
    return x;
  }

  static VariationalPoint unpack(std::span<const double> x, std::size_t modes) {
    VariationalPoint pt;
    pt.q.assign(x.begin(), x.begin() + modes);
    pt.p.assign(x.begin() + modes, x.begin() + 2 * modes);
    pt.theta = x[2 * modes];
    pt.phi = x[2 * modes + 1];
    return pt;
  }
};

// Energy and observables of one approximation at one parameter point.
struct Observables {
  double energy = 0.0;
  double jz = 0.0;
  std::vector<double> nu;
};

struct SasFactors {
  double big_e = 1.0;      // exp(-2 sum |alpha_i|^2)
  double overlap = 1.0;    // <alpha,xi | -alpha,-xi> = E cos^{2j} theta
  double norm_plus = 0.5;  // (2 + 2 overlap)^{-1/2}
};

namespace detail {

inline void check_point(const ModelParams& p, const VariationalPoint& pt) {
  if (pt.q.size() != p.modes() || pt.p.size() != p.modes())
    throw InvalidParams("variational point has the wrong number of modes");
}

// Normal branch applies for delta >= 1 and for vanishing coupling (delta -> infinity).
inline bool normal_phase(const ModelParams& p, double& delta) {
  if (p.two_j == 0) throw ZeroCooperation("closed forms need j > 0");
  const DerivedScalars d = derived_scalars(p);
  if (d.varsigma == 0.0) return true;
  delta = *d.delta;
  return delta >= 1.0;
}

}  // namespace detail

inline double cs_energy(const ModelParams& p, const VariationalPoint& pt) {
  detail::check_point(p, pt);
  const double j = p.j();
  double field = 0.0, drive = 0.0;
  for (std::size_t i = 0; i < p.modes(); ++i) {
    field += p.mode_freq[i] * (pt.q[i] * pt.q[i] + pt.p[i] * pt.p[i]);
    drive += p.coupling[i] * pt.q[i];
  }
  return -j * p.omega_a * std::cos(pt.theta) + field -
         4.0 * j / std::sqrt(static_cast<double>(p.atoms)) * std::sin(pt.theta) * std::cos(pt.phi) * drive;
}

// Analytic gradient of cs_energy in pack() order (q, p, theta, phi).
inline std::vector<double> cs_energy_gradient(const ModelParams& p, const VariationalPoint& pt) {
  detail::check_point(p, pt);
  const std::size_t k = p.modes();
  const double j = p.j();
  const double g = 4.0 * j / std::sqrt(static_cast<double>(p.atoms));
  double drive = 0.0;
  for (std::size_t i = 0; i < k; ++i) drive += p.coupling[i] * pt.q[i];
  std::vector<double> grad(2 * k + 2);
  for (std::size_t i = 0; i < k; ++i) {
    grad[i] = 2.0 * p.mode_freq[i] * pt.q[i] - g * std::sin(pt.theta) * std::cos(pt.phi) * p.coupling[i];
    grad[k + i] = 2.0 * p.mode_freq[i] * pt.p[i];
  }
  grad[2 * k] = j * p.omega_a * std::sin(pt.theta) - g * std::cos(pt.theta) * std::cos(pt.phi) * drive;
  grad[2 * k + 1] = g * std::sin(pt.theta) * std::sin(pt.phi) * drive;
  return grad;
}

// Minimizer of the CS surface. The phi_c = pi twin is the reflection of this
// one; we report phi_c = 0 with q_ic >= 0.
inline VariationalPoint cs_critical_point(const ModelParams& p) {
  p.validate();
  VariationalPoint pt = VariationalPoint::zero(p.modes());
  const DerivedScalars d = derived_scalars(p);
  if (p.two_j == 0 || d.varsigma == 0.0 || *d.delta >= 1.0) return pt;
  const double c = *d.delta;
  const double s = std::sqrt(1.0 - c * c);
  pt.theta = std::acos(c);
  for (std::size_t i = 0; i < p.modes(); ++i)
    pt.q[i] = 2.0 * p.j() * p.coupling[i] / (p.mode_freq[i] * std::sqrt(static_cast<double>(p.atoms))) * s;
  return pt;
}

// Closed forms written without 1/delta so that delta = 0 (omega_A = 0) stays finite:
// j omega_A / delta = 8 j^2 varsigma / N.
inline Observables cs_observables(const ModelParams& p) {
  p.validate();
  Observables o;
  o.nu.assign(p.modes(), 0.0);
  const double j = p.j();
  double delta = 0.0;
  if (detail::normal_phase(p, delta)) {
    o.energy = -j * p.omega_a;
    o.jz = -j;
    return o;
  }
  const double n = static_cast<double>(p.atoms);
  const double varsigma = derived_scalars(p).varsigma;
  o.energy = -(4.0 * j * j * varsigma / n) * (1.0 + delta * delta);
  o.jz = -j * delta;
  for (std::size_t i = 0; i < p.modes(); ++i)
    o.nu[i] = mode_sigma(p, i) * (4.0 * j * j / n) * (1.0 - delta * delta);
  return o;
}

inline SasFactors sas_factors(const ModelParams& p, const VariationalPoint& pt) {
  SasFactors f;
  f.big_e = std::exp(-2.0 * pt.alpha_norm2());
  f.overlap = f.big_e * std::pow(std::cos(pt.theta), p.two_j);
  const double n2 = 2.0 + 2.0 * f.overlap;
  f.norm_plus = n2 > 0.0 ? 1.0 / std::sqrt(n2) : std::numeric_limits<double>::infinity();
  return f;
}

// Expectations in the even projection of |alpha,xi>, built from
//   <A|O|A> + <A|O|PA>  over  1 + <A|PA>,  <A|PA> = E cos^{2j} theta.
// For integer j, cos^{2j} = (-cos)^{2j} and -cos^{2j-1} = (-cos)^{2j-1}.
inline Observables sas_observables(const ModelParams& p, const VariationalPoint& pt) {
  detail::check_point(p, pt);
  const double j = p.j();
  const double c = std::cos(pt.theta), s = std::sin(pt.theta);
  const SasFactors f = sas_factors(p, pt);
  const double denom = 1.0 + f.overlap;
  if (!(denom > 1e-14))
    throw ProjectionCollapse("even projection of the coherent state vanishes (theta = " +
                             std::to_string(pt.theta) + ")");

  // E cos^{2j-1} theta: cross term of J_z and of the coupling.
  const double cross = p.two_j > 0 ? f.big_e * std::pow(c, p.two_j - 1) : 0.0;

  Observables o;
  o.jz = -j * (c + cross) / denom;
  o.nu.resize(p.modes());
  double field = 0.0, drive = 0.0;
  for (std::size_t i = 0; i < p.modes(); ++i) {
    const double a2 = pt.q[i] * pt.q[i] + pt.p[i] * pt.p[i];
    o.nu[i] = a2 * (1.0 - f.overlap) / denom;
    field += p.mode_freq[i] * o.nu[i];
    drive += p.coupling[i] * (std::cos(pt.phi) * pt.q[i] - cross * std::sin(pt.phi) * pt.p[i]);
  }
  o.energy = p.omega_a * o.jz + field -
             4.0 * j / std::sqrt(static_cast<double>(p.atoms)) * s * drive / denom;
  return o;
}

inline double sas_energy(const ModelParams& p, const VariationalPoint& pt) {
  return sas_observables(p, pt).energy;
}

// SAS expectations at the CS critical point. The overlap there is
//   E_c = exp(-2 sum q_ic^2) = exp(-(8 j^2 sigma / N)(1 - delta^2)),
// which multiplies delta^{2j} in every correction factor.
inline Observables sasc_observables(const ModelParams& p) {
  p.validate();
  Observables o;
  o.nu.assign(p.modes(), 0.0);
  const double j = p.j();
  double delta = 0.0;
  if (detail::normal_phase(p, delta)) {
    o.energy = -j * p.omega_a;
    o.jz = -j;
    return o;
  }
  const double n = static_cast<double>(p.atoms);
  const DerivedScalars d = derived_scalars(p);
  const double one_minus = 1.0 - delta * delta;
  const double overlap_factor = std::exp(-(8.0 * j * j * d.sigma / n) * one_minus);
  const double denom = 1.0 + overlap_factor * std::pow(delta, p.two_j);
  const double jz_factor = (delta + overlap_factor * std::pow(delta, p.two_j - 1)) / denom;
  const double nu_factor = (1.0 - overlap_factor * std::pow(delta, p.two_j)) / denom;
  o.jz = -j * jz_factor;
  o.energy = -j * p.omega_a * jz_factor - (4.0 * j * j * d.varsigma / n) * one_minus;
  for (std::size_t i = 0; i < p.modes(); ++i)
    o.nu[i] = mode_sigma(p, i) * (4.0 * j * j / n) * one_minus * nu_factor;
  return o;
}

struct SasMinimum {
  VariationalPoint point;
  Observables observables;
  int evaluations = 0;
  // Set when the minimum has complex field quadratures (|p_i| > 1e-4).
  bool complex_quadrature = false;
};

inline std::vector<VariationalPoint> default_sas_seeds(const ModelParams& p) {
  std::vector<VariationalPoint> seeds{VariationalPoint::zero(p.modes())};
  const VariationalPoint crit = cs_critical_point(p);
  seeds.push_back(crit);
  for (double scale : {0.95, 1.05}) {
    VariationalPoint s = crit;
    s.theta *= scale;
    seeds.push_back(s);
  }
  return seeds;
}

// Minimizes the SAS surface from every seed and keeps the lowest result.
inline SasMinimum sasn_minimize(const ModelParams& p, const std::vector<VariationalPoint>& seeds,
                                const NelderMeadOptions& opt = {}) {
  p.validate();
  if (seeds.empty()) throw InvalidParams("sasn_minimize needs at least one seed");
  const std::size_t k = p.modes();
  // Points where the even projection vanishes are excluded from the search.
  auto objective = [&](const std::vector<double>& x) {
    const VariationalPoint pt = VariationalPoint::unpack(x, k);
    const SasFactors f = sas_factors(p, pt);
    if (!(1.0 + f.overlap > 1e-14)) return std::numeric_limits<double>::infinity();
    return sas_energy(p, pt);
  };

  SasMinimum best;
  double best_value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
  for (const VariationalPoint& seed : seeds) {
    detail::check_point(p, seed);
    const NelderMeadResult r = nelder_mead(objective, seed.pack(), opt);
    evaluations += r.evaluations;
    if (!r.converged)
      throw NoConvergence("SAS simplex search exhausted " + std::to_string(opt.max_evals) + " evaluations");
    if (r.value < best_value) {
      best_value = r.value;
      best.point = VariationalPoint::unpack(r.x, k).normalized();
    }
  }
  // The simplex leaves flat directions at the 1e-5 level; snap to real
  // quadratures and phi in {0, pi} when that is no worse.
  VariationalPoint snapped = best.point;
  std::fill(snapped.p.begin(), snapped.p.end(), 0.0);
  snapped.phi = std::round(snapped.phi / std::numbers::pi) * std::numbers::pi;
  snapped = snapped.normalized();
  if (objective(snapped.pack()) <= best_value) best.point = snapped;
  best.evaluations = evaluations + 1;
  best.observables = sas_observables(p, best.point);
  for (double pi : best.point.p) best.complex_quadrature |= std::abs(pi) > 1e-4;
  return best;
}

inline SasMinimum sasn_minimize(const ModelParams& p, const NelderMeadOptions& opt = {}) {
  return sasn_minimize(p, default_sas_seeds(p), opt);
}

using StateVector = Eigen::VectorXcd;

struct SynthesisOptions {
  double max_norm_deficit = 1e-8;  // per-mode Fock weight lost above the cutoff
  bool check_truncation = true;
};

// |alpha_1..alpha_k> (x) |xi>_j expanded in the truncated basis.
inline StateVector cs_state_vector(const VariationalPoint& pt, const BasisLayout& b,
                                   const SynthesisOptions& opt = {}) {
  if (pt.modes() != b.modes()) throw InvalidParams("variational point has the wrong number of modes");
  using cd = std::complex<double>;

  std::vector<std::vector<cd>> fock(b.modes());
  for (std::size_t i = 0; i < b.modes(); ++i) {
    const cd alpha(pt.q[i], pt.p[i]);
    auto& amp = fock[i];
    amp.resize(static_cast<std::size_t>(b.cutoff(i)) + 1);
    amp[0] = std::exp(-0.5 * std::norm(alpha));
    double kept = std::norm(amp[0]);
    for (int nu = 1; nu <= b.cutoff(i); ++nu) {
      amp[nu] = amp[nu - 1] * alpha / std::sqrt(static_cast<double>(nu));
      kept += std::norm(amp[nu]);
    }
    if (opt.check_truncation && 1.0 - kept > opt.max_norm_deficit)
      throw TruncationLoss("mode " + std::to_string(i + 1) + " loses weight " + std::to_string(1.0 - kept) +
                           " above cutoff " + std::to_string(b.cutoff(i)));
  }

  // sqrt(C(2j,s)) cos(theta/2)^{2j-s} sin(theta/2)^s e^{i s phi}
  const int two_j = b.two_j();
  const double ch = std::cos(0.5 * pt.theta), sh = std::sin(0.5 * pt.theta);
  std::vector<cd> spin(static_cast<std::size_t>(two_j) + 1);
  for (int s = 0; s <= two_j; ++s) {
    const double log_binom = std::lgamma(two_j + 1.0) - std::lgamma(s + 1.0) - std::lgamma(two_j - s + 1.0);
    const double mag = std::exp(0.5 * log_binom) * std::pow(ch, two_j - s) * std::pow(sh, s);
    spin[s] = std::polar(mag, s * pt.phi);
  }

  Eigen::VectorXcd field(static_cast<Eigen::Index>(b.fock_dim()));
  for (std::size_t f = 0; f < b.fock_dim(); ++f) {
    cd amp = 1.0;
    for (std::size_t i = 0; i < b.modes(); ++i) amp *= fock[i][b.occupation(f, i)];
    field[static_cast<Eigen::Index>(f)] = amp;
  }

  StateVector v(static_cast<Eigen::Index>(b.dim()));
  for (int s = 0; s <= two_j; ++s)
    v.segment(static_cast<Eigen::Index>(s * b.fock_dim()), static_cast<Eigen::Index>(b.fock_dim())) =
        spin[s] * field;
  return v;
}

// Even projection P+ |alpha,xi>, renormalized. Components with odd j + m + sum nu
// are set to exactly zero.
inline StateVector sas_state_vector(const VariationalPoint& pt, const BasisLayout& b,
                                    const SynthesisOptions& opt = {}) {
  StateVector v = cs_state_vector(pt, b, opt);
  const Eigen::VectorXd parity = parity_diagonal(b);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (parity[i] < 0.0) v[i] = 0.0;
  const double norm = v.norm();
  if (!(norm > 1e-7)) throw ProjectionCollapse("even projection of the coherent state vanishes");
  return v / norm;
}

}  // namespace dicke
