#pragma once

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dicke/analysis.hpp"
#include "dicke/hilbert.hpp"
#include "dicke/spectrum.hpp"
#include "dicke/variational.hpp"

namespace dicke {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

inline ModelParams check_params(int atoms, int two_j, std::vector<double> freq, std::vector<double> coupling,
                                double omega_a = 1.3) {
  ModelParams p;
  p.atoms = atoms;
  p.two_j = two_j;
  p.omega_a = omega_a;
  p.mode_freq = std::move(freq);
  p.coupling = std::move(coupling);
  p.validate();
  return p;
}

// Small configurations for the oracle and parity checks: j in {1/2, 1}, k in {1, 2}, nmax <= 4.
struct SmallCase {
  ModelParams params;
  std::vector<int> cutoffs;
};

inline std::vector<SmallCase> small_cases() {
  std::vector<SmallCase> out;
  for (int two_j : {1, 2})
    for (std::size_t k : {1u, 2u})
      for (int nmax : {2, 4}) {
        const int atoms = two_j == 1 ? 3 : 4;
        std::vector<double> freq{1.7, 2.3}, g{0.9, 1.4};
        freq.resize(k);
        g.resize(k);
        out.push_back({check_params(atoms, two_j, freq, g), std::vector<int>(k, nmax)});
      }
  return out;
}

}  // namespace detail

// Every stored element of H must connect basis states of equal excitation parity.
inline CheckResult parity_block_check(const SparseOperator& h, const BasisLayout& b) {
  if (h.dim() != b.dim()) throw DimensionMismatch("operator does not match basis");
  const Eigen::VectorXd par = parity_diagonal(b);
  std::size_t bad = 0;
  double worst = 0.0;
  const auto& a = h.matrix();
  for (int r = 0; r < a.outerSize(); ++r)
    for (SparseOperator::Matrix::InnerIterator it(a, r); it; ++it)
      if (par[it.row()] != par[it.col()] && it.value() != 0.0) {
        ++bad;
        worst = std::max(worst, std::abs(it.value()));
      }
  return {"parity blocks exact", bad == 0,
          bad == 0 ? "no element couples even and odd states"
                   : std::to_string(bad) + " parity-mixing elements, largest " + detail::sci(worst)};
}

inline std::vector<CheckResult> run_selfcheck() {
  std::vector<CheckResult> out;
  auto record = [&](std::string name, double err, double tol) {
    out.push_back({std::move(name), err <= tol, "max error " + detail::sci(err) + " (tol " + detail::sci(tol) + ")"});
  };

  const auto cases = detail::small_cases();

  // Hamiltonian symmetry and parity blocks.
  {
    double asym = 0.0;
    std::vector<CheckResult> parity;
    for (const auto& c : cases) {
      const BasisLayout b(c.params.two_j, c.cutoffs);
      const SparseOperator h = build_hamiltonian(c.params, b);
      asym = std::max(asym, h.asymmetry());
      parity.push_back(parity_block_check(h, b));
    }
    const BasisLayout big(9, {6, 5});
    const ModelParams p = detail::check_params(11, 9, {2.0, 1.5}, {0.5, 1.1}, 2.0);
    const SparseOperator h = build_hamiltonian(p, big);
    asym = std::max(asym, h.asymmetry());
    parity.push_back(parity_block_check(h, big));
    record("hamiltonian symmetric", asym, 0.0);
    bool ok = true;
    std::string detail = "all configurations";
    for (const auto& r : parity)
      if (!r.passed) {
        ok = false;
        detail = r.detail;
      }
    out.push_back({"parity blocks exact", ok, detail});
  }

  // Angular-momentum algebra is exact; [a, a+] = 1 except on the cutoff level.
  {
    double spin_err = 0.0, boson_err = 0.0;
    for (int two_j : {1, 2, 5, 8}) {
      const BasisLayout b(two_j, {3, 2});
      const auto jp = op_jplus(b).matrix(), jm = op_jminus(b).matrix(), jz = op_jz(b).matrix();
      const Eigen::MatrixXd comm = Eigen::MatrixXd(jp * jm) - Eigen::MatrixXd(jm * jp) - 2.0 * Eigen::MatrixXd(jz);
      spin_err = std::max(spin_err, comm.cwiseAbs().maxCoeff());
      for (std::size_t mode = 0; mode < b.modes(); ++mode) {
        const auto a = op_a(b, mode).matrix(), ad = op_adag(b, mode).matrix();
        const Eigen::MatrixXd c = Eigen::MatrixXd(a * ad) - Eigen::MatrixXd(ad * a);
        for (std::size_t i = 0; i < b.dim(); ++i) {
          const int n = b.occupation(i, mode);
          const double expect = n == b.cutoff(mode) ? -static_cast<double>(b.cutoff(mode)) : 1.0;
          Eigen::MatrixXd row = c.row(static_cast<Eigen::Index>(i));
          row(static_cast<Eigen::Index>(i)) -= expect;
          boson_err = std::max(boson_err, row.cwiseAbs().maxCoeff());
        }
      }
    }
    record("[J+, J-] = 2 Jz", spin_err, 1e-12);
    record("[a, a+] = 1 - (n+1) P_cutoff", boson_err, 1e-12);
  }

  // Iterative solver against the dense oracle.
  {
    double de = 0.0, df = 0.0, parity_err = 0.0;
    for (const auto& c : cases) {
      const BasisLayout b(c.params.two_j, c.cutoffs);
      const GroundStateRecord it = solve_quantum(c.params, b, QuantumOptions{1e-12});
      const EigenPair dense = dense_ground_state(build_hamiltonian(c.params, b));
      de = std::max(de, std::abs(it.energy - dense.value));
      df = std::max(df, 1.0 - fidelity(it.vector, dense.vector));
      parity_err = std::max(parity_err, std::abs(expectation(build_parity(b), dense.vector) - 1.0));
    }
    record("iterative vs dense energy", de, 1e-10);
    record("iterative vs dense state 1-F", df, 1e-10);
    record("ground-state parity +1", parity_err, 1e-8);
  }

  // Closed-form CS / SAS observables against explicit state vectors.
  {
    double err = 0.0;
    const ModelParams p = detail::check_params(10, 6, {2.0, 1.6}, {0.9, 1.3}, 1.0);
    const BasisLayout b(p.two_j, {40, 40});
    const SparseOperator h = build_hamiltonian(p, b), jz = op_jz(b);
    std::vector<SparseOperator> num;
    for (std::size_t i = 0; i < p.modes(); ++i) num.push_back(op_number(b, i));
    auto compare = [&](const Observables& o, const StateVector& v) {
      err = std::max(err, std::abs(o.energy - expectation(h, v)));
      err = std::max(err, std::abs(o.jz - expectation(jz, v)));
      for (std::size_t i = 0; i < num.size(); ++i) err = std::max(err, std::abs(o.nu[i] - expectation(num[i], v)));
    };
    const VariationalPoint crit = cs_critical_point(p);
    compare(cs_observables(p), cs_state_vector(crit, b));
    compare(sasc_observables(p), sas_state_vector(crit, b));
    VariationalPoint generic = crit;
    generic.q = {0.7, -1.1};
    generic.p = {0.3, 0.2};
    generic.theta = 1.1;
    generic.phi = 0.4;
    compare(sas_observables(p, generic), sas_state_vector(generic, b));
    Observables cs_generic{cs_energy(p, generic), 0.0, {}};
    cs_generic.jz = -p.j() * std::cos(generic.theta);
    for (std::size_t i = 0; i < p.modes(); ++i)
      cs_generic.nu.push_back(generic.q[i] * generic.q[i] + generic.p[i] * generic.p[i]);
    compare(cs_generic, cs_state_vector(generic, b));
    record("closed form vs state vector", err, 1e-7);
  }

  // Entropy computed from either side of the matter/field cut.
  {
    double err = 0.0;
    for (const auto& c : cases) {
      const BasisLayout b(c.params.two_j, c.cutoffs);
      const GroundStateRecord g = solve_quantum(c.params, b);
      err = std::max(err, std::abs(entanglement_entropy(g.vector, b) - entanglement_entropy_field_side(g.vector, b)));
    }
    const ModelParams p = detail::check_params(6, 4, {2.0}, {1.6}, 1.0);
    const BasisLayout b(4, {30});
    SynthesisOptions loose;
    loose.check_truncation = false;
    const StateVector v = sas_state_vector(cs_critical_point(p), b, loose);
    err = std::max(err, std::abs(entanglement_entropy(v, b) - entanglement_entropy_field_side(v, b)));
    record("entropy matter/field symmetry", err, 1e-10);
  }

  // Gradients: analytic CS gradient and the SAS closed form against its state-vector expectation.
  {
    const ModelParams p = detail::check_params(10, 6, {2.0, 1.6}, {0.9, 1.3}, 1.0);
    VariationalPoint pt = VariationalPoint::zero(2);
    pt.q = {0.8, -0.6};
    pt.p = {0.25, -0.15};
    pt.theta = 0.9;
    pt.phi = 0.35;
    const std::vector<double> x0 = pt.pack();
    const std::vector<double> analytic = cs_energy_gradient(p, pt);
    const double h = 1e-6;
    auto fd = [&](const std::function<double(const VariationalPoint&)>& f, std::size_t i) {
      std::vector<double> xp = x0, xm = x0;
      xp[i] += h;
      xm[i] -= h;
      return (f(VariationalPoint::unpack(xp, 2)) - f(VariationalPoint::unpack(xm, 2))) / (2.0 * h);
    };
    double cs_err = 0.0, sas_err = 0.0;
    const BasisLayout b(p.two_j, {40, 40});
    const SparseOperator hop = build_hamiltonian(p, b);
    auto numeric = [&](const VariationalPoint& v) { return expectation(hop, sas_state_vector(v, b)); };
    auto closed = [&](const VariationalPoint& v) { return sas_energy(p, v); };
    auto cs = [&](const VariationalPoint& v) { return cs_energy(p, v); };
    for (std::size_t i = 0; i < x0.size(); ++i) {
      const double g = fd(cs, i);
      cs_err = std::max(cs_err, std::abs(g - analytic[i]) / std::max(1.0, std::abs(analytic[i])));
      const double gc = fd(closed, i), gn = fd(numeric, i);
      sas_err = std::max(sas_err, std::abs(gc - gn) / std::max(1.0, std::abs(gn)));
    }
    record("CS gradient vs finite difference", cs_err, 1e-5);
    record("SAS gradient: closed form vs state vector", sas_err, 1e-5);
  }

  // Zero coupling: every method gives E = -j omega_A with the atoms down and the field empty.
  {
    const ModelParams p = detail::check_params(8, 6, {2.0, 1.5}, {0.0, 0.0}, 1.7);
    const double exact = -p.j() * p.omega_a;
    const BasisLayout b(p.two_j, {3, 3});
    double err = std::abs(cs_observables(p).energy - exact);
    err = std::max(err, std::abs(sasc_observables(p).energy - exact));
    err = std::max(err, std::abs(sasn_minimize(p).observables.energy - exact));
    err = std::max(err, std::abs(solve_quantum(p, b).energy - exact));
    record("zero coupling: all methods agree", err, 1e-12);
  }

  return out;
}

inline bool print_selfcheck(const std::vector<CheckResult>& results, std::ostream& os) {
  bool all = true;
  for (const auto& r : results) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    all = all && r.passed;
  }
  os << (all ? "selfcheck passed" : "selfcheck FAILED") << '\n';
  return all;
}

}  // namespace dicke
