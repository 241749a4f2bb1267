#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/hilbert.hpp"
#include "dicke/model.hpp"
#include "dicke/spectrum.hpp"
#include "dicke/variational.hpp"

namespace dicke {

// ---------------------------------------------------------------------------
// State diagnostics
// ---------------------------------------------------------------------------

// <v|A|v> for a real or complex state; the imaginary part vanishes for the
// real symmetric operators used here.
template <class Derived>
double expectation(const SparseOperator& op, const Eigen::MatrixBase<Derived>& v) {
  if (static_cast<std::size_t>(v.size()) != op.dim())
    throw DimensionMismatch("state length " + std::to_string(v.size()) + " vs operator dimension " +
                            std::to_string(op.dim()));
  using Scalar = typename Derived::Scalar;
  const auto av = (op.matrix().template cast<Scalar>() * v).eval();
  return std::real(v.dot(av));
}

template <class DerivedA, class DerivedB>
double fidelity(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("fidelity of states with different lengths");
  using Scalar = std::complex<double>;
  const Scalar overlap = a.template cast<Scalar>().dot(b.template cast<Scalar>());
  return std::norm(overlap);
}

namespace detail {

inline double entropy_of_spectrum(const Eigen::VectorXd& weights) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (w > 0.0) s -= w * std::log(w);  // 0 log 0 = 0
  }
  return s;
}

// The state as a (2j+1) x fock_dim matrix of amplitudes.
template <class Derived>
auto bipartite_matrix(const Eigen::MatrixBase<Derived>& v, const BasisLayout& b) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  if (static_cast<std::size_t>(v.size()) != b.dim()) throw DimensionMismatch("state does not match basis");
  const auto dense = v.eval();
  return Mat(Eigen::Map<const Mat>(dense.data(), static_cast<Eigen::Index>(b.spin_dim()),
                                   static_cast<Eigen::Index>(b.fock_dim())));
}

}  // namespace detail

// Von Neumann entropy (natural log) of the matter reduced state, i.e. of the
// squared Schmidt coefficients of the matter/field split.
template <class Derived>
double entanglement_entropy(const Eigen::MatrixBase<Derived>& v, const BasisLayout& b) {
  const auto m = detail::bipartite_matrix(v, b);
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rho = m * m.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> es(rho, Eigen::EigenvaluesOnly);
  return detail::entropy_of_spectrum(es.eigenvalues());
}

// Same entropy from the field reduced state. Dense in fock_dim; meant for checks.
template <class Derived>
double entanglement_entropy_field_side(const Eigen::MatrixBase<Derived>& v, const BasisLayout& b,
                                       std::size_t limit = kDenseLimit) {
  if (b.fock_dim() > limit) throw DimensionOverflow("field reduced state too large for dense evaluation");
  const auto m = detail::bipartite_matrix(v, b);
  using Scalar = typename Derived::Scalar;
  // rho_field = (M^T M*) with M rows indexed by spin; conj ordering does not change the spectrum.
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rho = m.transpose() * m.conjugate();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> es(rho, Eigen::EigenvaluesOnly);
  return detail::entropy_of_spectrum(es.eigenvalues());
}

// ---------------------------------------------------------------------------
// Sweep axes
// ---------------------------------------------------------------------------

struct Axis {
  enum class Kind { OmegaA, Gamma, ModeFreq };
  Kind kind = Kind::Gamma;
  std::size_t mode = 1;  // zero-based for Gamma / ModeFreq

  // Accepted names: omega_a, gamma<i>, Omega<i> with 1-based i.
  static std::optional<Axis> parse(const std::string& s) {
    auto mode_suffix = [&](std::size_t prefix) -> std::optional<std::size_t> {
      if (s.size() <= prefix) return std::nullopt;
      std::size_t i = 0;
      for (std::size_t c = prefix; c < s.size(); ++c) {
        if (s[c] < '0' || s[c] > '9') return std::nullopt;
        i = i * 10 + static_cast<std::size_t>(s[c] - '0');
        if (i > 1000) return std::nullopt;
      }
      if (i == 0) return std::nullopt;
      return i - 1;
    };
    if (s == "omega_a" || s == "omegaA" || s == "omega_A") return Axis{Kind::OmegaA, 0};
    if (s.rfind("gamma", 0) == 0)
      if (auto m = mode_suffix(5)) return Axis{Kind::Gamma, *m};
    if (s.rfind("Omega", 0) == 0)
      if (auto m = mode_suffix(5)) return Axis{Kind::ModeFreq, *m};
    return std::nullopt;
  }

  std::string name() const {
    switch (kind) {
      case Kind::OmegaA: return "omega_a";
      case Kind::Gamma: return "gamma" + std::to_string(mode + 1);
      case Kind::ModeFreq: return "Omega" + std::to_string(mode + 1);
    }
    return "?";
  }

  void check(const ModelParams& p) const {
    if (kind != Kind::OmegaA && mode >= p.modes())
      throw InvalidParams("axis " + name() + " refers to a mode the model does not have");
  }

  void apply(ModelParams& p, double x) const {
    check(p);
    switch (kind) {
      case Kind::OmegaA: p.omega_a = x; break;
      case Kind::Gamma: p.coupling[mode] = x; break;
      case Kind::ModeFreq: p.mode_freq[mode] = x; break;
    }
  }

  ModelParams at(const ModelParams& base, double x) const {
    ModelParams p = base;
    apply(p, x);
    return p;
  }

  bool operator==(const Axis&) const = default;
};

// Value of the swept parameter at which delta = 1, with every other
// parameter taken from the template. Empty when no such value exists.
inline std::optional<double> delta_crossing(const ModelParams& p, const Axis& axis) {
  axis.check(p);
  if (p.two_j == 0) return std::nullopt;
  const double target = p.atoms * p.omega_a / (4.0 * p.two_j);  // N omega_A / (8 j)
  double others = 0.0;
  for (std::size_t i = 0; i < p.modes(); ++i)
    if (axis.kind == Axis::Kind::OmegaA || i != axis.mode) others += mode_varsigma(p, i);
  switch (axis.kind) {
    case Axis::Kind::OmegaA:
      if (others == 0.0) return std::nullopt;
      return 4.0 * p.two_j * others / p.atoms;
    case Axis::Kind::Gamma: {
      const double rest = target - others;
      if (!(rest > 0.0)) return std::nullopt;
      return std::sqrt(p.mode_freq[axis.mode] * rest);
    }
    case Axis::Kind::ModeFreq: {
      const double rest = target - others;
      const double g = p.coupling[axis.mode];
      if (!(rest > 0.0) || g == 0.0) return std::nullopt;
      return g * g / rest;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

struct OutputSet {
  bool energy = true;
  bool jz = true;
  bool nu = true;
  bool entropy = true;
  bool fidelity = true;
};

struct SweepOptions {
  OutputSet outputs;
  double cutoff_tol = 1e-8;
  QuantumOptions quantum;
  NelderMeadOptions simplex;
  SynthesisOptions synthesis;
  std::optional<std::vector<int>> fixed_cutoffs;  // skip convergence and use these
  unsigned threads = 1;
};

struct SweepRecord {
  double x = 0.0;
  Method method = Method::Quantum;
  std::optional<double> energy;
  std::optional<double> jz;
  std::vector<double> nu;  // empty when not requested
  std::optional<double> entropy;
  std::optional<double> neighbor_fidelity;  // quantum rows: F(psi(x_t), psi(x_{t+1}))
  std::optional<double> quantum_fidelity;   // variational rows: F(trial, quantum)
  bool complex_quadrature = false;

  bool operator==(const SweepRecord&) const = default;
};

struct TransitionEstimate {
  enum class Locator { FidelityMinimum, DerivativeDiscontinuity, DeltaEqualsOne };
  Method method = Method::Quantum;
  Locator locator = Locator::DeltaEqualsOne;
  double value = 0.0;
  double half_width = 0.0;  // one grid step for grid-based locators, 0 for the analytic one
};

inline const char* locator_name(TransitionEstimate::Locator l) {
  switch (l) {
    case TransitionEstimate::Locator::FidelityMinimum: return "fidelity-minimum";
    case TransitionEstimate::Locator::DerivativeDiscontinuity: return "derivative-discontinuity";
    case TransitionEstimate::Locator::DeltaEqualsOne: return "delta-equals-one";
  }
  return "?";
}

struct SweepResult {
  ModelParams base;
  Axis axis;
  std::vector<double> grid;
  std::vector<Method> methods;
  std::vector<SweepRecord> records;  // grid-major, methods in request order
  std::vector<TransitionEstimate> transitions;
  std::optional<BasisLayout> basis;  // shared basis when state vectors were needed
  std::vector<std::string> notes;

  const SweepRecord& record(std::size_t point, std::size_t method_index) const {
    return records[point * methods.size() + method_index];
  }

  std::optional<std::size_t> method_index(Method m) const {
    for (std::size_t i = 0; i < methods.size(); ++i)
      if (methods[i] == m) return i;
    return std::nullopt;
  }

  std::vector<SweepRecord> series(Method m) const {
    std::vector<SweepRecord> out;
    if (auto mi = method_index(m))
      for (std::size_t t = 0; t < grid.size(); ++t) out.push_back(record(t, *mi));
    return out;
  }
};

// Runs fn(i) for i in [0, n) on up to `threads` workers. The exception from
// the lowest failing index is rethrown, so failures are deterministic too.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::exception_ptr> errors(n);
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace detail {

inline void check_grid(const std::vector<double>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw InvalidParams("sweep grid must be strictly increasing");
}

// The grid point needing the largest Fock cutoffs: largest initial cutoffs,
// ties broken by the larger CS photon number.
inline std::size_t most_superradiant(const ModelParams& base, const Axis& axis, const std::vector<double>& grid) {
  std::size_t best = 0;
  std::pair<long, double> best_score{-1, -1.0};
  for (std::size_t t = 0; t < grid.size(); ++t) {
    const ModelParams p = axis.at(base, grid[t]);
    long cut = 0;
    for (int c : initial_cutoffs(p)) cut += c;
    double photons = 0.0;
    if (p.two_j > 0)
      for (double v : cs_observables(p).nu) photons += v;
    const std::pair<long, double> score{cut, photons};
    if (score > best_score) {
      best_score = score;
      best = t;
    }
  }
  return best;
}

struct PointWork {
  std::vector<SweepRecord> records;
  Eigen::VectorXd quantum;
};

struct SharedOperators {
  SparseOperator jz;
  std::vector<SparseOperator> number;
};

inline PointWork evaluate_point(const ModelParams& p, double x, const std::vector<Method>& methods,
                                const std::optional<BasisLayout>& basis, const SharedOperators* ops,
                                const SweepOptions& opt) {
  PointWork work;
  const bool need_quantum =
      std::find(methods.begin(), methods.end(), Method::Quantum) != methods.end();
  std::optional<GroundStateRecord> quantum;
  if (need_quantum) quantum = solve_quantum(p, *basis, opt.quantum);

  auto fill = [&](SweepRecord& r, const Observables& o) {
    r.energy = o.energy;
    r.jz = o.jz;
    if (opt.outputs.nu) r.nu = o.nu;
  };
  auto trial_diagnostics = [&](SweepRecord& r, const StateVector& v) {
    if (opt.outputs.entropy) r.entropy = entanglement_entropy(v, *basis);
    if (opt.outputs.fidelity && quantum) r.quantum_fidelity = fidelity(v, quantum->vector);
  };
  const bool need_vectors = basis && (opt.outputs.entropy || (opt.outputs.fidelity && quantum));

  for (Method m : methods) {
    SweepRecord r;
    r.x = x;
    r.method = m;
    switch (m) {
      case Method::CS: {
        fill(r, cs_observables(p));
        if (opt.outputs.entropy) r.entropy = 0.0;  // product state
        if (opt.outputs.fidelity && quantum)
          r.quantum_fidelity = fidelity(cs_state_vector(cs_critical_point(p), *basis, opt.synthesis), quantum->vector);
        break;
      }
      case Method::SASc: {
        fill(r, sasc_observables(p));
        if (need_vectors) trial_diagnostics(r, sas_state_vector(cs_critical_point(p), *basis, opt.synthesis));
        break;
      }
      case Method::SASn: {
        const SasMinimum best = sasn_minimize(p, opt.simplex);
        fill(r, best.observables);
        r.complex_quadrature = best.complex_quadrature;
        if (need_vectors) trial_diagnostics(r, sas_state_vector(best.point, *basis, opt.synthesis));
        break;
      }
      case Method::Quantum: {
        Observables o;
        o.energy = quantum->energy;
        o.jz = expectation(ops->jz, quantum->vector);
        for (const auto& n : ops->number) o.nu.push_back(expectation(n, quantum->vector));
        fill(r, o);
        if (opt.outputs.entropy) r.entropy = entanglement_entropy(quantum->vector, *basis);
        break;
      }
    }
    if (!opt.outputs.energy) r.energy.reset();
    if (!opt.outputs.jz) r.jz.reset();
    work.records.push_back(std::move(r));
  }
  if (quantum) work.quantum = std::move(quantum->vector);
  return work;
}

}  // namespace detail

// Shared basis for a sweep: cutoffs converged at the most superradiant grid point.
inline BasisLayout sweep_basis(const ModelParams& base, const Axis& axis, const std::vector<double>& grid,
                               const SweepOptions& opt) {
  if (grid.empty()) throw InvalidParams("empty sweep grid");
  if (opt.fixed_cutoffs) return BasisLayout(base.two_j, *opt.fixed_cutoffs, opt.quantum.dim_limit);
  const std::size_t worst = detail::most_superradiant(base, axis, grid);
  return converge_cutoff(axis.at(base, grid[worst]), opt.cutoff_tol, opt.quantum).first;
}

inline TransitionEstimate locate_transition(const SweepResult& sweep, Method method);

inline SweepResult run_sweep(const ModelParams& base, const Axis& axis, const std::vector<double>& grid,
                             const std::vector<Method>& methods, const SweepOptions& opt = {}) {
  base.validate();
  axis.check(base);
  detail::check_grid(grid);
  if (methods.empty()) throw InvalidParams("no methods requested");
  for (double x : grid) axis.at(base, x).validate();

  SweepResult res;
  res.base = base;
  res.axis = axis;
  res.grid = grid;
  res.methods = methods;

  const bool quantum = std::find(methods.begin(), methods.end(), Method::Quantum) != methods.end();
  const bool vectors = quantum || (opt.outputs.entropy &&
                                   std::any_of(methods.begin(), methods.end(), [](Method m) {
                                     return m == Method::SASc || m == Method::SASn;
                                   }));
  if (vectors && !grid.empty()) res.basis = sweep_basis(base, axis, grid, opt);

  detail::SharedOperators ops;
  if (quantum && res.basis) {
    ops.jz = op_jz(*res.basis);
    for (std::size_t i = 0; i < base.modes(); ++i) ops.number.push_back(op_number(*res.basis, i));
  }

  // Blocks bound the number of ground-state vectors held at once; neighbor
  // fidelities are reduced sequentially across block boundaries.
  const std::size_t block = std::max<std::size_t>(32, 4 * std::max(1u, opt.threads));
  const std::size_t nm = methods.size();
  const std::optional<std::size_t> qi = res.method_index(Method::Quantum);
  res.records.resize(grid.size() * nm);
  Eigen::VectorXd previous;
  for (std::size_t lo = 0; lo < grid.size(); lo += block) {
    const std::size_t hi = std::min(grid.size(), lo + block);
    std::vector<detail::PointWork> work(hi - lo);
    parallel_for(hi - lo, opt.threads, [&](std::size_t i) {
      const double x = grid[lo + i];
      work[i] = detail::evaluate_point(axis.at(base, x), x, methods, res.basis, &ops, opt);
    });
    for (std::size_t i = 0; i < work.size(); ++i) {
      const std::size_t t = lo + i;
      for (std::size_t m = 0; m < nm; ++m) res.records[t * nm + m] = std::move(work[i].records[m]);
      if (qi && opt.outputs.fidelity) {
        if (t > 0) res.records[(t - 1) * nm + *qi].neighbor_fidelity = fidelity(previous, work[i].quantum);
        previous = std::move(work[i].quantum);
      }
    }
  }

  res.notes.push_back("entropy uses the natural logarithm");
  if (std::find(methods.begin(), methods.end(), Method::CS) != methods.end())
    res.notes.push_back("CS trial states are product states; their entropy is exactly zero");
  if (std::find(methods.begin(), methods.end(), Method::SASn) != methods.end()) {
    res.notes.push_back("SASn transition = grid point of largest |second derivative| of the energy");
    for (const auto& r : res.records)
      if (r.method == Method::SASn && r.complex_quadrature)
        res.notes.push_back("SASn minimum with nonzero p at x=" + std::to_string(r.x));
  }

  for (Method m : methods) {
    if (m == Method::Quantum && !opt.outputs.fidelity) continue;
    try {
      res.transitions.push_back(locate_transition(res, m));
    } catch (const NoTransitionInRange& e) {
      res.notes.push_back(std::string(method_name(m)) + ": " + e.what());
    }
  }
  return res;
}

// Quantum ground states on one shared basis; F between consecutive grid points.
inline std::vector<double> neighbor_fidelity_sweep(const ModelParams& base, const Axis& axis,
                                                   const std::vector<double>& grid, SweepOptions opt = {}) {
  if (grid.size() < 2) throw InvalidParams("neighbor fidelity needs at least two grid points");
  opt.outputs = OutputSet{true, false, false, false, true};
  const SweepResult r = run_sweep(base, axis, grid, {Method::Quantum}, opt);
  std::vector<double> f;
  for (std::size_t t = 0; t + 1 < grid.size(); ++t) f.push_back(*r.record(t, 0).neighbor_fidelity);
  return f;
}

// F between the method's trial state and the quantum ground state at each grid point.
inline std::vector<double> variational_vs_quantum_fidelity(const ModelParams& base, const Axis& axis,
                                                           const std::vector<double>& grid, Method method,
                                                           SweepOptions opt = {}) {
  if (method == Method::Quantum) throw InvalidParams("method must be cs, sasc or sasn");
  opt.outputs = OutputSet{true, false, false, false, true};
  const SweepResult r = run_sweep(base, axis, grid, {method, Method::Quantum}, opt);
  std::vector<double> f;
  for (std::size_t t = 0; t < grid.size(); ++t) f.push_back(*r.record(t, 0).quantum_fidelity);
  return f;
}

inline TransitionEstimate locate_transition(const SweepResult& sweep, Method method) {
  const auto mi = sweep.method_index(method);
  if (!mi) throw InvalidParams(std::string("sweep has no ") + method_name(method) + " data");
  const auto& grid = sweep.grid;
  const std::size_t n = grid.size();
  TransitionEstimate est;
  est.method = method;

  auto step_at = [&](std::size_t t) {
    const double left = t > 0 ? grid[t] - grid[t - 1] : 0.0;
    const double right = t + 1 < n ? grid[t + 1] - grid[t] : 0.0;
    return std::max(left, right);
  };

  switch (method) {
    case Method::Quantum: {
      est.locator = TransitionEstimate::Locator::FidelityMinimum;
      if (n < 3) throw NoTransitionInRange("fewer than three grid points");
      std::size_t arg = 0;
      double lowest = std::numeric_limits<double>::infinity();
      for (std::size_t t = 0; t + 1 < n; ++t) {
        const auto& f = sweep.record(t, *mi).neighbor_fidelity;
        if (!f) throw InvalidParams("sweep has no neighbor fidelities");
        if (*f < lowest) {
          lowest = *f;
          arg = t;
        }
      }
      if (arg == 0 || arg + 2 == n) throw NoTransitionInRange("fidelity minimum on the sweep boundary");
      est.value = grid[arg];
      est.half_width = step_at(arg);
      return est;
    }
    case Method::SASn: {
      est.locator = TransitionEstimate::Locator::DerivativeDiscontinuity;
      if (n < 3) throw NoTransitionInRange("fewer than three grid points");
      std::size_t arg = 0;
      double largest = -1.0;
      for (std::size_t t = 1; t + 1 < n; ++t) {
        const auto& a = sweep.record(t - 1, *mi).energy;
        const auto& b = sweep.record(t, *mi).energy;
        const auto& c = sweep.record(t + 1, *mi).energy;
        if (!a || !b || !c) throw InvalidParams("sweep has no SASn energies");
        const double hl = grid[t] - grid[t - 1], hr = grid[t + 1] - grid[t];
        const double curvature = std::abs(2.0 * ((*c - *b) / hr - (*b - *a) / hl) / (hl + hr));
        if (curvature > largest) {
          largest = curvature;
          arg = t;
        }
      }
      if (arg == 1 || arg + 2 == n) throw NoTransitionInRange("energy kink on the sweep boundary");
      est.value = grid[arg];
      est.half_width = step_at(arg);
      return est;
    }
    case Method::CS:
    case Method::SASc: {
      est.locator = TransitionEstimate::Locator::DeltaEqualsOne;
      const auto root = delta_crossing(sweep.base, sweep.axis);
      if (!root || n == 0 || *root < grid.front() || *root > grid.back())
        throw NoTransitionInRange("delta = 1 is not crossed inside the sweep range");
      est.value = *root;
      return est;
    }
  }
  return est;
}

// ---------------------------------------------------------------------------
// Phase diagram
// ---------------------------------------------------------------------------

struct PhaseDiagram {
  Axis x_axis, y_axis;
  std::vector<double> x_grid, y_grid;
  // superradiant[iy][ix] is true where delta < 1; delta[iy][ix] is +inf for vanishing coupling.
  std::vector<std::vector<bool>> superradiant;
  std::vector<std::vector<double>> delta;
  // (x, y) points of the delta = 1 curve: for every x on the grid, the y root inside the y range.
  std::vector<std::pair<double, double>> boundary;
};

inline PhaseDiagram phase_boundary(const ModelParams& base, const Axis& x_axis, const Axis& y_axis,
                                   const std::vector<double>& x_grid, const std::vector<double>& y_grid) {
  base.validate();
  x_axis.check(base);
  y_axis.check(base);
  if (x_axis == y_axis) throw InvalidParams("phase diagram axes must differ");
  if (base.two_j == 0) throw ZeroCooperation("phase diagram needs j > 0");
  detail::check_grid(x_grid);
  detail::check_grid(y_grid);

  PhaseDiagram d{x_axis, y_axis, x_grid, y_grid, {}, {}, {}};
  d.superradiant.assign(y_grid.size(), std::vector<bool>(x_grid.size(), false));
  d.delta.assign(y_grid.size(), std::vector<double>(x_grid.size(), 0.0));
  for (std::size_t iy = 0; iy < y_grid.size(); ++iy)
    for (std::size_t ix = 0; ix < x_grid.size(); ++ix) {
      ModelParams p = x_axis.at(base, x_grid[ix]);
      y_axis.apply(p, y_grid[iy]);
      p.validate();
      const DerivedScalars s = derived_scalars(p);
      const double delta = s.delta ? *s.delta : std::numeric_limits<double>::infinity();
      d.delta[iy][ix] = delta;
      d.superradiant[iy][ix] = delta < 1.0;
    }
  if (!y_grid.empty())
    for (double x : x_grid) {
      const auto root = delta_crossing(x_axis.at(base, x), y_axis);
      if (root && *root >= y_grid.front() && *root <= y_grid.back()) d.boundary.emplace_back(x, *root);
    }
  return d;
}

}  // namespace dicke
