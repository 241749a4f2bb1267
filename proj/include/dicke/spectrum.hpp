#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/hilbert.hpp"
#include "dicke/model.hpp"
#include "dicke/variational.hpp"

namespace dicke {

enum class Method { CS, SASc, SASn, Quantum };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::CS: return "cs";
    case Method::SASc: return "sasc";
    case Method::SASn: return "sasn";
    case Method::Quantum: return "quantum";
  }
  return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
  if (s == "cs") return Method::CS;
  if (s == "sasc") return Method::SASc;
  if (s == "sasn") return Method::SASn;
  if (s == "quantum") return Method::Quantum;
  return std::nullopt;
}

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;  // ||H v - value v||_2, recomputed from the final vector
  int matvecs = 0;
};

struct LanczosOptions {
  int krylov_dim = 48;
  int keep = 8;             // Ritz vectors retained across a thick restart
  int max_restarts = 2000;
  std::uint64_t seed = 0x5eed'd1c6eULL;
  std::optional<Eigen::VectorXd> start;
  // Diagonal 0/1 mask applied to every Krylov vector; restricts the search
  // to an invariant subspace such as one parity block.
  std::optional<Eigen::VectorXd> subspace;
};

namespace detail {

inline void apply_mask(Eigen::VectorXd& v, const std::optional<Eigen::VectorXd>& mask) {
  if (mask) v = v.cwiseProduct(*mask);
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v[arg] < 0.0) v = -v;
}

}  // namespace detail

// Lowest eigenpair of a real symmetric operator by thick-restart Lanczos
// with full reorthogonalization. The eigenvector is normalized with its
// largest-magnitude component positive.
inline EigenPair ground_state(const SparseOperator& h, double tol, const LanczosOptions& opt = {}) {
  if (!(tol > 0.0)) throw InvalidParams("eigensolver tolerance must be positive");
  const auto& mat = h.matrix();
  const Eigen::Index n = mat.rows();
  if (n == 0) throw InvalidParams("empty operator");

  Eigen::Index space = n;
  if (opt.subspace) {
    if (opt.subspace->size() != n) throw DimensionMismatch("subspace mask has the wrong length");
    space = static_cast<Eigen::Index>(opt.subspace->sum());
    if (space == 0) throw InvalidParams("subspace mask is empty");
  }
  const Eigen::Index m = std::max<Eigen::Index>(2, std::min<Eigen::Index>(opt.krylov_dim, space));
  const Eigen::Index keep = std::clamp<Eigen::Index>(opt.keep, 1, m - 1);

  auto attempt = [&](Eigen::VectorXd v0, std::mt19937_64& rng, EigenPair& out) -> bool {
    detail::apply_mask(v0, opt.subspace);
    if (!(v0.norm() > 0.0)) {
      v0 = detail::random_vector(n, rng);
      detail::apply_mask(v0, opt.subspace);
    }
    Eigen::MatrixXd basis(n, m);
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    basis.col(0) = v0 / v0.norm();
    Eigen::Index start = 0;
    Eigen::VectorXd w(n);
    int matvecs = 0;

    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
      double beta_last = 0.0;
      Eigen::VectorXd next;
      Eigen::Index used = m;
      for (Eigen::Index k = start; k < m; ++k) {
        w.noalias() = mat * basis.col(k);
        ++matvecs;
        detail::apply_mask(w, opt.subspace);
        // Two passes of classical Gram-Schmidt against the whole basis.
        Eigen::VectorXd proj = basis.leftCols(k + 1).transpose() * w;
        w.noalias() -= basis.leftCols(k + 1) * proj;
        const Eigen::VectorXd again = basis.leftCols(k + 1).transpose() * w;
        w.noalias() -= basis.leftCols(k + 1) * again;
        // Column k of V^T H V; after a restart this also fills the arrow row.
        for (Eigen::Index i = 0; i <= k; ++i) t(i, k) = t(k, i) = proj[i] + again[i];
        double beta = w.norm();
        const double scale = std::max(1.0, std::abs(t(k, k)));
        if (k + 1 == space) beta = 0.0;
        if (k + 1 < m) {
          if (beta <= 1e-12 * scale) {
            // Invariant subspace: continue with a fresh orthogonal direction.
            if (k + 1 >= space) {
              used = k + 1;
              beta_last = 0.0;
              break;
            }
            Eigen::VectorXd r = detail::random_vector(n, rng);
            detail::apply_mask(r, opt.subspace);
            for (int pass = 0; pass < 2; ++pass) r -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * r);
            basis.col(k + 1) = r / r.norm();
            t(k + 1, k) = t(k, k + 1) = 0.0;
          } else {
            basis.col(k + 1) = w / beta;
            t(k + 1, k) = t(k, k + 1) = beta;
          }
        } else {
          beta_last = beta;
          if (beta > 1e-12 * scale) next = w / beta;
        }
      }

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.topLeftCorner(used, used));
      const Eigen::VectorXd& theta = es.eigenvalues();
      const Eigen::MatrixXd& s = es.eigenvectors();
      const double ritz_residual = std::abs(beta_last * s(used - 1, 0));

      if (ritz_residual <= tol || next.size() == 0) {
        Eigen::VectorXd y = basis.leftCols(used) * s.col(0);
        y /= y.norm();
        Eigen::VectorXd r = mat * y;
        ++matvecs;
        const double value = y.dot(r);
        r -= value * y;
        detail::apply_mask(r, opt.subspace);
        out.value = value;
        out.residual = r.norm();
        out.vector = std::move(y);
        out.matvecs = matvecs;
        if (out.residual <= tol * 10.0 || next.size() == 0) {
          detail::fix_sign(out.vector);
          return true;
        }
      }

      // Thick restart: keep the lowest Ritz vectors and the residual direction.
      const Eigen::MatrixXd kept = basis.leftCols(used) * s.leftCols(keep);
      basis.leftCols(keep) = kept;
      basis.col(keep) = next;
      t.setZero();
      for (Eigen::Index i = 0; i < keep; ++i) {
        t(i, i) = theta[i];
        t(i, keep) = t(keep, i) = beta_last * s(used - 1, i);
      }
      start = keep;
    }
    out.matvecs = matvecs;
    return false;
  };

  std::mt19937_64 rng(opt.seed);
  EigenPair out;
  if (opt.start) {
    if (opt.start->size() != n) throw DimensionMismatch("start vector has the wrong length");
    if (attempt(*opt.start, rng, out)) return out;
  }
  if (attempt(detail::random_vector(n, rng), rng, out)) return out;
  throw NoConvergence("Lanczos did not reach residual " + std::to_string(tol) + " after " +
                      std::to_string(opt.max_restarts) + " restarts");
}

// Full spectrum of a small operator, ascending. Test oracle only.
inline constexpr std::size_t kDenseLimit = 2000;

inline Eigen::VectorXd dense_oracle(const SparseOperator& h, std::size_t limit = kDenseLimit) {
  if (h.dim() > limit)
    throw DimensionOverflow("dense diagonalization limited to dimension " + std::to_string(limit));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline EigenPair dense_ground_state(const SparseOperator& h, std::size_t limit = kDenseLimit) {
  if (h.dim() > limit)
    throw DimensionOverflow("dense diagonalization limited to dimension " + std::to_string(limit));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  EigenPair out;
  out.value = es.eigenvalues()[0];
  out.vector = es.eigenvectors().col(0);
  detail::fix_sign(out.vector);
  out.residual = (h.matrix() * out.vector - out.value * out.vector).norm();
  return out;
}

struct GroundStateRecord {
  Method method = Method::Quantum;
  double energy = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
  ModelParams params;
  BasisLayout basis;
};

struct QuantumOptions {
  double eig_tol = 1e-9;
  int cutoff_step = 10;
  std::size_t dim_limit = BasisLayout::kDefaultDimLimit;
};

// Even-parity mask (1 on states with even j + m + sum nu).
inline Eigen::VectorXd even_mask(const BasisLayout& b) {
  return (parity_diagonal(b).array() + 1.0).matrix() * 0.5;
}

// Lowest eigenpair of H(params) on the given basis. The search runs in the
// even-excitation block, which holds the ground state for gamma_i >= 0, and
// starts from the SAS trial state at the CS minimum.
inline GroundStateRecord solve_quantum(const ModelParams& p, const BasisLayout& b, const QuantumOptions& opt = {}) {
  const SparseOperator h = build_hamiltonian(p, b);
  LanczosOptions lo;
  SynthesisOptions so;
  so.check_truncation = false;
  lo.start = sas_state_vector(cs_critical_point(p), b, so).real();
  lo.subspace = even_mask(b);
  EigenPair ep = ground_state(h, opt.eig_tol, lo);
  GroundStateRecord rec;
  rec.method = Method::Quantum;
  rec.energy = ep.value;
  rec.vector = std::move(ep.vector);
  rec.residual = ep.residual;
  rec.params = p;
  rec.basis = b;
  return rec;
}

// Initial per-mode cutoff from the largest CS photon number 4 j^2 g_i^2 / (N W_i^2)
// plus a Poisson-width margin.
inline std::vector<int> initial_cutoffs(const ModelParams& p) {
  std::vector<int> cut(p.modes());
  const double j = p.j();
  for (std::size_t i = 0; i < p.modes(); ++i) {
    const double nu = 4.0 * j * j * mode_sigma(p, i) / p.atoms;
    cut[i] = static_cast<int>(std::ceil(nu + 4.0 * std::sqrt(nu))) + 20;
  }
  return cut;
}

// Grows every cutoff by opt.cutoff_step until the ground energy moves by less
// than tol_e under one further step; returns the smaller of the two bases.
inline std::pair<BasisLayout, GroundStateRecord> converge_cutoff(const ModelParams& p, double tol_e,
                                                                 const QuantumOptions& opt = {},
                                                                 std::optional<std::vector<int>> start = {}) {
  if (!(tol_e > 0.0)) throw InvalidParams("cutoff tolerance must be positive");
  p.validate();
  std::vector<int> cut = start ? *start : initial_cutoffs(p);
  BasisLayout basis(p.two_j, cut, opt.dim_limit);
  GroundStateRecord rec = solve_quantum(p, basis, opt);
  for (;;) {
    std::vector<int> bigger = cut;
    for (int& c : bigger) c += opt.cutoff_step;
    BasisLayout next_basis;
    try {
      next_basis = BasisLayout(p.two_j, bigger, opt.dim_limit);
    } catch (const DimensionOverflow& e) {
      throw NoConvergence(std::string("cutoff did not converge before the dimension limit: ") + e.what());
    }
    GroundStateRecord next = solve_quantum(p, next_basis, opt);
    if (std::abs(rec.energy - next.energy) < tol_e) return {basis, rec};
    cut = std::move(bigger);
    basis = std::move(next_basis);
    rec = std::move(next);
  }
}

}  // namespace dicke
