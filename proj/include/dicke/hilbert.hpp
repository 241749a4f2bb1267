#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dicke/errors.hpp"
#include "dicke/model.hpp"

namespace dicke {

// Truncated product space H_j (x) F_1 (x) ... (x) F_k.
//
// A basis state is labelled by the spin level s = j + m in [0, 2j] and the
// occupations nu_i in [0, nmax_i]. The flat index puts the spin level slowest
// and the last mode fastest, so a state vector reshaped row-major into a
// (2j+1) x fock_dim() matrix is the matter/field bipartition.
class BasisLayout {
 public:
  static constexpr std::size_t kDefaultDimLimit = 4'000'000;

  BasisLayout() = default;

  BasisLayout(int two_j, std::vector<int> cutoffs, std::size_t dim_limit = kDefaultDimLimit)
      : two_j_(two_j), cutoffs_(std::move(cutoffs)) {
    if (two_j_ < 0) throw InvalidParams("2j must be non-negative");
    if (cutoffs_.empty()) throw InvalidParams("at least one mode is required");
    strides_.assign(cutoffs_.size(), 1);
    long double fock = 1;
    for (std::size_t i = cutoffs_.size(); i-- > 0;) {
      if (cutoffs_[i] < 0) throw InvalidParams("Fock cutoffs must be non-negative");
      strides_[i] = static_cast<std::size_t>(fock);
      fock *= cutoffs_[i] + 1;
    }
    const long double total = fock * (two_j_ + 1);
    if (total > static_cast<long double>(dim_limit))
      throw DimensionOverflow("basis dimension " + std::to_string(static_cast<double>(total)) +
                              " exceeds limit " + std::to_string(dim_limit));
    fock_dim_ = static_cast<std::size_t>(fock);
    dim_ = static_cast<std::size_t>(total);
  }

  int two_j() const { return two_j_; }
  double j() const { return 0.5 * two_j_; }
  std::size_t modes() const { return cutoffs_.size(); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  int cutoff(std::size_t mode) const { return cutoffs_[mode]; }
  std::size_t spin_dim() const { return static_cast<std::size_t>(two_j_) + 1; }
  std::size_t fock_dim() const { return fock_dim_; }
  std::size_t dim() const { return dim_; }

  struct Label {
    int level = 0;  // j + m
    std::vector<int> occupations;

    double m(int two_j) const { return level - 0.5 * two_j; }
    int excitations() const {
      int n = level;
      for (int v : occupations) n += v;
      return n;
    }
    bool operator==(const Label&) const = default;
  };

  std::size_t index(int level, std::span<const int> occupations) const {
    std::size_t idx = static_cast<std::size_t>(level) * fock_dim_;
    for (std::size_t i = 0; i < occupations.size(); ++i)
      idx += static_cast<std::size_t>(occupations[i]) * strides_[i];
    return idx;
  }

  std::size_t index(const Label& l) const { return index(l.level, l.occupations); }

  Label label(std::size_t idx) const {
    Label l;
    l.level = static_cast<int>(idx / fock_dim_);
    std::size_t rem = idx % fock_dim_;
    l.occupations.resize(cutoffs_.size());
    for (std::size_t i = 0; i < cutoffs_.size(); ++i) {
      l.occupations[i] = static_cast<int>(rem / strides_[i]);
      rem %= strides_[i];
    }
    return l;
  }

  // Occupation of one mode without decoding the whole label.
  int occupation(std::size_t idx, std::size_t mode) const {
    return static_cast<int>((idx % fock_dim_) / strides_[mode] %
                            static_cast<std::size_t>(cutoffs_[mode] + 1));
  }

  std::size_t stride(std::size_t mode) const { return strides_[mode]; }

 private:
  int two_j_ = 0;
  std::vector<int> cutoffs_;
  std::vector<std::size_t> strides_;
  std::size_t fock_dim_ = 1;
  std::size_t dim_ = 1;
};

inline BasisLayout build_basis(int two_j, std::vector<int> cutoffs,
                               std::size_t dim_limit = BasisLayout::kDefaultDimLimit) {
  return BasisLayout(two_j, std::move(cutoffs), dim_limit);
}

// Real sparse operator in BasisLayout ordering.
class SparseOperator {
 public:
  using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
  using Triplet = Eigen::Triplet<double>;

  SparseOperator() = default;
  SparseOperator(Matrix m, bool hermitian) : matrix_(std::move(m)), hermitian_(hermitian) {
    matrix_.makeCompressed();
  }

  static SparseOperator from_triplets(std::size_t dim, const std::vector<Triplet>& entries,
                                      bool hermitian) {
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(entries.begin(), entries.end());
    return SparseOperator(std::move(m), hermitian);
  }

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t nonzeros() const { return static_cast<std::size_t>(matrix_.nonZeros()); }
  bool hermitian() const { return hermitian_; }
  const Matrix& matrix() const { return matrix_; }

  template <class Vec>
  auto operator*(const Vec& v) const {
    return (matrix_ * v).eval();
  }

  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }

  // Largest |A_ij - A_ji|.
  double asymmetry() const {
    Matrix t = matrix_.transpose();
    Matrix diff = matrix_ - t;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
      for (Matrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
  }

 private:
  Matrix matrix_;
  bool hermitian_ = false;
};

namespace detail {

// <j, m+1 | J+ | j, m> with m = level - j, i.e. sqrt((2j - s)(s + 1)).
inline double raise_element(int two_j, int level) {
  return std::sqrt(static_cast<double>(two_j - level) * static_cast<double>(level + 1));
}

}  // namespace detail

inline SparseOperator op_jz(const BasisLayout& b) {
  std::vector<SparseOperator::Triplet> t;
  t.reserve(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const double m = static_cast<double>(i / b.fock_dim()) - b.j();
    if (m != 0.0) t.emplace_back(i, i, m);
  }
  return SparseOperator::from_triplets(b.dim(), t, true);
}

inline SparseOperator op_jplus(const BasisLayout& b) {
  std::vector<SparseOperator::Triplet> t;
  t.reserve(b.dim());
  for (int s = 0; s < b.two_j(); ++s) {
    const double c = detail::raise_element(b.two_j(), s);
    for (std::size_t f = 0; f < b.fock_dim(); ++f)
      t.emplace_back((s + 1) * b.fock_dim() + f, s * b.fock_dim() + f, c);
  }
  return SparseOperator::from_triplets(b.dim(), t, false);
}

inline SparseOperator op_jminus(const BasisLayout& b) {
  return SparseOperator(SparseOperator::Matrix(op_jplus(b).matrix().transpose()), false);
}

// Mode index is zero-based.
inline SparseOperator op_a(const BasisLayout& b, std::size_t mode) {
  if (mode >= b.modes()) throw InvalidParams("mode index out of range");
  std::vector<SparseOperator::Triplet> t;
  t.reserve(b.dim());
  const std::size_t stride = b.stride(mode);
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const int nu = b.occupation(i, mode);
    if (nu > 0) t.emplace_back(i - stride, i, std::sqrt(static_cast<double>(nu)));
  }
  return SparseOperator::from_triplets(b.dim(), t, false);
}

inline SparseOperator op_adag(const BasisLayout& b, std::size_t mode) {
  return SparseOperator(SparseOperator::Matrix(op_a(b, mode).matrix().transpose()), false);
}

inline SparseOperator op_number(const BasisLayout& b, std::size_t mode) {
  if (mode >= b.modes()) throw InvalidParams("mode index out of range");
  std::vector<SparseOperator::Triplet> t;
  t.reserve(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) {
    const int nu = b.occupation(i, mode);
    if (nu > 0) t.emplace_back(i, i, nu);
  }
  return SparseOperator::from_triplets(b.dim(), t, true);
}

// Diagonal of exp(i pi Lambda): (-1)^(j + m + sum nu).
inline Eigen::VectorXd parity_diagonal(const BasisLayout& b) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(b.dim()));
  for (std::size_t i = 0; i < b.dim(); ++i) {
    int n = static_cast<int>(i / b.fock_dim());
    for (std::size_t mode = 0; mode < b.modes(); ++mode) n += b.occupation(i, mode);
    d[static_cast<Eigen::Index>(i)] = (n % 2 == 0) ? 1.0 : -1.0;
  }
  return d;
}

inline SparseOperator build_parity(const BasisLayout& b) {
  const Eigen::VectorXd d = parity_diagonal(b);
  std::vector<SparseOperator::Triplet> t;
  t.reserve(b.dim());
  for (Eigen::Index i = 0; i < d.size(); ++i) t.emplace_back(i, i, d[i]);
  return SparseOperator::from_triplets(b.dim(), t, true);
}

// Assembles the Hamiltonian. Each coupling element is emitted together with
// its mirror so the stored matrix is exactly symmetric.
inline SparseOperator build_hamiltonian(const ModelParams& p, const BasisLayout& b) {
  p.validate();
  if (b.two_j() != p.two_j || b.modes() != p.modes())
    throw InvalidParams("basis does not match the model (j or k differ)");

  const std::size_t fock = b.fock_dim();
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.atoms));
  std::vector<SparseOperator::Triplet> t;
  t.reserve(b.dim() * (1 + 4 * b.modes()));

  for (std::size_t i = 0; i < b.dim(); ++i) {
    const int level = static_cast<int>(i / fock);
    double diag = p.omega_a * (level - b.j());
    for (std::size_t mode = 0; mode < b.modes(); ++mode) diag += p.mode_freq[mode] * b.occupation(i, mode);
    if (diag != 0.0) t.emplace_back(i, i, diag);
  }

  // -(g/sqrt N) (J+ + J-)(a + a^+): visit each pair (level s -> s+1) x (nu -> nu +- 1) once.
  for (int s = 0; s < b.two_j(); ++s) {
    const double jp = detail::raise_element(b.two_j(), s);
    for (std::size_t f = 0; f < fock; ++f) {
      const std::size_t lo = s * fock + f;
      for (std::size_t mode = 0; mode < b.modes(); ++mode) {
        const double g = p.coupling[mode];
        if (g == 0.0) continue;
        const int nu = b.occupation(lo, mode);
        const std::size_t stride = b.stride(mode);
        const double pref = -g * scale * jp;
        if (nu < b.cutoff(mode)) {
          const std::size_t hi = lo + fock + stride;
          const double v = pref * std::sqrt(static_cast<double>(nu + 1));
          t.emplace_back(lo, hi, v);
          t.emplace_back(hi, lo, v);
        }
        if (nu > 0) {
          const std::size_t hi = lo + fock - stride;
          const double v = pref * std::sqrt(static_cast<double>(nu));
          t.emplace_back(lo, hi, v);
          t.emplace_back(hi, lo, v);
        }
      }
    }
  }
  return SparseOperator::from_triplets(b.dim(), t, true);
}

}  // namespace dicke
