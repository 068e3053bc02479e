#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "qdl/qcore.hpp"

namespace qdl {

inline constexpr double kProbTolerance = 1e-9;

// Outcome labels are opaque integers; callers keep their own label tables.
using Label = std::uint32_t;

// Probability mass function over labels. Zero entries are allowed and kept.
class Distribution {
 public:
  explicit Distribution(std::map<Label, double> probs);

  static Distribution uniform(Label n);
  static Distribution from_counts(const std::map<Label, std::uint64_t>& counts);

  const std::map<Label, double>& probs() const { return probs_; }
  double at(Label l) const;
  std::size_t support_size() const;

 private:
  std::map<Label, double> probs_;
};

// Joint law of (secret, result).
class JointDistribution {
 public:
  using Key = std::pair<Label, Label>;  // (secret, result)

  explicit JointDistribution(std::map<Key, double> probs);
  static JointDistribution from_counts(const std::map<Key, std::uint64_t>& counts);

  const std::map<Key, double>& probs() const { return probs_; }
  Distribution secret_marginal() const;
  Distribution result_marginal() const;
  // P(secret | result = r). r must have positive probability.
  Distribution conditional_on_result(Label r) const;
  // Relabels results through `f`, summing probabilities that collide.
  JointDistribution merge_results(const std::function<Label(Label)>& f) const;

 private:
  std::map<Key, double> probs_;
};

double shannon_entropy(const Distribution& d);

// Σ_r P(r) H(secret | r).
double posterior_entropy(const JointDistribution& j);

// Drop in the listener's entropy about the secret after seeing the result.
// Throws std::invalid_argument when the joint's secret marginal disagrees
// with `prior` by more than 1e-9.
double info_gain(const Distribution& prior, const JointDistribution& joint);

// Dense square complex matrix, row-major.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(std::size_t dim) : dim_(dim), m_(dim * dim) {}
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return m_[r * dim_ + c]; }
  Complex operator()(std::size_t r, std::size_t c) const { return m_[r * dim_ + c]; }
  Complex trace() const;
  // max |m_rc - conj(m_cr)|
  double hermitian_defect() const;

 private:
  std::size_t dim_;
  std::vector<Complex> m_;
};

ComplexMatrix outer(const PureState& s);

// Eigenvalues of a Hermitian matrix, descending.
//
// Realized with cyclic Jacobi rotations on the real symmetric embedding
// [[Re M, -Im M], [Im M, Re M]] of size 2d, swept until the off-diagonal
// Frobenius norm drops below 1e-13. Every eigenvalue of M appears twice in
// the embedding; after sorting, adjacent copies are paired and averaged.
// Throws std::invalid_argument if the input is not Hermitian within 1e-12.
std::vector<double> eigvals_hermitian(const ComplexMatrix& m);

// Hermitian, unit trace and positive semidefinite (eigenvalues ≥ −1e-10),
// dimension 2 or 4.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);
  static DensityMatrix from_pure(const PureState& s);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const { return m_.dim(); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  ComplexMatrix m_;
};

std::vector<double> eigvals_hermitian(const DensityMatrix& m);

double vn_entropy(const DensityMatrix& m);

struct EnsembleMember {
  double p;
  DensityMatrix rho;
};

class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleMember> members);
  static Ensemble uniform_pure(std::span<const PureState> states);

  const std::vector<EnsembleMember>& members() const { return members_; }
  DensityMatrix average() const;

 private:
  std::vector<EnsembleMember> members_;
};

// S(Σ p_i ρ_i) − Σ p_i S(ρ_i).
double holevo_chi(const Ensemble& e);

}  // namespace qdl
