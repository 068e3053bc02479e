#include "qdl/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdl {
namespace {

void check_probability(double p) {
  if (!std::isfinite(p) || p < 0.0) throw std::invalid_argument("probability must be finite and non-negative");
}

template <class Map>
void check_normalized(const Map& probs) {
  double total = 0.0;
  for (const auto& [_, p] : probs) {
    check_probability(p);
    total += p;
  }
  if (std::abs(total - 1.0) > kProbTolerance) throw std::invalid_argument("probabilities do not sum to 1");
}

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

Distribution::Distribution(std::map<Label, double> probs) : probs_(std::move(probs)) { check_normalized(probs_); }

Distribution Distribution::uniform(Label n) {
  if (n == 0) throw std::invalid_argument("Distribution::uniform: empty support");
  std::map<Label, double> probs;
  for (Label i = 0; i < n; ++i) probs[i] = 1.0 / n;
  return Distribution(std::move(probs));
}

Distribution Distribution::from_counts(const std::map<Label, std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (const auto& [_, c] : counts) total += c;
  if (total == 0) throw std::invalid_argument("Distribution::from_counts: no observations");
  std::map<Label, double> probs;
  for (const auto& [l, c] : counts) probs[l] = static_cast<double>(c) / static_cast<double>(total);
  return Distribution(std::move(probs));
}

double Distribution::at(Label l) const {
  auto it = probs_.find(l);
  return it == probs_.end() ? 0.0 : it->second;
}

std::size_t Distribution::support_size() const {
  return static_cast<std::size_t>(std::count_if(probs_.begin(), probs_.end(), [](const auto& kv) { return kv.second > 0.0; }));
}

JointDistribution::JointDistribution(std::map<Key, double> probs) : probs_(std::move(probs)) {
  check_normalized(probs_);
}

JointDistribution JointDistribution::from_counts(const std::map<Key, std::uint64_t>& counts) {
  std::uint64_t total = 0;
  for (const auto& [_, c] : counts) total += c;
  if (total == 0) throw std::invalid_argument("JointDistribution::from_counts: no observations");
  std::map<Key, double> probs;
  for (const auto& [k, c] : counts) probs[k] = static_cast<double>(c) / static_cast<double>(total);
  return JointDistribution(std::move(probs));
}

Distribution JointDistribution::secret_marginal() const {
  std::map<Label, double> m;
  for (const auto& [k, p] : probs_) m[k.first] += p;
  return Distribution(std::move(m));
}

Distribution JointDistribution::result_marginal() const {
  std::map<Label, double> m;
  for (const auto& [k, p] : probs_) m[k.second] += p;
  return Distribution(std::move(m));
}

Distribution JointDistribution::conditional_on_result(Label r) const {
  double pr = 0.0;
  for (const auto& [k, p] : probs_)
    if (k.second == r) pr += p;
  if (!(pr > 0.0)) throw std::invalid_argument("conditional_on_result: result has zero probability");
  std::map<Label, double> cond;
  for (const auto& [k, p] : probs_)
    if (k.second == r) cond[k.first] += p / pr;
  return Distribution(std::move(cond));
}

JointDistribution JointDistribution::merge_results(const std::function<Label(Label)>& f) const {
  std::map<Key, double> merged;
  for (const auto& [k, p] : probs_) merged[{k.first, f(k.second)}] += p;
  return JointDistribution(std::move(merged));
}

double shannon_entropy(const Distribution& d) {
  double h = 0.0;
  for (const auto& [_, p] : d.probs()) h -= plogp(p);
  return std::max(0.0, h);
}

double posterior_entropy(const JointDistribution& j) {
  // Group by result; H(i|r) is computed from the normalized slice.
  std::map<Label, std::vector<double>> by_result;
  for (const auto& [k, p] : j.probs()) by_result[k.second].push_back(p);
  double h = 0.0;
  for (const auto& [_, slice] : by_result) {
    double pr = 0.0;
    for (double p : slice) pr += p;
    if (!(pr > 0.0)) continue;
    double hr = 0.0;
    for (double p : slice) hr -= plogp(p / pr);
    h += pr * hr;
  }
  return std::max(0.0, h);
}

double info_gain(const Distribution& prior, const JointDistribution& joint) {
  const Distribution marginal = joint.secret_marginal();
  std::map<Label, double> diff;
  for (const auto& [l, p] : prior.probs()) diff[l] += p;
  for (const auto& [l, p] : marginal.probs()) diff[l] -= p;
  for (const auto& [_, d] : diff)
    if (std::abs(d) > kProbTolerance) throw std::invalid_argument("info_gain: joint marginal does not match prior");
  return shannon_entropy(prior) - posterior_entropy(joint);
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries) : dim_(dim), m_(std::move(entries)) {
  if (m_.size() != dim * dim) throw DimensionError("ComplexMatrix: entry count is not dim*dim");
}

Complex ComplexMatrix::trace() const {
  Complex t{};
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::hermitian_defect() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = r; c < dim_; ++c) worst = std::max(worst, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
  return worst;
}

ComplexMatrix outer(const PureState& s) {
  ComplexMatrix m(s.dim());
  for (std::size_t r = 0; r < s.dim(); ++r)
    for (std::size_t c = 0; c < s.dim(); ++c) m(r, c) = s[r] * std::conj(s[c]);
  return m;
}

namespace {

// Cyclic Jacobi on a real symmetric matrix stored row-major. Returns the
// diagonal once the off-diagonal norm is below the threshold.
std::vector<double> jacobi_symmetric(std::vector<double> a, std::size_t n) {
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (r != c) s += at(r, c) * at(r, c);
    return std::sqrt(s);
  };
  constexpr double kOffThreshold = 1e-13;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() >= kOffThreshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = at(i, i);
  return diag;
}

}  // namespace

std::vector<double> eigvals_hermitian(const ComplexMatrix& m) {
  if (m.hermitian_defect() > kAlgebraTolerance) throw std::invalid_argument("eigvals_hermitian: matrix is not Hermitian");
  const std::size_t d = m.dim();
  const std::size_t n = 2 * d;
  std::vector<double> emb(n * n);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double re = m(r, c).real();
      const double im = m(r, c).imag();
      emb[r * n + c] = re;
      emb[r * n + (c + d)] = -im;
      emb[(r + d) * n + c] = im;
      emb[(r + d) * n + (c + d)] = re;
    }
  }
  std::vector<double> doubled = jacobi_symmetric(std::move(emb), n);
  std::sort(doubled.begin(), doubled.end(), std::greater<>());
  std::vector<double> eig(d);
  for (std::size_t i = 0; i < d; ++i) eig[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
  return eig;
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.dim() != 2 && m_.dim() != 4) throw DimensionError("DensityMatrix: dimension must be 2 or 4");
  for (std::size_t r = 0; r < m_.dim(); ++r)
    for (std::size_t c = 0; c < m_.dim(); ++c)
      if (!std::isfinite(m_(r, c).real()) || !std::isfinite(m_(r, c).imag()))
        throw std::invalid_argument("DensityMatrix: non-finite entry");
  if (m_.hermitian_defect() > kAlgebraTolerance) throw std::invalid_argument("DensityMatrix: not Hermitian");
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > kAlgebraTolerance) throw std::invalid_argument("DensityMatrix: trace is not 1");
  const auto eig = eigvals_hermitian(m_);
  if (eig.back() < -1e-10) throw std::invalid_argument("DensityMatrix: negative eigenvalue");
}

DensityMatrix DensityMatrix::from_pure(const PureState& s) { return DensityMatrix(outer(s)); }

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0 / static_cast<double>(dim);
  return DensityMatrix(std::move(m));
}

std::vector<double> eigvals_hermitian(const DensityMatrix& m) { return eigvals_hermitian(m.matrix()); }

double vn_entropy(const DensityMatrix& m) {
  double h = 0.0;
  for (double lambda : eigvals_hermitian(m)) h -= plogp(std::clamp(lambda, 0.0, 1.0));
  return std::max(0.0, h);
}

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("Ensemble: no members");
  double total = 0.0;
  for (const auto& m : members_) {
    check_probability(m.p);
    total += m.p;
    if (m.rho.dim() != members_.front().rho.dim()) throw DimensionError("Ensemble: members differ in dimension");
  }
  if (std::abs(total - 1.0) > kProbTolerance) throw std::invalid_argument("Ensemble: weights do not sum to 1");
}

Ensemble Ensemble::uniform_pure(std::span<const PureState> states) {
  std::vector<EnsembleMember> members;
  members.reserve(states.size());
  for (const auto& s : states) members.push_back({1.0 / static_cast<double>(states.size()), DensityMatrix::from_pure(s)});
  return Ensemble(std::move(members));
}

DensityMatrix Ensemble::average() const {
  const std::size_t d = members_.front().rho.dim();
  ComplexMatrix avg(d);
  double total = 0.0;
  for (const auto& m : members_) total += m.p;
  for (const auto& m : members_)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) avg(r, c) += (m.p / total) * m.rho.matrix()(r, c);
  return DensityMatrix(std::move(avg));
}

double holevo_chi(const Ensemble& e) {
  double chi = vn_entropy(e.average());
  for (const auto& m : e.members()) chi -= m.p * vn_entropy(m.rho);
  return chi;
}

}  // namespace qdl
