#include "qdl/qcore.hpp"

#include <cmath>
#include <numbers>

namespace qdl {
namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

constexpr std::size_t index2(int a, int b) { return static_cast<std::size_t>(2 * a + b); }

// Samples an index from a probability vector, never returning a zero-weight
// entry.
template <std::size_t N>
std::size_t sample(const std::array<double, N>& probs, Rng& rng) {
  double total = 0.0;
  for (double p : probs) total += p;
  const double u = rng.uniform01() * total;
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t k = 0; k < N; ++k) {
    if (probs[k] <= 0.0) continue;
    last_nonzero = k;
    acc += probs[k];
    if (u < acc) return k;
  }
  return last_nonzero;
}

}  // namespace

std::string_view to_string(Pauli p) {
  switch (p) {
    case Pauli::S00: return "s00";
    case Pauli::S01: return "s01";
    case Pauli::S10: return "s10";
    case Pauli::S11: return "s11";
  }
  return "?";
}

std::string_view to_symbol(Pauli p) {
  switch (p) {
    case Pauli::S00: return "σ00";
    case Pauli::S01: return "σ01";
    case Pauli::S10: return "σ10";
    case Pauli::S11: return "σ11";
  }
  return "?";
}

std::string_view to_string(Bell b) {
  switch (b) {
    case Bell::PsiMinus: return "psi-";
    case Bell::PsiPlus: return "psi+";
    case Bell::PhiMinus: return "phi-";
    case Bell::PhiPlus: return "phi+";
  }
  return "?";
}

std::string_view to_symbol(Bell b) {
  switch (b) {
    case Bell::PsiMinus: return "Ψ−";
    case Bell::PsiPlus: return "Ψ+";
    case Bell::PhiMinus: return "Φ−";
    case Bell::PhiPlus: return "Φ+";
  }
  return "?";
}

std::string_view to_string(Basis b) { return b == Basis::Z ? "Z" : "X"; }

std::optional<Bell> bell_from_string(std::string_view s) {
  for (Bell b : kAllBells)
    if (to_string(b) == s) return b;
  return std::nullopt;
}

PureState::PureState(std::span<const Complex> amps) {
  if (amps.size() == 2) {
    num_qubits_ = 1;
  } else if (amps.size() == 4) {
    num_qubits_ = 2;
  } else {
    throw DimensionError("PureState: expected 2 or 4 amplitudes");
  }
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (!std::isfinite(amps[i].real()) || !std::isfinite(amps[i].imag()))
      throw std::invalid_argument("PureState: non-finite amplitude");
    amps_[i] = amps[i];
  }
  if (std::abs(norm() - 1.0) > kNormTolerance)
    throw std::invalid_argument("PureState: amplitudes are not normalized");
}

PureState PureState::normalized(std::span<const Complex> amps) {
  if (amps.size() != 2 && amps.size() != 4) throw DimensionError("PureState: expected 2 or 4 amplitudes");
  double n2 = 0.0;
  for (const Complex& a : amps) n2 += std::norm(a);
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw std::invalid_argument("PureState: zero or non-finite vector");
  const double scale = 1.0 / std::sqrt(n2);
  std::array<Complex, 4> tmp{};
  for (std::size_t i = 0; i < amps.size(); ++i) tmp[i] = amps[i] * scale;
  return PureState(std::span<const Complex>(tmp.data(), amps.size()));
}

double PureState::norm() const {
  double n2 = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) n2 += std::norm(amps_[i]);
  return std::sqrt(n2);
}

const Matrix2& pauli_matrix(Pauli label) {
  static const std::array<Matrix2, 4> kMatrices = {{
      {{{1.0, 0.0}, {0.0, 1.0}}},
      {{{0.0, 1.0}, {1.0, 0.0}}},
      {{{0.0, 1.0}, {-1.0, 0.0}}},
      {{{1.0, 0.0}, {0.0, -1.0}}},
  }};
  return kMatrices[static_cast<std::size_t>(label)];
}

PureState apply(const Matrix2& u, const PureState& one_qubit) {
  if (one_qubit.num_qubits() != 1) throw DimensionError("apply: expected a 1-qubit state");
  const std::array<Complex, 2> out = {u[0][0] * one_qubit[0] + u[0][1] * one_qubit[1],
                                      u[1][0] * one_qubit[0] + u[1][1] * one_qubit[1]};
  return PureState(out);
}

PureState apply(Pauli op, const PureState& one_qubit) { return apply(pauli_matrix(op), one_qubit); }

PureState apply_on_qubit(const Matrix2& u, Qubit which, const PureState& pair) {
  if (pair.num_qubits() != 2) throw DimensionError("apply_on_qubit: expected a 2-qubit state");
  std::array<Complex, 4> out{};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Complex acc{};
      for (int k = 0; k < 2; ++k) {
        acc += which == Qubit::A ? u[a][k] * pair[index2(k, b)] : u[b][k] * pair[index2(a, k)];
      }
      out[index2(a, b)] = acc;
    }
  }
  return PureState(out);
}

PureState apply_on_qubit(Pauli op, Qubit which, const PureState& pair) {
  return apply_on_qubit(pauli_matrix(op), which, pair);
}

PureState tensor(const PureState& a, const PureState& b) {
  if (a.num_qubits() != 1 || b.num_qubits() != 1) throw DimensionError("tensor: expected two 1-qubit states");
  const std::array<Complex, 4> out = {a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
  return PureState(out);
}

Complex inner(const PureState& bra, const PureState& ket) {
  if (bra.num_qubits() != ket.num_qubits()) throw DimensionError("inner: dimension mismatch");
  Complex acc{};
  for (std::size_t i = 0; i < bra.dim(); ++i) acc += std::conj(bra[i]) * ket[i];
  return acc;
}

const PureState& bell_state(Bell kind) {
  static const std::array<PureState, 4> kBell = {
      PureState{0.0, kInvSqrt2, -kInvSqrt2, 0.0},
      PureState{0.0, kInvSqrt2, kInvSqrt2, 0.0},
      PureState{kInvSqrt2, 0.0, 0.0, -kInvSqrt2},
      PureState{kInvSqrt2, 0.0, 0.0, kInvSqrt2},
  };
  return kBell[static_cast<std::size_t>(kind)];
}

const PureState& singlet() { return bell_state(Bell::PsiMinus); }

const PureState& basis_state(Basis basis, int bit) {
  static const std::array<PureState, 4> kStates = {
      PureState{1.0, 0.0},
      PureState{0.0, 1.0},
      PureState{kInvSqrt2, kInvSqrt2},
      PureState{kInvSqrt2, -kInvSqrt2},
  };
  if (bit != 0 && bit != 1) throw std::invalid_argument("basis_state: bit must be 0 or 1");
  return kStates[(basis == Basis::X ? 2 : 0) + static_cast<std::size_t>(bit)];
}

bool equal_up_to_phase(const PureState& a, const PureState& b) {
  return std::abs(inner(a, b)) > 1.0 - kPhaseTolerance;
}

std::array<double, 4> bell_probabilities(const PureState& pair) {
  if (pair.num_qubits() != 2) throw DimensionError("bell_probabilities: expected a 2-qubit state");
  std::array<double, 4> probs{};
  for (Bell b : kAllBells) probs[static_cast<std::size_t>(b)] = std::norm(inner(bell_state(b), pair));
  return probs;
}

std::optional<Bell> classify_bell(const PureState& pair) {
  for (Bell b : kAllBells)
    if (equal_up_to_phase(bell_state(b), pair)) return b;
  return std::nullopt;
}

Bell bell_measure(const PureState& pair, Rng& rng) {
  // A Bell eigenstate is resolved without touching the generator.
  if (auto exact = classify_bell(pair)) return *exact;
  return kAllBells[sample(bell_probabilities(pair), rng)];
}

SingleOutcome measure_in_basis(const PureState& one_qubit, Basis basis, Rng& rng) {
  if (one_qubit.num_qubits() != 1) throw DimensionError("measure_in_basis: expected a 1-qubit state");
  const std::array<double, 2> probs = {std::norm(inner(basis_state(basis, 0), one_qubit)),
                                       std::norm(inner(basis_state(basis, 1), one_qubit))};
  const int bit = static_cast<int>(sample(probs, rng));
  return {bit, basis_state(basis, bit)};
}

namespace {

std::array<Complex, 2> project_out(const PureState& pair, Qubit which, Basis basis, int bit) {
  const PureState& e = basis_state(basis, bit);
  std::array<Complex, 2> rest{};
  for (int other = 0; other < 2; ++other) {
    for (int k = 0; k < 2; ++k) {
      const std::size_t idx = which == Qubit::A ? index2(k, other) : index2(other, k);
      rest[static_cast<std::size_t>(other)] += std::conj(e[static_cast<std::size_t>(k)]) * pair[idx];
    }
  }
  return rest;
}

}  // namespace

double outcome_probability(const PureState& pair, Qubit which, Basis basis, int bit) {
  if (pair.num_qubits() != 2) throw DimensionError("outcome_probability: expected a 2-qubit state");
  const auto rest = project_out(pair, which, basis, bit);
  return std::norm(rest[0]) + std::norm(rest[1]);
}

PairOutcome measure_one_of_pair(const PureState& pair, Qubit which, Basis basis, Rng& rng) {
  if (pair.num_qubits() != 2) throw DimensionError("measure_one_of_pair: expected a 2-qubit state");
  const std::array<double, 2> probs = {outcome_probability(pair, which, basis, 0),
                                       outcome_probability(pair, which, basis, 1)};
  const int bit = static_cast<int>(sample(probs, rng));
  const auto rest = project_out(pair, which, basis, bit);
  return {bit, PureState::normalized(rest)};
}

}  // namespace qdl
