#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qdl/rng.hpp"

namespace qdl {

using Complex = std::complex<double>;
using Matrix2 = std::array<std::array<Complex, 2>, 2>;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kAlgebraTolerance = 1e-12;
inline constexpr double kPhaseTolerance = 1e-9;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Encoding operations. The message value of a label is its enumerator value,
// so S10 encodes the bit string "10".
enum class Pauli : std::uint8_t { S00 = 0, S01 = 1, S10 = 2, S11 = 3 };
inline constexpr std::array<Pauli, 4> kAllPaulis = {Pauli::S00, Pauli::S01, Pauli::S10, Pauli::S11};

enum class Qubit : std::uint8_t { A, B };

enum class Bell : std::uint8_t { PsiMinus = 0, PsiPlus = 1, PhiMinus = 2, PhiPlus = 3 };
inline constexpr std::array<Bell, 4> kAllBells = {Bell::PsiMinus, Bell::PsiPlus, Bell::PhiMinus,
                                                  Bell::PhiPlus};

enum class Basis : std::uint8_t { Z, X };

inline Pauli pauli_from_message(std::uint8_t msg) {
  if (msg > 3) throw std::invalid_argument("message out of range for a Pauli label");
  return static_cast<Pauli>(msg);
}
inline std::uint8_t message_of(Pauli p) { return static_cast<std::uint8_t>(p); }

std::string_view to_string(Pauli p);   // "s00" ...
std::string_view to_string(Bell b);    // "psi-" ...
std::string_view to_string(Basis b);   // "Z" / "X"
std::string_view to_symbol(Pauli p);   // "σ00"
std::string_view to_symbol(Bell b);    // "Ψ−"
std::optional<Bell> bell_from_string(std::string_view s);

// Normalized state of one or two qubits. Amplitudes are in computational
// order with the last qubit varying fastest: |00>,|01>,|10>,|11>, qubit A
// first.
class PureState {
 public:
  // Throws DimensionError for a length other than 2 or 4 and
  // std::invalid_argument for non-finite or non-normalized amplitudes.
  explicit PureState(std::span<const Complex> amps);
  PureState(std::initializer_list<Complex> amps)
      : PureState(std::span<const Complex>(amps.begin(), amps.size())) {}

  // Rescales to unit norm before validating. Zero vectors are rejected.
  static PureState normalized(std::span<const Complex> amps);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return std::size_t{1} << num_qubits_; }
  std::span<const Complex> amplitudes() const { return {amps_.data(), dim()}; }
  Complex operator[](std::size_t i) const { return amps_[i]; }
  double norm() const;

 private:
  PureState() = default;
  int num_qubits_ = 0;
  std::array<Complex, 4> amps_{};
};

// Fixed assignment S00=I, S01=σx, S10=iσy, S11=σz.
const Matrix2& pauli_matrix(Pauli label);

PureState apply(const Matrix2& u, const PureState& one_qubit);
PureState apply(Pauli op, const PureState& one_qubit);
PureState apply_on_qubit(Pauli op, Qubit which, const PureState& pair);
PureState apply_on_qubit(const Matrix2& u, Qubit which, const PureState& pair);

PureState tensor(const PureState& a, const PureState& b);
Complex inner(const PureState& bra, const PureState& ket);

// Ψ∓ = (|01>∓|10>)/√2, Φ∓ = (|00>∓|11>)/√2.
const PureState& bell_state(Bell kind);
const PureState& singlet();

// Eigenvector of the basis for the given bit: Z → |0>,|1>; X → |+>,|−>.
const PureState& basis_state(Basis basis, int bit);

bool equal_up_to_phase(const PureState& a, const PureState& b);

// |<Bell_k|state>|^2 for k in kAllBells order.
std::array<double, 4> bell_probabilities(const PureState& pair);

// The Bell state equal to `pair` up to a global phase, if any.
std::optional<Bell> classify_bell(const PureState& pair);

Bell bell_measure(const PureState& pair, Rng& rng);

struct SingleOutcome {
  int bit;
  PureState state;
};

SingleOutcome measure_in_basis(const PureState& one_qubit, Basis basis, Rng& rng);

struct PairOutcome {
  int bit;
  PureState remainder;  // the unmeasured qubit, renormalized
};

// Probability that measuring `which` in `basis` yields `bit`.
double outcome_probability(const PureState& pair, Qubit which, Basis basis, int bit);

PairOutcome measure_one_of_pair(const PureState& pair, Qubit which, Basis basis, Rng& rng);

}  // namespace qdl
