#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qdl/qcore.hpp"

using namespace qdl;

namespace {

constexpr double kS = 1.0 / std::numbers::sqrt2;

// Test-side Kronecker product, independent of apply_on_qubit.
std::array<std::array<Complex, 4>, 4> kron(const Matrix2& x, const Matrix2& y) {
  std::array<std::array<Complex, 4>, 4> k{};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d) k[2 * a + c][2 * b + d] = x[a][b] * y[c][d];
  return k;
}

std::array<Complex, 4> matvec(const std::array<std::array<Complex, 4>, 4>& m, const PureState& v) {
  std::array<Complex, 4> out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[r] += m[r][c] * v[c];
  return out;
}

const Matrix2 kIdentity = {{{1.0, 0.0}, {0.0, 1.0}}};

PureState random_pair(Rng& rng) {
  std::array<Complex, 4> v{};
  for (auto& a : v) a = {rng.uniform01() - 0.5, rng.uniform01() - 0.5};
  return PureState::normalized(v);
}

bool same_matrix(const Matrix2& a, const Matrix2& b) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (std::abs(a[r][c] - b[r][c]) > 1e-15) return false;
  return true;
}

}  // namespace

TEST_CASE("pauli matrices follow the fixed label mapping") {
  CHECK(same_matrix(pauli_matrix(Pauli::S00), {{{1.0, 0.0}, {0.0, 1.0}}}));
  CHECK(same_matrix(pauli_matrix(Pauli::S01), {{{0.0, 1.0}, {1.0, 0.0}}}));
  CHECK(same_matrix(pauli_matrix(Pauli::S10), {{{0.0, 1.0}, {-1.0, 0.0}}}));
  CHECK(same_matrix(pauli_matrix(Pauli::S11), {{{1.0, 0.0}, {0.0, -1.0}}}));
}

TEST_CASE("every encoding matrix is unitary") {
  for (Pauli p : kAllPaulis) {
    const Matrix2& u = pauli_matrix(p);
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        Complex acc{};
        for (int k = 0; k < 2; ++k) acc += std::conj(u[k][r]) * u[k][c];
        CHECK(std::abs(acc - Complex(r == c ? 1.0 : 0.0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("message bijection") {
  for (std::uint8_t m = 0; m < 4; ++m) CHECK(message_of(pauli_from_message(m)) == m);
  CHECK_THROWS_AS(pauli_from_message(4), std::invalid_argument);
}

TEST_CASE("bell vectors are orthonormal") {
  for (Bell a : kAllBells)
    for (Bell b : kAllBells) CHECK(std::abs(inner(bell_state(a), bell_state(b)) - Complex(a == b ? 1.0 : 0.0)) < 1e-15);
}

TEST_CASE("apply_on_qubit examples") {
  CHECK(equal_up_to_phase(apply_on_qubit(Pauli::S00, Qubit::A, singlet()), singlet()));
  CHECK(equal_up_to_phase(apply_on_qubit(Pauli::S11, Qubit::A, singlet()), bell_state(Bell::PsiPlus)));
  CHECK(equal_up_to_phase(apply_on_qubit(Pauli::S01, Qubit::B, singlet()), bell_state(Bell::PhiMinus)));
  CHECK_THROWS_AS(apply_on_qubit(Pauli::S01, Qubit::A, basis_state(Basis::Z, 0)), DimensionError);
}

TEST_CASE("apply_on_qubit agrees with explicit Kronecker products") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const PureState s = random_pair(rng);
    for (Pauli p : kAllPaulis) {
      const auto on_a = matvec(kron(pauli_matrix(p), kIdentity), s);
      const auto on_b = matvec(kron(kIdentity, pauli_matrix(p)), s);
      const PureState ra = apply_on_qubit(p, Qubit::A, s);
      const PureState rb = apply_on_qubit(p, Qubit::B, s);
      for (std::size_t i = 0; i < 4; ++i) {
        CHECK(std::abs(ra[i] - on_a[i]) < 1e-14);
        CHECK(std::abs(rb[i] - on_b[i]) < 1e-14);
      }
      CHECK(std::abs(ra.norm() - 1.0) < 1e-12);
      CHECK(std::abs(rb.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("bell_measure is deterministic on Bell states and their phase multiples") {
  const std::array<Complex, 4> phases = {Complex{1, 0}, Complex{-1, 0}, Complex{0, 1}, std::polar(1.0, 0.37)};
  for (Bell b : kAllBells) {
    for (Complex ph : phases) {
      std::array<Complex, 4> v{};
      for (std::size_t i = 0; i < 4; ++i) v[i] = ph * bell_state(b)[i];
      const PureState s(v);
      const auto probs = bell_probabilities(s);
      CHECK(probs[static_cast<std::size_t>(b)] == doctest::Approx(1.0).epsilon(1e-12));
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        CHECK(bell_measure(s, rng) == b);
      }
    }
  }
}

TEST_CASE("bell_measure after S01 on both qubits returns PsiMinus") {
  const PureState s = apply_on_qubit(Pauli::S01, Qubit::B, apply_on_qubit(Pauli::S01, Qubit::A, singlet()));
  Rng rng(3);
  CHECK(bell_measure(s, rng) == Bell::PsiMinus);
}

TEST_CASE("bell probabilities of (|00>+|01>)/sqrt2 are uniform") {
  // |00> = (Φ+ + Φ-)/√2, |01> = (Ψ+ + Ψ-)/√2, so each Bell weight is 1/4.
  const PureState s{kS, kS, 0.0, 0.0};
  for (double p : bell_probabilities(s)) CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
  std::array<int, 4> hits{};
  for (std::uint64_t seed = 0; seed < 8000; ++seed) {
    Rng rng(seed);
    ++hits[static_cast<std::size_t>(bell_measure(s, rng))];
  }
  for (int h : hits) CHECK(std::abs(h / 8000.0 - 0.25) < 0.02);
}

TEST_CASE("bell completeness on random states") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto probs = bell_probabilities(random_pair(rng));
    CHECK(std::abs(probs[0] + probs[1] + probs[2] + probs[3] - 1.0) < 1e-12);
  }
}

TEST_CASE("any two encodings applied to the singlet give a Bell state") {
  for (Pauli a : kAllPaulis)
    for (Pauli b : kAllPaulis) {
      const PureState s = apply_on_qubit(b, Qubit::A, apply_on_qubit(a, Qubit::B, singlet()));
      CHECK(classify_bell(s).has_value());
    }
}

TEST_CASE("measure_in_basis examples") {
  const PureState zero = basis_state(Basis::Z, 0);
  const PureState plus = basis_state(Basis::X, 0);
  int ones = 0;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    Rng rng(seed);
    const auto z0 = measure_in_basis(zero, Basis::Z, rng);
    CHECK(z0.bit == 0);
    CHECK(equal_up_to_phase(z0.state, zero));
    const auto xp = measure_in_basis(plus, Basis::X, rng);
    CHECK(xp.bit == 0);
    const auto zp = measure_in_basis(plus, Basis::Z, rng);
    CHECK(equal_up_to_phase(zp.state, basis_state(Basis::Z, zp.bit)));
    ones += zp.bit;
  }
  CHECK(std::abs(ones / 4000.0 - 0.5) < 0.03);
  Rng rng(0);
  CHECK_THROWS_AS(measure_in_basis(singlet(), Basis::Z, rng), DimensionError);
}

TEST_CASE("measure_one_of_pair on the singlet is anticorrelated in Z and X") {
  for (Basis basis : {Basis::Z, Basis::X}) {
    int zeros = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      Rng rng(seed);
      const auto m = measure_one_of_pair(singlet(), Qubit::B, basis, rng);
      CHECK(equal_up_to_phase(m.remainder, basis_state(basis, 1 - m.bit)));
      zeros += m.bit == 0;
    }
    CHECK(std::abs(zeros / 2000.0 - 0.5) < 0.04);
    CHECK(outcome_probability(singlet(), Qubit::B, basis, 0) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("measure_one_of_pair on a product state") {
  const PureState s01{0.0, 1.0, 0.0, 0.0};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const auto m = measure_one_of_pair(s01, Qubit::A, Basis::Z, rng);
    CHECK(m.bit == 0);
    CHECK(equal_up_to_phase(m.remainder, basis_state(Basis::Z, 1)));
  }
}

TEST_CASE("equal_up_to_phase") {
  const PureState minus_singlet{0.0, -kS, kS, 0.0};
  CHECK(equal_up_to_phase(singlet(), minus_singlet));
  CHECK_FALSE(equal_up_to_phase(singlet(), bell_state(Bell::PsiPlus)));
  const PureState i_plus{Complex(0, kS), Complex(0, kS)};
  CHECK(equal_up_to_phase(basis_state(Basis::X, 0), i_plus));
  CHECK_THROWS_AS(equal_up_to_phase(singlet(), i_plus), DimensionError);
}

TEST_CASE("PureState validation") {
  CHECK_THROWS_AS((PureState{1.0, 0.0, 0.0}), DimensionError);
  CHECK_THROWS_AS((PureState{1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS((PureState{std::nan(""), 1.0}), std::invalid_argument);
  CHECK_THROWS_AS((PureState{INFINITY, 0.0}), std::invalid_argument);
  CHECK_NOTHROW((PureState{1.0, 1e-10}));
}

TEST_CASE("seeded generators reproduce outcome sequences") {
  const PureState s{kS, kS, 0.0, 0.0};
  for (std::uint64_t seed : {0ull, 1ull, 0xdeadbeefull}) {
    Rng a = Rng::for_round(seed, 5);
    Rng b = Rng::for_round(seed, 5);
    for (int i = 0; i < 100; ++i) CHECK(bell_measure(s, a) == bell_measure(s, b));
  }
  Rng x = Rng::for_round(1, 0);
  Rng y = Rng::for_round(1, 1);
  CHECK(x.next_u64() != y.next_u64());
}
