#include "qdl/protocols.hpp"

#include <stdexcept>

namespace qdl {

std::string_view to_string(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::EprQd: return "epr-qd";
    case ProtocolKind::DenseKey: return "dense-key";
    case ProtocolKind::SinglePhoton: return "single-photon";
  }
  return "?";
}

std::optional<ProtocolKind> protocol_from_string(std::string_view s) {
  for (ProtocolKind k : kAllProtocols)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

int message_bits(ProtocolKind k) { return k == ProtocolKind::EprQd ? 2 : 1; }

std::uint32_t secret_space_size(ProtocolKind k) {
  const std::uint32_t per_party = 1u << message_bits(k);
  return per_party * per_party;
}

std::string_view to_string(PhotonState s) {
  switch (s) {
    case PhotonState::Zero: return "0";
    case PhotonState::One: return "1";
    case PhotonState::Plus: return "+";
    case PhotonState::Minus: return "-";
  }
  return "?";
}

std::optional<PhotonState> photon_state_from_string(std::string_view s) {
  for (PhotonState p : kAllPhotonStates)
    if (to_string(p) == s) return p;
  return std::nullopt;
}

Basis basis_of(PhotonState s) { return s == PhotonState::Zero || s == PhotonState::One ? Basis::Z : Basis::X; }

int bit_of(PhotonState s) { return s == PhotonState::One || s == PhotonState::Minus ? 1 : 0; }

PhotonState photon_state(Basis basis, int bit) {
  if (basis == Basis::Z) return bit ? PhotonState::One : PhotonState::Zero;
  return bit ? PhotonState::Minus : PhotonState::Plus;
}

const PureState& vector_of(PhotonState s) { return basis_state(basis_of(s), bit_of(s)); }

std::string to_string(const Announcement& a) {
  struct Visitor {
    std::string operator()(const BellResult& r) const { return std::string(to_string(r.outcome)); }
    std::string operator()(const PhotonResult& r) const {
      return "prep=" + std::string(to_string(r.prep)) + ";out=" + std::string(to_string(r.outcome));
    }
    std::string operator()(const CmResult& r) const {
      return std::string(r.who == Qubit::A ? "A" : "B") + ":" + std::string(to_string(r.basis)) + "=" +
             std::to_string(r.outcome);
    }
  };
  return std::visit(Visitor{}, a);
}

std::string bits_to_string(std::uint32_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i)
    if ((value >> (width - 1 - i)) & 1u) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

TruthTable::TruthTable(std::array<std::array<Bell, 4>, 4> cells) : cells_(cells) {
  std::array<int, 4> seen{};
  for (const auto& row : cells_)
    for (Bell b : row) ++seen[static_cast<std::size_t>(b)];
  for (int n : seen)
    if (n != 4) throw std::invalid_argument("TruthTable: every outcome must appear exactly four times");
  for (std::size_t fixed = 0; fixed < 4; ++fixed) {
    std::array<bool, 4> by_alice{}, by_bob{};
    for (std::size_t other = 0; other < 4; ++other) {
      by_alice[static_cast<std::size_t>(cells_[other][fixed])] = true;
      by_bob[static_cast<std::size_t>(cells_[fixed][other])] = true;
    }
    for (std::size_t k = 0; k < 4; ++k)
      if (!by_alice[k] || !by_bob[k]) throw std::invalid_argument("TruthTable: partner map is not a bijection");
  }
}

Pauli TruthTable::partner(Pauli own, Qubit own_role, Bell announced) const {
  for (Pauli other : kAllPaulis) {
    const Bell b = own_role == Qubit::A ? outcome(own, other) : outcome(other, own);
    if (b == announced) return other;
  }
  throw std::logic_error("TruthTable::partner: no consistent partner");
}

TruthTable simulate_truth_table() {
  std::array<std::array<Bell, 4>, 4> cells{};
  for (Pauli a : kAllPaulis) {
    for (Pauli b : kAllPaulis) {
      const PureState s = apply_on_qubit(a, Qubit::A, apply_on_qubit(b, Qubit::B, singlet()));
      const auto kind = classify_bell(s);
      if (!kind) throw std::logic_error("truth_table: encoded state is not a Bell state");
      cells[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = *kind;
    }
  }
  return TruthTable(cells);
}

const TruthTable& truth_table() {
  static const TruthTable kTable = simulate_truth_table();
  return kTable;
}

const TruthTable& reference_truth_table() {
  using enum Bell;
  // Rows: Alice σ00..σ11; columns: Bob σ00..σ11.
  static const TruthTable kTable({{
      {PsiMinus, PhiMinus, PhiPlus, PsiPlus},
      {PhiMinus, PsiMinus, PsiPlus, PhiPlus},
      {PhiPlus, PsiPlus, PsiMinus, PhiMinus},
      {PsiPlus, PhiPlus, PhiMinus, PsiMinus},
  }});
  return kTable;
}

Pauli decode_epr(Pauli own_op, Bell announced, Qubit role) { return truth_table().partner(own_op, role, announced); }

namespace {

PureState transit(ChannelAdversary* eve, const PureState& system, Leg leg, Rng& rng) {
  return eve ? eve->on_quantum_leg(system, leg, rng) : system;
}

void publish(ChannelAdversary* eve, RoundRecord& rec, const Announcement& a) {
  rec.announcements.push_back(a);
  if (eve) eve->on_announcement(a);
}

void check_bit(std::uint8_t b) {
  if (b > 1) throw std::invalid_argument("message bit must be 0 or 1");
}

// Pair flow shared by EprQd and DenseKey: singlet out, Bob encodes, back,
// Alice encodes and Bell-measures.
Bell pair_round(Pauli alice_op, Pauli bob_op, ChannelAdversary* eve, Rng& rng) {
  PureState state = transit(eve, singlet(), Leg::AliceToBob, rng);
  state = apply_on_qubit(bob_op, Qubit::B, state);
  state = transit(eve, state, Leg::BobToAlice, rng);
  state = apply_on_qubit(alice_op, Qubit::A, state);
  return bell_measure(state, rng);
}

constexpr Pauli dense_op(std::uint8_t bit) { return bit ? Pauli::S01 : Pauli::S00; }
constexpr Pauli photon_op(std::uint8_t bit) { return bit ? Pauli::S10 : Pauli::S00; }

}  // namespace

RoundRecord run_mm_epr(std::uint8_t alice_msg, std::uint8_t bob_msg, ChannelAdversary* eve, Rng& rng) {
  const Pauli alice_op = pauli_from_message(alice_msg);
  const Pauli bob_op = pauli_from_message(bob_msg);
  RoundRecord rec;
  rec.input = {Mode::MM, alice_msg, bob_msg, std::nullopt};
  const Bell outcome = pair_round(alice_op, bob_op, eve, rng);
  publish(eve, rec, BellResult{outcome});
  rec.alice_decoded = message_of(decode_epr(alice_op, outcome, Qubit::A));
  rec.bob_decoded = message_of(decode_epr(bob_op, outcome, Qubit::B));
  return rec;
}

RoundRecord run_mm_dense(std::uint8_t alice_bit, std::uint8_t bob_bit, ChannelAdversary* eve, Rng& rng) {
  check_bit(alice_bit);
  check_bit(bob_bit);
  RoundRecord rec;
  rec.input = {Mode::MM, alice_bit, bob_bit, std::nullopt};
  const Bell outcome = pair_round(dense_op(alice_bit), dense_op(bob_bit), eve, rng);
  publish(eve, rec, BellResult{outcome});
  const std::uint8_t parity = outcome != Bell::PsiMinus ? 1 : 0;
  rec.alice_decoded = alice_bit ^ parity;
  rec.bob_decoded = bob_bit ^ parity;
  return rec;
}

RoundRecord run_mm_photon(PhotonState prep, std::uint8_t alice_bit, std::uint8_t bob_bit, ChannelAdversary* eve,
                          Rng& rng) {
  if (static_cast<std::size_t>(prep) >= kAllPhotonStates.size())
    throw std::invalid_argument("run_mm_photon: invalid preparation label");
  check_bit(alice_bit);
  check_bit(bob_bit);
  RoundRecord rec;
  rec.input = {Mode::MM, alice_bit, bob_bit, prep};
  PureState photon = transit(eve, vector_of(prep), Leg::AliceToBob, rng);
  photon = apply(photon_op(bob_bit), photon);
  photon = transit(eve, photon, Leg::BobToAlice, rng);
  photon = apply(photon_op(alice_bit), photon);
  const SingleOutcome m = measure_in_basis(photon, basis_of(prep), rng);
  const PhotonState outcome = photon_state(basis_of(prep), m.bit);
  publish(eve, rec, PhotonResult{prep, outcome});
  const std::uint8_t flipped = outcome != prep ? 1 : 0;
  rec.alice_decoded = alice_bit ^ flipped;
  rec.bob_decoded = bob_bit ^ flipped;
  return rec;
}

RoundRecord run_mm(ProtocolKind kind, std::uint8_t alice_msg, std::uint8_t bob_msg, std::optional<PhotonState> prep,
                   ChannelAdversary* eve, Rng& rng) {
  switch (kind) {
    case ProtocolKind::EprQd: return run_mm_epr(alice_msg, bob_msg, eve, rng);
    case ProtocolKind::DenseKey: return run_mm_dense(alice_msg, bob_msg, eve, rng);
    case ProtocolKind::SinglePhoton:
      if (!prep) throw std::invalid_argument("run_mm: single-photon rounds need a preparation state");
      return run_mm_photon(*prep, alice_msg, bob_msg, eve, rng);
  }
  throw std::invalid_argument("run_mm: unknown protocol");
}

RoundRecord run_cm(ProtocolKind kind, ChannelAdversary* eve, Rng& rng) {
  RoundRecord rec;
  rec.input.mode = Mode::CM;
  if (kind == ProtocolKind::SinglePhoton) {
    const PhotonState prep = kAllPhotonStates[rng.below(4)];
    rec.input.prep = prep;
    const PureState photon = transit(eve, vector_of(prep), Leg::AliceToBob, rng);
    const Basis basis = rng.bit() ? Basis::X : Basis::Z;
    const SingleOutcome m = measure_in_basis(photon, basis, rng);
    publish(eve, rec, CmResult{Qubit::B, basis, m.bit});
    if (basis == basis_of(prep)) rec.cm_pass = m.bit == bit_of(prep);
    return rec;
  }
  const PureState pair = transit(eve, singlet(), Leg::AliceToBob, rng);
  const Basis basis = rng.bit() ? Basis::X : Basis::Z;
  const PairOutcome bob = measure_one_of_pair(pair, Qubit::B, basis, rng);
  publish(eve, rec, CmResult{Qubit::B, basis, bob.bit});
  const SingleOutcome alice = measure_in_basis(bob.remainder, basis, rng);
  rec.cm_pass = alice.bit != bob.bit;
  return rec;
}

double estimate_fidelity(std::span<const RoundRecord> cm_records) {
  std::size_t checked = 0;
  std::size_t passed = 0;
  for (const auto& r : cm_records) {
    if (!r.cm_pass) continue;
    ++checked;
    if (*r.cm_pass) ++passed;
  }
  if (checked == 0) throw std::invalid_argument("estimate_fidelity: no checked control-mode records");
  return static_cast<double>(passed) / static_cast<double>(checked);
}

Transcript transcript_of(std::span<const RoundRecord> records) {
  Transcript t;
  for (const auto& r : records)
    for (const auto& a : r.announcements) t.append(a);
  return t;
}

}  // namespace qdl
