#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qdl/qcore.hpp"
#include "qdl/rng.hpp"

namespace qdl {

enum class ProtocolKind : std::uint8_t { EprQd, DenseKey, SinglePhoton };
inline constexpr std::array<ProtocolKind, 3> kAllProtocols = {ProtocolKind::EprQd, ProtocolKind::DenseKey,
                                                              ProtocolKind::SinglePhoton};

std::string_view to_string(ProtocolKind k);  // "epr-qd", "dense-key", "single-photon"
std::optional<ProtocolKind> protocol_from_string(std::string_view s);

// Bits per party per message-mode round: 2 for EprQd, 1 otherwise.
int message_bits(ProtocolKind k);
// Number of (alice, bob) message pairs: 16, 4, 4.
std::uint32_t secret_space_size(ProtocolKind k);

// Preparation / outcome states for the single-photon protocol.
enum class PhotonState : std::uint8_t { Zero, One, Plus, Minus };
inline constexpr std::array<PhotonState, 4> kAllPhotonStates = {PhotonState::Zero, PhotonState::One,
                                                                PhotonState::Plus, PhotonState::Minus};
std::string_view to_string(PhotonState s);  // "0", "1", "+", "-"
std::optional<PhotonState> photon_state_from_string(std::string_view s);
Basis basis_of(PhotonState s);
int bit_of(PhotonState s);
PhotonState photon_state(Basis basis, int bit);
const PureState& vector_of(PhotonState s);

enum class Mode : std::uint8_t { MM, CM };

struct RoundInput {
  Mode mode = Mode::MM;
  std::uint8_t alice_msg = 0;
  std::uint8_t bob_msg = 0;
  std::optional<PhotonState> prep;

  bool operator==(const RoundInput&) const = default;
};

// Public-channel messages. These are the only values a listener sees.
struct BellResult {
  Bell outcome;
  auto operator<=>(const BellResult&) const = default;
};
struct PhotonResult {
  PhotonState prep;
  PhotonState outcome;
  auto operator<=>(const PhotonResult&) const = default;
};
struct CmResult {
  Qubit who;
  Basis basis;
  int outcome;
  auto operator<=>(const CmResult&) const = default;
};
using Announcement = std::variant<BellResult, PhotonResult, CmResult>;

std::string to_string(const Announcement& a);

// Everything placed on the public classical channel, in order.
class Transcript {
 public:
  void append(const Announcement& a) { entries_.push_back(a); }
  std::span<const Announcement> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool operator==(const Transcript&) const = default;

 private:
  std::vector<Announcement> entries_;
};

struct RoundRecord {
  RoundInput input;
  std::vector<Announcement> announcements;
  std::uint8_t alice_decoded = 0;  // Alice's estimate of bob_msg
  std::uint8_t bob_decoded = 0;    // Bob's estimate of alice_msg
  // Control-mode verdict; empty for message-mode rounds and for control
  // rounds discarded because the bases did not match.
  std::optional<bool> cm_pass;

  bool operator==(const RoundRecord&) const = default;
};

enum class Leg : std::uint8_t { AliceToBob, BobToAlice };

// Hook for anything sitting on the channels. The quantum hook receives the
// full system in transit (a pair whose travelling half is qubit B, or a
// single photon) and returns what arrives at the far end. The classical
// hook sees each announcement as it is published.
class ChannelAdversary {
 public:
  virtual ~ChannelAdversary() = default;
  virtual PureState on_quantum_leg(const PureState& system, Leg leg, Rng& rng) = 0;
  virtual void on_announcement(const Announcement& a) = 0;
};

// Alice-op × Bob-op → announced Bell outcome for the singlet.
class TruthTable {
 public:
  explicit TruthTable(std::array<std::array<Bell, 4>, 4> cells);

  Bell outcome(Pauli alice_op, Pauli bob_op) const {
    return cells_[static_cast<std::size_t>(alice_op)][static_cast<std::size_t>(bob_op)];
  }
  // The unique partner op consistent with `own` and `announced`.
  Pauli partner(Pauli own, Qubit own_role, Bell announced) const;
  const std::array<std::array<Bell, 4>, 4>& cells() const { return cells_; }
  bool operator==(const TruthTable&) const = default;

 private:
  std::array<std::array<Bell, 4>, 4> cells_;  // [alice][bob]
};

// Applies Bob's op to qubit B of the singlet, then Alice's to qubit A, and
// classifies the result against the Bell basis, for all 16 pairs.
TruthTable simulate_truth_table();

// simulate_truth_table(), computed once.
const TruthTable& truth_table();

// Reference table, transcribed cell for cell, for comparison output.
const TruthTable& reference_truth_table();

Pauli decode_epr(Pauli own_op, Bell announced, Qubit role);

RoundRecord run_mm_epr(std::uint8_t alice_msg, std::uint8_t bob_msg, ChannelAdversary* eve, Rng& rng);
RoundRecord run_mm_dense(std::uint8_t alice_bit, std::uint8_t bob_bit, ChannelAdversary* eve, Rng& rng);
RoundRecord run_mm_photon(PhotonState prep, std::uint8_t alice_bit, std::uint8_t bob_bit, ChannelAdversary* eve,
                          Rng& rng);

// Dispatches on kind; `prep` is required for SinglePhoton and ignored
// otherwise.
RoundRecord run_mm(ProtocolKind kind, std::uint8_t alice_msg, std::uint8_t bob_msg, std::optional<PhotonState> prep,
                   ChannelAdversary* eve, Rng& rng);

// Control-mode round. For the pair protocols Bob measures qubit B in a
// random basis and announces (basis, outcome); Alice measures A in the same
// basis and checks anticorrelation. For SinglePhoton Alice prepares a random
// BB84 state, Bob measures in a random basis and announces; the round is
// checked only when the bases agree.
RoundRecord run_cm(ProtocolKind kind, ChannelAdversary* eve, Rng& rng);

// Fraction of checked control rounds that passed. Throws
// std::invalid_argument when no record carries a verdict.
double estimate_fidelity(std::span<const RoundRecord> cm_records);

Transcript transcript_of(std::span<const RoundRecord> records);

std::string bits_to_string(std::uint32_t value, int width);

}  // namespace qdl
