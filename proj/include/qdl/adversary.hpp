#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "qdl/infotheory.hpp"
#include "qdl/protocols.hpp"

namespace qdl {

enum class EveModel : std::uint8_t { None, PassiveListener, InterceptResend };

std::string_view to_string(EveModel m);  // "none", "passive", "intercept-resend"
std::optional<EveModel> eve_model_from_string(std::string_view s);

// Reads the classical channel; never touches the quantum system or the
// round's generator.
class PassiveListener : public ChannelAdversary {
 public:
  PureState on_quantum_leg(const PureState& system, Leg, Rng&) override { return system; }
  void on_announcement(const Announcement& a) override { transcript_.append(a); }
  const Transcript& transcript() const { return transcript_; }

 private:
  Transcript transcript_;
};

// Measures every travelling qubit in a uniformly random basis (Z or X) and
// forwards the collapsed eigenstate. Also listens to the classical channel.
class InterceptResend : public ChannelAdversary {
 public:
  PureState on_quantum_leg(const PureState& system, Leg leg, Rng& rng) override;
  void on_announcement(const Announcement& a) override { transcript_.append(a); }
  const Transcript& transcript() const { return transcript_; }

 private:
  Transcript transcript_;
};

// Null for EveModel::None.
std::unique_ptr<ChannelAdversary> make_adversary(EveModel m);

// 1-qubit payload: random-basis measurement, collapsed eigenstate out.
PureState intercept_resend(const PureState& leg_state, Rng& rng);
// Same attack on qubit B of a pair; the result is a product state.
PureState intercept_resend_pair(const PureState& pair, Rng& rng);

// Secret pairs are labelled alice * 2^bits + bob.
struct SecretPair {
  std::uint8_t alice;
  std::uint8_t bob;
  auto operator<=>(const SecretPair&) const = default;
};
Label secret_label(ProtocolKind k, SecretPair s);
SecretPair secret_from_label(ProtocolKind k, Label l);
std::string to_string(ProtocolKind k, SecretPair s);  // "01|11"

// Announcement → conditional distribution of the secret pair.
struct PosteriorTable {
  ProtocolKind kind;
  std::map<Announcement, Distribution> rows;
};

enum class LeakageMethod : std::uint8_t { Exact, MonteCarlo };

struct LeakageReport {
  ProtocolKind protocol;
  double h_prior_bits = 0.0;
  double h_posterior_bits = 0.0;
  double i_abe_bits = 0.0;
  double holevo_chi_bits = 0.0;
  double claimed_bits_per_run = 0.0;
  bool holevo_violation = false;
  PosteriorTable posterior;
  LeakageMethod method = LeakageMethod::Exact;
  std::optional<std::uint64_t> rounds;
  std::optional<std::uint64_t> seed;
};

// The listener's joint law of (secret pair, announcement) under a uniform
// prior, by exhaustive enumeration of the noiseless message-mode map. For
// SinglePhoton the announced preparation is part of the result and is
// itself uniform. `labels` receives the announcement → result-label map.
JointDistribution exact_joint(ProtocolKind kind, std::map<Announcement, Label>* labels = nullptr);

PosteriorTable enumerate_posterior(ProtocolKind kind);

// Signal states the quantum channel carries: the four Bell states for the
// pair protocols, the four BB84 states for SinglePhoton, uniformly weighted.
Ensemble signal_ensemble(ProtocolKind kind);
double claimed_bits_per_run(ProtocolKind kind);

LeakageReport leakage_exact(ProtocolKind kind);

// Throws std::invalid_argument for rounds == 0.
LeakageReport leakage_monte_carlo(ProtocolKind kind, std::uint64_t rounds, std::uint64_t seed);

struct EveGuess {
  // The relation the announcement pins down exactly: alice_msg XOR bob_msg.
  std::uint8_t known_xor;
  std::vector<SecretPair> candidates;  // canonical order
  SecretPair best_guess;
  double p_correct;
};

// Deterministic form: best_guess is the first candidate.
EveGuess eve_guess(ProtocolKind kind, const Announcement& announcement);
// best_guess drawn uniformly from the candidates.
EveGuess eve_guess(ProtocolKind kind, const Announcement& announcement, Rng& rng);

std::string relation_string(ProtocolKind kind, const EveGuess& g);  // "xor=10"

}  // namespace qdl
