#include "qdl/adversary.hpp"

#include <stdexcept>

namespace qdl {

std::string_view to_string(EveModel m) {
  switch (m) {
    case EveModel::None: return "none";
    case EveModel::PassiveListener: return "passive";
    case EveModel::InterceptResend: return "intercept-resend";
  }
  return "?";
}

std::optional<EveModel> eve_model_from_string(std::string_view s) {
  for (EveModel m : {EveModel::None, EveModel::PassiveListener, EveModel::InterceptResend})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

PureState intercept_resend(const PureState& leg_state, Rng& rng) {
  if (leg_state.num_qubits() != 1) throw DimensionError("intercept_resend: expected a 1-qubit payload");
  const Basis basis = rng.bit() ? Basis::X : Basis::Z;
  return measure_in_basis(leg_state, basis, rng).state;
}

PureState intercept_resend_pair(const PureState& pair, Rng& rng) {
  if (pair.num_qubits() != 2) throw DimensionError("intercept_resend_pair: expected a 2-qubit state");
  const Basis basis = rng.bit() ? Basis::X : Basis::Z;
  const PairOutcome m = measure_one_of_pair(pair, Qubit::B, basis, rng);
  return tensor(m.remainder, basis_state(basis, m.bit));
}

PureState InterceptResend::on_quantum_leg(const PureState& system, Leg, Rng& rng) {
  return system.num_qubits() == 1 ? intercept_resend(system, rng) : intercept_resend_pair(system, rng);
}

std::unique_ptr<ChannelAdversary> make_adversary(EveModel m) {
  switch (m) {
    case EveModel::None: return nullptr;
    case EveModel::PassiveListener: return std::make_unique<PassiveListener>();
    case EveModel::InterceptResend: return std::make_unique<InterceptResend>();
  }
  return nullptr;
}

Label secret_label(ProtocolKind k, SecretPair s) {
  return (static_cast<Label>(s.alice) << message_bits(k)) | s.bob;
}

SecretPair secret_from_label(ProtocolKind k, Label l) {
  const Label mask = (1u << message_bits(k)) - 1;
  return {static_cast<std::uint8_t>(l >> message_bits(k)), static_cast<std::uint8_t>(l & mask)};
}

std::string to_string(ProtocolKind k, SecretPair s) {
  return bits_to_string(s.alice, message_bits(k)) + "|" + bits_to_string(s.bob, message_bits(k));
}

namespace {

std::vector<std::optional<PhotonState>> preparations(ProtocolKind kind) {
  if (kind != ProtocolKind::SinglePhoton) return {std::nullopt};
  return {kAllPhotonStates.begin(), kAllPhotonStates.end()};
}

PosteriorTable posterior_from_joint(ProtocolKind kind, const JointDistribution& joint,
                                    const std::map<Announcement, Label>& labels) {
  PosteriorTable table{kind, {}};
  for (const auto& [ann, label] : labels) table.rows.emplace(ann, joint.conditional_on_result(label));
  return table;
}

void fill_entropies(LeakageReport& r, const Distribution& prior, const JointDistribution& joint) {
  r.h_prior_bits = shannon_entropy(prior);
  r.h_posterior_bits = posterior_entropy(joint);
  r.i_abe_bits = info_gain(prior, joint);
  r.holevo_chi_bits = holevo_chi(signal_ensemble(r.protocol));
  r.claimed_bits_per_run = claimed_bits_per_run(r.protocol);
  r.holevo_violation = r.claimed_bits_per_run > r.holevo_chi_bits + 1e-9;
}

}  // namespace

JointDistribution exact_joint(ProtocolKind kind, std::map<Announcement, Label>* labels) {
  const std::uint8_t per_party = static_cast<std::uint8_t>(1u << message_bits(kind));
  const auto preps = preparations(kind);
  const double weight = 1.0 / (secret_space_size(kind) * static_cast<double>(preps.size()));
  std::map<Announcement, Label> index;
  std::map<JointDistribution::Key, double> probs;
  // The noiseless map is deterministic; the generator is never consulted
  // for a definite outcome.
  Rng unused(0);
  for (const auto& prep : preps) {
    for (std::uint8_t a = 0; a < per_party; ++a) {
      for (std::uint8_t b = 0; b < per_party; ++b) {
        const RoundRecord rec = run_mm(kind, a, b, prep, nullptr, unused);
        const Announcement& ann = rec.announcements.front();
        auto [it, _] = index.emplace(ann, static_cast<Label>(index.size()));
        probs[{secret_label(kind, {a, b}), it->second}] += weight;
      }
    }
  }
  if (labels) *labels = index;
  return JointDistribution(std::move(probs));
}

PosteriorTable enumerate_posterior(ProtocolKind kind) {
  std::map<Announcement, Label> labels;
  const JointDistribution joint = exact_joint(kind, &labels);
  return posterior_from_joint(kind, joint, labels);
}

Ensemble signal_ensemble(ProtocolKind kind) {
  std::vector<PureState> states;
  if (kind == ProtocolKind::SinglePhoton) {
    for (PhotonState s : kAllPhotonStates) states.push_back(vector_of(s));
  } else {
    for (Bell b : kAllBells) states.push_back(bell_state(b));
  }
  return Ensemble::uniform_pure(states);
}

double claimed_bits_per_run(ProtocolKind kind) { return kind == ProtocolKind::EprQd ? 4.0 : 2.0; }

LeakageReport leakage_exact(ProtocolKind kind) {
  LeakageReport r;
  r.protocol = kind;
  r.method = LeakageMethod::Exact;
  std::map<Announcement, Label> labels;
  const JointDistribution joint = exact_joint(kind, &labels);
  fill_entropies(r, Distribution::uniform(secret_space_size(kind)), joint);
  r.posterior = posterior_from_joint(kind, joint, labels);
  return r;
}

LeakageReport leakage_monte_carlo(ProtocolKind kind, std::uint64_t rounds, std::uint64_t seed) {
  if (rounds == 0) throw std::invalid_argument("leakage_monte_carlo: rounds must be at least 1");
  const std::uint64_t per_party = 1u << message_bits(kind);
  std::map<Announcement, Label> labels;
  std::map<JointDistribution::Key, std::uint64_t> counts;
  for (std::uint64_t i = 0; i < rounds; ++i) {
    Rng rng = Rng::for_round(seed, i);
    const auto a = static_cast<std::uint8_t>(rng.below(per_party));
    const auto b = static_cast<std::uint8_t>(rng.below(per_party));
    std::optional<PhotonState> prep;
    if (kind == ProtocolKind::SinglePhoton) prep = kAllPhotonStates[rng.below(4)];
    PassiveListener eve;
    run_mm(kind, a, b, prep, &eve, rng);
    const Announcement& ann = eve.transcript().entries().front();
    auto [it, _] = labels.emplace(ann, static_cast<Label>(labels.size()));
    ++counts[{secret_label(kind, {a, b}), it->second}];
  }
  const JointDistribution joint = JointDistribution::from_counts(counts);
  LeakageReport r;
  r.protocol = kind;
  r.method = LeakageMethod::MonteCarlo;
  r.rounds = rounds;
  r.seed = seed;
  fill_entropies(r, joint.secret_marginal(), joint);
  r.posterior = posterior_from_joint(kind, joint, labels);
  return r;
}

EveGuess eve_guess(ProtocolKind kind, const Announcement& announcement) {
  const PosteriorTable table = enumerate_posterior(kind);
  const auto row = table.rows.find(announcement);
  if (row == table.rows.end()) throw std::invalid_argument("eve_guess: announcement is not valid for this protocol");
  EveGuess g{};
  for (const auto& [label, p] : row->second.probs())
    if (p > 0.0) g.candidates.push_back(secret_from_label(kind, label));
  g.known_xor = static_cast<std::uint8_t>(g.candidates.front().alice ^ g.candidates.front().bob);
  for (const SecretPair& c : g.candidates)
    if ((c.alice ^ c.bob) != g.known_xor) throw std::logic_error("eve_guess: candidates do not share one XOR value");
  g.best_guess = g.candidates.front();
  g.p_correct = 1.0 / static_cast<double>(g.candidates.size());
  return g;
}

EveGuess eve_guess(ProtocolKind kind, const Announcement& announcement, Rng& rng) {
  EveGuess g = eve_guess(kind, announcement);
  g.best_guess = g.candidates[rng.below(g.candidates.size())];
  return g;
}

std::string relation_string(ProtocolKind kind, const EveGuess& g) {
  return "xor=" + bits_to_string(g.known_xor, message_bits(kind));
}

}  // namespace qdl
