#include "qdl/distill.hpp"

#include <cmath>
#include <stdexcept>

namespace qdl {
namespace {

void append_bits(Bits& out, std::uint32_t value, int width) {
  for (int i = width - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>((value >> i) & 1u));
}

RawKeyMaterial view(ProtocolKind kind, std::span<const RoundRecord> records, bool alice_side) {
  RawKeyMaterial raw{kind, {}};
  for (const auto& r : records) {
    if (r.input.mode != Mode::MM) continue;
    if (alice_side)
      raw.rounds.push_back({r.input.alice_msg, r.alice_decoded});
    else
      raw.rounds.push_back({r.bob_decoded, r.input.bob_msg});
  }
  return raw;
}

}  // namespace

RawKeyMaterial alice_view(ProtocolKind kind, std::span<const RoundRecord> records) {
  return view(kind, records, true);
}

RawKeyMaterial bob_view(ProtocolKind kind, std::span<const RoundRecord> records) {
  return view(kind, records, false);
}

Bits raw_bits(const RawKeyMaterial& raw) {
  Bits out;
  const int w = message_bits(raw.kind);
  for (const SecretPair& p : raw.rounds) {
    append_bits(out, p.alice, w);
    append_bits(out, p.bob, w);
  }
  return out;
}

DistilledKey distill_structural(const RawKeyMaterial& raw) {
  if (raw.rounds.empty()) throw std::invalid_argument("distill_structural: no raw key material");
  const int w = message_bits(raw.kind);
  DistilledKey key{{}, DistillMethod::StructuralHalf, raw.rounds.size() * 2 * static_cast<std::size_t>(w), 0};
  for (const SecretPair& p : raw.rounds) append_bits(key.bits, p.alice, w);
  key.output_len = key.bits.size();
  return key;
}

Bits toeplitz_hash(std::span<const std::uint8_t> raw_bits, std::span<const std::uint8_t> hash_seed,
                   std::size_t out_len) {
  const std::size_t n = raw_bits.size();
  if (out_len < 1) throw std::invalid_argument("toeplitz_hash: out_len must be at least 1");
  if (out_len > n) throw std::invalid_argument("toeplitz_hash: out_len exceeds the raw length");
  if (hash_seed.size() != n + out_len - 1) throw std::invalid_argument("toeplitz_hash: seed length must be n + out_len - 1");
  Bits out(out_len, 0);
  for (std::size_t j = 0; j < out_len; ++j) {
    // Row j reads the seed window starting at out_len - 1 - j.
    const std::size_t offset = out_len - 1 - j;
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc ^= static_cast<std::uint8_t>(hash_seed[offset + i] & raw_bits[i]);
    out[j] = acc & 1u;
  }
  return out;
}

DistilledKey distill_toeplitz(const RawKeyMaterial& raw, std::span<const std::uint8_t> hash_seed,
                              std::size_t out_len) {
  const Bits in = raw_bits(raw);
  DistilledKey key{toeplitz_hash(in, hash_seed, out_len), DistillMethod::ToeplitzHash, in.size(), out_len};
  return key;
}

std::size_t recommend_output_length(ProtocolKind kind, std::uint64_t rounds, std::uint64_t safety_margin_bits) {
  if (rounds < 1) throw std::invalid_argument("recommend_output_length: rounds must be at least 1");
  const std::uint64_t total = rounds * 2 * static_cast<std::uint64_t>(message_bits(kind));
  const auto leaked = static_cast<std::uint64_t>(std::llround(leakage_exact(kind).i_abe_bits * static_cast<double>(rounds)));
  const std::uint64_t used = leaked + safety_margin_bits;
  return used >= total ? 0 : static_cast<std::size_t>(total - used);
}

double structural_key_leakage(ProtocolKind kind, int rounds) {
  if (rounds < 1) throw std::invalid_argument("structural_key_leakage: rounds must be at least 1");
  const int w = message_bits(kind);
  const std::uint8_t per_party = static_cast<std::uint8_t>(1u << w);

  // Single-round outcomes: every (prep, alice, bob) with its announcement.
  struct Branch {
    std::uint8_t alice;
    Announcement ann;
  };
  std::vector<Branch> branches;
  std::vector<std::optional<PhotonState>> preps = {std::nullopt};
  if (kind == ProtocolKind::SinglePhoton) preps.assign(kAllPhotonStates.begin(), kAllPhotonStates.end());
  Rng unused(0);
  for (const auto& prep : preps)
    for (std::uint8_t a = 0; a < per_party; ++a)
      for (std::uint8_t b = 0; b < per_party; ++b)
        branches.push_back({a, run_mm(kind, a, b, prep, nullptr, unused).announcements.front()});

  std::map<std::vector<Announcement>, Label> ann_labels;
  std::map<JointDistribution::Key, double> joint;
  const double weight = std::pow(1.0 / static_cast<double>(branches.size()), rounds);
  std::vector<std::size_t> idx(static_cast<std::size_t>(rounds), 0);
  while (true) {
    Label key = 0;
    std::vector<Announcement> seq;
    for (std::size_t r : idx) {
      key = (key << w) | branches[r].alice;
      seq.push_back(branches[r].ann);
    }
    auto [it, _] = ann_labels.emplace(std::move(seq), static_cast<Label>(ann_labels.size()));
    joint[{key, it->second}] += weight;

    std::size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == branches.size()) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
  const JointDistribution j(std::move(joint));
  return info_gain(j.secret_marginal(), j);
}

std::string to_hex(std::span<const std::uint8_t> bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t start = 0; start < bits.size(); start += 8) {
    unsigned byte = 0;
    for (std::size_t k = 0; k < 8; ++k) {
      byte <<= 1;
      if (start + k < bits.size()) byte |= bits[start + k] & 1u;
    }
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xF]);
  }
  return out;
}

Bits random_bits(std::size_t n, Rng& rng) {
  Bits out(n);
  for (auto& b : out) b = rng.bit() ? 1 : 0;
  return out;
}

}  // namespace qdl
