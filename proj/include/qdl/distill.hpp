#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qdl/adversary.hpp"
#include "qdl/protocols.hpp"

namespace qdl {

// One bit per element, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

struct RawKeyMaterial {
  ProtocolKind kind;
  std::vector<SecretPair> rounds;  // (alice_msg, bob_msg) per message-mode round
};

enum class DistillMethod : std::uint8_t { StructuralHalf, ToeplitzHash };

struct DistilledKey {
  Bits bits;
  DistillMethod method;
  std::size_t input_len;
  std::size_t output_len;
};

// Each party's view of the material after decoding: Alice holds her own
// messages and what she decoded of Bob's, and vice versa.
RawKeyMaterial alice_view(ProtocolKind kind, std::span<const RoundRecord> records);
RawKeyMaterial bob_view(ProtocolKind kind, std::span<const RoundRecord> records);

// Keeps Alice's message from every round and drops Bob's. An announcement
// fixes only alice_msg XOR bob_msg, so Alice's half stays uniform given
// everything on the public channel.
DistilledKey distill_structural(const RawKeyMaterial& raw);

// All raw bits, round by round, Alice's message then Bob's, MSB first.
Bits raw_bits(const RawKeyMaterial& raw);

// GF(2) product T·raw with T[j][i] = hash_seed[i − j + out_len − 1]: the
// first row is hash_seed[out_len−1 ..] and the first column, read bottom to
// top, is hash_seed[0 .. out_len). Requires
// hash_seed.size() == raw_bits.size() + out_len − 1 and
// 1 ≤ out_len ≤ raw_bits.size(); throws std::invalid_argument otherwise.
Bits toeplitz_hash(std::span<const std::uint8_t> raw_bits, std::span<const std::uint8_t> hash_seed,
                   std::size_t out_len);

DistilledKey distill_toeplitz(const RawKeyMaterial& raw, std::span<const std::uint8_t> hash_seed,
                              std::size_t out_len);

// max(0, total_raw_bits − leaked_bits − margin), leaked bits taken from the
// exact per-round leakage.
std::size_t recommend_output_length(ProtocolKind kind, std::uint64_t rounds, std::uint64_t safety_margin_bits);

// Listener's mutual information (bits) with the StructuralHalf key, by
// enumerating every secret sequence of `rounds` rounds (and, for
// SinglePhoton, every preparation sequence) under a uniform prior.
double structural_key_leakage(ProtocolKind kind, int rounds);

// Lowercase hex, most significant bit first, zero-padded on the right to a
// whole number of bytes.
std::string to_hex(std::span<const std::uint8_t> bits);

Bits random_bits(std::size_t n, Rng& rng);

}  // namespace qdl
