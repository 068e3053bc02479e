#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdl/adversary.hpp"
#include "qdl/distill.hpp"

namespace qdl::cli {

enum class Format : std::uint8_t { Text, Json, Csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

struct RunConfig {
  std::string command;
  ProtocolKind protocol = ProtocolKind::EprQd;
  std::uint64_t rounds = 10000;
  std::uint64_t seed = 0;
  EveModel eve = EveModel::PassiveListener;
  Format format = Format::Text;
  std::optional<std::string> out;
  std::uint64_t margin_bits = 0;
  double threshold = 0.9;
  std::optional<std::string> ensemble_path;
};

// Entry point shared by the executable and the tests. `args` excludes the
// program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Rounds to 12 significant digits; magnitudes below 1e-12 become 0.
double round12(double x);
std::string format_number(double x);

nlohmann::json to_json(const PosteriorTable& t);
// Numeric fields of a report (no posterior), as used in both the exact and
// Monte Carlo sections of the analyze output.
nlohmann::json numeric_fields(const LeakageReport& r);
nlohmann::json analyze_json(const LeakageReport& exact, const std::optional<LeakageReport>& mc);

// Parses a custom ensemble: {"members": [{"p": w, "state": [[re, im], ...]}
// or {"p": w, "density": [[[re, im], ...], ...]}]}. Throws
// std::invalid_argument on malformed content.
Ensemble ensemble_from_json(const nlohmann::json& j);

}  // namespace qdl::cli
