#include "qdl/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

namespace qdl::cli {

using nlohmann::json;

double round12(double x) {
  if (!std::isfinite(x)) return x;
  if (std::abs(x) < 1e-12) return 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", round12(x));
  std::string s(buf);
  if (s.find_first_of(".eni") == std::string::npos) s += ".0";
  return s;
}

json to_json(const PosteriorTable& t) {
  json rows = json::object();
  for (const auto& [ann, dist] : t.rows) {
    json row = json::object();
    for (const auto& [label, p] : dist.probs()) row[to_string(t.kind, secret_from_label(t.kind, label))] = round12(p);
    rows[to_string(ann)] = std::move(row);
  }
  return rows;
}

json numeric_fields(const LeakageReport& r) {
  return json{{"h_prior_bits", round12(r.h_prior_bits)},
              {"h_posterior_bits", round12(r.h_posterior_bits)},
              {"i_abe_bits", round12(r.i_abe_bits)},
              {"holevo_chi_bits", round12(r.holevo_chi_bits)},
              {"claimed_bits_per_run", round12(r.claimed_bits_per_run)},
              {"holevo_violation", r.holevo_violation}};
}

json analyze_json(const LeakageReport& exact, const std::optional<LeakageReport>& mc) {
  json j;
  j["protocol"] = std::string(to_string(exact.protocol));
  j["exact"] = numeric_fields(exact);
  j["exact"]["posterior"] = to_json(exact.posterior);
  if (mc) {
    json m = numeric_fields(*mc);
    m["rounds"] = mc->rounds.value_or(0);
    m["seed"] = mc->seed.value_or(0);
    m["i_abe_delta_bits"] = round12(mc->i_abe_bits - exact.i_abe_bits);
    j["monte_carlo"] = std::move(m);
  } else {
    j["monte_carlo"] = nullptr;
  }
  return j;
}

namespace {

Complex complex_from_json(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw std::invalid_argument("ensemble: complex entries must be a number or [re, im]");
}

}  // namespace

Ensemble ensemble_from_json(const json& j) {
  if (!j.is_object() || !j.contains("members") || !j["members"].is_array())
    throw std::invalid_argument("ensemble: expected an object with a \"members\" array");
  std::vector<EnsembleMember> members;
  for (const json& m : j["members"]) {
    if (!m.is_object() || !m.contains("p") || !m["p"].is_number())
      throw std::invalid_argument("ensemble: every member needs a numeric \"p\"");
    const double p = m["p"].get<double>();
    if (m.contains("state")) {
      std::vector<Complex> amps;
      for (const json& a : m["state"]) amps.push_back(complex_from_json(a));
      members.push_back({p, DensityMatrix::from_pure(PureState(amps))});
    } else if (m.contains("density")) {
      const json& rows = m["density"];
      const std::size_t d = rows.size();
      std::vector<Complex> entries;
      for (const json& row : rows) {
        if (!row.is_array() || row.size() != d) throw std::invalid_argument("ensemble: density matrix must be square");
        for (const json& e : row) entries.push_back(complex_from_json(e));
      }
      members.push_back({p, DensityMatrix(ComplexMatrix(d, std::move(entries)))});
    } else {
      throw std::invalid_argument("ensemble: member needs \"state\" or \"density\"");
    }
  }
  return Ensemble(std::move(members));
}

namespace {

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};
class IoError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string line;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) line += ',';
    line += c;
    first = false;
  }
  return line + '\n';
}

std::string flag(bool b) { return b ? "true" : "false"; }

// ---- analyze ----

std::string analyze(const RunConfig& cfg) {
  const LeakageReport exact = leakage_exact(cfg.protocol);
  std::optional<LeakageReport> mc;
  if (cfg.rounds > 0) mc = leakage_monte_carlo(cfg.protocol, cfg.rounds, cfg.seed);

  std::ostringstream os;
  switch (cfg.format) {
    case Format::Json: os << analyze_json(exact, mc).dump(2) << '\n'; break;
    case Format::Csv: {
      os << "method,h_prior_bits,h_posterior_bits,i_abe_bits,holevo_chi_bits,claimed_bits_per_run,holevo_violation,"
            "rounds,seed\n";
      auto row = [&](const LeakageReport& r, std::string_view method) {
        os << csv_line({std::string(method), format_number(r.h_prior_bits), format_number(r.h_posterior_bits),
                        format_number(r.i_abe_bits), format_number(r.holevo_chi_bits),
                        format_number(r.claimed_bits_per_run), flag(r.holevo_violation),
                        r.rounds ? std::to_string(*r.rounds) : "", r.seed ? std::to_string(*r.seed) : ""});
      };
      row(exact, "exact");
      if (mc) row(*mc, "monte_carlo");
      break;
    }
    case Format::Text: {
      os << "protocol: " << to_string(cfg.protocol) << '\n';
      os << "exact leakage through the classical channel\n";
      os << "  a priori entropy      " << format_number(exact.h_prior_bits) << " bits\n";
      os << "  a posteriori entropy  " << format_number(exact.h_posterior_bits) << " bits\n";
      os << "  I(AB:E)               " << format_number(exact.i_abe_bits) << " bits leaked per round\n";
      os << "  Holevo chi            " << format_number(exact.holevo_chi_bits) << " bits\n";
      os << "  claimed rate          " << format_number(exact.claimed_bits_per_run) << " bits per round\n";
      os << "  Holevo violation      " << (exact.holevo_violation ? "yes" : "no") << '\n';
      os << "posterior given each announcement\n";
      for (const auto& [ann, dist] : exact.posterior.rows) {
        os << "  " << to_string(ann) << ':';
        for (const auto& [label, p] : dist.probs())
          if (p > 0.0) os << ' ' << to_string(cfg.protocol, secret_from_label(cfg.protocol, label)) << '=' << format_number(p);
        os << '\n';
      }
      if (mc) {
        os << "monte carlo (" << *mc->rounds << " rounds, seed " << *mc->seed << ")\n";
        os << "  a priori entropy      " << format_number(mc->h_prior_bits) << " bits\n";
        os << "  a posteriori entropy  " << format_number(mc->h_posterior_bits) << " bits\n";
        os << "  I(AB:E)               " << format_number(mc->i_abe_bits) << " bits\n";
        os << "  delta vs exact        " << format_number(mc->i_abe_bits - exact.i_abe_bits) << " bits\n";
      }
      break;
    }
  }
  return os.str();
}

// ---- table ----

std::string table(const RunConfig& cfg) {
  if (cfg.protocol != ProtocolKind::EprQd) throw UsageError("table: only --protocol epr-qd has a truth table");
  const TruthTable& t = truth_table();
  const bool matches = t == reference_truth_table();
  std::ostringstream os;
  switch (cfg.format) {
    case Format::Csv:
      os << "alice_op,bob_op,outcome\n";
      for (Pauli a : kAllPaulis)
        for (Pauli b : kAllPaulis)
          os << csv_line({std::string(to_string(a)), std::string(to_string(b)), std::string(to_string(t.outcome(a, b)))});
      break;
    case Format::Json: {
      json rows = json::array();
      for (Pauli a : kAllPaulis)
        for (Pauli b : kAllPaulis)
          rows.push_back({{"alice_op", to_string(a)}, {"bob_op", to_string(b)}, {"outcome", to_string(t.outcome(a, b))}});
      os << json{{"rows", rows}, {"matches_reference", matches}}.dump(2) << '\n';
      break;
    }
    case Format::Text:
      for (Pauli a : kAllPaulis)
        for (Pauli b : kAllPaulis) os << to_symbol(a) << ' ' << to_symbol(b) << " → " << to_symbol(t.outcome(a, b)) << '\n';
      os << "matches reference table: " << (matches ? "yes" : "no") << '\n';
      break;
  }
  return os.str();
}

// ---- simulate ----

struct SimulatedRound {
  RoundRecord record;
  EveGuess guess;
};

std::vector<SimulatedRound> simulate_rounds(const RunConfig& cfg) {
  const std::uint64_t per_party = 1u << message_bits(cfg.protocol);
  std::vector<SimulatedRound> out;
  out.reserve(cfg.rounds);
  for (std::uint64_t i = 0; i < cfg.rounds; ++i) {
    Rng rng = Rng::for_round(cfg.seed, i);
    const auto a = static_cast<std::uint8_t>(rng.below(per_party));
    const auto b = static_cast<std::uint8_t>(rng.below(per_party));
    std::optional<PhotonState> prep;
    if (cfg.protocol == ProtocolKind::SinglePhoton) prep = kAllPhotonStates[rng.below(4)];
    auto eve = make_adversary(cfg.eve);
    RoundRecord rec = run_mm(cfg.protocol, a, b, prep, eve.get(), rng);
    EveGuess g = eve_guess(cfg.protocol, rec.announcements.front());
    out.push_back({std::move(rec), std::move(g)});
  }
  return out;
}

std::string simulate(const RunConfig& cfg, std::ostream& err) {
  const auto rounds = simulate_rounds(cfg);
  const int w = message_bits(cfg.protocol);
  std::uint64_t correct = 0;
  std::uint64_t relation_holds = 0;
  std::map<Announcement, Label> labels;
  std::map<JointDistribution::Key, std::uint64_t> counts;
  for (const auto& r : rounds) {
    const auto& in = r.record.input;
    if (r.record.alice_decoded == in.bob_msg && r.record.bob_decoded == in.alice_msg) ++correct;
    if ((in.alice_msg ^ in.bob_msg) == r.guess.known_xor) ++relation_holds;
    auto [it, _] = labels.emplace(r.record.announcements.front(), static_cast<Label>(labels.size()));
    ++counts[{secret_label(cfg.protocol, {in.alice_msg, in.bob_msg}), it->second}];
  }
  const auto n = static_cast<double>(rounds.size());
  const JointDistribution joint = JointDistribution::from_counts(counts);
  const double decode_accuracy = static_cast<double>(correct) / n;
  const double relation_rate = static_cast<double>(relation_holds) / n;
  const double i_abe = info_gain(joint.secret_marginal(), joint);

  json summary{{"protocol", to_string(cfg.protocol)},
               {"eve", to_string(cfg.eve)},
               {"rounds", cfg.rounds},
               {"seed", cfg.seed},
               {"decode_accuracy", round12(decode_accuracy)},
               {"eve_relation_accuracy", round12(relation_rate)},
               {"i_abe_bits_empirical", round12(i_abe)}};

  auto row_cells = [&](std::size_t i, const SimulatedRound& r) {
    const auto& in = r.record.input;
    return std::vector<std::string>{std::to_string(i),
                                    "MM",
                                    bits_to_string(in.alice_msg, w),
                                    bits_to_string(in.bob_msg, w),
                                    to_string(r.record.announcements.front()),
                                    bits_to_string(r.record.alice_decoded, w),
                                    bits_to_string(r.record.bob_decoded, w),
                                    relation_string(cfg.protocol, r.guess)};
  };
  static const std::vector<std::string> kColumns = {"round",         "mode",        "alice_msg",  "bob_msg",
                                                    "announcement",  "alice_decoded", "bob_decoded", "eve_known_relation"};

  std::ostringstream os;
  switch (cfg.format) {
    case Format::Csv: {
      for (std::size_t c = 0; c < kColumns.size(); ++c) os << (c ? "," : "") << kColumns[c];
      os << '\n';
      for (std::size_t i = 0; i < rounds.size(); ++i) {
        const auto cells = row_cells(i, rounds[i]);
        for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << cells[c];
        os << '\n';
      }
      err << "decode_accuracy=" << format_number(decode_accuracy) << " i_abe_bits_empirical=" << format_number(i_abe)
          << '\n';
      break;
    }
    case Format::Json: {
      json rows = json::array();
      for (std::size_t i = 0; i < rounds.size(); ++i) {
        const auto cells = row_cells(i, rounds[i]);
        json row = json::object();
        for (std::size_t c = 0; c < cells.size(); ++c) row[kColumns[c]] = cells[c];
        rows.push_back(std::move(row));
      }
      os << json{{"summary", summary}, {"rows", rows}}.dump(2) << '\n';
      break;
    }
    case Format::Text:
      os << "protocol: " << to_string(cfg.protocol) << "  eve: " << to_string(cfg.eve) << "  rounds: " << cfg.rounds
         << "  seed: " << cfg.seed << '\n';
      os << "decode accuracy          " << format_number(decode_accuracy) << '\n';
      os << "eve relation accuracy    " << format_number(relation_rate) << '\n';
      os << "empirical I(AB:E)        " << format_number(i_abe) << " bits per round\n";
      os << "(use --format csv for the full transcript)\n";
      break;
  }
  return os.str();
}

// ---- cm ----

std::string control_mode(const RunConfig& cfg, std::ostream& err) {
  std::vector<RoundRecord> records;
  records.reserve(cfg.rounds);
  for (std::uint64_t i = 0; i < cfg.rounds; ++i) {
    Rng rng = Rng::for_round(cfg.seed, i);
    auto eve = make_adversary(cfg.eve);
    records.push_back(run_cm(cfg.protocol, eve.get(), rng));
  }
  std::uint64_t checked = 0;
  std::uint64_t passed = 0;
  for (const auto& r : records) {
    if (!r.cm_pass) continue;
    ++checked;
    passed += *r.cm_pass ? 1 : 0;
  }
  std::optional<double> rate;
  if (checked > 0) rate = estimate_fidelity(records);
  const bool abort = !rate || *rate < cfg.threshold;
  std::optional<std::string> warning;
  if (checked == 0) {
    warning = "no control rounds could be checked; pass rate undefined";
  } else if (checked < 100) {
    warning = "only " + std::to_string(checked) + " checked control rounds; the pass-rate estimate is very uncertain";
  }
  if (warning) err << "warning: " << *warning << '\n';
  const double stderr_rate = rate ? std::sqrt(*rate * (1.0 - *rate) / static_cast<double>(checked)) : 0.0;

  std::ostringstream os;
  switch (cfg.format) {
    case Format::Json: {
      json j{{"protocol", to_string(cfg.protocol)},
             {"eve", to_string(cfg.eve)},
             {"rounds", cfg.rounds},
             {"seed", cfg.seed},
             {"checked_rounds", checked},
             {"passed_rounds", passed},
             {"threshold", round12(cfg.threshold)},
             {"abort", abort}};
      j["pass_rate"] = rate ? json(round12(*rate)) : json(nullptr);
      j["std_error"] = rate ? json(round12(stderr_rate)) : json(nullptr);
      j["warning"] = warning ? json(*warning) : json(nullptr);
      os << j.dump(2) << '\n';
      break;
    }
    case Format::Csv:
      os << "protocol,eve,rounds,seed,checked_rounds,passed_rounds,pass_rate,threshold,abort\n";
      os << csv_line({std::string(to_string(cfg.protocol)), std::string(to_string(cfg.eve)), std::to_string(cfg.rounds),
                      std::to_string(cfg.seed), std::to_string(checked), std::to_string(passed),
                      rate ? format_number(*rate) : "", format_number(cfg.threshold), flag(abort)});
      break;
    case Format::Text:
      os << "protocol: " << to_string(cfg.protocol) << "  eve: " << to_string(cfg.eve) << '\n';
      os << "control rounds           " << cfg.rounds << " (" << checked << " checked)\n";
      os << "pass rate                " << (rate ? format_number(*rate) : std::string("undefined"));
      if (rate) os << " ± " << format_number(stderr_rate);
      os << '\n';
      os << "threshold                " << format_number(cfg.threshold) << '\n';
      os << "abort                    " << (abort ? "yes" : "no") << '\n';
      break;
  }
  return os.str();
}

// ---- distill ----

std::string distill(const RunConfig& cfg, std::ostream& err) {
  const auto rounds = simulate_rounds(cfg);
  std::vector<RoundRecord> records;
  records.reserve(rounds.size());
  for (const auto& r : rounds) records.push_back(r.record);

  const RawKeyMaterial alice = alice_view(cfg.protocol, records);
  const RawKeyMaterial bob = bob_view(cfg.protocol, records);
  const DistilledKey s_alice = distill_structural(alice);
  const DistilledKey s_bob = distill_structural(bob);

  const std::size_t out_len = recommend_output_length(cfg.protocol, cfg.rounds, cfg.margin_bits);
  const std::size_t raw_len = raw_bits(alice).size();
  std::optional<DistilledKey> t_alice;
  std::optional<DistilledKey> t_bob;
  std::optional<std::string> warning;
  if (out_len == 0) {
    warning = "recommended Toeplitz output length is zero; no hashed key produced";
    err << "warning: " << *warning << '\n';
  } else {
    // The hash seed is public; it comes from a stream no round uses.
    Rng seed_rng = Rng::for_round(cfg.seed, UINT64_MAX);
    const Bits hash_seed = random_bits(raw_len + out_len - 1, seed_rng);
    t_alice = distill_toeplitz(alice, hash_seed, out_len);
    t_bob = distill_toeplitz(bob, hash_seed, out_len);
  }
  const bool structural_agree = s_alice.bits == s_bob.bits;
  const bool toeplitz_agree = !t_alice || t_alice->bits == t_bob->bits;
  if (!structural_agree || !toeplitz_agree) err << "warning: Alice's and Bob's keys differ\n";

  const std::string s_hex = to_hex(s_alice.bits);
  const std::string t_hex = t_alice ? to_hex(t_alice->bits) : std::string();
  const std::size_t t_len = t_alice ? t_alice->output_len : 0;

  std::ostringstream os;
  switch (cfg.format) {
    case Format::Json: {
      json j{{"protocol", to_string(cfg.protocol)},
             {"eve", to_string(cfg.eve)},
             {"rounds", cfg.rounds},
             {"seed", cfg.seed},
             {"raw_bits", raw_len},
             {"margin_bits", cfg.margin_bits},
             {"structural", {{"bits", s_alice.output_len}, {"hex", s_hex}, {"parties_agree", structural_agree}}},
             {"toeplitz", {{"bits", t_len}, {"hex", t_hex}, {"parties_agree", toeplitz_agree}}}};
      j["warning"] = warning ? json(*warning) : json(nullptr);
      os << j.dump(2) << '\n';
      break;
    }
    case Format::Csv:
      os << "method,bits,hex,parties_agree\n";
      os << csv_line({"structural", std::to_string(s_alice.output_len), s_hex, flag(structural_agree)});
      os << csv_line({"toeplitz", std::to_string(t_len), t_hex, flag(toeplitz_agree)});
      break;
    case Format::Text:
      os << "protocol: " << to_string(cfg.protocol) << "  rounds: " << cfg.rounds << "  raw bits: " << raw_len << '\n';
      os << "structural key  " << s_alice.output_len << " bits  " << s_hex << '\n';
      os << "toeplitz key    " << t_len << " bits  " << t_hex << '\n';
      os << "parties agree   " << (structural_agree && toeplitz_agree ? "yes" : "no") << '\n';
      break;
  }
  return os.str();
}

// ---- holevo ----

std::string holevo(const RunConfig& cfg) {
  std::string ensemble_name;
  std::optional<Ensemble> ensemble;
  if (cfg.ensemble_path) {
    std::ifstream in(*cfg.ensemble_path);
    if (!in) throw IoError("cannot read ensemble file " + *cfg.ensemble_path);
    json j;
    try {
      j = json::parse(in);
      ensemble = ensemble_from_json(j);
    } catch (const json::exception& e) {
      throw UsageError(std::string("ensemble file: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("ensemble file: ") + e.what());
    }
    ensemble_name = "custom (" + *cfg.ensemble_path + ")";
  } else {
    ensemble = signal_ensemble(cfg.protocol);
    ensemble_name = cfg.protocol == ProtocolKind::SinglePhoton ? "uniform {|0>,|1>,|+>,|->}"
                                                               : "uniform {Ψ−,Ψ+,Φ−,Φ+}";
  }
  const double chi = holevo_chi(*ensemble);
  const double claimed = claimed_bits_per_run(cfg.protocol);
  const bool violation = claimed > chi + 1e-9;

  std::ostringstream os;
  switch (cfg.format) {
    case Format::Json:
      os << json{{"protocol", to_string(cfg.protocol)},
                 {"ensemble", ensemble_name},
                 {"members", ensemble->members().size()},
                 {"dim", ensemble->members().front().rho.dim()},
                 {"holevo_chi_bits", round12(chi)},
                 {"claimed_bits_per_run", round12(claimed)},
                 {"holevo_violation", violation}}
                .dump(2)
         << '\n';
      break;
    case Format::Csv:
      os << "protocol,members,dim,holevo_chi_bits,claimed_bits_per_run,holevo_violation\n";
      os << csv_line({std::string(to_string(cfg.protocol)), std::to_string(ensemble->members().size()),
                      std::to_string(ensemble->members().front().rho.dim()), format_number(chi), format_number(claimed),
                      flag(violation)});
      break;
    case Format::Text:
      os << "protocol: " << to_string(cfg.protocol) << '\n';
      os << "signal ensemble   " << ensemble_name << '\n';
      os << "Holevo chi        " << format_number(chi) << " bits\n";
      os << "claimed rate      " << format_number(claimed) << " bits per round\n";
      os << "verdict           " << (violation ? "claimed rate violates the Holevo bound" : "within the Holevo bound")
         << '\n';
      break;
  }
  return os.str();
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (!cfg.out) {
    out << text;
    return;
  }
  std::ofstream f(*cfg.out, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file " + *cfg.out);
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing output file " + *cfg.out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum dialogue leakage analyzer", "qdl"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string protocol = "epr-qd";
  std::string eve = "passive";
  std::string format = "text";
  std::string out_path;
  std::string ensemble_path;

  struct CommandSpec {
    const char* name;
    const char* help;
  };
  const std::vector<CommandSpec> commands = {
      {"analyze", "exact and Monte Carlo leakage to a classical-channel listener"},
      {"simulate", "run message-mode rounds and emit the public transcript"},
      {"table", "regenerate the encoding truth table by simulation"},
      {"cm", "control-mode fidelity experiment"},
      {"distill", "privacy amplification of simulated raw key material"},
      {"holevo", "Holevo quantity of the signal ensemble versus the claimed rate"},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--protocol", protocol, "epr-qd | dense-key | single-photon")
        ->check(CLI::IsMember({"epr-qd", "dense-key", "single-photon"}));
    sub->add_option("--rounds", cfg.rounds, "number of rounds");
    sub->add_option("--seed", cfg.seed, "64-bit seed")->envname("QDL_SEED");
    sub->add_option("--eve", eve, "none | passive | intercept-resend")
        ->check(CLI::IsMember({"none", "passive", "intercept-resend"}));
    sub->add_option("--format", format, "text | json | csv")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--out", out_path, "write output to this file");
    sub->add_option("--margin-bits", cfg.margin_bits, "safety margin subtracted from the hashed key length");
    sub->add_option("--threshold", cfg.threshold, "control-mode abort threshold")->check(CLI::Range(0.0, 1.0));
    if (std::string_view(c.name) == "holevo")
      sub->add_option("--ensemble", ensemble_path, "JSON file describing a custom ensemble");
  }

  std::vector<const char*> argv = {"qdl"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.protocol = *protocol_from_string(protocol);
  cfg.eve = *eve_model_from_string(eve);
  cfg.format = format == "json" ? Format::Json : format == "csv" ? Format::Csv : Format::Text;
  if (!out_path.empty()) cfg.out = out_path;
  if (!ensemble_path.empty()) cfg.ensemble_path = ensemble_path;

  try {
    if (cfg.rounds == 0 && cfg.command != "analyze" && cfg.command != "table" && cfg.command != "holevo")
      throw UsageError("--rounds must be at least 1 for " + cfg.command);
    std::string text;
    if (cfg.command == "analyze") text = analyze(cfg);
    else if (cfg.command == "table") text = table(cfg);
    else if (cfg.command == "simulate") text = simulate(cfg, err);
    else if (cfg.command == "cm") text = control_mode(cfg, err);
    else if (cfg.command == "distill") text = distill(cfg, err);
    else text = holevo(cfg);
    emit(cfg, text, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace qdl::cli
