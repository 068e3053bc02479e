#include <cstdlib>
#include <set>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qdl/cli.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qdl::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qdl_test_" + name);
}

}  // namespace

TEST_CASE("analyze epr-qd as json") {
  const Result r = run({"analyze", "--protocol", "epr-qd", "--format", "json", "--rounds", "2000"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["protocol"] == "epr-qd");
  CHECK(j["exact"]["i_abe_bits"].get<double>() == 2.0);
  CHECK(j["exact"]["h_prior_bits"].get<double>() == 4.0);
  CHECK(j["exact"]["holevo_violation"] == true);
  CHECK(j["exact"]["posterior"].size() == 4);
  CHECK(j["exact"]["posterior"]["psi-"]["01|01"].get<double>() == 0.25);
  CHECK(j["monte_carlo"]["rounds"] == 2000);
  CHECK(j["monte_carlo"]["seed"] == 0);
  CHECK(j["monte_carlo"].contains("i_abe_delta_bits"));
}

TEST_CASE("analyze json schema has exactly the documented fields") {
  const json j = json::parse(run({"analyze", "--format", "json", "--rounds", "100"}).out);
  std::set<std::string> top, exact, mc;
  for (const auto& [k, _] : j.items()) top.insert(k);
  for (const auto& [k, _] : j["exact"].items()) exact.insert(k);
  for (const auto& [k, _] : j["monte_carlo"].items()) mc.insert(k);
  CHECK(top == std::set<std::string>{"protocol", "exact", "monte_carlo"});
  CHECK(exact == std::set<std::string>{"h_prior_bits", "h_posterior_bits", "i_abe_bits", "holevo_chi_bits",
                                       "claimed_bits_per_run", "holevo_violation", "posterior"});
  CHECK(mc == std::set<std::string>{"h_prior_bits", "h_posterior_bits", "i_abe_bits", "holevo_chi_bits",
                                    "claimed_bits_per_run", "holevo_violation", "rounds", "seed", "i_abe_delta_bits"});
}

TEST_CASE("analyze dense-key text and single-photon exact-only") {
  const Result dense = run({"analyze", "--protocol", "dense-key", "--rounds", "500"});
  REQUIRE(dense.code == 0);
  CHECK(dense.out.find("I(AB:E)               1.0 bits") != std::string::npos);

  const Result photon = run({"analyze", "--protocol", "single-photon", "--rounds", "0", "--format", "json"});
  REQUIRE(photon.code == 0);
  const json j = json::parse(photon.out);
  CHECK(j["monte_carlo"].is_null());
  CHECK(j["exact"]["i_abe_bits"].get<double>() == 1.0);
}

TEST_CASE("table command") {
  const Result text = run({"table"});
  REQUIRE(text.code == 0);
  CHECK(text.out.rfind("σ00 σ00 → Ψ−\n", 0) == 0);
  CHECK(text.out.find("matches reference table: yes") != std::string::npos);

  const Result csv = run({"table", "--format", "csv"});
  const auto rows = parse_csv(csv.out);
  REQUIRE(rows.size() == 17);
  CHECK(rows[0] == std::vector<std::string>{"alice_op", "bob_op", "outcome"});
  CHECK(rows[1] == std::vector<std::string>{"s00", "s00", "psi-"});

  CHECK(json::parse(run({"table", "--format", "json"}).out)["matches_reference"] == true);
  CHECK(run({"table", "--protocol", "dense-key"}).code == 2);
}

TEST_CASE("simulate emits a reproducible, consistent transcript") {
  for (const char* protocol : {"epr-qd", "dense-key", "single-photon"}) {
    const std::vector<std::string> args = {"simulate", "--protocol", protocol, "--rounds", "300", "--seed", "11",
                                           "--format", "csv"};
    const Result a = run(args);
    const Result b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto rows = parse_csv(a.out);
    REQUIRE(rows.size() == 301);
    CHECK(rows[0] == std::vector<std::string>{"round", "mode", "alice_msg", "bob_msg", "announcement", "alice_decoded",
                                              "bob_decoded", "eve_known_relation"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const auto& row = rows[i];
      REQUIRE(row.size() == 8);
      CHECK(row[5] == row[3]);
      CHECK(row[6] == row[2]);
      std::string x;
      for (std::size_t c = 0; c < row[2].size(); ++c) x += row[2][c] == row[3][c] ? '0' : '1';
      CHECK(row[7] == "xor=" + x);
    }
    CHECK(a.err.find("decode_accuracy=1.0") != std::string::npos);
  }
  const json j = json::parse(run({"simulate", "--rounds", "100", "--format", "json", "--eve", "none"}).out);
  CHECK(j["summary"]["decode_accuracy"].get<double>() == 1.0);
  CHECK(j["summary"]["eve_relation_accuracy"].get<double>() == 1.0);
  CHECK(j["rows"].size() == 100);
}

TEST_CASE("cm command") {
  const json none = json::parse(run({"cm", "--eve", "none", "--rounds", "2000", "--format", "json"}).out);
  CHECK(none["pass_rate"].get<double>() == 1.0);
  CHECK(none["abort"] == false);

  const json ir = json::parse(run({"cm", "--eve", "intercept-resend", "--rounds", "10000", "--format", "json"}).out);
  CHECK(std::abs(ir["pass_rate"].get<double>() - 0.75) < 0.02);
  CHECK(ir["abort"] == true);

  const Result one = run({"cm", "--rounds", "1", "--format", "json"});
  REQUIRE(one.code == 0);
  const double rate = json::parse(one.out)["pass_rate"].get<double>();
  CHECK((rate == 0.0 || rate == 1.0));
  CHECK(one.err.find("warning") != std::string::npos);

  const json loose = json::parse(
      run({"cm", "--eve", "intercept-resend", "--rounds", "2000", "--threshold", "0.5", "--format", "json"}).out);
  CHECK(loose["abort"] == false);
}

TEST_CASE("distill command") {
  const json epr = json::parse(run({"distill", "--protocol", "epr-qd", "--rounds", "100", "--format", "json"}).out);
  CHECK(epr["structural"]["bits"] == 200);
  CHECK(epr["structural"]["hex"].get<std::string>().size() == 50);
  CHECK(epr["structural"]["parties_agree"] == true);
  CHECK(epr["toeplitz"]["bits"] == 200);

  const std::vector<std::string> args = {"distill", "--protocol", "dense-key", "--rounds", "100", "--margin-bits",
                                         "10", "--format", "json", "--seed", "5"};
  const Result a = run(args);
  const Result b = run(args);
  CHECK(a.out == b.out);
  const json dense = json::parse(a.out);
  CHECK(dense["toeplitz"]["bits"] == 90);
  CHECK(dense["toeplitz"]["parties_agree"] == true);

  const Result zero = run({"distill", "--rounds", "10", "--margin-bits", "1000", "--format", "json"});
  CHECK(zero.code == 0);
  CHECK(json::parse(zero.out)["toeplitz"]["hex"] == "");
  CHECK(zero.err.find("warning") != std::string::npos);
}

TEST_CASE("holevo command") {
  const json epr = json::parse(run({"holevo", "--format", "json"}).out);
  CHECK(epr["holevo_chi_bits"].get<double>() == 2.0);
  CHECK(epr["claimed_bits_per_run"].get<double>() == 4.0);
  CHECK(epr["holevo_violation"] == true);

  const json photon = json::parse(run({"holevo", "--protocol", "single-photon", "--format", "json"}).out);
  CHECK(photon["holevo_chi_bits"].get<double>() == 1.0);
  CHECK(photon["holevo_violation"] == true);

  const auto path = temp_path("ensemble.json");
  std::ofstream(path) << R"({"members": [{"p": 1.0, "state": [[0.6, 0], [0, 0.8]]}]})";
  const Result custom = run({"holevo", "--ensemble", path.string(), "--format", "json"});
  REQUIRE(custom.code == 0);
  CHECK(json::parse(custom.out)["holevo_chi_bits"].get<double>() == 0.0);

  const auto dens = temp_path("density.json");
  std::ofstream(dens) << R"({"members": [{"p": 0.5, "density": [[1, 0], [0, 0]]}, {"p": 0.5, "density": [[0, 0], [0, 1]]}]})";
  CHECK(json::parse(run({"holevo", "--ensemble", dens.string(), "--format", "json"}).out)["holevo_chi_bits"] == 1.0);

  const auto bad = temp_path("bad.json");
  std::ofstream(bad) << R"({"members": [{"p": 1.0}]})";
  CHECK(run({"holevo", "--ensemble", bad.string()}).code == 2);
  CHECK(run({"holevo", "--ensemble", "/nonexistent/ensemble.json"}).code == 3);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 2);
  CHECK(run({"analyze", "--protocol", "bb84"}).code == 2);
  CHECK(run({"analyze", "--bogus"}).code == 2);
  CHECK(run({"simulate", "--rounds", "0"}).code == 2);
  CHECK(run({"analyze", "--rounds", "-3"}).code == 2);
  CHECK(run({"analyze", "--help"}).code == 0);
  CHECK(run({"holevo", "--out", "/nonexistent/dir/out.json"}).code == 3);
}

TEST_CASE("--out writes the same bytes as stdout") {
  const auto path = temp_path("out.csv");
  const Result to_file = run({"simulate", "--rounds", "50", "--format", "csv", "--out", path.string()});
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  std::ifstream in(path, std::ios::binary);
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == run({"simulate", "--rounds", "50", "--format", "csv"}).out);
  CHECK(content.find('\r') == std::string::npos);
}

TEST_CASE("QDL_SEED supplies the default seed and --seed overrides it") {
  const std::vector<std::string> base = {"analyze", "--rounds", "100", "--format", "json"};
  ::setenv("QDL_SEED", "77", 1);
  const json env = json::parse(run(base).out);
  auto explicit_args = base;
  explicit_args.insert(explicit_args.end(), {"--seed", "3"});
  const json overridden = json::parse(run(explicit_args).out);
  ::unsetenv("QDL_SEED");
  CHECK(env["monte_carlo"]["seed"] == 77);
  CHECK(overridden["monte_carlo"]["seed"] == 3);
}

TEST_CASE("number formatting") {
  CHECK(qdl::cli::format_number(2.0) == "2.0");
  CHECK(qdl::cli::format_number(0.75) == "0.75");
  CHECK(qdl::cli::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(qdl::cli::format_number(-1e-16) == "0.0");
  CHECK(qdl::cli::round12(1.0 / 3.0) == 0.333333333333);
}
