#pragma once

#include "error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fqrigid {

inline const std::vector<std::string> &known_commands() {
  static const std::vector<std::string> cmds{"field-info", "directions", "rigidity",
                                             "directions-theorem", "charsum", "clique",
                                             "exceptional", "example-f25"};
  return cmds;
}

/// Everything a single run needs. Options that a command does not use are
/// carried but ignored.
struct ExperimentConfig {
  std::string command;
  /// "audit" for charsum, empty otherwise.
  std::string action;

  std::uint32_t p = 5;
  std::uint32_t n = 1;
  std::uint32_t d = 2;
  std::vector<std::uint32_t> cosets{0};
  /// Linearized map coefficients (element encodings) for `directions`.
  std::vector<std::uint32_t> coeffs;
  /// Field size for `directions-theorem`.
  std::uint32_t q = 5;
  /// Index list for `exceptional`; empty means every divisor d >= 2 of q-1.
  std::vector<std::uint32_t> d_list;
  std::uint32_t r_max = 1;

  std::string mode;
  std::uint64_t count = 100;
  std::uint64_t seed = 1;
  std::uint32_t p_max = 97;
  /// 0 selects the per-mode default.
  std::uint32_t n_max = 0;
  std::uint32_t d_max = 10;

  std::uint64_t cap = std::uint64_t{1} << 28;
  std::uint32_t q_cap = 17;
  unsigned jobs = 1;

  std::string out;
  std::string csv;
  std::string edges;
  std::string config_file;

  /// Set when --help was requested; nothing else is meaningful then.
  std::optional<std::string> help;

  bool operator==(const ExperimentConfig &) const = default;
};

namespace detail {

inline std::vector<std::uint32_t> parse_uint_list(const std::string &key, const std::string &text,
                                                  bool allow_empty = false) {
  std::vector<std::uint32_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw InvalidValue(key + ": '" + text + "' is not a comma-separated list of integers");
    try {
      const unsigned long v = std::stoul(tok);
      if (v > UINT32_MAX) throw std::out_of_range(tok);
      out.push_back(static_cast<std::uint32_t>(v));
    } catch (const std::exception &) {
      throw InvalidValue(key + ": '" + tok + "' is out of range");
    }
  }
  if (out.empty() && !allow_empty) throw InvalidValue(key + ": empty list");
  return out;
}

inline void require_distinct(const std::string &key, const std::vector<std::uint32_t> &v) {
  if (std::set<std::uint32_t>(v.begin(), v.end()).size() != v.size())
    throw InvalidValue(key + ": duplicate entries");
}

/// The option name CLI11 complains about, if it can be recovered.
inline std::string offending_key(const std::string &what) {
  const auto pos = what.find("--");
  if (pos == std::string::npos) return what;
  auto end = what.find_first_of(" :\n", pos);
  return what.substr(pos + 2, end == std::string::npos ? std::string::npos : end - pos - 2);
}

} // namespace detail

/// Parses `args` (without the program name). A flat `key = value` file given
/// by --config supplies defaults; explicit flags win over the file.
inline ExperimentConfig parse_config(const std::vector<std::string> &args) {
  ExperimentConfig c;
  CLI::App app{"finite-field rigidity laboratory", "fqrigid"};
  app.set_config("--config", "", "flat key = value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);
  // A repeated flag keeps its last value.
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string cosets_text, coeffs_text, d_list_text;
  app.add_option("--p", c.p, "characteristic");
  app.add_option("--n", c.n, "extension degree");
  app.add_option("--d", c.d, "subgroup index");
  app.add_option("--cosets", cosets_text, "coset exponents, e.g. 0,1,2")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--coeffs", coeffs_text, "linearized coefficients c_0,...,c_{n-1} as encodings")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--q", c.q, "field size (directions-theorem)");
  app.add_option("--d-list", d_list_text, "subgroup indices (exceptional)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::Join);
  app.add_option("--r-max", c.r_max, "largest coset count (exceptional)");
  app.add_option("--mode", c.mode, "charsum: weil|cor22|cor23|rou; clique: verify|catalog");
  app.add_option("--count", c.count, "number of random instances");
  app.add_option("--seed", c.seed, "random seed");
  app.add_option("--p-max", c.p_max, "largest prime drawn by audits");
  app.add_option("--n-max", c.n_max, "largest degree drawn by audits (0 = mode default)");
  app.add_option("--d-max", c.d_max, "largest index for the rou audit");
  app.add_option("--cap", c.cap, "search-space cap");
  app.add_option("--q-cap", c.q_cap, "largest q for clique search");
  app.add_option("--jobs", c.jobs, "worker threads");
  app.add_option("--out", c.out, "JSON report path");
  app.add_option("--csv", c.csv, "CSV export path (charsum)");
  app.add_option("--edges", c.edges, "edge-list export path (clique)");

  std::vector<CLI::App *> subs;
  for (const auto &name : known_commands()) {
    auto *s = app.add_subcommand(name);
    s->fallthrough();
    subs.push_back(s);
  }
  auto *audit = subs[4]->add_subcommand("audit", "run a batch of bound audits");
  audit->fallthrough();
  subs[4]->require_subcommand(1);

  std::vector<std::string> argv(args.rbegin(), args.rend());
  if (args.empty() || args.front().rfind("-", 0) != 0) {
    if (!args.empty() &&
        std::find(known_commands().begin(), known_commands().end(), args.front()) ==
            known_commands().end())
      throw UnknownCommand("unknown command '" + args.front() + "'");
  }
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp &) {
    c.help = app.help();
    return c;
  } catch (const CLI::ConfigError &e) {
    throw InvalidValue(std::string("config: ") + e.what());
  } catch (const CLI::RequiredError &e) {
    throw UnknownCommand(e.what());
  } catch (const CLI::ParseError &e) {
    throw InvalidValue(detail::offending_key(e.what()) + ": " + e.what());
  }
  for (auto *s : subs)
    if (s->parsed()) c.command = s->get_name();
  if (c.command == "charsum") c.action = "audit";
  if (auto *opt = app.get_option("--config"); opt->count() > 0) c.config_file = opt->as<std::string>();

  if (!cosets_text.empty()) {
    c.cosets = detail::parse_uint_list("cosets", cosets_text);
    detail::require_distinct("cosets", c.cosets);
  }
  if (!coeffs_text.empty()) c.coeffs = detail::parse_uint_list("coeffs", coeffs_text);
  if (!d_list_text.empty()) {
    c.d_list = detail::parse_uint_list("d-list", d_list_text);
    detail::require_distinct("d-list", c.d_list);
  }

  if (c.n == 0) throw InvalidValue("n: must be at least 1");
  if (c.d == 0) throw InvalidValue("d: must be at least 1");
  if (c.jobs == 0) throw InvalidValue("jobs: must be at least 1");
  for (auto m : c.cosets)
    if (m >= c.d) throw InvalidValue("cosets: exponent " + std::to_string(m) + " is not below d");
  if (c.command == "charsum") {
    if (c.mode.empty()) c.mode = "weil";
    if (c.mode != "weil" && c.mode != "cor22" && c.mode != "cor23" && c.mode != "rou")
      throw InvalidValue("mode: '" + c.mode + "' is not one of weil, cor22, cor23, rou");
    if (c.count == 0) throw InvalidValue("count: must be positive");
  } else if (c.command == "clique") {
    if (c.mode.empty()) c.mode = "verify";
    if (c.mode != "verify" && c.mode != "catalog")
      throw InvalidValue("mode: '" + c.mode + "' is not one of verify, catalog");
  }
  return c;
}

inline ExperimentConfig parse_config(int argc, const char *const *argv) {
  return parse_config(std::vector<std::string>(argv + 1, argv + argc));
}

} // namespace fqrigid
