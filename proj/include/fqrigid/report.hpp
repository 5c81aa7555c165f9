#pragma once

#include "char_sum.hpp"
#include "clique.hpp"
#include "config.hpp"
#include "directions.hpp"
#include "field.hpp"
#include "mult_structure.hpp"
#include "rigidity_search.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace fqrigid {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// ---- serializers ---------------------------------------------------------

inline json to_json(const Field &F) {
  return {{"p", F.characteristic()},
          {"n", F.degree()},
          {"modulus", F.modulus()},
          {"g", F.generator().code}};
}

inline json to_json(const CosetUnion &D) { return {{"d", D.index()}, {"M", D.exponents()}}; }

inline json to_json(const DirectionSet &S) {
  std::vector<std::uint32_t> codes;
  for (auto s : S.slopes()) codes.push_back(s.code);
  return {{"slopes", codes}, {"infinity", S.has_infinity()}, {"size", S.size()}};
}

inline json codes_of(const std::vector<Element> &xs) {
  json a = json::array();
  for (auto x : xs) a.push_back(x.code);
  return a;
}

inline json to_json(const std::optional<FrobeniusWitness> &w) {
  if (!w) return nullptr;
  return {{"a", w->a.code}, {"j", w->j}, {"b", w->b.code}};
}

inline json to_json(const Survivor &s) {
  return {{"coeffs", s.coeffs},
          {"classification", s.exceptional() ? "exceptional" : "frobenius-linear"},
          {"witness", to_json(s.witness)},
          {"direction_count", s.direction_count}};
}

/// Timing is left out so that identical runs produce identical payloads.
inline json to_json(const RigidityReport &r) {
  json surv = json::array();
  for (const auto &s : r.survivors) surv.push_back(to_json(s));
  return {{"p", r.p},
          {"n", r.n},
          {"q", r.q},
          {"d", r.d},
          {"M", r.cosets},
          {"r", r.r},
          {"coset_union_size", r.coset_union_size},
          {"hypotheses",
           {{"p_bound", r.p_bound},
            {"p_bound_applicable", r.p_bound_applicable},
            {"p_bound_threshold", r.p_bound_threshold},
            {"small_d", r.small_d}}},
          {"search_space", r.search_space},
          {"survivor_count", r.survivors.size()},
          {"frobenius_linear", r.frobenius_linear},
          {"exceptional", r.exceptional},
          {"survivors", surv}};
}

inline json to_json(const BruteForceResult &b) {
  return {{"q", b.q},
          {"functions", b.functions},
          {"few_directions", b.few_directions},
          {"few_directions_additive", b.few_directions_additive},
          {"violations", b.violations}};
}

inline json to_json(const ExceptionalExample &e) {
  return {{"d", e.d},
          {"M", e.cosets},
          {"coeffs", e.coeffs},
          {"orbit_representative", e.orbit_representative},
          {"p_bound", e.p_bound}};
}

inline json to_json(const BoundAudit &a) {
  json hyp = json::object(), det = json::object();
  for (const auto &[k, v] : a.hypotheses) hyp[k] = v;
  for (const auto &[k, v] : a.details) det[k] = v;
  return {{"re", a.value.real()},
          {"im", a.value.imag()},
          {"abs", std::abs(a.value)},
          {"bound", a.bound},
          {"margin", a.margin},
          {"hypotheses", hyp},
          {"details", det},
          {"verdict", to_string(a.verdict)}};
}

inline json to_json(const AuditRow &row) {
  json in = json::object();
  for (const auto &[k, v] : row.inputs) in[k] = v;
  json j = to_json(row.audit);
  j["inputs"] = in;
  j["mode"] = row.mode;
  return j;
}

inline json to_json(const RouAudit &a, const std::vector<std::uint32_t> &M) {
  return {{"d", a.d},
          {"M", M},
          {"r", a.r},
          {"l1", a.l1},
          {"l2", a.l2},
          {"bound", a.bound},
          {"l1_ok", a.l1_ok},
          {"l2_ok", a.l2_ok},
          {"exact_l2", a.exact_l2 ? json(*a.exact_l2) : json(nullptr)}};
}

inline json to_json(const CliqueReport &r) {
  json cliques = json::array();
  for (const auto &A : r.cliques) cliques.push_back(codes_of(A));
  json pipe = json::array();
  for (const auto &c : r.pipeline)
    pipe.push_back({{"graph", c.graph},
                    {"direction_inclusion", c.direction_inclusion},
                    {"few_directions", c.few_directions},
                    {"additive", c.additive},
                    {"direction_count", c.direction_count},
                    {"error", c.error}});
  return {{"p", r.p},
          {"n", r.n},
          {"q", r.q},
          {"d", r.d},
          {"M", r.cosets},
          {"r", r.r},
          {"mode", r.mode},
          {"hypotheses",
           {{"fq_star_in_S", r.fq_star_in_S},
            {"r_at_most_half", r.r_at_most_half},
            {"p_bound", r.p_bound},
            {"subgroup_case", r.subgroup_case},
            {"prime_base_case", r.prime_base_case},
            {"theorem_applies", r.theorem_applies}}},
          {"clique_count", r.cliques.size()},
          {"subfield_found", r.subfield_found},
          {"exceptions", r.exceptions},
          {"cliques", cliques},
          {"v", r.v ? json(r.v->code) : json(nullptr)},
          {"pipeline", pipe},
          {"stats", {{"candidates", r.stats.candidates}, {"nodes", r.stats.nodes}}}};
}

inline json to_json(const ExperimentConfig &c) {
  return {{"command", c.command}, {"action", c.action}, {"p", c.p},
          {"n", c.n},             {"d", c.d},           {"cosets", c.cosets},
          {"coeffs", c.coeffs},   {"q", c.q},           {"d_list", c.d_list},
          {"r_max", c.r_max},     {"mode", c.mode},     {"count", c.count},
          {"seed", c.seed},       {"p_max", c.p_max},   {"n_max", c.n_max},
          {"d_max", c.d_max},     {"cap", c.cap},       {"q_cap", c.q_cap},
          {"jobs", c.jobs},       {"out", c.out},       {"csv", c.csv},
          {"edges", c.edges},     {"config_file", c.config_file}};
}

inline ExperimentConfig config_from_json(const json &j) {
  ExperimentConfig c;
  j.at("command").get_to(c.command);
  j.at("action").get_to(c.action);
  j.at("p").get_to(c.p);
  j.at("n").get_to(c.n);
  j.at("d").get_to(c.d);
  j.at("cosets").get_to(c.cosets);
  j.at("coeffs").get_to(c.coeffs);
  j.at("q").get_to(c.q);
  j.at("d_list").get_to(c.d_list);
  j.at("r_max").get_to(c.r_max);
  j.at("mode").get_to(c.mode);
  j.at("count").get_to(c.count);
  j.at("seed").get_to(c.seed);
  j.at("p_max").get_to(c.p_max);
  j.at("n_max").get_to(c.n_max);
  j.at("d_max").get_to(c.d_max);
  j.at("cap").get_to(c.cap);
  j.at("q_cap").get_to(c.q_cap);
  j.at("jobs").get_to(c.jobs);
  j.at("out").get_to(c.out);
  j.at("csv").get_to(c.csv);
  j.at("edges").get_to(c.edges);
  j.at("config_file").get_to(c.config_file);
  return c;
}

// ---- report envelope -----------------------------------------------------

struct Report {
  int schema_version = kSchemaVersion;
  std::string command;
  ExperimentConfig config;
  json payload = json::object();
  /// Human-readable lines printed before the violation summary.
  std::vector<std::string> summary;
  double wall_time_s = 0.0;
  std::vector<std::string> violations;

  bool clean() const noexcept { return violations.empty(); }
  bool operator==(const Report &o) const {
    return schema_version == o.schema_version && command == o.command && config == o.config &&
           payload == o.payload && summary == o.summary && wall_time_s == o.wall_time_s &&
           violations == o.violations;
  }
};

inline json to_json(const Report &r) {
  return {{"schema_version", r.schema_version},
          {"command", r.command},
          {"config", to_json(r.config)},
          {"payload", r.payload},
          {"summary", r.summary},
          {"wall_time_s", r.wall_time_s},
          {"violations", r.violations.empty() ? json("none") : json(r.violations)}};
}

inline Report report_from_json(const json &j) {
  Report r;
  j.at("schema_version").get_to(r.schema_version);
  if (r.schema_version != kSchemaVersion)
    throw InvalidValue("schema_version: unsupported value " + std::to_string(r.schema_version));
  j.at("command").get_to(r.command);
  r.config = config_from_json(j.at("config"));
  r.payload = j.at("payload");
  j.at("summary").get_to(r.summary);
  j.at("wall_time_s").get_to(r.wall_time_s);
  const auto &v = j.at("violations");
  if (v.is_string()) {
    if (v.get<std::string>() != "none") throw InvalidValue("violations: expected \"none\" or a list");
  } else {
    v.get_to(r.violations);
    if (r.violations.empty()) throw InvalidValue("violations: empty list must be written as \"none\"");
  }
  return r;
}

inline Report read_report(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open " + path);
  try {
    return report_from_json(json::parse(in));
  } catch (const json::exception &e) {
    throw InvalidValue(std::string("report: ") + e.what());
  }
}

/// Prints the summary to `os`, writes the JSON report to `path` when it is
/// nonempty, and returns the process exit status.
inline int emit_report(const Report &r, const std::string &path, std::ostream &os) {
  os << r.command << '\n';
  for (const auto &line : r.summary) os << "  " << line << '\n';
  os << "  wall time: " << r.wall_time_s << " s\n";
  if (r.violations.empty()) {
    os << "violations: none\n";
  } else {
    os << "violations: " << r.violations.size() << '\n';
    for (const auto &v : r.violations) os << "  " << v << '\n';
  }
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write " + path);
    out << to_json(r).dump(2) << '\n';
    if (!out) throw IoFailure("write failed for " + path);
    os << "report: " << path << '\n';
  }
  return r.clean() ? 0 : 1;
}

// ---- CSV -----------------------------------------------------------------

/// One row per audit; input columns follow the first row's inputs.
inline void write_audit_csv(const std::vector<AuditRow> &rows, std::ostream &os) {
  os << "mode";
  if (!rows.empty())
    for (const auto &[k, v] : rows.front().inputs) os << ',' << k;
  os << ",re,im,abs,bound,margin,hypotheses_hold,verdict\n";
  os.precision(17);
  for (const auto &row : rows) {
    os << row.mode;
    for (const auto &[k, v] : row.inputs) os << ',' << v;
    const auto &a = row.audit;
    os << ',' << a.value.real() << ',' << a.value.imag() << ',' << std::abs(a.value) << ','
       << a.bound << ',' << a.margin << ',' << (a.hypotheses_hold() ? 1 : 0) << ','
       << to_string(a.verdict) << '\n';
  }
}

inline void write_rou_csv(const std::vector<std::pair<RouAudit, std::vector<std::uint32_t>>> &rows,
                          std::ostream &os) {
  os << "d,M,r,l1,l2,bound,l1_ok,l2_ok,exact_l2\n";
  os.precision(17);
  for (const auto &[a, M] : rows) {
    os << a.d << ",\"";
    for (std::size_t k = 0; k < M.size(); ++k) os << (k ? "," : "") << M[k];
    os << "\"," << a.r << ',' << a.l1 << ',' << a.l2 << ',' << a.bound << ',' << a.l1_ok << ','
       << a.l2_ok << ',';
    if (a.exact_l2) os << *a.exact_l2;
    os << '\n';
  }
}

} // namespace fqrigid
