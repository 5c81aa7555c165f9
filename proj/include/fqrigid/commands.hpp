#pragma once

#include "char_sum.hpp"
#include "clique.hpp"
#include "config.hpp"
#include "directions.hpp"
#include "field.hpp"
#include "mult_structure.hpp"
#include "report.hpp"
#include "rigidity_search.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fqrigid {

namespace detail {

template <class T> std::string str(const T &v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline std::string join(const std::vector<std::uint32_t> &v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

inline std::ofstream open_out(const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoFailure("cannot write " + path);
  return out;
}

inline void field_info(const ExperimentConfig &c, Report &r) {
  const Field F = Field::build(c.p, c.n);
  const auto factors = nt::prime_factors(F.order());
  r.payload = {{"field", to_json(F)},
               {"q", F.size()},
               {"order_factors", factors},
               {"generator_coeffs", F.coeffs(F.generator())}};
  r.summary.push_back("q = " + std::to_string(F.size()) + ", modulus coefficients " +
                      join(F.modulus()) + " (low to high)");
  r.summary.push_back("primitive root encoding " + std::to_string(F.generator().code));
}

inline void directions_cmd(const ExperimentConfig &c, Report &r) {
  const Field F = Field::build(c.p, c.n);
  if (c.coeffs.size() != F.degree())
    throw InvalidValue("coeffs: expected " + std::to_string(F.degree()) + " coefficients");
  std::vector<Element> cs;
  for (auto code : c.coeffs) cs.push_back(F.element(code));
  const LinearizedMap L(F, cs);
  const auto table = L.value_table();
  const auto dirs = directions_of_additive(L);
  const auto witness = is_frobenius_linear(F, table);
  r.payload = {{"field", to_json(F)},
               {"coeffs", c.coeffs},
               {"directions", to_json(dirs)},
               {"small_directions", 2 * dirs.size() <= std::uint64_t{F.size()} + 1},
               {"frobenius_linear", to_json(witness)}};
  if (F.size() <= 4096) r.payload["values"] = codes_of(table);
  if (F.order() % c.d == 0) {
    const CosetUnion D(F, c.d, c.cosets);
    r.payload["coset_union"] = to_json(D);
    r.payload["within_coset_union"] = directions_within(dirs, D);
  }
  r.summary.push_back("|directions| = " + std::to_string(dirs.size()));
  r.summary.push_back(witness ? "frobenius-linear with j = " + std::to_string(witness->j)
                              : std::string("not frobenius-linear"));
}

inline void rigidity_cmd(const ExperimentConfig &c, Report &r) {
  const auto rep = verify_thm_main(c.p, c.n, c.d, c.cosets, {c.jobs, c.cap});
  r.payload = to_json(rep);
  r.summary.push_back("searched " + std::to_string(rep.search_space) + " nonzero additive maps");
  r.summary.push_back("survivors " + std::to_string(rep.survivors.size()) + " (" +
                      std::to_string(rep.frobenius_linear) + " frobenius-linear, " +
                      std::to_string(rep.exceptional) + " exceptional)");
  r.summary.push_back(std::string("p-bound ") + (rep.p_bound ? "holds" : "fails") +
                      ", |D| <= (q+1)/2 " + (rep.small_d ? "holds" : "fails"));
  r.violations = rep.violations;
}

inline void directions_theorem_cmd(const ExperimentConfig &c, Report &r) {
  const auto res = verify_thm_directions_bruteforce(c.q);
  r.payload = to_json(res);
  r.summary.push_back(std::to_string(res.functions) + " functions with f(0) = 0, " +
                      std::to_string(res.few_directions) + " with few directions");
  if (res.violations)
    r.violations.push_back("THEOREM VIOLATION: " + std::to_string(res.violations) +
                           " non-additive function(s) with few directions");
}

inline void charsum_cmd(const ExperimentConfig &c, Report &r) {
  json rows = json::array();
  std::uint64_t pass = 0, fail = 0, na = 0;
  if (c.mode == "rou") {
    if (c.d_max > 20) throw SearchSpaceTooLarge("rou audit enumerates 2^d sets; d-max <= 20");
    std::vector<std::pair<RouAudit, std::vector<std::uint32_t>>> audits;
    for (std::uint32_t d = 1; d <= c.d_max; ++d) {
      for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
        std::vector<std::uint32_t> M;
        for (std::uint32_t m = 0; m < d; ++m)
          if (mask >> m & 1u) M.push_back(m);
        auto a = rou_l1_audit(d, M);
        const bool ok = a.l1_ok && a.l2_ok && (!a.exact_l2 || *a.exact_l2 == std::int64_t{d} * a.r);
        (ok ? pass : fail) += 1;
        if (!ok) r.violations.push_back("rou audit failed for d = " + std::to_string(d) + ", M = " + join(M));
        rows.push_back(to_json(a, M));
        audits.emplace_back(a, std::move(M));
      }
    }
    if (!c.csv.empty()) {
      auto out = open_out(c.csv);
      write_rou_csv(audits, out);
    }
  } else {
    std::vector<AuditRow> audits;
    if (c.mode == "weil")
      audits = weil_batch(c.count, c.seed, c.p_max, c.n_max ? c.n_max : 4);
    else if (c.mode == "cor22")
      audits = cor22_batch(c.count, c.seed, c.p_max, c.n_max ? c.n_max : 4);
    else
      audits = cor23_batch(c.count, c.seed, c.p_max, c.n_max ? c.n_max : 3);
    for (std::size_t i = 0; i < audits.size(); ++i) {
      const auto v = audits[i].audit.verdict;
      if (v == Verdict::Pass) ++pass;
      else if (v == Verdict::Fail) ++fail;
      else ++na;
      if (v == Verdict::Fail)
        r.violations.push_back("bound exceeded in row " + std::to_string(i));
      rows.push_back(to_json(audits[i]));
    }
    if (!c.csv.empty()) {
      auto out = open_out(c.csv);
      write_audit_csv(audits, out);
    }
  }
  r.payload = {{"mode", c.mode}, {"pass", pass}, {"fail", fail}, {"not_applicable", na},
               {"rows", rows}};
  r.summary.push_back(c.mode + ": " + std::to_string(pass) + " pass, " + std::to_string(fail) +
                      " fail, " + std::to_string(na) + " not applicable");
}

inline void clique_cmd(const ExperimentConfig &c, Report &r) {
  const auto inst = make_instance(c.p, c.n, c.d, c.cosets);
  CliqueSearchOptions opts;
  opts.jobs = c.jobs;
  opts.q_cap = c.q_cap;
  const auto rep = verify_thm_main2(inst, c.mode, opts);
  r.payload = to_json(rep);
  if (!c.edges.empty()) {
    auto out = open_out(c.edges);
    write_edge_list(inst, out);
  }
  r.summary.push_back(std::to_string(rep.cliques.size()) + " clique(s) of size q through 0,1; " +
                      std::to_string(rep.exceptions) + " differ from F_q");
  r.summary.push_back(std::string("hypotheses ") + (rep.theorem_applies ? "hold" : "do not hold") +
                      " (mode " + rep.mode + ")");
  if (c.mode == "catalog" && rep.exceptions)
    r.summary.push_back("exceptions recorded as catalog data");
  r.violations = rep.violations;
}

inline void exceptional_cmd(const ExperimentConfig &c, Report &r) {
  const Field F = Field::build(c.p, c.n);
  auto ds = c.d_list;
  if (ds.empty())
    for (auto d : nt::divisors(F.order()))
      if (d >= 2) ds.push_back(static_cast<std::uint32_t>(d));
  const auto found = find_exceptional_examples(F, ds, c.r_max, {c.jobs, c.cap});
  json list = json::array();
  for (const auto &e : found) {
    list.push_back(to_json(e));
    const std::uint64_t size = std::uint64_t{e.cosets.size()} * (F.order() / e.d);
    if (e.p_bound && 2 * size <= std::uint64_t{F.size()} + 1)
      r.violations.push_back("THEOREM VIOLATION: exceptional map " + join(e.coeffs) +
                             " for d = " + std::to_string(e.d));
  }
  r.payload = {{"field", to_json(F)}, {"d_list", ds}, {"r_max", c.r_max}, {"examples", list}};
  r.summary.push_back(std::to_string(found.size()) + " exceptional map(s) up to scaling");
}

/// a + b u with a, b in (-p/2, p/2].
inline std::string f25_label(const Field &F, Element u, Element x) {
  // x = c0 + c1 t and u = 2t, so b = c1 / 2.
  const auto c = F.coeffs(x);
  const auto uc = F.coeffs(u);
  const std::int64_t p = F.characteristic();
  const std::int64_t inv = static_cast<std::int64_t>(nt::powmod(uc[1], p - 2, p));
  auto centred = [&](std::int64_t v) { v = ((v % p) + p) % p; return v > p / 2 ? v - p : v; };
  const std::int64_t a = centred(c[0]), b = centred(c[1] * inv);
  std::string s;
  if (a != 0 || b == 0) s = std::to_string(a);
  if (b != 0) {
    if (!s.empty()) s += b < 0 ? "-" : "+";
    else if (b < 0) s += "-";
    if (std::abs(b) != 1) s += std::to_string(std::abs(b));
    s += "u";
  }
  return s;
}

inline void example_f25_cmd(const ExperimentConfig &, Report &r) {
  const Field F = Field::build(5, 2);
  // u = 2t; t^2 = -2 for the modulus t^2 + 2.
  const Element u = F.from_coeffs(std::vector<std::uint32_t>{0, 2});
  const Element one = F.one();
  auto labels = [&](const std::vector<Element> &xs) {
    std::vector<std::string> out;
    for (auto x : xs) out.push_back(f25_label(F, u, x));
    return out;
  };

  std::vector<Element> fourth;
  for (std::uint32_t x = 1; x < F.size(); ++x) fourth.push_back(F.pow(Element{x}, 4));
  std::sort(fourth.begin(), fourth.end());
  fourth.erase(std::unique(fourth.begin(), fourth.end()), fourth.end());

  std::vector<std::uint32_t> M{F.log(u) % 6, F.log(F.add(one, u)) % 6, F.log(F.sub(one, u)) % 6};
  std::sort(M.begin(), M.end());
  M.erase(std::unique(M.begin(), M.end()), M.end());
  const CosetUnion D(F, 6, M);

  const LinearizedMap f(F, {one, u});
  const auto table = f.value_table();
  const auto dirs = directions_of_function(F, table);
  const bool inside = directions_within(dirs, D);
  const auto witness = is_frobenius_linear(F, table);
  const bool bound = check_p_bound(5, 2, 6, D.cosets());
  const auto rigidity = verify_thm_main(D);

  r.payload = {{"field", to_json(F)},
               {"u", u.code},
               {"u_squared", F.mul(u, u).code},
               {"fourth_powers", codes_of(fourth)},
               {"fourth_powers_labels", labels(fourth)},
               {"coset_union", to_json(D)},
               {"f_coeffs", {one.code, u.code}},
               {"directions", to_json(dirs)},
               {"directions_labels", labels(dirs.slopes())},
               {"directions_within_D", inside},
               {"frobenius_linear", to_json(witness)},
               {"p_bound", bound},
               {"rigidity", to_json(rigidity)}};

  auto braces = [](const std::vector<std::string> &v) {
    std::string s = "{";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + v[k];
    return s + "}";
  };
  r.summary.push_back("F_25 with modulus t^2+2, u = 2t, u^2 = " + f25_label(F, u, F.mul(u, u)));
  r.summary.push_back("fourth powers: " + braces(labels(fourth)));
  r.summary.push_back("directions of x + u x^5: " + braces(labels(dirs.slopes())));
  r.summary.push_back(std::string("directions inside uH u (1+u)H u (1-u)H: ") +
                      (inside ? "yes" : "no"));
  r.summary.push_back(std::string("frobenius-linear: ") + (witness ? "yes" : "no"));
  r.summary.push_back("p-bound for (5,2,6," + std::to_string(D.cosets()) + "): " +
                      (bound ? "holds" : "fails") + "; exceptional survivors: " +
                      std::to_string(rigidity.exceptional));

  if (F.mul(u, u) != F.from_int(2)) r.violations.push_back("u^2 != 2");
  if (!inside) r.violations.push_back("directions not inside D");
  if (witness) r.violations.push_back("x + u x^5 reported frobenius-linear");
  r.violations.insert(r.violations.end(), rigidity.violations.begin(), rigidity.violations.end());
}

} // namespace detail

/// Runs the configured command and returns its report. Errors propagate.
inline Report run_command(const ExperimentConfig &c) {
  const auto start = std::chrono::steady_clock::now();
  Report r;
  r.command = c.command;
  r.config = c;
  if (c.command == "field-info") detail::field_info(c, r);
  else if (c.command == "directions") detail::directions_cmd(c, r);
  else if (c.command == "rigidity") detail::rigidity_cmd(c, r);
  else if (c.command == "directions-theorem") detail::directions_theorem_cmd(c, r);
  else if (c.command == "charsum") detail::charsum_cmd(c, r);
  else if (c.command == "clique") detail::clique_cmd(c, r);
  else if (c.command == "exceptional") detail::exceptional_cmd(c, r);
  else if (c.command == "example-f25") detail::example_f25_cmd(c, r);
  else throw UnknownCommand("unknown command '" + c.command + "'");
  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

} // namespace fqrigid
