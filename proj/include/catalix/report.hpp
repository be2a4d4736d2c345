#ifndef CATALIX_REPORT_HPP
#define CATALIX_REPORT_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "catalix/solvers.hpp"

namespace catalix {

// Machine-readable run report. Keys are emitted sorted, so two runs with the
// same seed produce byte-identical documents once the timing fields are
// stripped.
inline nlohmann::json report_options(const SolveOptions& o) {
  return {{"method", o.method},
          {"ev_var", o.ev_var},
          {"max_primes", o.max_primes},
          {"max_points", o.max_points},
          {"prime_lo", o.prime_lo},
          {"prime_hi", o.prime_hi},
          {"certify", o.certify},
          {"force", o.force},
          {"seed", o.seed},
          {"jobs", o.jobs},
          {"budget_seconds", o.budget_seconds}};
}

inline nlohmann::json report_certificate(const Certificate& c) {
  nlohmann::json j{{"order_checked", c.order_checked},
                   {"bound_used", c.bound_used},
                   {"status", c.status}};
  if (c.status == "refuted") j["residual_valuation"] = c.valuation;
  return j;
}

inline nlohmann::json solve_report(const DdeSpec& spec, const SolveOptions& opts,
                                   const AnnihilatorResult& res) {
  nlohmann::json j;
  j["spec"] = spec.name;
  j["command"] = "solve";
  j["options"] = report_options(opts);
  j["polynomial"] = to_canonical_string(res.r);
  j["deg_t"] = res.deg_t;
  j["deg_z0"] = res.deg_z0;
  j["certificate"] =
      res.certificate ? report_certificate(*res.certificate) : nlohmann::json();
  j["diagnostics"] = {{"primes", res.primes},
                      {"points", res.points},
                      {"d_cp", res.gstats.d_cp},
                      {"max_reducers", res.gstats.max_reducers},
                      {"pairs_processed", res.gstats.pairs_processed},
                      {"d_chi", res.d_chi},
                      {"staircase", res.staircase}};
  j["notes"] = res.notes;
  j["seconds"] = res.seconds;
  return j;
}

// Table-style rendering with one row per run: method, prime count, sampled
// variable, point count, Groebner and eliminant diagnostics, time, degrees.
inline std::string human_table(const nlohmann::json& j) {
  auto cell = [](const nlohmann::json& v) -> std::string {
    if (v.is_null()) return "-";
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  const auto& d = j.at("diagnostics");
  std::vector<std::pair<std::string, std::string>> cols = {
      {"S", cell(j.at("options").at("method"))},
      {"#P", std::to_string(d.at("primes").size())},
      {"Z", cell(j.at("options").at("ev_var"))},
      {"#pts", cell(d.at("points"))},
      {"d_cp", cell(d.at("d_cp"))},
      {"d_chi", d.at("d_chi").get<long>() < 0 ? "-" : cell(d.at("d_chi"))},
      {"T", cat(j.at("seconds").get<double>(), "s")},
      {"d_t", cell(j.at("deg_t"))},
      {"d_z0", cell(j.at("deg_z0"))},
  };
  std::string head, row;
  for (auto& [h, v] : cols) {
    std::size_t w = std::max(h.size(), v.size()) + 2;
    head += h + std::string(w - h.size(), ' ');
    row += v + std::string(w - v.size(), ' ');
  }
  std::string out = head + "\n" + row + "\n";
  out += "R = " + j.at("polynomial").get<std::string>() + "\n";
  if (!j.at("certificate").is_null()) {
    const auto& c = j.at("certificate");
    out += "certificate: " + c.at("status").get<std::string>() + " at order " +
           cell(c.at("order_checked")) + " (" + c.at("bound_used").get<std::string>() +
           ")\n";
  }
  for (const auto& n : j.at("notes")) out += "note: " + n.get<std::string>() + "\n";
  return out;
}

}  // namespace catalix

#endif
