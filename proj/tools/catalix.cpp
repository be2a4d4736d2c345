#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "catalix/report.hpp"

using namespace catalix;

namespace {

// Exit codes: 0 success, 2 parse error, 3 mode error, 4 hypothesis
// diagnostic, 5 resource ceiling, 1 anything else.
struct ModeFailure : Error {
  explicit ModeFailure(const std::string& m) : Error(m) {}
};

void require_fixed_point(const DdeSpec& s, const char* what) {
  if (s.mode != DdeSpec::Mode::FixedPoint)
    throw ModeFailure(cat(what, " needs a fixed-point equation (f and Q), but ", s.name,
                          " only gives P"));
}

void apply_prime_bits(SolveOptions& o, const std::string& range) {
  int lo = 0, hi = 0;
  char dash = 0;
  std::istringstream in(range);
  if (!(in >> lo)) throw Error("bad prime-bit range '" + range + "'");
  if (in >> dash >> hi) {
    if (dash != '-') throw Error("bad prime-bit range '" + range + "'");
  } else {
    hi = lo;
  }
  if (lo < 8 || hi < lo || hi > 31)
    throw Error("prime bits must lie in 8..31, got '" + range + "'");
  o.prime_lo = (1u << (lo - 1)) + 1;
  o.prime_hi = 1u << hi;
}

std::string u_ring_string(const UPoly<Rat>& c) {
  auto vars = make_vars({"u"});
  auto ord = make_order(MonomialOrder::lex(1));
  MPoly<Rat> m = MPoly<Rat>::zero(vars, ord);
  for (int i = 0; i <= c.deg(); ++i) {
    auto ci = c[static_cast<std::size_t>(i)];
    if (!is_zero(ci))
      m = m + MPoly<Rat>::var(vars, ord, 0, static_cast<unsigned>(i), ci);
  }
  return to_canonical_string(m);
}

int run_expand(const std::string& file, long sigma, const std::string& at, bool full) {
  DdeSpec spec = parse_dde_file(file);
  require_fixed_point(spec, "expand");
  if (sigma < 1) throw Error("sigma must be at least 1");
  TSeries<Rat> f = expand_series(spec, static_cast<std::size_t>(sigma));
  if (full) {
    for (std::size_t n = 0; n < f.sigma(); ++n)
      std::cout << "t^" << n << ": " << u_ring_string(f.c[n]) << "\n";
    return 0;
  }
  Rat a = at.empty() ? spec.a : detail::parse_rational(at, 1, 1);
  std::vector<Rat> v = specialize_series(f, a);
  for (std::size_t n = 0; n < v.size(); ++n)
    std::cout << (n ? ", " : "") << v[n];
  std::cout << "\n";
  return 0;
}

int run_solve(const std::string& file, const SolveOptions& opts, bool human) {
  DdeSpec spec = parse_dde_file(file);
  AnnihilatorResult res = solve_annihilator(spec, opts);
  nlohmann::json rep = solve_report(spec, opts, res);
  if (human)
    std::cout << human_table(rep);
  else
    std::cout << rep.dump(2) << "\n";
  if (res.certificate && res.certificate->status == "refuted")
    throw SolveDiagnostic("certificate refuted the reconstructed polynomial");
  return 0;
}

int run_probe(const std::string& file, const SolveOptions& opts) {
  DdeSpec spec = parse_dde_file(file);
  ModularProbe pr = run_modular_probe(spec, opts);
  std::cout << "p=" << pr.p << " theta=" << pr.theta << " d_t=" << pr.d_t
            << " d_z0=" << pr.d_z0 << "\n";
  return 0;
}

int run_check(const std::string& file, const std::string& poly_path, long order) {
  DdeSpec spec = parse_dde_file(file);
  require_fixed_point(spec, "check");
  std::ifstream in(poly_path);
  if (!in) throw Error("cannot open " + poly_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  AnnRing ar = ann_ring();
  MPoly<Rat> r = parse_poly(buf.str(), ar.vars, ar.ord);
  if (r.is_zero_poly()) throw Error("the polynomial to check is zero");
  long dt = r.deg_in(ar.it), dz = r.deg_in(ar.iz0);
  long threshold = 2 * dt * dz;  // probe rule with R's own degrees as the box
  // The rule degenerates for t-free or z0-free claims; always read enough
  // terms that a wrong constant still produces a nonzero residual.
  if (order < 0) order = std::max(threshold, dt + dz + 1);
  Certificate c = certify_at(r, spec, order, threshold, cat("probe(", dt, ",", dz, ")"));
  if (c.status == "refuted")
    std::cout << "refuted: residual valuation " << c.valuation << "\n";
  else
    std::cout << c.status << " at order " << c.order_checked << " (threshold "
              << threshold << ", " << c.bound_used << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact annihilating polynomials for discrete differential equations"};
  app.require_subcommand(1);

  SolveOptions opts;
  std::string prime_bits;
  if (const char* env = std::getenv("CATALIX_PRIME_BITS")) prime_bits = env;

  std::string file, at_point, poly_path;
  long sigma = 10, order = -1;
  bool full = false, human = false;

  auto* expand = app.add_subcommand("expand", "print the series F(t, a)");
  expand->add_option("file", file, "DDE file")->required();
  expand->add_option("--sigma", sigma, "number of terms");
  expand->add_option("--at", at_point, "specialization point (default: the file's)");
  expand->add_flag("--full", full, "print F(t, u) with polynomial coefficients");

  auto* solve = app.add_subcommand("solve", "compute an annihilator of F(t, a)");
  solve->add_option("file", file, "DDE file")->required();
  solve->add_option("--method", opts.method, "direct | hgp | elim | geom")
      ->check(CLI::IsMember({"direct", "hgp", "elim", "geom"}));
  solve->add_option("--ev-var", opts.ev_var, "evaluation-interpolation variable")
      ->check(CLI::IsMember({"t", "z0"}));
  solve->add_option("--primes", opts.max_primes, "CRT prime cap");
  solve->add_option("--points", opts.max_points, "evaluation point cap per prime");
  solve->add_option("--prime-bits", prime_bits, "prime size, bits or lo-hi range");
  solve->add_flag("--certify", opts.certify, "replay the residual proof");
  solve->add_flag("--force", opts.force, "keep going on hypothesis failures");
  solve->add_option("--seed", opts.seed, "RNG seed");
  solve->add_option("--jobs", opts.jobs, "worker threads");
  solve->add_option("--budget", opts.budget_seconds, "time ceiling in seconds");
  solve->add_flag("--human", human, "table output instead of JSON");

  auto* probe = app.add_subcommand("probe", "modular degree probe");
  probe->add_option("file", file, "DDE file")->required();
  probe->add_option("--method", opts.method, "direct | elim | geom")
      ->check(CLI::IsMember({"direct", "elim", "geom"}));
  probe->add_option("--prime-bits", prime_bits, "prime size, bits or lo-hi range");
  probe->add_option("--seed", opts.seed, "RNG seed");
  probe->add_option("--budget", opts.budget_seconds, "time ceiling in seconds");

  auto* check = app.add_subcommand("check", "certify a polynomial against a file");
  check->add_option("file", file, "DDE file")->required();
  check->add_option("--poly", poly_path, "polynomial file, canonical text in t and z0")
      ->required();
  check->add_option("--order", order, "check order (default: the probe-rule threshold)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!prime_bits.empty()) apply_prime_bits(opts, prime_bits);
    if (expand->parsed()) return run_expand(file, sigma, at_point, full);
    if (solve->parsed()) return run_solve(file, opts, human);
    if (probe->parsed()) return run_probe(file, opts);
    return run_check(file, poly_path, order);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ModeFailure& e) {
    std::cerr << "mode error: " << e.what() << "\n";
    return 3;
  } catch (const ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 5;
  } catch (const SolveDiagnostic& e) {
    std::cerr << "diagnostic: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
