#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "perioda/json_io.hpp"
#include "perioda/random_instances.hpp"
#include "perioda/weierstrass_suite.hpp"

namespace perioda::cli {

using io::json;

enum ExitCode : int { verified = 0, falsified = 1, invalid_input = 2, internal = 3 };

struct Flags {
  std::string command;
  std::string input;
  std::string output;
  std::optional<long> window;
  std::optional<long> den_cap;
  double tol = 1e-8;
  double radius = 64.0;
  std::uint64_t seed = 1;
  std::string format = "json";
  std::optional<long> p;
  std::optional<long> q;
  std::string x;
  std::string y;
  std::optional<long> modulus;
  std::vector<long> s_primes;
  std::vector<long> t_primes;
  long range = 500;
  std::string omega1 = "1,0";
  std::string omega2 = "0,1";
  std::optional<long> probes;
  bool inject_fault = false;
  bool timing = false;
};

struct Report {
  std::string command;
  std::string status = "verified";
  json certificate = json::object();
  std::optional<json> witness;
  std::optional<json> error;

  int exit_code = verified;

  void falsify(json w) {
    status = "falsified";
    witness = std::move(w);
    exit_code = falsified;
  }
  void fail(int code, const std::string& kind, const std::string& message, json extra = json::object()) {
    status = "error";
    json e = {{"kind", kind}, {"message", message}};
    for (auto& [k, v] : extra.items()) e[k] = v;
    error = std::move(e);
    exit_code = code;
  }

  json to_json() const {
    json j = {{"command", command}, {"status", status}, {"certificate", certificate}};
    if (witness) j["witness"] = *witness;
    if (error) j["error"] = *error;
    return j;
  }
};

inline json load_json(const std::string& path) {
  if (path.empty()) throw InputError("--input is required for this command");
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

inline long require(const std::optional<long>& v, const char* flag) {
  if (!v) throw InputError(std::string(flag) + " is required for this command");
  return *v;
}

inline Window default_window(std::size_t rank, const Flags& f, std::optional<Window> from_input = std::nullopt) {
  Window w = from_input.value_or(rank <= 1 ? Window{4, 12, {}} : rank == 2 ? Window{2, 6, {}} : Window{1, 4, {}});
  if (f.window) w.bound = *f.window;
  if (f.den_cap) w.den_cap = *f.den_cap;
  if (w.bound < 1 || w.den_cap < 1) throw InputError("--window and --den-cap must be positive");
  return w;
}

inline PrimeSet to_prime_set(const std::vector<long>& v, const char* name) {
  PrimeSet s(v.begin(), v.end());
  check_prime_set(s, name);
  return s;
}

/// Deterministic off-M probes alpha * v + w with small rational v, w.
inline std::vector<Point> default_probes(const Lattice& lat, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> out;
  while (out.size() < count) {
    Point z(lat.rank());
    for (std::size_t j = 0; j < lat.rank(); ++j) z[j] = Scalar(rng.rational(6, 12), rng.rational(4, 4));
    if (!z.is_rational()) out.push_back(z);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

inline void cmd_reconstruct(const Flags& f, Report& rep) {
  json in = load_json(f.input);
  Integer p = io::integer_from(in.at("P")), q = io::integer_from(in.at("Q"));
  std::optional<QuasiPeriodicFn> e;
  QuasiPeriodicFn gp, gq;
  if (p < 2 || q < 2) throw InputError("P and Q must be >= 2");
  if (in.contains("e")) {
    e = io::qpf_from(in.at("e"));
    gp = dilate_diff(*e, p);
    gq = dilate_diff(*e, q);
  } else {
    gp = io::qpf_from(in.at("gP"));
    gq = io::qpf_from(in.at("gQ"));
  }
  std::optional<Window> given;
  if (in.contains("window")) given = io::window_from(in.at("window"));
  Window w = default_window(gp.rank(), f, given);
  rep.certificate["P"] = p.get_str();
  rep.certificate["Q"] = q.get_str();

  if (gcd(p, q) != 1) {
    std::vector<Point> probes;
    if (in.contains("probes"))
      for (const auto& z : in.at("probes")) probes.push_back(io::point_from(z));
    else
      probes = default_probes(gp.lattice(), static_cast<std::size_t>(f.probes.value_or(8)), f.seed);
    auto sub = independent_sublattice(gp, gq, p, q, probes);
    rep.certificate["mode"] = "independent";
    rep.certificate["sublattice"] = io::to_json(sub);
    if (!sub.verified) {
      json wit = {{"z", io::to_json(*sub.witness_z)},
                  {"values", {to_string(sub.value_z), to_string(sub.value_shifted)}}};
      if (sub.witness_lambda) wit["lambda"] = io::to_json(*sub.witness_lambda);
      rep.falsify(wit);
    }
    return;
  }

  ReconstructOptions opts;
  opts.inject_fault = f.inject_fault;
  auto cert = reconstruct_periodic(gp, gq, p, q, w, opts);
  rep.certificate["mode"] = "coprime";
  rep.certificate["reconstruction"] = io::to_json(cert);
  if (e) {
    auto cmp = equal_on_cosets(cert.result.with_zero_value(e->zero_value()), *e);
    rep.certificate["matches_input_off_zero"] = cmp.equal;
    if (!cmp.equal) throw TheoremViolation("reconstruction differs from the input function off 0");
  }
}

inline void cmd_counterexample(const Flags& f, Report& rep) {
  const long p = f.p.value_or(2);
  if (p < 2) throw InputError("--P must be >= 2");
  QuasiPeriodicFn g(Lattice::standard(1));
  g.add(Point::rational({make_rational(1, 3)}), 1);
  g.add(Point::rational({make_rational(-1, 3)}), 1);
  TelescopeFn tel(g, Integer(p));
  Window w{f.window.value_or(30), f.den_cap.value_or(6), {}};
  if (w.bound < 1 || w.den_cap < 1) throw InputError("--window and --den-cap must be positive");
  const Point one = Point::rational({Rational(1)});
  auto cmp = equal_on_window(tel, Translated<TelescopeFn>(tel, one), w, thread_cap());
  json growth = json::array();
  Integer pn = 1;
  for (long n = 1; n <= 20; ++n) {
    pn *= p;
    Point x = Point::rational({Rational(pn) / 3});
    growth.push_back({{"n", n}, {"x", to_string(x[0].rat)}, {"value", to_string(tel.eval(x))}});
  }
  rep.certificate = {{"g", io::to_json(g)},
                     {"P", p},
                     {"translate", io::to_json(one)},
                     {"window", io::to_json(w)},
                     {"points_checked", cmp.points_checked},
                     {"growth", growth}};
  if (!cmp.equal)
    rep.falsify({{"point", io::to_json(*cmp.witness)},
                 {"values", {to_string(cmp.left_value), to_string(cmp.right_value)}}});
}

inline void cmd_lemma1(const Flags& f, Report& rep) {
  if (f.x.empty() || f.y.empty()) throw InputError("--x and --y are required for lemma1");
  Integer x, y;
  try {
    x = io::integer_from(json(f.x));
    y = io::integer_from(json(f.y));
  } catch (const InputError&) {
    throw InputError("--x and --y must be integers");
  }
  auto walk = lemma1_walk(x, y, Integer(require(f.modulus, "--N")), to_prime_set(f.s_primes, "S"),
                          to_prime_set(f.t_primes, "T"));
  rep.certificate = io::to_json(walk);
  if (!walk.x_sim_z || !walk.z_sim_y) throw TheoremViolation("lemma1 chain fails a relation");
}

inline void cmd_closure(const Flags& f, Report& rep) {
  long n = require(f.modulus, "--N");
  auto s = to_prime_set(f.s_primes, "S"), t = to_prime_set(f.t_primes, "T");
  auto res = equivalence_closure_bruteforce(f.range, n, s, t);
  std::set<long> residues;
  for (long v = -f.range; v <= f.range; ++v)
    if (v != 0) residues.insert(((v % n) + n) % n);
  rep.certificate = {{"N", n},
                     {"S", json(s)},
                     {"T", json(t)},
                     {"range", f.range},
                     {"class_count", res.classes.size()},
                     {"residue_count", residues.size()},
                     {"contained_in_residues", res.contained_in_residues},
                     {"equals_residues", res.equals_residues}};
  if (res.merge_witness)
    rep.falsify({{"merged", {res.merge_witness->first, res.merge_witness->second}}});
  else if (res.split_witness)
    rep.falsify({{"split", {res.split_witness->first, res.split_witness->second}}});
}

inline CocyclePair cocycle_from(const json& in) {
  CocyclePair c;
  c.p = io::integer_from(in.at("p"));
  c.q = io::integer_from(in.at("q"));
  if (c.p < 2 || c.q < 2) throw InputError("p and q must be >= 2");
  c.d_sigma = io::divisor_from(in.at("d_sigma"));
  c.d_tau = io::divisor_from(in.at("d_tau"));
  return c;
}

inline void cmd_divisor_solve(const Flags& f, Report& rep) {
  json in = load_json(f.input);
  Lattice lf = io::lattice_from(in.at("lattice_f"));
  std::optional<Divisor> e;
  CocyclePair c;
  if (in.contains("e")) {
    e = io::divisor_from(in.at("e"));
    c.p = io::integer_from(in.at("p"));
    c.q = io::integer_from(in.at("q"));
    if (c.p < 2 || c.q < 2) throw InputError("p and q must be >= 2");
    c.d_sigma = Divisor(dilate_diff(e->function(), c.p));
    c.d_tau = Divisor(dilate_diff(e->function(), c.q));
  } else {
    c = cocycle_from(in);
  }
  Window w{f.window.value_or(1), f.den_cap.value_or(2), {}};
  if (w.bound < 1 || w.den_cap < 1) throw InputError("--window and --den-cap must be positive");
  auto sol = solve_coboundary(c, lf, w);
  rep.certificate = io::to_json(sol);
  if (e) {
    auto lhs = rebase(sol.e.function(), e->lattice());
    bool same = lhs && equal_on_cosets(*lhs, e->function()).equal;
    rep.certificate["matches_input"] = same;
    if (!same) throw TheoremViolation("coboundary solution differs from the input divisor");
  }
}

inline void cmd_divisor_check(const Flags& f, Report& rep) {
  json in = load_json(f.input);
  if (in.contains("d_sigma")) {
    auto c = cocycle_from(in);
    auto r = check_special_cocycle(c);
    rep.certificate = io::to_json(r);
    if (!r.passed)
      rep.falsify({{"point", io::to_json(*r.witness)}, {"values", {to_string(r.lhs), to_string(r.rhs)}}});
    return;
  }
  Divisor d = io::divisor_from(in.at("divisor"));
  Lattice l = in.contains("lattice") ? io::lattice_from(in.at("lattice")) : d.lattice();
  auto cert = principality_certificate(d, l);
  rep.certificate = io::to_json(cert);
  if (!cert.verdict)
    rep.falsify({{"degree", to_string(Rational(cert.degree))},
                 {"aj", io::to_json(cert.aj)},
                 {"aj_in_lattice", cert.aj_in_lattice}});
}

inline json suite_json(const SuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"residual", c.residual}, {"tol", c.tol}, {"passed", c.passed}});
  return {{"omega1", io::to_json(r.lattice.omega1)},
          {"omega2", io::to_json(r.lattice.omega2)},
          {"checks", checks},
          {"passed", r.passed}};
}

inline void cmd_weierstrass(const Flags& f, Report& rep) {
  ComplexLattice lat(io::complex_from(f.omega1), io::complex_from(f.omega2));
  SuiteOptions opt;
  opt.tol = f.tol;
  if (!(opt.tol > 0.0)) throw InputError("--tol must be positive");
  if (f.probes && *f.probes < 1) throw InputError("--probes must be positive");
  opt.probes = static_cast<std::size_t>(f.probes.value_or(100));
  opt.seed = f.seed;
  long p = f.p.value_or(2), q = f.q.value_or(3);
  if (p < 2 || q < 2) throw InputError("--P and --Q must be >= 2");
  opt.pairs = {{p, q}};
  TruncationPolicy pol;
  pol.radius = f.radius;
  if (!(pol.radius > 0.0)) throw InputError("--radius must be positive");
  auto r = run_weierstrass_suite(lat, opt, pol);
  rep.certificate = suite_json(r);
  for (const auto& c : r.checks)
    if (!c.passed) {
      rep.fail(internal, "numerical", "identity residual above tolerance: " + c.name,
               {{"check", c.name}, {"residual", c.residual}, {"tol", c.tol}});
      return;
    }
}

/// Reduced-size pass over the property corpus.
inline void cmd_selftest(const Flags& f, Report& rep) {
  json results = json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok) {
    results.push_back({{"name", name}, {"passed", ok}});
    all = all && ok;
  };
  auto closure = equivalence_closure_bruteforce(100, 10, {5}, {2});
  record("closure_equals_residues", closure.equals_residues);

  Rng rng(f.seed);
  bool trips = true;
  for (int i = 0; i < 10; ++i) {
    std::size_t r = static_cast<std::size_t>(rng.uniform(1, 2));
    Lattice l = rng.lattice(r);
    long p = rng.uniform(2, 7), q;
    do q = rng.uniform(2, 7);
    while (gcd(Integer(p), Integer(q)) != 1);
    auto e = rng.function(l, 4, 12, rng.coin());
    auto cert = reconstruct_periodic(dilate_diff(e, p), dilate_diff(e, q), p, q, Window{1, 2, {}});
    trips = trips && equal_on_cosets(cert.result.with_zero_value(e.zero_value()), e).equal;
  }
  record("reconstruct_round_trip", trips);

  QuasiPeriodicFn g(Lattice::standard(1));
  g.add(Point::rational({make_rational(1, 3)}), 1);
  g.add(Point::rational({make_rational(-1, 3)}), 1);
  TelescopeFn tel(g, Integer(2));
  bool growth = true;
  for (long n = 1; n <= 10; ++n) growth = growth && tel.eval(Point::rational({Rational(pow(Integer(2), n)) / 3})) == n;
  record("counterexample_growth", growth);

  bool divisors = true;
  for (int i = 0; i < 5; ++i) {
    Lattice lf = Lattice::standard(2);
    Divisor e = random_principal(rng, lf, 3, 4);
    CocyclePair c{Divisor(dilate_diff(e.function(), 2)), Divisor(dilate_diff(e.function(), 3)), 2, 3};
    auto sol = solve_coboundary(c, lf);
    divisors = divisors && sol.e == e;
  }
  record("divisor_round_trip", divisors);

  SuiteOptions opt;
  opt.probes = 10;
  opt.seed = f.seed;
  auto suite = run_weierstrass_suite(ComplexLattice({1.0, 0.0}, {0.3, 1.2}), opt);
  record("weierstrass_suite", suite.passed);

  rep.certificate = {{"seed", f.seed}, {"results", results}};
  if (!all) rep.fail(internal, "selftest", "selftest failed");
}

// ---------------------------------------------------------------------------

inline std::string emit_text(const Report& r) {
  std::ostringstream os;
  os << r.command << ": " << r.status << "\n";
  for (const auto& [k, v] : r.certificate.items())
    if (!v.is_structured()) os << "  " << k << " = " << v.dump() << "\n";
  if (r.witness) os << "  witness = " << r.witness->dump() << "\n";
  if (r.error) os << "  error = " << r.error->at("message").get<std::string>() << "\n";
  return os.str();
}

inline std::string emit(const Report& r, const std::string& format) {
  if (format == "text") return emit_text(r);
  return r.to_json().dump(2) + "\n";
}

inline void dispatch(const Flags& f, Report& rep) {
  if (f.command == "reconstruct") return cmd_reconstruct(f, rep);
  if (f.command == "counterexample") return cmd_counterexample(f, rep);
  if (f.command == "lemma1") return cmd_lemma1(f, rep);
  if (f.command == "closure") return cmd_closure(f, rep);
  if (f.command == "divisor-solve") return cmd_divisor_solve(f, rep);
  if (f.command == "divisor-check") return cmd_divisor_check(f, rep);
  if (f.command == "weierstrass-verify") return cmd_weierstrass(f, rep);
  if (f.command == "selftest") return cmd_selftest(f, rep);
  throw InputError("unknown command " + f.command);
}

/// Runs one command; the report goes to --output or `out`, diagnostics to `err`.
inline Report execute(const Flags& f) {
  Report rep;
  rep.command = f.command;
  auto start = std::chrono::steady_clock::now();
  try {
    dispatch(f, rep);
  } catch (const IncompatibleInput& e) {
    rep.fail(invalid_input, "incompatible", e.what(),
             {{"coset", io::to_json(e.coset)}, {"lhs", to_string(e.lhs)}, {"rhs", to_string(e.rhs)}});
  } catch (const Unsupported& e) {
    rep.fail(invalid_input, "unsupported", e.what());
  } catch (const InputError& e) {
    rep.fail(invalid_input, "invalid_input", e.what());
  } catch (const DomainError& e) {
    rep.fail(invalid_input, "domain", e.what());
  } catch (const json::exception& e) {
    rep.fail(invalid_input, "invalid_input", e.what());
  } catch (const TheoremViolation& e) {
    rep.fail(internal, "theorem_violation", e.what());
  } catch (const std::exception& e) {
    rep.fail(internal, "internal", e.what());
  }
  if (rep.exit_code == internal || rep.exit_code == invalid_input) {
    rep.witness.reset();
    if (rep.status != "error") rep.status = "error";
  }
  if (f.timing) {
    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rep.certificate["timing_ms"] = ms;
  }
  return rep;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact periodicity reconstruction, divisor cocycles and Weierstrass checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--input", f.input, "Input JSON file");
  app.add_option("--output", f.output, "Write the report here instead of stdout");
  app.add_option("--window", f.window, "Window bound B");
  app.add_option("--den-cap", f.den_cap, "Window denominator cap D");
  app.add_option("--tol", f.tol, "Numerical tolerance")->capture_default_str();
  app.add_option("--radius", f.radius, "Lattice-sum radius for the direct oracle")->capture_default_str();
  app.add_option("--seed", f.seed, "Seed for random probes and sweeps")->capture_default_str();
  app.add_option("--format", f.format, "json or text")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("--P", f.p, "First dilation");
  app.add_option("--Q", f.q, "Second dilation");
  app.add_option("--x", f.x, "lemma1 start");
  app.add_option("--y", f.y, "lemma1 end");
  app.add_option("--N", f.modulus, "Modulus");
  app.add_option("--S", f.s_primes, "Prime set S, comma separated")->delimiter(',');
  app.add_option("--T", f.t_primes, "Prime set T, comma separated")->delimiter(',');
  app.add_option("--range", f.range, "closure range")->capture_default_str();
  app.add_option("--omega1", f.omega1, "First period as re,im")->capture_default_str();
  app.add_option("--omega2", f.omega2, "Second period as re,im")->capture_default_str();
  app.add_option("--probes", f.probes, "Probe count");
  app.add_flag("--inject-fault", f.inject_fault, "Corrupt the reconstruction before verification (testing)");
  app.add_flag("--timing", f.timing, "Include wall time in the report");
  for (const char* name : {"reconstruct", "lemma1", "closure", "counterexample", "divisor-solve", "divisor-check",
                           "weierstrass-verify", "selftest"})
    app.add_subcommand(name, std::string(name) + " pipeline");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return verified;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return invalid_input;
  }
  f.command = app.get_subcommands().front()->get_name();
  if (f.range < 1) {
    err << "error: --range must be >= 1\n";
    return invalid_input;
  }

  Report rep = execute(f);
  std::string text = emit(rep, f.format);
  if (rep.error) err << "error: " << rep.error->at("message").get<std::string>() << "\n";
  if (f.output.empty()) {
    out << text;
  } else {
    std::ofstream file(f.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << f.output << "'\n";
      return internal;
    }
    file << text;
  }
  return rep.exit_code;
}

}  // namespace perioda::cli
