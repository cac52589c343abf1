#include "dlat/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "dlat/acceptance.hpp"
#include "dlat/errors.hpp"
#include "dlat/experiments.hpp"
#include "dlat/potential.hpp"

namespace dlat {

namespace {

using nlohmann::json;

constexpr const char* kSchemaVersion = "1";

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(trim(cur));
  return parts;
}

// Exponent k of h = 2^-k from "1", "1/N" (N a power of two) or "2^-k".
int dyadic_exponent(const std::string& term) {
  const std::string t = trim(term);
  auto fail = [&]() -> int { throw ArgumentError("h value '" + t + "' is not of the form 1/2^k"); };
  if (t == "1") return 0;
  if (t.rfind("2^-", 0) == 0) {
    std::size_t pos = 0;
    int k = 0;
    try {
      k = std::stoi(t.substr(3), &pos);
    } catch (const std::exception&) {
      return fail();
    }
    if (pos != t.size() - 3 || k < 0 || k > 60) return fail();
    return k;
  }
  if (t.rfind("1/", 0) != 0) return fail();
  std::size_t pos = 0;
  long long den = 0;
  try {
    den = std::stoll(t.substr(2), &pos);
  } catch (const std::exception&) {
    return fail();
  }
  if (pos != t.size() - 2 || den < 1 || (den & (den - 1)) != 0) return fail();
  int k = 0;
  while ((1LL << k) < den) ++k;
  return k;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json momentum_json(const Momentum& xi) { return json(std::vector<double>(xi.begin(), xi.end())); }

json z_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

void write_output(const ExperimentConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out.empty()) {
    out << text;
    return;
  }
  const std::filesystem::path path(cfg.out);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os << text;
    if (!os.flush()) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

bool slope_ok(const ExperimentConfig& cfg, double slope) {
  return !cfg.expect_slope || (slope >= cfg.expect_slope->first && slope <= cfg.expect_slope->second);
}

std::string fit_comment(const std::string& what, const RateFit& f) {
  return "# fit " + what + " slope=" + fmt(f.slope) + " intercept=" + fmt(f.intercept) +
         " r_squared=" + fmt(f.r_squared) + " points=" + std::to_string(f.points) +
         " dropped_largest_h=" + (f.dropped_largest_h ? "1" : "0") + "\n";
}

// ---------------------------------------------------------------- commands

int cmd_symbol_sweep(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ostringstream os;
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "model,d,m,z_re,z_im,h,sup_diff";
  for (int a = 1; a <= cfg.d; ++a) os << ",xi_argmax_" << a;
  os << ",grid_n\n";
  std::ostringstream fits;
  bool ok = true;
  const int grid_n = cfg.grid_n > 0 ? cfg.grid_n : default_grid_n(cfg.d);
  for (ModelKind k : cfg.models)
    for (cplx z : cfg.z_list) {
      const auto recs = convergence_sweep(k, cfg.d, cfg.m, z, cfg.h_list, grid_n);
      for (const auto& r : recs) {
        os << to_string(k) << ',' << cfg.d << ',' << fmt(cfg.m) << ',' << fmt(z.real()) << ',' << fmt(z.imag()) << ','
           << fmt(r.h) << ',' << fmt(r.value);
        for (double x : r.xi_argmax) os << ',' << fmt(x);
        os << ',' << r.grid_n << '\n';
      }
      if (recs.size() >= 2) {
        const RateFit f = fit_rate(recs);
        fits << fit_comment("model=" + std::string(to_string(k)) + " z=" + fmt(z.real()) + "," + fmt(z.imag()), f);
        if (!slope_ok(cfg, f.slope)) {
          ok = false;
          err << "slope " << f.slope << " for " << to_string(k) << " outside the expected range\n";
        }
      }
    }
  write_output(cfg, os.str() + fits.str(), out);
  return ok ? 0 : 1;
}

int cmd_witness(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.models.size() != 2) throw ArgumentError("witness needs exactly two models (--pair a,b)");
  json reports = json::array();
  bool ok = true;
  for (double h : cfg.h_list) {
    const ModelId a{cfg.models[0], cfg.d, cfg.m, h}, b{cfg.models[1], cfg.d, cfg.m, h};
    const WitnessReport r = nonconvergence_witness(a, b, h, cfg.grid_n);
    const bool pass = r.measured >= r.closed_form - 1e-9;
    ok = ok && pass;
    reports.push_back({{"a", r.a.label()},
                       {"b", r.b.label()},
                       {"h", r.h},
                       {"measured", r.measured},
                       {"at_witness", r.at_witness},
                       {"closed_form", r.closed_form},
                       {"xi_witness", momentum_json(r.xi_witness)},
                       {"grid_n", r.grid_n},
                       {"pass", pass}});
  }
  if (!ok) err << "measured grid maximum fell below the closed form\n";
  const json doc{{"schema_version", kSchemaVersion}, {"command", "witness"}, {"reports", reports}, {"pass", ok}};
  write_output(cfg, doc.dump(2) + "\n", out);
  return ok ? 0 : 1;
}

int cmd_doubling(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.m != 0.0) throw ArgumentError("doubling requires m = 0");
  json models = json::array();
  const int grid_n = cfg.grid_n > 0 ? cfg.grid_n : default_grid_n(cfg.d);
  for (ModelKind k : cfg.models) {
    const ModelId model{k, cfg.d, 0.0, 1.0};
    const auto zeros = symbol_zero_census(model, grid_n);
    json reps = json::array();
    for (const auto& z : zeros) reps.push_back(momentum_json(z));
    models.push_back({{"model", std::string(to_string(k))}, {"zeros", zeros.size()}, {"representatives", reps}});
  }
  const json doc{{"schema_version", kSchemaVersion}, {"command", "doubling"}, {"d", cfg.d},
                 {"h", 1.0},                        {"grid_n", aligned_grid_n(grid_n)}, {"models", models}};
  write_output(cfg, doc.dump(2) + "\n", out);
  return 0;
}

int cmd_operator_gap(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ostringstream os, fits;
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "model,d,m,z_re,z_im,pair,box,h,n,R,probe,l2_gap,h1_gap\n";
  bool ok = true;
  for (ModelKind k : cfg.models)
    for (cplx z : cfg.z_list) {
      OperatorGapConfig oc = default_operator_gap_config(k, cfg.d, cfg.m);
      oc.z = z;
      oc.box = cfg.box;
      if (cfg.refinement > 0) oc.refinement = cfg.refinement;
      if (!cfg.h_list.empty()) oc.h_list = cfg.h_list;
      oc.pair = cfg.pair;
      oc.seed = cfg.seed;
      const auto rows = operator_gap_sweep(oc);
      std::vector<double> hs, l2, h1;
      for (const auto& r : rows) {
        for (std::size_t p = 0; p < r.probe_gaps.size(); ++p)
          os << to_string(k) << ',' << cfg.d << ',' << fmt(cfg.m) << ',' << fmt(z.real()) << ',' << fmt(z.imag())
             << ',' << to_string(cfg.pair) << ',' << fmt(oc.box) << ',' << fmt(r.h) << ',' << r.n << ','
             << oc.refinement << ',' << to_string(oc.probes[p]) << ',' << fmt(r.probe_gaps[p].l2) << ','
             << fmt(r.probe_gaps[p].h1) << '\n';
        hs.push_back(r.h);
        l2.push_back(r.l2_max);
        h1.push_back(r.h1_max);
      }
      if (rows.size() >= 2) {
        const std::string tag = "model=" + std::string(to_string(k)) + " z=" + fmt(z.real()) + "," + fmt(z.imag());
        const RateFit fl2 = fit_rate(hs, l2), fh1 = fit_rate(hs, h1);
        fits << fit_comment(tag + " norm=l2", fl2) << fit_comment(tag + " norm=h1", fh1);
        const double gated = cfg.gate_h1 ? fh1.slope : fl2.slope;
        if (!slope_ok(cfg, gated)) {
          ok = false;
          err << (cfg.gate_h1 ? "H1" : "L2") << " slope " << gated << " for " << to_string(k)
              << " outside the expected range\n";
        }
      }
    }
  write_output(cfg, os.str() + fits.str(), out);
  return ok ? 0 : 1;
}

HolderPotential build_potential(const ExperimentConfig& cfg) {
  if (cfg.potential == "zero") return zero_potential(cfg.d);
  const SymbolMatrix mat = cfg.d == 3 ? dirac_matrices().alpha[0] : pauli(1);
  if (cfg.potential == "tanh") return tanh_potential(cfg.d, cfg.amplitude, mat, cfg.box);
  if (cfg.potential == "cusp") return cusp_potential(cfg.d, cfg.amplitude, cfg.theta, mat, cfg.box);
  if (cfg.potential == "constant") {
    const SymbolMatrix beta = cfg.d == 3 ? dirac_matrices().beta : pauli(3);
    return constant_potential(cfg.d, cfg.amplitude * beta);
  }
  throw ArgumentError("unknown potential '" + cfg.potential + "' (zero, constant, tanh, cusp)");
}

int cmd_potential_gap(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.pair != PairKind::smooth_biorthogonal) throw ArgumentError("potential-gap requires the smooth pair");
  if (cfg.models.size() != 1) throw ArgumentError("potential-gap takes exactly one model");
  if (cfg.z_list.size() != 1) throw ArgumentError("potential-gap takes exactly one z");
  const cplx z = cfg.z_list.front();
  if (z.imag() == 0.0) throw ArgumentError("potential-gap requires non-real z");
  const ModelKind k = cfg.models.front();
  const bool listed = (k == ModelKind::fb && cfg.d == 1) || (k == ModelKind::fb_mod && cfg.d >= 2) ||
                      k == ModelKind::s_mod;
  if (!listed) throw ArgumentError("potential-gap supports fb (d = 1), fb_mod (d = 2, 3) and s_mod");

  const HolderPotential v = build_potential(cfg);
  const RieszPair pair = build_pair(cfg.pair, cfg.d);
  PerturbedSweepConfig pc;
  pc.kind = k;
  pc.d = cfg.d;
  pc.m = cfg.m;
  pc.z = z;
  pc.box = cfg.box;
  pc.refinement = cfg.refinement > 0 ? cfg.refinement : 8;
  pc.h_list = cfg.h_list.empty() ? dyadic_h_list(2, 6) : cfg.h_list;
  pc.probes = all_probes();
  pc.seed = cfg.seed;

  const int n_min = static_cast<int>(std::lround(pc.box / pc.h_list.front()));
  const double tau = measure_tau(pair, n_min / 2.0);
  const double tp = theta_prime(v.theta, tau, cfg.d);
  const auto rows = perturbed_convergence_sweep(pc, v, pair);
  std::vector<SweepRecord> recs;
  json per_h = json::array();
  for (const auto& r : rows) {
    recs.push_back(r.record);
    json gaps = json::object();
    for (std::size_t p = 0; p < r.probe_gaps.size(); ++p) gaps[std::string(to_string(pc.probes[p]))] = r.probe_gaps[p];
    per_h.push_back({{"h", r.record.h},
                     {"n", r.record.grid_n},
                     {"gap", r.record.value},
                     {"probe_gaps", gaps},
                     {"max_iterations", r.max_iterations}});
  }
  const RateFit fit = fit_rate(recs);
  const bool pass = fit.slope >= 0.8 * tp && slope_ok(cfg, fit.slope);
  if (!pass) err << "slope " << fit.slope << " below 0.8 theta' = " << 0.8 * tp << "\n";
  const json doc{{"schema_version", kSchemaVersion},
                 {"command", "potential-gap"},
                 {"model", std::string(to_string(k))},
                 {"d", cfg.d},
                 {"m", cfg.m},
                 {"z", z_json(z)},
                 {"pair", std::string(to_string(cfg.pair))},
                 {"box", pc.box},
                 {"refinement", pc.refinement},
                 {"seed", pc.seed},
                 {"potential",
                  {{"id", v.id}, {"amplitude", cfg.amplitude}, {"theta", v.theta}, {"holder_const", v.holder_const},
                   {"sup_bound", v.sup_bound}}},
                 {"tau_measured", tau},
                 {"theta_prime", tp},
                 {"per_h", per_h},
                 {"fit", {{"slope", fit.slope}, {"intercept", fit.intercept}, {"r_squared", fit.r_squared}}},
                 {"threshold", 0.8 * tp},
                 {"pass", pass}};
  write_output(cfg, doc.dump(2) + "\n", out);
  return pass ? 0 : 1;
}

int cmd_check(const ExperimentConfig& cfg, std::ostream& out, std::ostream&) {
  bool ok = true;
  std::ostringstream os;
  for (int id : cfg.criteria) {
    const CriterionResult r = run_criterion(id);
    char head[160];
    std::snprintf(head, sizeof head, "[%s] criterion %d: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds);
    os << head << r.detail;
    out << head << r.detail << std::flush;
    ok = ok && r.pass;
  }
  if (!cfg.out.empty()) write_output(cfg, os.str(), out);
  return ok ? 0 : 1;
}

}  // namespace

std::vector<double> parse_h_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw ArgumentError("empty h list");
  std::vector<int> ks;
  const auto dots = t.find("..");
  if (dots != std::string::npos) {
    const int k1 = dyadic_exponent(t.substr(0, dots)), k2 = dyadic_exponent(t.substr(dots + 2));
    if (k2 < k1) throw ArgumentError("h range must run from the largest to the smallest h");
    for (int k = k1; k <= k2; ++k) ks.push_back(k);
  } else {
    for (const auto& part : split(t, ',')) {
      if (part.empty()) throw ArgumentError("empty entry in h list");
      ks.push_back(dyadic_exponent(part));
    }
  }
  std::vector<double> h;
  for (int k : ks) h.push_back(std::ldexp(1.0, -k));
  return h;
}

cplx parse_complex(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t += c;
  if (t.empty()) throw ArgumentError("empty complex number");
  auto num = [&](const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ArgumentError("cannot parse '" + text + "' as a complex number");
    }
    if (pos != s.size()) throw ArgumentError("cannot parse '" + text + "' as a complex number");
    return v;
  };
  const auto comma = t.find(',');
  if (comma != std::string::npos) return {num(t.substr(0, comma)), num(t.substr(comma + 1))};
  if (t.back() != 'i') return {num(t), 0.0};
  // Split a+bi at the last sign that is not part of an exponent.
  std::size_t split_at = std::string::npos;
  for (std::size_t i = t.size() - 1; i > 0; --i)
    if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
      split_at = i;
      break;
    }
  const std::string re = split_at == std::string::npos ? "" : t.substr(0, split_at);
  std::string im = split_at == std::string::npos ? t.substr(0, t.size() - 1) : t.substr(split_at, t.size() - 1 - split_at);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : num(re), num(im)};
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice Dirac operators: resolvent convergence experiments", "dirac_lattice"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  std::string d_s = "1", m_s = "0", model_s, z_s = "i", h_s, pair_s = "smooth", potential_s = "tanh", slope_s;
  int grid_n = 0, refinement = 0;
  double box = 4.0, amplitude = 0.5, theta = 1.0;
  std::uint64_t seed = 1;
  std::string out_path;
  bool gate_h1 = false, all = false;
  std::vector<int> criteria;

  auto common = [&](CLI::App* sc) {
    sc->add_option("--d", d_s, "spatial dimension (1, 2, 3)");
    sc->add_option("--m", m_s, "mass m >= 0");
    sc->add_option("--out", out_path, "output file (written atomically; stdout if omitted)");
  };
  auto* ss = app.add_subcommand("symbol-sweep", "sup-norm symbol resolvent difference against the continuum");
  common(ss);
  ss->add_option("--model", model_s, "comma-separated model kinds")->required();
  ss->add_option("--z", z_s, "shifts separated by ';', e.g. \"i;2i;1+i\"");
  ss->add_option("--h", h_s, "mesh sizes, e.g. 1/16..1/256");
  ss->add_option("--grid-n", grid_n, "momentum samples per axis");
  ss->add_option("--expect-slope", slope_s, "exit 1 unless every fitted slope lies in LO:HI");

  auto* ws = app.add_subcommand("witness", "non-convergence floors at the witness momenta");
  common(ws);
  ws->add_option("--pair", model_s, "two model kinds, e.g. fb,s")->required();
  ws->add_option("--h", h_s, "mesh sizes (default 1..1/256)");
  ws->add_option("--grid-n", grid_n, "momentum samples per axis");

  auto* ds = app.add_subcommand("doubling", "zero census of the m = 0 symbols");
  common(ds);
  ds->add_option("--model", model_s, "comma-separated model kinds (default s,s_mod)");
  ds->add_option("--grid-n", grid_n, "momentum samples per axis");

  auto* os = app.add_subcommand("operator-gap", "full-operator resolvent gaps on the probe set");
  common(os);
  os->add_option("--model", model_s, "comma-separated model kinds")->required();
  os->add_option("--z", z_s, "shifts separated by ';'");
  os->add_option("--h", h_s, "mesh sizes (default per dimension)");
  os->add_option("--box", box, "periodic box side");
  os->add_option("--R", refinement, "fine-grid refinement (power of two >= 4)");
  os->add_option("--pair", pair_s, "sinc or smooth");
  os->add_option("--seed", seed, "seed of the random band-limited probe");
  os->add_option("--expect-slope", slope_s, "exit 1 unless the fitted slope lies in LO:HI");
  os->add_flag("--gate-h1", gate_h1, "apply --expect-slope to the H1-normalised gaps");

  auto* ps = app.add_subcommand("potential-gap", "perturbed resolvent gaps and the theta' rate");
  common(ps);
  ps->add_option("--model", model_s, "model kind (default fb)");
  ps->add_option("--z", z_s, "non-real shift (default 2i)");
  ps->add_option("--h", h_s, "mesh sizes (default 1/4..1/64)");
  ps->add_option("--box", box, "periodic box side");
  ps->add_option("--R", refinement, "fine-grid refinement");
  ps->add_option("--pair", pair_s, "must be smooth");
  ps->add_option("--potential", potential_s, "zero, constant, tanh or cusp");
  ps->add_option("--amplitude", amplitude, "potential amplitude");
  ps->add_option("--theta", theta, "Hoelder exponent of the cusp potential");
  ps->add_option("--seed", seed, "probe seed");
  ps->add_option("--expect-slope", slope_s, "additionally require the slope in LO:HI");

  auto* cs = app.add_subcommand("check", "run acceptance criteria");
  cs->add_option("--criterion", criteria, "criterion id (1..10); repeatable");
  cs->add_flag("--all", all, "run every criterion");
  cs->add_option("--out", out_path, "also write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  ExperimentConfig cfg;
  try {
    auto parse_int = [](const std::string& s, const char* what) {
      std::size_t pos = 0;
      int v = 0;
      try {
        v = std::stoi(s, &pos);
      } catch (const std::exception&) {
        throw ArgumentError(std::string("invalid ") + what + " '" + s + "'");
      }
      if (pos != s.size()) throw ArgumentError(std::string("invalid ") + what + " '" + s + "'");
      return v;
    };
    auto parse_double = [](const std::string& s, const char* what) {
      std::size_t pos = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &pos);
      } catch (const std::exception&) {
        throw ArgumentError(std::string("invalid ") + what + " '" + s + "'");
      }
      if (pos != s.size()) throw ArgumentError(std::string("invalid ") + what + " '" + s + "'");
      return v;
    };
    cfg.d = parse_int(d_s, "--d");
    if (cfg.d < 1 || cfg.d > 3) throw ArgumentError("--d must be 1, 2 or 3");
    cfg.m = parse_double(m_s, "--m");
    if (!(cfg.m >= 0.0)) throw ArgumentError("--m must be >= 0");
    cfg.grid_n = grid_n;
    if (grid_n != 0 && grid_n < 16) throw ArgumentError("--grid-n must be >= 16");
    cfg.box = box;
    if (!(box > 0.0)) throw ArgumentError("--box must be > 0");
    cfg.refinement = refinement;
    cfg.amplitude = amplitude;
    cfg.theta = theta;
    cfg.seed = seed;
    cfg.out = out_path;
    cfg.gate_h1 = gate_h1;
    cfg.potential = potential_s;
    cfg.pair = parse_pair_kind(pair_s);
    if (!slope_s.empty()) {
      const auto colon = slope_s.find(':');
      if (colon == std::string::npos) throw ArgumentError("--expect-slope must be LO:HI");
      cfg.expect_slope = std::make_pair(parse_double(slope_s.substr(0, colon), "slope bound"),
                                        parse_double(slope_s.substr(colon + 1), "slope bound"));
    }
    for (const auto& part : split(z_s, ';')) cfg.z_list.push_back(parse_complex(part));
    if (!model_s.empty())
      for (const auto& part : split(model_s, ',')) cfg.models.push_back(parse_model_kind(part));
    for (CLI::App* sub : {ss, ws, os, ps})
      if (app.got_subcommand(sub) && sub->count("--h") > 0) cfg.h_list = parse_h_list(h_s);

    if (app.got_subcommand(ss)) {
      cfg.command = Command::symbol_sweep;
      if (cfg.h_list.empty()) cfg.h_list = dyadic_h_list(4, 8);
    } else if (app.got_subcommand(ws)) {
      cfg.command = Command::witness;
      if (cfg.h_list.empty()) cfg.h_list = dyadic_h_list(0, 8);
    } else if (app.got_subcommand(ds)) {
      cfg.command = Command::doubling;
      if (cfg.models.empty()) cfg.models = {ModelKind::s, ModelKind::s_mod};
    } else if (app.got_subcommand(os)) {
      cfg.command = Command::operator_gap;
    } else if (app.got_subcommand(ps)) {
      cfg.command = Command::potential_gap;
      if (cfg.models.empty()) cfg.models = {ModelKind::fb};
      if (ps->count("--z") == 0) cfg.z_list = {cplx(0.0, 2.0)};
    } else {
      cfg.command = Command::check;
      if (all)
        for (int i = 1; i <= kCriterionCount; ++i) cfg.criteria.push_back(i);
      else
        cfg.criteria = criteria;
      if (cfg.criteria.empty()) throw ArgumentError("check needs --criterion N or --all");
      for (int id : cfg.criteria)
        if (id < 1 || id > kCriterionCount) throw ArgumentError("criterion id must be in 1..10");
    }
    for (ModelKind k : cfg.models)
      if (k == ModelKind::continuous && cfg.command != Command::check)
        throw ArgumentError("the continuous model is the reference, not a valid --model");
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    switch (cfg.command) {
      case Command::symbol_sweep: return cmd_symbol_sweep(cfg, out, err);
      case Command::witness: return cmd_witness(cfg, out, err);
      case Command::doubling: return cmd_doubling(cfg, out, err);
      case Command::operator_gap: return cmd_operator_gap(cfg, out, err);
      case Command::potential_gap: return cmd_potential_gap(cfg, out, err);
      case Command::check: return cmd_check(cfg, out, err);
    }
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace dlat
