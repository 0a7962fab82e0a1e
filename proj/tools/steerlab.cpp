// steerlab command-line driver.
//
// Exit codes: 0 ok, 1 internal error, 2 invalid input, 3 enumeration cap hit.
// Verdicts are reported in the output, never through the exit code.

#include "steerlab/channels.hpp"
#include "steerlab/criteria.hpp"
#include "steerlab/json_io.hpp"
#include "steerlab/measurements.hpp"
#include "steerlab/states.hpp"
#include "steerlab/thresholds.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace steerlab;

namespace {

constexpr int kExitInvalid = 2;
constexpr int kExitCap = 3;

struct InvalidSpec : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

int as_dimension(double x, const char* what) {
  if (!(x >= 2 && x <= 64) || std::floor(x) != x)
    throw InvalidSpec(std::string(what) + ": dimension must be an integer in [2, 64]");
  return static_cast<int>(x);
}

// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 20240917;
  std::uint64_t samples = 0;  // 0 = subcommand default
  int quad = kDefaultThetaNodes;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "master RNG seed");
  app->add_option("--samples", c.samples, "Monte Carlo sample count");
  app->add_option("--quad", c.quad, "Gauss-Legendre nodes in cos(theta); phi uses twice as many")
      ->check(CLI::Range(4, kMaxThetaNodes));
  app->add_option("--out", c.out, "output file (default: stdout)");
  app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

struct StateSpec {
  std::vector<double> werner, isotropic, tstate;
  std::string file;
};

void add_state(CLI::App* app, StateSpec& s) {
  auto* g = app->add_option_group("state");
  g->add_option("--werner", s.werner, "Werner state: d w")->expected(2);
  g->add_option("--isotropic", s.isotropic, "isotropic state: d eta")->expected(2);
  g->add_option("--tstate", s.tstate, "T-state: t1 t2 t3")->expected(3);
  g->add_option("--state", s.file, "state JSON file");
  g->require_option(1);
}

struct BuiltState {
  DensityMatrix w;
  std::string kind;
  Json params;
  int d = 0;
};

BuiltState build_state(const StateSpec& s) {
  BuiltState b;
  if (!s.werner.empty()) {
    b.kind = "werner";
    b.d = as_dimension(s.werner[0], "--werner");
    b.params = Json{{"d", b.d}, {"w", s.werner[1]}};
    b.w = werner_state(b.d, s.werner[1]);
  } else if (!s.isotropic.empty()) {
    b.kind = "isotropic";
    b.d = as_dimension(s.isotropic[0], "--isotropic");
    b.params = Json{{"d", b.d}, {"eta", s.isotropic[1]}};
    b.w = isotropic_state(b.d, s.isotropic[1]);
  } else if (!s.tstate.empty()) {
    b.kind = "tstate";
    b.d = 2;
    b.params = Json{{"t", s.tstate}};
    b.w = t_state(TState{{s.tstate[0], s.tstate[1], s.tstate[2]}});
  } else {
    const Json j = read_json_file(s.file);
    b.w = state_from_json(j);
    b.kind = j.at("kind").get<std::string>();
    b.params = j.contains("params") ? j.at("params") : Json::object();
    b.d = b.w.local_dim();
  }
  return b;
}

struct BobSpec {
  bool mub = false;
  bool continuous = false;
  std::string file;
  int haar = 0;
};

void add_bob(CLI::App* app, BobSpec& b, bool required) {
  auto* g = app->add_option_group("measurements");
  g->add_flag("--mub-pair", b.mub, "identity and Fourier bases");
  g->add_flag("--continuous", b.continuous, "Haar-continuous settings");
  g->add_option("--measurements", b.file, "measurement-set JSON file");
  g->add_option("--haar-bases", b.haar, "N Haar-random equal-weight bases")->check(CLI::PositiveNumber);
  if (required) {
    g->require_option(1);
  } else {
    g->require_option(0, 1);
  }
}

std::string bob_kind(const BobSpec& b) {
  if (b.mub) return "mub-pair";
  if (!b.file.empty()) return "file";
  if (b.haar > 0) return "haar-bases";
  return "continuous";
}

MeasurementSet build_bob(const BobSpec& b, int d, std::uint64_t seed) {
  if (b.mub) return mub_pair(d);
  if (!b.file.empty()) {
    MeasurementSet m = measurements_from_json(read_json_file(b.file));
    if (m.dim() != d) throw InvalidSpec("measurement dimension does not match");
    return m;
  }
  Rng rng(stream_seed(seed, 0));
  return haar_measurements(d, b.haar, rng);
}

// Writes text to --out or stdout.
void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidSpec("cannot write '" + c.out + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> replay_args(const std::vector<std::string>& argv) {
  // --out is the one option whose value does not affect the content.
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < argv.size(); ++i) {
    if (argv[i] == "--out") {
      ++i;
      continue;
    }
    if (argv[i].rfind("--out=", 0) == 0) continue;
    kept.push_back(argv[i]);
  }
  return kept;
}

Json config_json(const std::vector<std::string>& args, const Common& c) {
  return Json{{"argv", replay_args(args)}, {"seed", c.seed}};
}

// ---------------------------------------------------------------- nst

struct NstArgs {
  Common common;
  BobSpec bob;
  int d = 0;
  std::uint64_t check = 0;
  std::uint64_t cap = kDefaultEnumerationCap;
};

std::string run_nst(const NstArgs& a, const Json& config) {
  if (a.d < 2) throw InvalidSpec("nst: -d must be >= 2");
  Json report;
  if (a.bob.continuous) {
    if (a.check > 0) throw InvalidSpec("--check-probabilistic needs a finite measurement set");
    const auto t = continuous_thresholds(a.d);
    report = nst_report_to_json(a.d, 0, t.f_plus, t.f_minus, nullptr, {"analytic", 0, 0, 0});
  } else {
    const MeasurementSet bob = build_bob(a.bob, a.d, a.common.seed);
    const NstResult nst = nst_enumerate(bob, a.cap);
    report = nst_report_to_json(a.d, bob.size(), nst.f_plus, nst.f_minus, nst_witnesses_to_json(nst),
                                {"enumerate", 0, 0, 0});
    report["assignments"] = nst.assignments;
    if (a.check > 0) {
      const auto chk = nst_probabilistic_check(bob, a.check, a.common.seed, nst);
      report["probabilistic_check"] = Json{{"trials", chk.trials},
                                           {"violations", chk.violations},
                                           {"max_value", chk.max_value},
                                           {"min_value", chk.min_value}};
    }
  }
  report["measurements"] = bob_kind(a.bob);
  report["config"] = config;
  if (a.common.format == "json") return dump(report);
  std::ostringstream csv;
  csv << "# config " << config.dump() << "\n"
      << "d,N,method,f_plus,f_minus\n"
      << a.d << ',' << report["N"].get<int>() << ',' << report["method"].get<std::string>() << ','
      << num(report["f_plus"].get<double>()) << ',' << num(report["f_minus"].get<double>()) << "\n";
  return csv.str();
}

// ---------------------------------------------------------------- steer

struct SteerArgs {
  Common common;
  StateSpec state;
  BobSpec bob;
  std::string alice;
};

std::string run_steer(const SteerArgs& a, const Json& config) {
  const BuiltState st = build_state(a.state);
  const int d = st.d;
  std::vector<CriterionReport> reports;
  Json meas{{"kind", bob_kind(a.bob)}};

  if (bob_kind(a.bob) == "continuous") {
    if (!a.alice.empty()) throw InvalidSpec("--alice needs a finite measurement set");
    const auto nst = continuous_thresholds(d);
    meas["f_plus"] = nst.f_plus;
    meas["f_minus"] = nst.f_minus;
    double plus = 0, minus = 0, err_plus = 0, err_minus = 0;
    if (st.kind == "werner" || st.kind == "isotropic") {
      const auto ext = st.kind == "werner" ? werner_extremal_fidelity(d, st.params["w"].get<double>())
                                           : isotropic_extremal_fidelity(d, st.params["eta"].get<double>());
      plus = ext.f_plus;
      minus = ext.f_minus;
      meas["extremal_method"] = "closed-form";
    } else {
      const std::uint64_t samples = a.common.samples ? a.common.samples : 2000;
      const auto ext = extremal_fidelity_continuous(st.w, samples, a.common.seed);
      plus = ext.f_plus_bar;
      minus = ext.f_minus_bar;
      err_plus = 3 * ext.stderr_plus;
      err_minus = 3 * ext.stderr_minus;
      meas["extremal_method"] = "mc";
      meas["samples"] = samples;
      meas["stderr"] = Json{{"f_plus_bar", ext.stderr_plus}, {"f_minus_bar", ext.stderr_minus}};
    }
    CriterionReport wjd = wjd_type_criterion(plus, nst.f_plus, err_plus);
    wjd.f_minus = nst.f_minus;
    CriterionReport wer = werner_type_criterion(minus, nst.f_minus, err_minus);
    wer.f_plus = nst.f_plus;
    reports.push_back(wjd);
    reports.push_back(wer);
  } else {
    const MeasurementSet bob = build_bob(a.bob, d, a.common.seed);
    const NstResult nst = nst_enumerate(bob);
    meas["f_plus"] = nst.f_plus;
    meas["f_minus"] = nst.f_minus;
    meas["N"] = bob.size();
    const ExtremalFidelity ext = extremal_fidelity(st.w, bob);
    meas["extremal_method"] = ext.exact ? "exact" : "ascent-bound";
    reports.push_back(wjd_type_criterion(ext, nst));
    reports.push_back(werner_type_criterion(ext, nst));
    if (!a.alice.empty()) {
      const MeasurementSet alice = measurements_from_json(read_json_file(a.alice));
      reports.push_back(evaluate_lsi(st.w, alice, bob, nst));
    }
  }
  if (st.kind == "tstate")
    reports.push_back(t_state_criterion(TState{{a.state.tstate[0], a.state.tstate[1], a.state.tstate[2]}}, a.common.quad));
  if (d == 2) reports.push_back(general_two_qubit_criterion(st.w, a.common.quad));

  bool any = false;
  for (const auto& r : reports) any = any || r.steerable();
  const std::string verdict = to_string(any ? Verdict::SteerableAToB : Verdict::Inconclusive);

  if (a.common.format == "csv") {
    std::ostringstream csv;
    csv << "# config " << config.dump() << "\n"
        << "kind,F_bar,f_minus,f_plus,margin,error_budget,verdict\n";
    for (const auto& r : reports)
      csv << to_string(r.kind) << ',' << num(r.f_bar) << ',' << num(r.f_minus) << ',' << num(r.f_plus) << ','
          << num(r.margin) << ',' << num(r.error_budget) << ',' << to_string(r.verdict) << "\n";
    return csv.str();
  }
  Json rep = Json::array();
  for (const auto& r : reports) rep.push_back(criterion_report_to_json(r));
  Json out{{"state", Json{{"kind", st.kind}, {"d", d}, {"params", st.params}}},
           {"measurements", meas},
           {"reports", rep},
           {"verdict", verdict},
           {"config", config}};
  return dump(out);
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  Common common;
  std::string family;
  int d = 2;
  int points = 101;
  bool numeric = false;
};

std::string run_sweep(const SweepArgs& a, const Json& config) {
  if (a.d < 2) throw InvalidSpec("sweep: -d must be >= 2");
  if (a.points < 2) throw InvalidSpec("sweep: --points must be >= 2");
  const int d = a.d;
  const double dd = d;
  const auto nst = continuous_thresholds(d);
  const std::uint64_t samples = a.common.samples ? a.common.samples : 2000;

  struct Row {
    double parameter, plus, minus, stderr_, f;
    bool wjd, werner, ep, ent;
  };
  std::vector<Row> rows;
  for (int i = 0; i < a.points; ++i) {
    const double x = static_cast<double>(i) / (a.points - 1);
    DensityMatrix w;
    ContinuousThresholds ext;
    if (a.family == "werner") {
      w = werner_state(d, x);
      ext = werner_extremal_fidelity(d, x);
    } else {
      // isotropic: x = eta; depolarizing: x = f and eta = (d^2 f - 1)/(d^2 - 1)
      const double eta = a.family == "isotropic" ? x : (dd * dd * x - 1) / (dd * dd - 1);
      w = isotropic_state(d, eta);
      ext = isotropic_extremal_fidelity(d, eta);
    }
    double err_plus = 0, err_minus = 0, stderr_ = 0;
    if (a.numeric) {
      const auto mc = extremal_fidelity_continuous(w, samples, stream_seed(a.common.seed, static_cast<std::uint64_t>(i)));
      ext = {mc.f_plus_bar, mc.f_minus_bar};
      err_plus = 3 * mc.stderr_plus;
      err_minus = 3 * mc.stderr_minus;
      stderr_ = std::max(mc.stderr_plus, mc.stderr_minus);
    }
    const bool wjd = wjd_type_criterion(ext.f_plus, nst.f_plus, err_plus).steerable();
    const bool wer = werner_type_criterion(ext.f_minus, nst.f_minus, err_minus).steerable();
    const CriterionReport ef = entanglement_fidelity_criterion(decompose_state(w).channel);
    rows.push_back({x, ext.f_plus, ext.f_minus, stderr_, ef.details.at("f"), wjd, wer,
                    ef.details.at("entanglement_preserving") > 0, ef.steerable()});
  }

  const auto v = [](bool s) { return to_string(s ? Verdict::SteerableAToB : Verdict::Inconclusive); };
  if (a.common.format == "csv") {
    std::ostringstream csv;
    csv << "# config " << config.dump() << "\n"
        << "family,d,parameter,F_bar_plus,F_bar_minus,f_minus,f_plus,wjd_verdict,werner_verdict,"
           "ent_fidelity_verdict,verdict,ent_fidelity,ep_verdict,stderr\n";
    for (const auto& r : rows) {
      csv << a.family << ',' << d << ',' << num(r.parameter) << ',' << num(r.plus) << ',' << num(r.minus) << ','
          << num(nst.f_minus) << ',' << num(nst.f_plus) << ',' << v(r.wjd) << ',' << v(r.werner) << ','
          << v(r.ent) << ',' << v(r.wjd || r.werner || r.ent) << ',' << num(r.f) << ','
          << (r.ep ? "entanglement-preserving" : "not-entanglement-preserving") << ',' << num(r.stderr_) << "\n";
    }
    return csv.str();
  }
  Json series = Json::array();
  for (const auto& r : rows) {
    series.push_back(Json{{"parameter", r.parameter},
                          {"F_bar_plus", r.plus},
                          {"F_bar_minus", r.minus},
                          {"wjd_verdict", v(r.wjd)},
                          {"werner_verdict", v(r.werner)},
                          {"ent_fidelity_verdict", v(r.ent)},
                          {"verdict", v(r.wjd || r.werner || r.ent)},
                          {"ent_fidelity", r.f},
                          {"entanglement_preserving", r.ep},
                          {"stderr", r.stderr_}});
  }
  return dump(Json{{"family", a.family},
                   {"d", d},
                   {"thresholds", Json{{"f_minus", nst.f_minus}, {"f_plus", nst.f_plus}}},
                   {"series", series},
                   {"config", config}});
}

// ---------------------------------------------------------------- channel

struct ChannelArgs {
  Common common;
  StateSpec state;
  std::vector<double> depolarizing;
  double amplitude_damping = -1;
  std::string channel_file, eb_file;
};

QuantumChannel build_channel(const ChannelArgs& a) {
  if (!a.depolarizing.empty())
    return depolarizing_channel(as_dimension(a.depolarizing[0], "--depolarizing"), a.depolarizing[1]);
  if (a.amplitude_damping >= 0) return amplitude_damping_channel(a.amplitude_damping);
  if (!a.channel_file.empty()) return channel_from_json(read_json_file(a.channel_file));
  return eb_channel_as_kraus(eb_channel_from_json(read_json_file(a.eb_file)));
}

void require_json(const Common& c, const char* cmd) {
  if (c.format != "json") throw InvalidSpec(std::string(cmd) + " supports only --format json");
}

std::string run_decompose(const ChannelArgs& a, const Json& config) {
  require_json(a.common, "channel decompose");
  const BuiltState st = build_state(a.state);
  const StateDecomposition dec = decompose_state(st.w);
  const double residual = (dec.reconstruct() - st.w.matrix()).norm();
  return dump(Json{{"state", Json{{"kind", st.kind}, {"d", st.d}, {"params", st.params}}},
                   {"sqrt_rho_a", matrix_to_json(dec.sqrt_rho_a)},
                   {"rank_rho_a", dec.rank_rho_a},
                   {"channel", channel_to_json(dec.channel)},
                   {"reconstruction_residual", residual},
                   {"config", config}});
}

std::string run_fidelity(const ChannelArgs& a, const Json& config) {
  require_json(a.common, "channel fidelity");
  const QuantumChannel ch = build_channel(a);
  const CriterionReport r = entanglement_fidelity_criterion(ch);
  return dump(Json{{"dim", ch.dim()},
                   {"entanglement_fidelity", r.details.at("f")},
                   {"entanglement_preserving", r.details.at("entanglement_preserving") > 0},
                   {"report", criterion_report_to_json(r)},
                   {"config", config}});
}

std::string run_twirl(const ChannelArgs& a, const Json& config) {
  require_json(a.common, "channel twirl");
  const BuiltState st = build_state(a.state);
  const std::uint64_t samples = a.common.samples ? a.common.samples : 10000;
  const DensityMatrix tw = twirl(st.w, samples, a.common.seed);
  const int d = st.d;
  const double dd = d;
  const CVector psi = max_entangled(d);
  const double f = (psi.adjoint() * st.w.matrix() * psi)(0).real();
  const double f_tw = (psi.adjoint() * tw.matrix() * psi)(0).real();
  const double eta = (dd * dd * f - 1) / (dd * dd - 1);
  const DensityMatrix target = isotropic_state(d, eta);
  return dump(Json{{"state", Json{{"kind", st.kind}, {"d", d}, {"params", st.params}}},
                   {"samples", samples},
                   {"twirled", matrix_to_json(tw.matrix())},
                   {"entanglement_fidelity", f},
                   {"entanglement_fidelity_twirled", f_tw},
                   {"isotropic_eta", eta},
                   {"trace_distance_to_isotropic", trace_distance(tw.matrix(), target.matrix())},
                   {"config", config}});
}

// ---------------------------------------------------------------- mc-verify

struct McArgs {
  Common common;
  int d = 2;
};

std::string run_mc(const McArgs& a, const Json& config) {
  const std::uint64_t samples = a.common.samples ? a.common.samples : 100000;
  const auto est = continuous_threshold_mc(a.d, samples, a.common.seed);
  const auto exact = continuous_thresholds(a.d);
  const double z_plus = est.stderr_plus > 0 ? (est.plus - exact.f_plus) / est.stderr_plus : 0;
  const double z_minus = est.stderr_minus > 0 ? (est.minus - exact.f_minus) / est.stderr_minus : 0;
  if (a.common.format == "csv") {
    std::ostringstream csv;
    csv << "# config " << config.dump() << "\n"
        << "d,samples,plus,stderr_plus,analytic_plus,minus,stderr_minus,analytic_minus\n"
        << a.d << ',' << samples << ',' << num(est.plus) << ',' << num(est.stderr_plus) << ','
        << num(exact.f_plus) << ',' << num(est.minus) << ',' << num(est.stderr_minus) << ','
        << num(exact.f_minus) << "\n";
    return csv.str();
  }
  Json out{{"d", a.d},
           {"samples", samples},
           {"seed", a.common.seed},
           {"estimate",
            Json{{"f_plus", est.plus},
                 {"f_minus", est.minus},
                 {"stderr_plus", est.stderr_plus},
                 {"stderr_minus", est.stderr_minus},
                 {"plus_contributions", est.plus_contributions},
                 {"minus_contributions", est.minus_contributions}}},
           {"analytic", Json{{"f_plus", exact.f_plus}, {"f_minus", exact.f_minus}}},
           {"z", Json{{"f_plus", z_plus}, {"f_minus", z_minus}}},
           {"within_3_sigma", std::abs(z_plus) <= 3 && std::abs(z_minus) <= 3}};
  if (a.d == 2) out["northern_hemisphere"] = est.plus_contributions.at(0);
  out["config"] = config;
  return dump(out);
}

int run(const std::vector<std::string>& args);

std::string load_replay_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open '" + path + "'");
  std::string first;
  std::getline(in, first);
  const std::string tag = "# config ";
  Json cfg;
  if (first.rfind(tag, 0) == 0) {
    cfg = Json::parse(first.substr(tag.size()));
  } else {
    in.clear();
    in.seekg(0);
    cfg = Json::parse(in).at("config");
  }
  return cfg.dump();
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"steering detection via averaged-fidelity criteria"};
  app.require_subcommand(1);

  NstArgs nst;
  auto* c_nst = app.add_subcommand("nst", "nonsteering thresholds");
  add_common(c_nst, nst.common);
  add_bob(c_nst, nst.bob, true);
  c_nst->add_option("-d", nst.d, "local dimension")->required();
  c_nst->add_option("--check-probabilistic", nst.check, "randomized response-table trials");
  c_nst->add_option("--cap", nst.cap, "maximum number of enumerated assignments");

  SteerArgs steer;
  auto* c_steer = app.add_subcommand("steer", "evaluate steering criteria for a state");
  add_common(c_steer, steer.common);
  add_state(c_steer, steer.state);
  add_bob(c_steer, steer.bob, false);
  c_steer->add_option("--alice", steer.alice, "Alice measurement-set JSON for the plain LSI");

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "criteria along a state family");
  add_common(c_sweep, sweep.common);
  sweep.common.format = "csv";
  c_sweep->add_option("--family", sweep.family)->required()->check(CLI::IsMember({"werner", "isotropic", "depolarizing"}));
  c_sweep->add_option("-d", sweep.d, "local dimension");
  c_sweep->add_option("--points", sweep.points, "grid points on [0, 1]");
  c_sweep->add_flag("--numeric", sweep.numeric, "Monte Carlo extremal fidelities instead of closed forms");

  ChannelArgs dec, fid, tw;
  auto* c_channel = app.add_subcommand("channel", "channel tools");
  c_channel->require_subcommand(1);
  auto* c_dec = c_channel->add_subcommand("decompose", "W = (I x eps)(|sqrt rho_A>><<sqrt rho_A|)");
  add_common(c_dec, dec.common);
  add_state(c_dec, dec.state);
  auto* c_fid = c_channel->add_subcommand("fidelity", "entanglement fidelity and its criterion");
  add_common(c_fid, fid.common);
  {
    auto* g = c_fid->add_option_group("channel");
    g->add_option("--depolarizing", fid.depolarizing, "d eta")->expected(2);
    g->add_option("--amplitude-damping", fid.amplitude_damping, "gamma");
    g->add_option("--channel", fid.channel_file, "Kraus channel JSON");
    g->add_option("--eb-channel", fid.eb_file, "measure-and-prepare channel JSON");
    g->require_option(1);
  }
  auto* c_tw = c_channel->add_subcommand("twirl", "Haar twirl onto the isotropic family");
  add_common(c_tw, tw.common);
  add_state(c_tw, tw.state);

  McArgs mc;
  auto* c_mc = app.add_subcommand("mc-verify", "Monte Carlo check of the continuous thresholds");
  add_common(c_mc, mc.common);
  c_mc->add_option("-d", mc.d, "local dimension")->check(CLI::Range(2, 16));

  std::string replay_file, replay_out;
  auto* c_replay = app.add_subcommand("replay", "re-run the configuration embedded in a report");
  c_replay->add_option("report", replay_file)->required();
  c_replay->add_option("--out", replay_out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  if (c_replay->parsed()) {
    const Json cfg = Json::parse(load_replay_config(replay_file));
    auto again = cfg.at("argv").get<std::vector<std::string>>();
    if (!replay_out.empty()) {
      again.push_back("--out");
      again.push_back(replay_out);
    }
    return run(again);
  }

  if (c_nst->parsed()) {
    emit(nst.common, run_nst(nst, config_json(args, nst.common)));
  } else if (c_steer->parsed()) {
    emit(steer.common, run_steer(steer, config_json(args, steer.common)));
  } else if (c_sweep->parsed()) {
    emit(sweep.common, run_sweep(sweep, config_json(args, sweep.common)));
  } else if (c_dec->parsed()) {
    emit(dec.common, run_decompose(dec, config_json(args, dec.common)));
  } else if (c_fid->parsed()) {
    emit(fid.common, run_fidelity(fid, config_json(args, fid.common)));
  } else if (c_tw->parsed()) {
    emit(tw.common, run_twirl(tw, config_json(args, tw.common)));
  } else if (c_mc->parsed()) {
    emit(mc.common, run_mc(mc, config_json(args, mc.common)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const EnumerationCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
