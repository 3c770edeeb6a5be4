// Experiment runner for the stochastic wave-packet engine.  Parses a flat
// key-value configuration (plus command-line overrides), dispatches presets,
// and writes one CSV per curve together with a manifest that can be fed back
// through --config to reproduce the run byte-for-byte.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "slb/slb.h"

namespace {

struct CliError {
  int code;  // 2 config, 3 numerical
  std::string msg;
};

void check(slb_status st) {
  if (st == SLB_OK) return;
  const int code = st == SLB_ERR_INVALID_ARGUMENT ? 2 : 3;
  throw CliError{code, slb_last_error()};
}

struct Model {
  slb_model* h = nullptr;
  explicit Model(const slb_model_params& p) { check(slb_model_create(&p, &h)); }
  ~Model() { slb_model_destroy(h); }
  Model(const Model&) = delete;
  Model& operator=(const Model&) = delete;
};

struct Width {
  slb_width* h = nullptr;
  Width(const Model& m, double dt, double t_end, bool classical) {
    check(slb_width_compute(m.h, dt, t_end, classical ? 1 : 0, &h));
  }
  ~Width() { slb_width_destroy(h); }
  Width(const Width&) = delete;
  Width& operator=(const Width&) = delete;
};

struct Series {
  slb_series* h = nullptr;
  Series() = default;
  explicit Series(slb_series* s) : h(s) {}
  ~Series() { slb_series_destroy(h); }
  Series(Series&& o) noexcept : h(o.h) { o.h = nullptr; }
  Series& operator=(Series&& o) noexcept {
    std::swap(h, o.h);
    return *this;
  }
  Series(const Series&) = delete;
  std::size_t size() const { return slb_series_length(h); }
  const double* axis() const { return slb_series_axis(h); }
  const double* value() const { return slb_series_value(h); }
  const double* err() const { return slb_series_stderr(h); }
};

struct Ensemble {
  slb_ensemble* h = nullptr;
  Ensemble(const Model& m, std::size_t n, std::uint64_t seed, double dt, double t_end,
           const slb_ensemble_options& opts) {
    check(slb_ensemble_build(m.h, n, seed, dt, t_end, &opts, &h));
  }
  ~Ensemble() { slb_ensemble_destroy(h); }
  Ensemble(const Ensemble&) = delete;
  Ensemble& operator=(const Ensemble&) = delete;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
bool is_set(double v) { return !std::isnan(v); }

// Fully resolved run description; reduced-unit presets interpret gamma, kt,
// omega, positions and times as reduced values (documented per preset).
struct RunConfig {
  std::string preset = "custom";
  std::string potential;  // free | linear | repeller | harmonic
  double mass = 1.0, hbar = 1.0;
  double gamma = 0.0, kt = 0.0;
  double kts = kUnset;  // unset: follows kt
  double g = 0.05, omega = 0.0;
  double q0 = 0.0, v0 = 0.0, sigma0 = 1.0;
  std::size_t n_traj = 5000;
  double dt = 0.0, t_end = 0.0;  // 0: preset default
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  bool classical_mode = false;
  std::size_t max_samples = 2000;
  double x_d = kUnset, x1 = kUnset, x2 = kUnset;
  std::vector<double> sweep_gamma, sweep_kt, sweep_kts, sweep_omega;
  bool dump_traj = false;
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::string join_list(const std::vector<double>& v) {
  std::string out;
  for (double x : v) {
    if (!out.empty()) out += ',';
    out += fmt(x);
  }
  return out;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& val) {
  if (key == "preset") cfg.preset = val;
  else if (key == "potential") cfg.potential = val;
  else if (key == "mass") cfg.mass = std::stod(val);
  else if (key == "hbar") cfg.hbar = std::stod(val);
  else if (key == "gamma") cfg.gamma = std::stod(val);
  else if (key == "kt") cfg.kt = std::stod(val);
  else if (key == "kts") cfg.kts = val == "follow" ? kUnset : std::stod(val);
  else if (key == "g") cfg.g = std::stod(val);
  else if (key == "omega") cfg.omega = std::stod(val);
  else if (key == "q0") cfg.q0 = std::stod(val);
  else if (key == "v0") cfg.v0 = std::stod(val);
  else if (key == "sigma0") cfg.sigma0 = std::stod(val);
  else if (key == "n_traj") cfg.n_traj = (std::size_t)std::stoull(val);
  else if (key == "dt") cfg.dt = std::stod(val);
  else if (key == "t_end") cfg.t_end = std::stod(val);
  else if (key == "seed") cfg.seed = std::stoull(val);
  else if (key == "out_dir") cfg.out_dir = val;
  else if (key == "classical_mode") cfg.classical_mode = val == "1" || val == "true";
  else if (key == "max_samples") cfg.max_samples = (std::size_t)std::stoull(val);
  else if (key == "x_d") cfg.x_d = std::stod(val);
  else if (key == "x1") cfg.x1 = std::stod(val);
  else if (key == "x2") cfg.x2 = std::stod(val);
  else if (key == "sweep_gamma") cfg.sweep_gamma = parse_list(val);
  else if (key == "sweep_kt") cfg.sweep_kt = parse_list(val);
  else if (key == "sweep_kts") cfg.sweep_kts = parse_list(val);
  else if (key == "sweep_omega") cfg.sweep_omega = parse_list(val);
  else if (key == "dump_trajectories") cfg.dump_traj = val == "1" || val == "true";
  else throw CliError{2, "unknown configuration key: " + key};
}

// Flat key = value file with optional [preset] sections; keys before any
// section apply globally, a section matching the selected preset overrides.
struct ConfigFile {
  std::map<std::string, std::string> global;
  std::map<std::string, std::map<std::string, std::string>> sections;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

ConfigFile parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{2, "cannot open config file: " + path};
  ConfigFile cf;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw CliError{2, path + ":" + std::to_string(lineno) + ": expected key = value"};
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (section.empty()) cf.global[key] = val;
    else cf.sections[section][key] = val;
  }
  return cf;
}

slb_model_params natural_params(const RunConfig& cfg, const std::string& potential) {
  slb_model_params p;
  slb_model_params_init(&p);
  p.mass = cfg.mass;
  p.hbar = cfg.hbar;
  p.friction = cfg.gamma;
  p.kb_temp = cfg.kt;
  p.kb_temp_sys = is_set(cfg.kts) ? cfg.kts : cfg.kt;
  if (potential == "free") p.potential = SLB_POTENTIAL_FREE;
  else if (potential == "linear") p.potential = SLB_POTENTIAL_LINEAR;
  else if (potential == "repeller") p.potential = SLB_POTENTIAL_PARABOLIC_REPELLER;
  else if (potential == "harmonic") p.potential = SLB_POTENTIAL_HARMONIC;
  else throw CliError{2, "unknown potential: " + potential};
  p.linear_g = cfg.g;
  p.omega = cfg.omega;
  p.q0 = cfg.q0;
  p.v0 = cfg.v0;
  p.sigma0 = cfg.sigma0;
  return p;
}

void validate_or_die(const slb_model_params& p, const RunConfig& cfg, bool barrier) {
  char warn[512];
  const slb_status st = slb_validate_run(&p, cfg.n_traj, cfg.dt > 0 ? cfg.dt : 1e-3,
                                         cfg.t_end > 0 ? cfg.t_end : 1.0,
                                         barrier ? 1 : 0, warn, sizeof(warn));
  if (st != SLB_OK) throw CliError{2, std::string("invalid configuration:\n") + slb_last_error()};
  if (warn[0] != '\0') std::fprintf(stderr, "warning: %s\n", warn);
}

// --- output ---------------------------------------------------------------

struct CurveColumn {
  std::string name;
  const double* data;
  std::size_t n;
};

void write_csv(const RunConfig& cfg, const std::string& filename,
               const std::vector<std::pair<std::string, std::string>>& meta,
               const std::vector<CurveColumn>& cols) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const fs::path path = fs::path(cfg.out_dir) / filename;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError{3, "cannot write " + path.string()};
  out << "# slb " << cfg.preset << "\n";
  out << "# version = " << slb_version() << "\n";
  out << "# seed = " << cfg.seed << "\n";
  for (const auto& [k, v] : meta) out << "# " << k << " = " << v << "\n";
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out << (c ? "," : "") << cols[c].name;
  }
  out << "\n";
  const std::size_t rows = cols.empty() ? 0 : cols[0].n;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out << (c ? "," : "") << fmt(cols[c].data[r]);
    }
    out << "\n";
  }
}

void write_manifest(const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  std::ofstream out(fs::path(cfg.out_dir) / "manifest.txt", std::ios::binary);
  if (!out) throw CliError{3, "cannot write manifest"};
  out << "# run manifest (readable back through --config)\n";
  out << "# version = " << slb_version() << "\n";
  out << "preset = " << cfg.preset << "\n";
  if (!cfg.potential.empty()) out << "potential = " << cfg.potential << "\n";
  out << "mass = " << fmt(cfg.mass) << "\n";
  out << "hbar = " << fmt(cfg.hbar) << "\n";
  out << "gamma = " << fmt(cfg.gamma) << "\n";
  out << "kt = " << fmt(cfg.kt) << "\n";
  out << "kts = " << (is_set(cfg.kts) ? fmt(cfg.kts) : std::string("follow")) << "\n";
  out << "g = " << fmt(cfg.g) << "\n";
  out << "omega = " << fmt(cfg.omega) << "\n";
  out << "q0 = " << fmt(cfg.q0) << "\n";
  out << "v0 = " << fmt(cfg.v0) << "\n";
  out << "sigma0 = " << fmt(cfg.sigma0) << "\n";
  out << "n_traj = " << cfg.n_traj << "\n";
  out << "dt = " << fmt(cfg.dt) << "\n";
  out << "t_end = " << fmt(cfg.t_end) << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "classical_mode = " << (cfg.classical_mode ? 1 : 0) << "\n";
  out << "max_samples = " << cfg.max_samples << "\n";
  if (is_set(cfg.x_d)) out << "x_d = " << fmt(cfg.x_d) << "\n";
  if (is_set(cfg.x1)) out << "x1 = " << fmt(cfg.x1) << "\n";
  if (is_set(cfg.x2)) out << "x2 = " << fmt(cfg.x2) << "\n";
  if (!cfg.sweep_gamma.empty()) out << "sweep_gamma = " << join_list(cfg.sweep_gamma) << "\n";
  if (!cfg.sweep_kt.empty()) out << "sweep_kt = " << join_list(cfg.sweep_kt) << "\n";
  if (!cfg.sweep_kts.empty()) out << "sweep_kts = " << join_list(cfg.sweep_kts) << "\n";
  if (!cfg.sweep_omega.empty()) out << "sweep_omega = " << join_list(cfg.sweep_omega) << "\n";
  if (cfg.dump_traj) out << "dump_trajectories = 1\n";
}

std::vector<std::pair<std::string, std::string>> base_meta(const slb_model_params& p,
                                                           const RunConfig& cfg) {
  return {{"mass", fmt(p.mass)},          {"hbar", fmt(p.hbar)},
          {"gamma", fmt(p.friction)},     {"kt", fmt(p.kb_temp)},
          {"kts", fmt(p.kb_temp_sys)},    {"omega", fmt(p.omega)},
          {"g", fmt(p.linear_g)},         {"q0", fmt(p.q0)},
          {"v0", fmt(p.v0)},              {"sigma0", fmt(p.sigma0)},
          {"n_traj", std::to_string(cfg.n_traj)}, {"dt", fmt(cfg.dt)},
          {"t_end", fmt(cfg.t_end)}};
}

void dump_trajectories(const RunConfig& cfg, const Ensemble& ens,
                       const std::string& filename,
                       const std::vector<std::pair<std::string, std::string>>& meta) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  std::ofstream out(fs::path(cfg.out_dir) / filename, std::ios::binary);
  if (!out) throw CliError{3, "cannot write " + filename};
  out << "# slb " << cfg.preset << " raw trajectories\n";
  out << "# version = " << slb_version() << "\n";
  out << "# seed = " << cfg.seed << "\n";
  for (const auto& [k, v] : meta) out << "# " << k << " = " << v << "\n";
  out << "t,id,x\n";
  for (std::size_t i = 0; i < slb_ensemble_size(ens.h); ++i) {
    slb_series* raw = nullptr;
    check(slb_ensemble_path(ens.h, i, &raw));
    Series s(raw);
    for (std::size_t j = 0; j < s.size(); ++j) {
      out << fmt(s.axis()[j]) << "," << i << "," << fmt(s.value()[j]) << "\n";
    }
  }
}

// --- presets ----------------------------------------------------------------

double time_unit(const RunConfig& cfg) {
  return 2.0 * cfg.mass * cfg.sigma0 * cfg.sigma0 / cfg.hbar;
}

// Uncertainty product U(t) of the free packet: one curve per swept gamma
// (and per swept kt when given).
void run_uncertainty(RunConfig cfg) {
  if (cfg.sweep_gamma.empty() && cfg.sweep_kt.empty()) {
    cfg.sweep_gamma = {0.1, 0.12, 0.15, 0.18};
  }
  if (cfg.dt <= 0) cfg.dt = 1e-3 * time_unit(cfg);
  if (cfg.t_end <= 0) cfg.t_end = 150.0;
  write_manifest(cfg);

  const std::vector<double> gammas =
      cfg.sweep_gamma.empty() ? std::vector<double>{cfg.gamma} : cfg.sweep_gamma;
  const std::vector<double> kts =
      cfg.sweep_kt.empty() ? std::vector<double>{cfg.kt} : cfg.sweep_kt;
  const std::size_t n_pts = 1500;

  for (double gamma : gammas) {
    for (double kt : kts) {
      RunConfig c = cfg;
      c.gamma = gamma;
      c.kt = kt;
      const slb_model_params p = natural_params(c, "free");
      validate_or_die(p, c, false);
      Model model(p);
      Width width(model, c.dt, c.t_end, c.classical_mode);
      std::vector<double> t(n_pts), u(n_pts);
      for (std::size_t i = 0; i < n_pts; ++i) {
        t[i] = c.t_end * (double)i / (double)(n_pts - 1);
        check(slb_uncertainty_at(model.h, width.h, t[i], &u[i]));
      }
      std::string name = "uncertainty_gamma" + fmt_short(gamma);
      if (cfg.sweep_kt.size() > 1 || kt != 0.0) name += "_kt" + fmt_short(kt);
      write_csv(c, name + ".csv", base_meta(p, c),
                {{"t", t.data(), n_pts}, {"U", u.data(), n_pts}});
    }
  }
}

// Free-particle MSD and diffusion coefficient, Monte-Carlo plus closed form.
void run_brownian(RunConfig cfg) {
  if (cfg.sweep_kt.empty()) {
    cfg.sweep_kt = cfg.kt > 0.0 ? std::vector<double>{cfg.kt}
                                : std::vector<double>{0.2, 0.5};
  }
  if (cfg.gamma == 0.0) cfg.gamma = 0.2;
  if (cfg.dt <= 0) cfg.dt = 1e-3 * time_unit(cfg);
  if (cfg.t_end <= 0) cfg.t_end = 250.0;
  if (cfg.max_samples > 500) cfg.max_samples = 500;
  write_manifest(cfg);

  for (double kt : cfg.sweep_kt) {
    RunConfig c = cfg;
    c.kt = kt;
    const slb_model_params p = natural_params(c, "free");
    validate_or_die(p, c, false);
    Model model(p);
    slb_ensemble_options opts;
    slb_ensemble_options_init(&opts);
    opts.max_samples = c.max_samples;
    opts.classical_width = c.classical_mode ? 1 : 0;
    Ensemble ens(model, c.n_traj, c.seed, c.dt, c.t_end, opts);

    slb_series *a = nullptr, *b = nullptr, *d = nullptr, *e = nullptr;
    check(slb_ensemble_msd(ens.h, &a, &b, &d, &e));
    Series msd_cl(a), msd_q(b), d_cl(d), d_q(e);
    const auto meta = base_meta(p, c);
    const std::string tag = "_kt" + fmt_short(kt) + ".csv";
    auto emit = [&](const Series& s, const std::string& stem) {
      write_csv(c, stem + tag, meta,
                {{"t", s.axis(), s.size()},
                 {"value", s.value(), s.size()},
                 {"stderr", s.err(), s.size()}});
    };
    emit(msd_cl, "brownian-bohmian_msd_classical");
    emit(msd_q, "brownian-bohmian_msd_quantum");
    emit(d_cl, "brownian-bohmian_diff_classical");
    emit(d_q, "brownian-bohmian_diff_quantum");

    // closed forms on the same grid (the sampled axis can run one stride past
    // t_end, so integrate the width to the actual last sample)
    const std::size_t n = msd_cl.size();
    Width width(model, c.dt, msd_cl.axis()[n - 1] + c.dt, c.classical_mode);
    std::vector<double> t(n), mc(n), mq(n), dc(n), dq(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = msd_cl.axis()[i];
      check(slb_msd_at(model.h, width.h, t[i], &mc[i], &mq[i], &dc[i], &dq[i]));
    }
    write_csv(c, "brownian-bohmian_analytic" + tag, meta,
              {{"t", t.data(), n},
               {"msd_classical", mc.data(), n},
               {"msd_quantum", mq.data(), n},
               {"diff_classical", dc.data(), n},
               {"diff_quantum", dq.data(), n}});
    if (c.dump_traj) {
      dump_trajectories(c, ens, "brownian-bohmian_trajectories" + tag, meta);
    }
  }
}

// Thermal arrival-time profile of falling packets versus initial position,
// quantum and classical width modes.
void run_falling(RunConfig cfg) {
  if (cfg.sweep_kt.empty()) {
    cfg.sweep_kt = cfg.kt > 0.0 ? std::vector<double>{cfg.kt}
                                : std::vector<double>{0.0, 0.1, 1.0};
  }
  if (cfg.gamma == 0.0) cfg.gamma = 0.2;
  if (cfg.q0 == 0.0) cfg.q0 = 10.0;
  if (!is_set(cfg.x_d)) cfg.x_d = 0.0;
  if (cfg.dt <= 0) cfg.dt = 5e-3 * time_unit(cfg);
  write_manifest(cfg);

  std::vector<double> summary_kt, summary_q, summary_q_se, summary_cl, summary_cl_se,
      summary_never;
  for (double kt : cfg.sweep_kt) {
    RunConfig c = cfg;
    c.kt = kt;
    // horizon grows with temperature so late arrivals stay below the 1%
    // never-arrived reporting threshold
    if (c.t_end <= 0) {
      c.t_end = 120.0 + 2400.0 * std::min(kt, 0.1) +
                400.0 * std::max(0.0, std::min(kt, 1.0) - 0.1);
    }
    const slb_model_params p = natural_params(c, "linear");
    validate_or_die(p, c, false);
    Model model(p);

    for (int classical = 0; classical <= 1; ++classical) {
      slb_ensemble_options opts;
      slb_ensemble_options_init(&opts);
      opts.max_samples = c.max_samples;
      opts.classical_width = classical;
      Ensemble ens(model, c.n_traj, c.seed, c.dt, c.t_end, opts);
      double mean = 0, se = 0, never = 0;
      slb_series* prof = nullptr;
      check(slb_ensemble_mean_arrival(ens.h, c.x_d, -1, 13, &mean, &se, &never, &prof));
      Series profile(prof);
      if (never > 0.01) {
        std::fprintf(stderr,
                     "warning: %.2f%% of trajectories never arrived within t_end = %g "
                     "(kt = %g, %s)\n",
                     100.0 * never, c.t_end, kt, classical ? "classical" : "quantum");
      }
      auto meta = base_meta(p, c);
      meta.emplace_back("x_d", fmt(c.x_d));
      meta.emplace_back("mean_arrival", fmt(mean));
      meta.emplace_back("mean_arrival_stderr", fmt(se));
      meta.emplace_back("never_fraction", fmt(never));
      const std::string stem = classical ? "falling-arrival_classical_kt"
                                         : "falling-arrival_kt";
      write_csv(c, stem + fmt_short(kt) + ".csv", meta,
                {{"x0", profile.axis(), profile.size()},
                 {"arrival_time", profile.value(), profile.size()},
                 {"stderr", profile.err(), profile.size()}});
      if (classical) {
        summary_cl.push_back(mean);
        summary_cl_se.push_back(se);
      } else {
        summary_kt.push_back(kt);
        summary_q.push_back(mean);
        summary_q_se.push_back(se);
        summary_never.push_back(never);
      }
      if (c.dump_traj && !classical) {
        dump_trajectories(c, ens, "falling-arrival_trajectories_kt" + fmt_short(kt) + ".csv",
                          meta);
      }
    }
  }
  const std::size_t n = summary_kt.size();
  write_csv(cfg, "falling-arrival_mean.csv", {{"x_d", fmt(cfg.x_d)}},
            {{"kt", summary_kt.data(), n},
             {"mean_quantum", summary_q.data(), n},
             {"stderr_quantum", summary_q_se.data(), n},
             {"mean_classical", summary_cl.data(), n},
             {"stderr_classical", summary_cl_se.data(), n},
             {"never_fraction", summary_never.data(), n}});
}

// Reduced-unit presets below: gamma, kt, kts, omega, positions and times are
// interpreted in the reduced units built from sigma0.

slb_model_params reduced_repeller_params(const RunConfig& cfg, double gamma_bar,
                                         double kt_bar, double kts_bar, double omega_bar) {
  RunConfig c = cfg;
  const double tu = time_unit(cfg);
  const double eu = cfg.hbar * cfg.hbar / (4.0 * cfg.mass * cfg.sigma0 * cfg.sigma0);
  c.gamma = gamma_bar / tu;
  c.kt = kt_bar * eu;
  c.kts = kts_bar * eu;
  c.omega = omega_bar / tu;
  c.q0 = cfg.q0 * cfg.sigma0;
  c.v0 = cfg.v0 * cfg.sigma0 / tu;
  return natural_params(c, "repeller");
}

// Arrival-time distributions at the detector from the probability current,
// for a frictionless repeller at several system temperatures.
void run_repeller_arrival(RunConfig cfg) {
  if (cfg.sweep_omega.empty()) {
    cfg.sweep_omega = cfg.omega > 0.0 ? std::vector<double>{cfg.omega}
                                      : std::vector<double>{0.05, 0.1};
  }
  if (cfg.sweep_kts.empty()) {
    cfg.sweep_kts = is_set(cfg.kts) ? std::vector<double>{cfg.kts}
                                    : std::vector<double>{0.0, 1.0, 5.0};
  }
  if (cfg.q0 == 0.0) cfg.q0 = -20.0;
  if (!is_set(cfg.x_d)) cfg.x_d = 20.0;
  write_manifest(cfg);

  const double tu = time_unit(cfg);
  const std::size_t n_pts = 2000;  // uniform grid over the integration window
  for (double omega_bar : cfg.sweep_omega) {
    std::vector<double> mean_axis, mean_val;
    for (double kts_bar : cfg.sweep_kts) {
      const slb_model_params p =
          reduced_repeller_params(cfg, cfg.gamma, cfg.kt, kts_bar, omega_bar);
      validate_or_die(p, cfg, true);
      Model model(p);
      slb_series* raw = nullptr;
      double mean = 0.0;
      check(slb_arrival_distribution(model.h, cfg.x_d * cfg.sigma0, kts_bar > 0 ? 1 : 0,
                                     n_pts, &raw, &mean));
      Series density(raw);
      std::vector<double> tbar(density.size()), rho_bar(density.size());
      for (std::size_t i = 0; i < density.size(); ++i) {
        tbar[i] = density.axis()[i] / tu;
        rho_bar[i] = density.value()[i] * tu;
      }
      auto meta = base_meta(p, cfg);
      meta.emplace_back("omega_bar", fmt(omega_bar));
      meta.emplace_back("kts_bar", fmt(kts_bar));
      meta.emplace_back("x_d_bar", fmt(cfg.x_d));
      meta.emplace_back("mean_arrival_bar", fmt(mean / tu));
      write_csv(cfg,
                "repeller-arrival_omega" + fmt_short(omega_bar) + "_kts" +
                    fmt_short(kts_bar) + ".csv",
                meta,
                {{"t_bar", tbar.data(), tbar.size()},
                 {"density_bar", rho_bar.data(), rho_bar.size()}});
      mean_axis.push_back(kts_bar);
      mean_val.push_back(mean / tu);
    }
    write_csv(cfg, "repeller-arrival_mean_omega" + fmt_short(omega_bar) + ".csv",
              {{"omega_bar", fmt(omega_bar)}, {"x_d_bar", fmt(cfg.x_d)}},
              {{"kts_bar", mean_axis.data(), mean_axis.size()},
               {"mean_arrival_bar", mean_val.data(), mean_val.size()}});
  }
}

// Thermal transmission probability through the repeller: time-dependent
// curves per bath temperature plus stationary values versus temperature.
void run_transmission(RunConfig cfg) {
  if (cfg.sweep_kt.empty()) {
    cfg.sweep_kt = cfg.kt > 0.0 ? std::vector<double>{cfg.kt}
                                : std::vector<double>{10.0, 30.0, 50.0, 80.0};
  }
  if (cfg.gamma == 0.0) cfg.gamma = 0.1;
  if (cfg.omega == 0.0) cfg.omega = 0.1;
  if (cfg.q0 == 0.0) cfg.q0 = -20.0;
  if (cfg.sweep_gamma.empty()) cfg.sweep_gamma = {0.05, 0.5};
  if (cfg.t_end <= 0) cfg.t_end = 100.0;  // reduced time window for the curves
  write_manifest(cfg);

  const double tu = time_unit(cfg);
  const std::size_t n_pts = 1200;
  for (double kt_bar : cfg.sweep_kt) {
    const slb_model_params p =
        reduced_repeller_params(cfg, cfg.gamma, kt_bar, kt_bar, cfg.omega);
    validate_or_die(p, cfg, true);
    Model model(p);
    Width width(model, 1e-3 * tu, cfg.t_end * tu, false);
    std::vector<double> tbar(n_pts), prob(n_pts);
    for (std::size_t i = 0; i < n_pts; ++i) {
      tbar[i] = cfg.t_end * (double)i / (double)(n_pts - 1);
      check(slb_transmission_at(model.h, width.h, SLB_MODE_STOCHASTIC, tbar[i] * tu,
                                &prob[i]));
    }
    auto meta = base_meta(p, cfg);
    meta.emplace_back("gamma_bar", fmt(cfg.gamma));
    meta.emplace_back("omega_bar", fmt(cfg.omega));
    meta.emplace_back("kt_bar", fmt(kt_bar));
    write_csv(cfg, "transmission_kt" + fmt_short(kt_bar) + ".csv", meta,
              {{"t_bar", tbar.data(), n_pts}, {"P_tr", prob.data(), n_pts}});
  }

  // stationary transmission versus temperature for each swept friction
  std::vector<double> kt_grid;
  for (double kt = 0.5; kt <= 10.0; kt += 0.5) kt_grid.push_back(kt);
  for (double kt = 12.0; kt <= 100.0; kt += 4.0) kt_grid.push_back(kt);
  for (double gamma_bar : cfg.sweep_gamma) {
    std::vector<double> pst(kt_grid.size());
    for (std::size_t i = 0; i < kt_grid.size(); ++i) {
      const slb_model_params p =
          reduced_repeller_params(cfg, gamma_bar, kt_grid[i], kt_grid[i], cfg.omega);
      Model model(p);
      check(slb_stationary_transmission(model.h, SLB_MODE_STOCHASTIC, &pst[i]));
    }
    write_csv(cfg, "transmission_stationary_gamma" + fmt_short(gamma_bar) + ".csv",
              {{"gamma_bar", fmt(gamma_bar)}, {"omega_bar", fmt(cfg.omega)}},
              {{"kt_bar", kt_grid.data(), kt_grid.size()},
               {"P_tr", pst.data(), kt_grid.size()}});
  }
}

// Dwell time in [x1, x2] versus bath temperature for each swept friction.
void run_dwell(RunConfig cfg) {
  if (cfg.sweep_gamma.empty()) {
    cfg.sweep_gamma = cfg.gamma > 0.0 ? std::vector<double>{cfg.gamma}
                                      : std::vector<double>{0.05, 0.1, 0.2};
  }
  if (cfg.omega == 0.0) cfg.omega = 0.1;
  if (cfg.q0 == 0.0) cfg.q0 = -20.0;
  if (!is_set(cfg.x1)) cfg.x1 = -1.0;
  if (!is_set(cfg.x2)) cfg.x2 = 1.0;
  write_manifest(cfg);

  const double tu = time_unit(cfg);
  std::vector<double> kt_grid;
  if (cfg.sweep_kt.empty()) {
    for (double kt = 0.0; kt <= 50.0; kt += 2.0) kt_grid.push_back(kt);
  } else {
    kt_grid = cfg.sweep_kt;
  }
  for (double gamma_bar : cfg.sweep_gamma) {
    std::vector<double> tau(kt_grid.size());
    for (std::size_t i = 0; i < kt_grid.size(); ++i) {
      const slb_model_params p =
          reduced_repeller_params(cfg, gamma_bar, kt_grid[i], kt_grid[i], cfg.omega);
      if (i == 0) validate_or_die(p, cfg, true);
      Model model(p);
      double t = 0.0;
      check(slb_dwell_time(model.h, SLB_MODE_STOCHASTIC, cfg.x1 * cfg.sigma0,
                           cfg.x2 * cfg.sigma0, &t));
      tau[i] = t / tu;
    }
    write_csv(cfg, "dwell_gamma" + fmt_short(gamma_bar) + ".csv",
              {{"gamma_bar", fmt(gamma_bar)},
               {"omega_bar", fmt(cfg.omega)},
               {"x1_bar", fmt(cfg.x1)},
               {"x2_bar", fmt(cfg.x2)}},
              {{"kt_bar", kt_grid.data(), kt_grid.size()},
               {"tau_dwell_bar", tau.data(), kt_grid.size()}});
  }
}

// Direct run with natural-unit parameters: center, width, uncertainty curves
// and, when n_traj > 0 with an ensemble horizon, MSD/VACF estimates.
void run_custom(RunConfig cfg) {
  if (cfg.potential.empty()) cfg.potential = "free";
  if (cfg.dt <= 0) cfg.dt = 1e-3 * time_unit(cfg);
  if (cfg.t_end <= 0) cfg.t_end = 100.0;
  write_manifest(cfg);

  const slb_model_params p = natural_params(cfg, cfg.potential);
  validate_or_die(p, cfg, false);
  Model model(p);
  Width width(model, cfg.dt, cfg.t_end, cfg.classical_mode);
  const std::size_t n_pts = 1000;
  std::vector<double> t(n_pts), q(n_pts), v(n_pts), s(n_pts), sd(n_pts), u(n_pts);
  const bool free_kind = cfg.potential == "free";
  for (std::size_t i = 0; i < n_pts; ++i) {
    t[i] = cfg.t_end * (double)i / (double)(n_pts - 1);
    check(slb_center_at(model.h, t[i], &q[i], &v[i]));
    check(slb_width_at(width.h, t[i], &s[i], &sd[i]));
    if (free_kind) check(slb_uncertainty_at(model.h, width.h, t[i], &u[i]));
  }
  const auto meta = base_meta(p, cfg);
  write_csv(cfg, "custom_center.csv", meta,
            {{"t", t.data(), n_pts}, {"q", q.data(), n_pts}, {"v", v.data(), n_pts}});
  write_csv(cfg, "custom_width.csv", meta,
            {{"t", t.data(), n_pts},
             {"sigma", s.data(), n_pts},
             {"sigma_dot", sd.data(), n_pts}});
  if (free_kind) {
    write_csv(cfg, "custom_uncertainty.csv", meta,
              {{"t", t.data(), n_pts}, {"U", u.data(), n_pts}});
    if (cfg.n_traj > 0) {
      slb_ensemble_options opts;
      slb_ensemble_options_init(&opts);
      opts.max_samples = cfg.max_samples;
      opts.classical_width = cfg.classical_mode ? 1 : 0;
      Ensemble ens(model, cfg.n_traj, cfg.seed, cfg.dt, cfg.t_end, opts);
      slb_series *a = nullptr, *b = nullptr, *d = nullptr, *e = nullptr, *f = nullptr;
      check(slb_ensemble_msd(ens.h, &a, &b, &d, &e));
      check(slb_ensemble_vacf(ens.h, &f));
      Series msd_cl(a), msd_q(b), d_cl(d), d_q(e), vacf(f);
      auto emit = [&](const Series& series, const std::string& stem) {
        write_csv(cfg, stem + ".csv", meta,
                  {{"t", series.axis(), series.size()},
                   {"value", series.value(), series.size()},
                   {"stderr", series.err(), series.size()}});
      };
      emit(msd_cl, "custom_msd_classical");
      emit(msd_q, "custom_msd_quantum");
      emit(d_cl, "custom_diff_classical");
      emit(d_q, "custom_diff_quantum");
      emit(vacf, "custom_vacf");
      if (cfg.dump_traj) dump_trajectories(cfg, ens, "custom_trajectories.csv", meta);
    }
  }
}

void list_presets() {
  std::printf(
      "presets (reduced-unit presets scale by the initial width; see README):\n"
      "\n"
      "  uncertainty       free-packet uncertainty product U(t) curves\n"
      "                    defaults: sigma0 = 1, q0 = 0, kt = 0,\n"
      "                    sweep_gamma = 0.1,0.12,0.15,0.18, t_end = 150\n"
      "  brownian-bohmian  free-particle MSD and diffusion coefficient, Monte Carlo\n"
      "                    + closed forms; defaults: n_traj = 5000, gamma = 0.2,\n"
      "                    sweep_kt = 0.2,0.5, q0 = 0, sigma0 = 1, t_end = 250\n"
      "  falling-arrival   thermal arrival-time profile of falling packets vs initial\n"
      "                    position; defaults: n_traj = 5000, gamma = 0.2, g = 0.05,\n"
      "                    q0 = 10, sigma0 = 1, x_d = 0, sweep_kt = 0,0.1,1\n"
      "  repeller-arrival  arrival-time distributions at the detector x_d_bar = 20\n"
      "                    (reduced units); defaults: q0_bar = -20, gamma = 0,\n"
      "                    sweep_omega = 0.05,0.1, sweep_kts = 0,1,5\n"
      "  transmission      transmission probability through the repeller (reduced\n"
      "                    units); defaults: q0_bar = -20, omega_bar = 0.1,\n"
      "                    gamma_bar = 0.1, sweep_kt = 10,30,50,80; stationary\n"
      "                    curves for sweep_gamma = 0.05,0.5\n"
      "  dwell             dwell time in [x1_bar, x2_bar] = [-1, 1] vs temperature\n"
      "                    (reduced units); defaults: q0_bar = -20, omega_bar = 0.1,\n"
      "                    sweep_gamma = 0.05,0.1,0.2\n"
      "  custom            natural-unit run: center/width/uncertainty curves and\n"
      "                    optional MSD/VACF ensemble (n_traj default 5000)\n");
}

int dispatch(const RunConfig& cfg) {
  if (cfg.preset == "uncertainty") run_uncertainty(cfg);
  else if (cfg.preset == "brownian-bohmian") run_brownian(cfg);
  else if (cfg.preset == "falling-arrival") run_falling(cfg);
  else if (cfg.preset == "repeller-arrival") run_repeller_arrival(cfg);
  else if (cfg.preset == "transmission") run_transmission(cfg);
  else if (cfg.preset == "dwell") run_dwell(cfg);
  else if (cfg.preset == "custom") run_custom(cfg);
  else throw CliError{2, "unknown preset: " + cfg.preset};
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic wave-packet experiment runner"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list-presets", "describe the preset catalog");

  auto* run_cmd = app.add_subcommand("run", "run a preset and write CSV curves");
  std::string preset = "custom", config_path, out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false, classical = false, dump = false;
  long long n_traj = -1;
  double dt = 0, t_end = 0;
  std::vector<std::string> sweeps, sets;
  run_cmd->add_option("--preset", preset, "preset name (see list-presets)");
  run_cmd->add_option("--config", config_path, "flat key = value configuration file");
  run_cmd->add_option("--seed", seed, "master seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run_cmd->add_option("--n-traj", n_traj, "ensemble size");
  run_cmd->add_option("--dt", dt, "integration step");
  run_cmd->add_option("--t-end", t_end, "time horizon");
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_flag("--classical-mode", classical, "drop the quantum width term");
  run_cmd->add_flag("--dump-trajectories", dump, "also write raw trajectory CSVs");
  run_cmd->add_option("--sweep", sweeps,
                      "sweep list, e.g. --sweep gamma=0.05,0.1,0.2 (repeatable)");
  run_cmd->add_option("--set", sets,
                      "override any config key, e.g. --set q0=-20 (repeatable)");

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    list_presets();
    return 0;
  }

  try {
    RunConfig cfg;
    // precedence: preset defaults < config global < config [preset] < flags
    ConfigFile cf;
    if (!config_path.empty()) cf = parse_config_file(config_path);
    if (auto it = cf.global.find("preset"); it != cf.global.end()) cfg.preset = it->second;
    if (run_cmd->count("--preset")) cfg.preset = preset;
    for (const auto& [k, v] : cf.global) {
      if (k != "preset") apply_key(cfg, k, v);
    }
    if (auto sec = cf.sections.find(cfg.preset); sec != cf.sections.end()) {
      for (const auto& [k, v] : sec->second) apply_key(cfg, k, v);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw CliError{2, "--set expects key=value: " + s};
      apply_key(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    for (const auto& s : sweeps) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw CliError{2, "--sweep expects key=v1,v2,...: " + s};
      apply_key(cfg, "sweep_" + s.substr(0, eq), s.substr(eq + 1));
    }
    if (seed_set) cfg.seed = seed;
    if (n_traj >= 0) cfg.n_traj = (std::size_t)n_traj;
    if (run_cmd->count("--dt")) cfg.dt = dt;
    if (run_cmd->count("--t-end")) cfg.t_end = t_end;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (classical) cfg.classical_mode = true;
    if (dump) cfg.dump_traj = true;
    return dispatch(cfg);
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.msg.c_str());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
