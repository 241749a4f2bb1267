#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dicke/analysis.hpp"
#include "dicke/errors.hpp"
#include "dicke/model.hpp"
#include "dicke/sweep_csv.hpp"

namespace dicke {

enum class Command { Sweep, PhaseDiagram, Point, SelfCheck, Help };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::Sweep: return "sweep";
    case Command::PhaseDiagram: return "phase-diagram";
    case Command::Point: return "point";
    case Command::SelfCheck: return "selfcheck";
    case Command::Help: return "help";
  }
  return "?";
}

inline constexpr std::size_t kMaxModeFlags = 8;

struct RunConfig {
  Command command = Command::Help;
  std::string help_text;
  ModelParams params;

  Axis axis{Axis::Kind::Gamma, 1};
  double from = 0.0, to = 3.0, step = 0.005;

  Axis y_axis{Axis::Kind::Gamma, 1};
  double y_from = 0.0, y_to = 3.0, y_step = 0.05;

  std::vector<Method> methods{Method::CS, Method::SASc, Method::SASn, Method::Quantum};
  OutputSet outputs;
  double cutoff_tol = 1e-8;
  double eig_tol = 1e-9;
  int cutoff_step = 10;
  std::optional<int> nmax;  // fixed cutoff for every mode, skipping convergence
  std::size_t dim_limit = BasisLayout::kDefaultDimLimit;
  std::string output = "-";
  unsigned threads = 1;

  SweepOptions sweep_options() const {
    SweepOptions o;
    o.outputs = outputs;
    o.cutoff_tol = cutoff_tol;
    o.quantum.eig_tol = eig_tol;
    o.quantum.cutoff_step = cutoff_step;
    o.quantum.dim_limit = dim_limit;
    if (nmax) o.fixed_cutoffs = std::vector<int>(params.modes(), *nmax);
    o.threads = threads;
    return o;
  }
};

// Grid x_t = from + t * step for t = 0, 1, ... while x_t <= to (with a
// relative slack of 1e-9 steps so that "to" itself is included).
inline std::vector<double> make_grid(double from, double to, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw UsageError("--step must be positive");
  if (!std::isfinite(from) || !std::isfinite(to) || to < from) throw UsageError("--to must not be below --from");
  const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
  if (n > 10'000'000) throw UsageError("--step gives too many grid points");
  std::vector<double> g(n);
  for (std::size_t t = 0; t < n; ++t) g[t] = from + static_cast<double>(t) * step;
  return g;
}

inline std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + format_number(v[i]);
  return s;
}

inline std::string outputs_string(const OutputSet& o) {
  std::vector<std::string> names;
  if (o.energy) names.push_back("energy");
  if (o.jz) names.push_back("jz");
  if (o.nu) names.push_back("nu");
  if (o.entropy) names.push_back("entropy");
  if (o.fidelity) names.push_back("fidelity");
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? ";" : "") + names[i];
  return s;
}

// Full run configuration as CSV metadata. The worker count is left out so
// output bytes do not depend on it.
inline Metadata describe(const RunConfig& c) {
  Metadata m;
  const auto& p = c.params;
  m.emplace_back("command", command_name(c.command));
  m.emplace_back("N", std::to_string(p.atoms));
  m.emplace_back("two_j", std::to_string(p.two_j));
  m.emplace_back("k", std::to_string(p.modes()));
  m.emplace_back("omega_a", format_number(p.omega_a));
  m.emplace_back("Omega", join_doubles(p.mode_freq));
  m.emplace_back("gamma", join_doubles(p.coupling));
  if (c.command == Command::Sweep || c.command == Command::PhaseDiagram) {
    m.emplace_back(c.command == Command::Sweep ? "axis" : "x_axis", c.axis.name());
    m.emplace_back("from", format_number(c.from));
    m.emplace_back("to", format_number(c.to));
    m.emplace_back("step", format_number(c.step));
  }
  if (c.command == Command::PhaseDiagram) {
    m.emplace_back("y_axis", c.y_axis.name());
    m.emplace_back("y_from", format_number(c.y_from));
    m.emplace_back("y_to", format_number(c.y_to));
    m.emplace_back("y_step", format_number(c.y_step));
    return m;
  }
  std::string methods;
  for (std::size_t i = 0; i < c.methods.size(); ++i) methods += (i ? ";" : "") + std::string(method_name(c.methods[i]));
  m.emplace_back("methods", methods);
  m.emplace_back("outputs", outputs_string(c.outputs));
  m.emplace_back("cutoff_tol", format_number(c.cutoff_tol));
  m.emplace_back("eig_tol", format_number(c.eig_tol));
  m.emplace_back("cutoff_step", std::to_string(c.cutoff_step));
  m.emplace_back("nmax", c.nmax ? std::to_string(*c.nmax) : "auto");
  m.emplace_back("dim_limit", std::to_string(c.dim_limit));
  m.emplace_back("lanczos_seed", std::to_string(LanczosOptions{}.seed));
  m.emplace_back("entropy_log", "natural");
  return m;
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto& f : split_fields(s, ','))
    if (!f.empty()) out.push_back(f);
  return out;
}

inline double parse_double(const std::string& flag, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(flag + ": '" + text + "' is not a number");
}

inline std::vector<double> parse_double_list(const std::string& flag, const std::string& text) {
  std::vector<double> v;
  for (const auto& f : split_list(text)) v.push_back(parse_double(flag, f));
  if (v.empty()) throw UsageError(flag + ": empty list");
  return v;
}

inline Axis parse_axis(const std::string& flag, const std::string& text) {
  const auto a = Axis::parse(text);
  if (!a) throw UsageError(flag + ": unknown axis '" + text + "' (use omega_a, gamma<i> or Omega<i>)");
  return *a;
}

inline unsigned default_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

// Optional text-valued flag bound to a subcommand; values are parsed after
// CLI11 so that errors name the flag.
struct FlagText {
  std::string text;
  std::vector<CLI::Option*> options;
  bool given() const {
    return std::any_of(options.begin(), options.end(), [](const CLI::Option* o) { return o->count() > 0; });
  }
};

}  // namespace detail

// argv without the program name.
inline RunConfig parse_args(std::vector<std::string> args, const char* env_threads = std::getenv("DICKE_QPT_THREADS")) {
  using detail::FlagText;
  RunConfig cfg;
  CLI::App app{"Ground-state phase transition of the k-mode Dicke model", "dicke_qpt"};
  app.set_help_flag();
  app.require_subcommand(0, 1);
  app.fallthrough();

  // Model flags live on the main app and fall through from every subcommand.
  FlagText atoms, j, k, omega_a, omega_list, gamma_list;
  atoms.options.push_back(app.add_option("--N", atoms.text, "number of atoms (default 18)"));
  j.options.push_back(app.add_option("--j", j.text, "cooperation number j, 2j integer (default N/2)"));
  k.options.push_back(app.add_option("--k", k.text, "number of field modes (default 2)"));
  omega_a.options.push_back(app.add_option("--omega-a", omega_a.text, "atomic level splitting (default 2)"));
  omega_list.options.push_back(app.add_option("--Omega", omega_list.text, "mode frequencies, comma separated"));
  gamma_list.options.push_back(app.add_option("--gamma", gamma_list.text, "mode couplings, comma separated"));
  std::vector<FlagText> gamma_i(kMaxModeFlags), omega_i(kMaxModeFlags);
  for (std::size_t i = 0; i < kMaxModeFlags; ++i) {
    const std::string n = std::to_string(i + 1);
    gamma_i[i].options.push_back(app.add_option("--gamma" + n, gamma_i[i].text, "coupling of mode " + n));
    omega_i[i].options.push_back(app.add_option("--Omega" + n, omega_i[i].text, "frequency of mode " + n));
  }
  bool help = false;
  app.add_flag("-h,--help", help, "print this help");

  auto* sweep = app.add_subcommand("sweep", "sweep one parameter and write a CSV table");
  auto* phase = app.add_subcommand("phase-diagram", "delta < 1 region over a parameter plane");
  auto* point = app.add_subcommand("point", "all methods at a single parameter point");
  auto* selfcheck = app.add_subcommand("selfcheck", "run the invariant suite");

  FlagText axis, from, to, step, methods, outputs, cutoff_tol, eig_tol, cutoff_step, nmax, dim_limit, threads;
  FlagText y_axis, y_from, y_to, y_step;
  std::string output = "-";

  axis.options.push_back(sweep->add_option("--axis", axis.text, "swept parameter: omega_a, gamma<i> or Omega<i>"));
  from.options.push_back(sweep->add_option("--from", from.text, "first grid value (default 0)"));
  to.options.push_back(sweep->add_option("--to", to.text, "last grid value (default 3)"));
  step.options.push_back(sweep->add_option("--step", step.text, "grid spacing (default 0.005)"));

  phase->add_option("--x-axis", axis.text, "horizontal axis")->required();
  phase->add_option("--y-axis", y_axis.text, "vertical axis")->required();
  from.options.push_back(phase->add_option("--x-from", from.text, "first x value"));
  to.options.push_back(phase->add_option("--x-to", to.text, "last x value"));
  step.options.push_back(phase->add_option("--x-step", step.text, "x spacing (default 0.05)"));
  y_from.options.push_back(phase->add_option("--y-from", y_from.text, "first y value"));
  y_to.options.push_back(phase->add_option("--y-to", y_to.text, "last y value"));
  y_step.options.push_back(phase->add_option("--y-step", y_step.text, "y spacing (default 0.05)"));

  for (auto* sub : {sweep, point}) {
    methods.options.push_back(sub->add_option("--methods", methods.text, "cs,sasc,sasn,quantum"));
    outputs.options.push_back(sub->add_option("--outputs", outputs.text, "energy,jz,nu,entropy,fidelity"));
    cutoff_tol.options.push_back(sub->add_option("--cutoff-tol", cutoff_tol.text, "Fock cutoff convergence in energy (1e-8)"));
    eig_tol.options.push_back(sub->add_option("--eig-tol", eig_tol.text, "eigen-solver residual tolerance (1e-9)"));
    cutoff_step.options.push_back(sub->add_option("--cutoff-step", cutoff_step.text, "cutoff increment (10)"));
    nmax.options.push_back(sub->add_option("--nmax", nmax.text, "fixed Fock cutoff for every mode"));
    dim_limit.options.push_back(sub->add_option("--dim-limit", dim_limit.text, "largest allowed basis dimension"));
    threads.options.push_back(sub->add_option("--threads", threads.text, "worker count (DICKE_QPT_THREADS overrides)"));
  }
  for (auto* sub : {sweep, point, phase}) sub->add_option("-o,--output", output, "output file, '-' for stdout");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  cfg.help_text = app.help();

  if (help || app.get_subcommands().empty()) {
    cfg.command = Command::Help;
    return cfg;
  }
  if (sweep->parsed()) cfg.command = Command::Sweep;
  if (phase->parsed()) cfg.command = Command::PhaseDiagram;
  if (point->parsed()) cfg.command = Command::Point;
  if (selfcheck->parsed()) {
    cfg.command = Command::SelfCheck;
    return cfg;
  }

  auto integer = [](const std::string& flag, const std::string& text) {
    const double v = detail::parse_double(flag, text);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError(flag + ": '" + text + "' is not an integer");
    return static_cast<long>(v);
  };

  // Model parameters.
  ModelParams& p = cfg.params;
  if (atoms.given()) {
    const long n = integer("--N", atoms.text);
    if (n < 1) throw UsageError("--N must be at least 1");
    p.atoms = static_cast<int>(n);
  }
  p.two_j = p.atoms;
  if (j.given()) {
    const double v = detail::parse_double("--j", j.text);
    const double twice = 2.0 * v;
    if (twice != std::round(twice)) throw UsageError("--j: 2j must be an integer, got j=" + j.text);
    if (twice < 0.0 || twice > p.atoms) throw UsageError("--j must lie in [0, N/2]");
    p.two_j = static_cast<int>(twice);
    if ((p.atoms - p.two_j) % 2 != 0) throw UsageError("--j: N - 2j must be even");
  }
  if (omega_a.given()) p.omega_a = detail::parse_double("--omega-a", omega_a.text);

  std::optional<std::size_t> modes;
  if (k.given()) {
    const long v = integer("--k", k.text);
    if (v < 1 || v > 64) throw UsageError("--k must lie in [1, 64]");
    modes = static_cast<std::size_t>(v);
  }
  std::optional<std::vector<double>> freqs, couplings;
  if (omega_list.given()) freqs = detail::parse_double_list("--Omega", omega_list.text);
  if (gamma_list.given()) couplings = detail::parse_double_list("--gamma", gamma_list.text);
  for (const auto* list : {&freqs, &couplings}) {
    if (!*list) continue;
    const char* flag = list == &freqs ? "--Omega" : "--gamma";
    if (modes && (*list)->size() != *modes)
      throw UsageError(std::string(flag) + " has " + std::to_string((*list)->size()) + " entries but --k is " +
                       std::to_string(*modes));
    modes = (*list)->size();
  }
  const std::size_t kk = modes.value_or(2);
  p.mode_freq.assign(kk, 2.0);
  p.coupling.assign(kk, 1.0);
  p.coupling[0] = 0.5;
  if (freqs) p.mode_freq = *freqs;
  if (couplings) p.coupling = *couplings;
  for (std::size_t i = 0; i < kMaxModeFlags; ++i) {
    const std::string n = std::to_string(i + 1);
    for (auto* f : {&gamma_i[i], &omega_i[i]}) {
      if (!f->given()) continue;
      const std::string flag = (f == &gamma_i[i] ? "--gamma" : "--Omega") + n;
      if (i >= kk) throw UsageError(flag + " refers to mode " + n + " but k is " + std::to_string(kk));
      (f == &gamma_i[i] ? p.coupling : p.mode_freq)[i] = detail::parse_double(flag, f->text);
    }
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  // Grid and axes.
  if (cfg.command == Command::PhaseDiagram) {
    cfg.axis = detail::parse_axis("--x-axis", axis.text);
    cfg.y_axis = detail::parse_axis("--y-axis", y_axis.text);
    cfg.step = cfg.y_step = 0.05;
    if (from.given()) cfg.from = detail::parse_double("--x-from", from.text);
    if (to.given()) cfg.to = detail::parse_double("--x-to", to.text);
    if (step.given()) cfg.step = detail::parse_double("--x-step", step.text);
    if (y_from.given()) cfg.y_from = detail::parse_double("--y-from", y_from.text);
    if (y_to.given()) cfg.y_to = detail::parse_double("--y-to", y_to.text);
    if (y_step.given()) cfg.y_step = detail::parse_double("--y-step", y_step.text);
    if (cfg.axis == cfg.y_axis) throw UsageError("--x-axis and --y-axis must differ");
    for (const auto& [a, flag] : {std::pair{cfg.axis, "--x-axis"}, std::pair{cfg.y_axis, "--y-axis"}})
      if (a.kind != Axis::Kind::OmegaA && a.mode >= kk)
        throw UsageError(std::string(flag) + " refers to a mode beyond k=" + std::to_string(kk));
    make_grid(cfg.from, cfg.to, cfg.step);
    try {
      make_grid(cfg.y_from, cfg.y_to, cfg.y_step);
    } catch (const UsageError&) {
      throw UsageError("--y-step/--y-to do not define a grid");
    }
  } else if (cfg.command == Command::Sweep) {
    if (axis.given()) cfg.axis = detail::parse_axis("--axis", axis.text);
    else cfg.axis = Axis{Axis::Kind::Gamma, std::min<std::size_t>(1, kk - 1)};  // gamma2, or gamma1 when k = 1
    if (cfg.axis.kind != Axis::Kind::OmegaA && cfg.axis.mode >= kk)
      throw UsageError("--axis " + cfg.axis.name() + " refers to a mode beyond k=" + std::to_string(kk));
    if (from.given()) cfg.from = detail::parse_double("--from", from.text);
    if (to.given()) cfg.to = detail::parse_double("--to", to.text);
    if (step.given()) cfg.step = detail::parse_double("--step", step.text);
    make_grid(cfg.from, cfg.to, cfg.step);
    for (double x : make_grid(cfg.from, cfg.to, cfg.step)) {
      try {
        cfg.axis.at(p, x).validate();
      } catch (const Error& e) {
        throw UsageError("--from/--to: " + std::string(e.what()));
      }
    }
  }

  if (cfg.command == Command::Sweep || cfg.command == Command::Point) {
    if (methods.given()) {
      cfg.methods.clear();
      for (const auto& name : detail::split_list(methods.text)) {
        const auto m = parse_method(name);
        if (!m) throw UsageError("--methods: unknown method '" + name + "'");
        if (std::find(cfg.methods.begin(), cfg.methods.end(), *m) != cfg.methods.end())
          throw UsageError("--methods: '" + name + "' given twice");
        cfg.methods.push_back(*m);
      }
      if (cfg.methods.empty()) throw UsageError("--methods: empty list");
    }
    if (outputs.given()) {
      cfg.outputs = OutputSet{false, false, false, false, false};
      for (const auto& name : detail::split_list(outputs.text)) {
        if (name == "energy") cfg.outputs.energy = true;
        else if (name == "jz") cfg.outputs.jz = true;
        else if (name == "nu") cfg.outputs.nu = true;
        else if (name == "entropy") cfg.outputs.entropy = true;
        else if (name == "fidelity") cfg.outputs.fidelity = true;
        else throw UsageError("--outputs: unknown output '" + name + "'");
      }
    }
    auto positive = [](const std::string& flag, double v) {
      if (!(v > 0.0)) throw UsageError(flag + " must be positive");
      return v;
    };
    if (cutoff_tol.given()) cfg.cutoff_tol = positive("--cutoff-tol", detail::parse_double("--cutoff-tol", cutoff_tol.text));
    if (eig_tol.given()) cfg.eig_tol = positive("--eig-tol", detail::parse_double("--eig-tol", eig_tol.text));
    if (cutoff_step.given()) {
      const long v = integer("--cutoff-step", cutoff_step.text);
      if (v < 1) throw UsageError("--cutoff-step must be at least 1");
      cfg.cutoff_step = static_cast<int>(v);
    }
    if (nmax.given()) {
      const long v = integer("--nmax", nmax.text);
      if (v < 0) throw UsageError("--nmax must be non-negative");
      cfg.nmax = static_cast<int>(v);
    }
    if (dim_limit.given()) {
      const long v = integer("--dim-limit", dim_limit.text);
      if (v < 1) throw UsageError("--dim-limit must be positive");
      cfg.dim_limit = static_cast<std::size_t>(v);
    }
    cfg.threads = detail::default_threads();
    if (threads.given()) {
      const long v = integer("--threads", threads.text);
      if (v < 1) throw UsageError("--threads must be at least 1");
      cfg.threads = static_cast<unsigned>(v);
    }
    if (env_threads && *env_threads) {
      const long v = integer("DICKE_QPT_THREADS", env_threads);
      if (v < 1) throw UsageError("DICKE_QPT_THREADS must be at least 1");
      cfg.threads = static_cast<unsigned>(v);
    }
  }
  cfg.output = output;
  return cfg;
}

}  // namespace dicke
