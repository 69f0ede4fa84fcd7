// hflow command-line front end.
//
// Exit codes: 0 success, 2 invalid configuration, 3 flow left the
// positive-definite window, 4 input metric not positive definite.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hflow/hflow.hpp"

namespace fs = std::filesystem;
using hflow::io::Config;
using hflow::io::format_double;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitBlowup = 3;
constexpr int kExitNotPositive = 4;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

const std::set<std::string> kKnownKeys{
    "example", "potential", "background", "sizes",     "scheme",    "sigma",        "T",
    "cadence", "seed",      "S",          "theta",     "gauge",     "t_samples",    "n_samples",
    "refine_steps", "dt",   "dt_min",     "max_halvings", "max_steps", "snapshots",
};

struct Invocation {
  std::string command;
  Config config;
  fs::path out = "hflow-out";
  std::optional<std::string> probe;
};

void validate_keys(const Config& cfg) {
  for (const auto& [k, v] : cfg.entries()) {
    if (!kKnownKeys.count(k)) throw ConfigError("unknown config key '" + k + "'");
    if (v.empty()) throw ConfigError("config key '" + k + "' has an empty value");
  }
}

double positive(const Config& cfg, const std::string& key, double fallback) {
  const double v = cfg.get_double(key, fallback);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key + " must be positive");
  return v;
}

std::uint64_t seed_of(const Config& cfg) {
  const long long s = cfg.get_integer("seed", static_cast<long long>(hflow::kDefaultSeed));
  if (s < 0) throw ConfigError("seed must be non-negative");
  return static_cast<std::uint64_t>(s);
}

hflow::StepControl step_control(const Config& cfg) {
  hflow::StepControl c;
  c.sigma = cfg.get_double("sigma", c.sigma);
  if (!(c.sigma > 0.0 && c.sigma <= 1.0)) throw ConfigError("sigma must lie in (0, 1]");
  c.dt_min = positive(cfg, "dt_min", c.dt_min);
  const long long mh = cfg.get_integer("max_halvings", c.max_halvings);
  if (mh < 0 || mh > 60) throw ConfigError("max_halvings must lie in [0, 60]");
  c.max_halvings = static_cast<int>(mh);
  const std::string scheme = cfg.get("scheme", "rk2");
  if (scheme == "rk2") c.scheme = hflow::Scheme::rk2;
  else if (scheme == "euler") c.scheme = hflow::Scheme::euler;
  else throw ConfigError("scheme must be 'euler' or 'rk2'");
  return c;
}

std::vector<std::size_t> sizes_of(const Config& cfg) {
  std::vector<std::size_t> out;
  if (!cfg.has("sizes")) return out;
  for (double v : cfg.get_doubles("sizes")) {
    if (v < static_cast<double>(hflow::kMinNodesPerAxis) || v != std::floor(v) || v > 1 << 20) {
      throw ConfigError("sizes entries must be integers >= " + std::to_string(hflow::kMinNodesPerAxis));
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

int resolve_dimension(const Config& cfg) {
  if (cfg.has("potential")) {
    if (cfg.has("example")) throw ConfigError("give either 'example' or 'potential', not both");
    return hflow::io::read_snapshot(cfg.get("potential", "")).n;
  }
  const std::string name = cfg.get("example", "");
  if (name.empty()) throw ConfigError("config needs 'example' or 'potential'");
  const hflow::ExampleSpec* spec = nullptr;
  try {
    spec = &hflow::find_example(name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto sizes = sizes_of(cfg);
  if (spec->dim != 0) {
    if (!sizes.empty() && sizes.size() != static_cast<std::size_t>(spec->dim) && sizes.size() != 1) {
      throw ConfigError("example '" + name + "' needs " + std::to_string(spec->dim) + " sizes");
    }
    return spec->dim;
  }
  const std::size_t n = sizes.empty() ? spec->default_sizes.size() : sizes.size();
  if (n < 1 || n > static_cast<std::size_t>(hflow::kMaxDim)) throw ConfigError("dimension must be 1, 2 or 3");
  return static_cast<int>(n);
}

template <int Dim>
struct Input {
  std::string label;
  std::optional<hflow::PotentialMetric<Dim>> potential;
  hflow::MetricField<Dim> metric;
};

template <int Dim>
Input<Dim> load_input(const Config& cfg) {
  if (cfg.has("potential")) {
    const auto snap = hflow::io::read_snapshot(cfg.get("potential", ""));
    auto psi = hflow::io::scalar_from_snapshot<Dim>(snap);
    hflow::Mat<Dim> a = hflow::Mat<Dim>::Identity();
    if (cfg.has("background")) {
      const auto vals = cfg.get_doubles("background");
      if (vals.size() != static_cast<std::size_t>(hflow::kSymCount<Dim>)) {
        throw ConfigError("background needs the " + std::to_string(hflow::kSymCount<Dim>) +
                          " upper-triangle entries");
      }
      for (int i = 0; i < Dim; ++i)
        for (int j = i; j < Dim; ++j) a(i, j) = a(j, i) = vals[hflow::sym_index<Dim>(i, j)];
    }
    hflow::PotentialMetric<Dim> pm = [&] {
      try {
        return hflow::PotentialMetric<Dim>(a, std::move(psi));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }();
    auto g = hflow::metric_from_potential(pm);
    return {cfg.get("potential", ""), std::move(pm), std::move(g)};
  }
  const std::string name = cfg.get("example", "");
  const auto& spec = hflow::find_example(name);
  std::array<std::size_t, Dim> sizes{};
  const auto given = sizes_of(cfg);
  for (int d = 0; d < Dim; ++d) {
    if (given.empty()) sizes[d] = spec.default_sizes[std::min<std::size_t>(d, spec.default_sizes.size() - 1)];
    else sizes[d] = given[std::min<std::size_t>(d, given.size() - 1)];
  }
  auto inst = hflow::make_example<Dim>(name, sizes, seed_of(cfg));
  return {name, std::move(inst.potential), std::move(inst.metric)};
}

std::string iso_time_now() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

/// manifest.cfg is itself a valid config (provenance lives in comments), so
/// `--config <out>/manifest.cfg` reproduces the run.
void write_manifest(const Invocation& inv, double wall_seconds, const std::string& status) {
  std::string text = "# hflow " HFLOW_VERSION "\n";
  text += "# command: " + inv.command + "\n";
  text += "# written: " + iso_time_now() + "\n";
  text += "# wall_clock_seconds: " + format_double(wall_seconds) + "\n";
  text += "# status: " + status + "\n";
  text += inv.config.to_text();
  hflow::io::write_file_atomic(inv.out / "manifest.cfg", text);
}

struct Report {
  std::vector<std::pair<std::string, std::string>> lines;
  void add(const std::string& k, const std::string& v) { lines.emplace_back(k, v); }
  void add(const std::string& k, double v) { add(k, format_double(v)); }
  std::string text() const {
    std::string out;
    for (const auto& [k, v] : lines) out += k + ": " + v + "\n";
    return out;
  }
};

template <int Dim>
std::array<double, Dim> parse_probe(const std::string& s) {
  const auto parts = hflow::io::split(s, ',');
  if (parts.size() != static_cast<std::size_t>(Dim)) {
    throw ConfigError("--probe needs " + std::to_string(Dim) + " comma-separated coordinates");
  }
  std::array<double, Dim> x{};
  for (int d = 0; d < Dim; ++d) x[d] = hflow::io::parse_double(hflow::io::trim(parts[d]));
  return x;
}

std::string idx(std::initializer_list<int> ids) {
  std::string s = "[";
  bool first = true;
  for (int i : ids) {
    s += (first ? "" : ",") + std::to_string(i);
    first = false;
  }
  return s + "]";
}

template <int Dim>
int cmd_curvature(Invocation& inv) {
  const auto& cfg = inv.config;
  const std::uint64_t seed = seed_of(cfg);
  hflow::SectionalOptions sopt;
  sopt.seed = seed;
  sopt.n_samples = static_cast<std::size_t>(positive(cfg, "n_samples", static_cast<double>(sopt.n_samples)));
  const long long steps = cfg.get_integer("refine_steps", sopt.refine_steps);
  if (steps < 0) throw ConfigError("refine_steps must be >= 0");
  sopt.refine_steps = static_cast<int>(steps);
  const std::string snapshots = cfg.get("snapshots", "false");
  if (snapshots != "true" && snapshots != "false") throw ConfigError("snapshots must be true or false");

  const Input<Dim> in = load_input<Dim>(cfg);
  const auto& g = in.metric;
  const auto gamma = hflow::christoffel(g);
  const auto forms = hflow::koszul(g);
  const auto torsion = hflow::pullback_chern_torsion(g);

  Report r;
  r.add("input", in.label);
  r.add("dimension", std::to_string(Dim));
  std::string sizes;
  for (int d = 0; d < Dim; ++d) sizes += (d ? "," : "") + std::to_string(g.grid().size(d));
  r.add("sizes", sizes);
  r.add("sup_gamma", hflow::sup_norm(gamma.mixed));
  r.add("sup_alpha", hflow::sup_norm(forms.alpha));
  r.add("sup_kappa", hflow::sup_norm(forms.kappa));
  r.add("sup_beta", hflow::sup_norm(forms.beta));
  r.add("hessian_defect", hflow::hessian_defect(g));
  r.add("torsion_norm", torsion.norm);
  r.add("kappa_plus_half_beta", hflow::sup_difference(forms.kappa, -0.5 * forms.beta));
  r.add("alpha_vs_gamma_trace", hflow::sup_difference(forms.alpha, hflow::gamma_trace(gamma)));

  std::optional<hflow::PairSymmetricField<Dim>> q;
  std::optional<hflow::TensorField<Dim, 4>> riemann;
  constexpr const char* kNA = "not applicable (non-Hessian input)";
  if (in.potential) {
    q = hflow::hessian_curvature(*in.potential);
    riemann = hflow::riemann_from_q(*q);
    const auto rt = hflow::kahler_curvature_pullback(g);
    const auto sec = hflow::sectional_extremes(*q, g, sopt);
    r.add("sup_q", hflow::sup_norm(*q));
    r.add("sup_q_gnorm", hflow::sup_norm(hflow::curvature_norm(*q, g)));
    r.add("sup_riemann", hflow::sup_norm(*riemann));
    r.add("riemann_route_defect", hflow::sup_difference(*riemann, hflow::riemann_from_gamma(g)));
    r.add("kahler_defect", hflow::kahler_correspondence_defect(rt, *q));
    r.add("contraction_defect", hflow::contraction_identity_defect(*q, g, forms.beta));
    r.add("sectional_max", sec.max_h);
    r.add("sectional_min", sec.min_h);
    r.add("sectional_argmax_node", std::to_string(sec.argmax.node));
    r.add("sectional_argmin_node", std::to_string(sec.argmin.node));
    r.add("sectional_samples", std::to_string(sec.samples_used));
    r.add("sectional_seed", std::to_string(seed));
  } else {
    for (const char* k : {"sup_q", "sup_q_gnorm", "sup_riemann", "riemann_route_defect", "kahler_defect",
                          "contraction_defect", "sectional_max", "sectional_min"}) {
      r.add(k, kNA);
    }
  }

  if (inv.probe) {
    const auto x = parse_probe<Dim>(*inv.probe);
    const std::size_t node = g.grid().nearest_node(x);
    const auto xn = g.grid().coordinates(node);
    std::string coords;
    for (int d = 0; d < Dim; ++d) coords += (d ? "," : "") + format_double(xn[d]);
    r.add("probe.node", std::to_string(node));
    r.add("probe.x", coords);
    for (int i = 0; i < Dim; ++i) r.add("probe.alpha" + idx({i}), forms.alpha(node, i));
    for (int i = 0; i < Dim; ++i)
      for (int j = i; j < Dim; ++j) {
        r.add("probe.g" + idx({i, j}), g(node, i, j));
        r.add("probe.beta" + idx({i, j}), forms.beta(node, i, j));
        r.add("probe.kappa" + idx({i, j}), forms.kappa(node, i, j));
      }
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = j; k < Dim; ++k) r.add("probe.gamma" + idx({i, j, k}), gamma.mixed(node, i, j, k));
    if (q) {
      for (int i = 0; i < Dim; ++i)
        for (int j = 0; j < Dim; ++j)
          for (int k = 0; k < Dim; ++k)
            for (int l = 0; l < Dim; ++l) r.add("probe.Q" + idx({i, j, k, l}), (*q)(node, i, j, k, l));
    }
  }

  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(inv.out);
  const std::string text = r.text();
  hflow::io::write_file_atomic(inv.out / "curvature.txt", text);
  if (snapshots == "true") {
    hflow::io::write_snapshot(inv.out / "metric.hfld", hflow::io::to_snapshot(g.components()));
    hflow::io::write_snapshot(inv.out / "beta.hfld", hflow::io::to_snapshot(forms.beta));
    hflow::io::write_snapshot(inv.out / "gamma.hfld", hflow::io::to_snapshot(gamma.mixed));
    if (q) hflow::io::write_snapshot(inv.out / "q.hfld", hflow::io::to_snapshot(*q));
  }
  std::cout << text;
  write_manifest(inv, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), "ok");
  return kExitOk;
}

template <int Dim>
double sup_deviation_from_mean(const hflow::MetricField<Dim>& g) {
  double m = 0.0;
  for (int c = 0; c < hflow::kSymCount<Dim>; ++c) {
    const auto& f = g.components().stored(c);
    const double mu = hflow::mean(f);
    for (double v : f.values()) m = std::max(m, std::abs(v - mu));
  }
  return m;
}

template <int Dim>
int cmd_flow_run(Invocation& inv) {
  const auto& cfg = inv.config;
  const auto control = step_control(cfg);
  const double T = positive(cfg, "T", 1.0);
  hflow::RunOptions opt;
  opt.cadence = cfg.has("cadence") ? positive(cfg, "cadence", 1.0) : T / 10.0;
  if (cfg.has("max_steps")) opt.max_steps = static_cast<std::size_t>(positive(cfg, "max_steps", 1.0));
  if (cfg.has("dt")) opt.fixed_dt = positive(cfg, "dt", 1.0);

  const auto start = std::chrono::steady_clock::now();
  const Input<Dim> in = load_input<Dim>(cfg);
  const auto run = hflow::run_flow(in.metric, T, control, opt);
  const auto& fin = run.final_state;

  fs::create_directories(inv.out);
  hflow::io::write_file_atomic(inv.out / "diagnostics.csv", hflow::io::diagnostics_csv(run.diagnostics));
  hflow::io::write_snapshot(inv.out / "final_metric.hfld", hflow::io::to_snapshot(fin.g.components(), fin.t));
  hflow::io::write_snapshot(inv.out / "final_phi.hfld", hflow::io::to_snapshot(fin.phi, fin.t));

  Report r;
  r.add("final_t", fin.t);
  r.add("steps", std::to_string(run.steps));
  r.add("sup_deviation_from_mean", sup_deviation_from_mean(fin.g));
  r.add("mean_drift", run.diagnostics.back().mean_drift);
  r.add("lambda_min", run.diagnostics.back().lambda_min);
  r.add("lambda_max", run.diagnostics.back().lambda_max);
  const std::string status = run.blowup ? "blowup" : (fin.t < T ? "stopped at max_steps" : "ok");
  r.add("status", status);
  if (run.blowup) r.add("last_valid_t", fin.t);
  const std::string text = r.text();
  hflow::io::write_file_atomic(inv.out / "flow_summary.txt", text);
  std::cout << text;

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (run.blowup) {
    write_manifest(inv, wall, "blowup; last_valid_t = " + format_double(fin.t));
    std::cerr << run.blowup->what() << "\n";
    return kExitBlowup;
  }
  write_manifest(inv, wall, status);
  return kExitOk;
}

template <int Dim>
int cmd_flow_compare(Invocation& inv) {
  const auto& cfg = inv.config;
  const auto control = step_control(cfg);
  const double T = positive(cfg, "T", 0.1);
  const double dt = positive(cfg, "dt", 1e-4);
  const auto start = std::chrono::steady_clock::now();
  const Input<Dim> in = load_input<Dim>(cfg);
  const auto rep = hflow::equivalence_check(in.metric, T, dt, control);
  Report r;
  r.add("T", T);
  r.add("dt", dt);
  r.add("steps", std::to_string(rep.steps));
  r.add("discrepancy", rep.discrepancy);
  r.add("quadrature_discrepancy", rep.quadrature_discrepancy);
  fs::create_directories(inv.out);
  const std::string text = r.text();
  hflow::io::write_file_atomic(inv.out / "compare.txt", text);
  std::cout << text;
  write_manifest(inv, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), "ok");
  return kExitOk;
}

template <int Dim>
int cmd_a2_check(Invocation& inv) {
  const auto& cfg = inv.config;
  const double theta = positive(cfg, "theta", 0.5);
  const std::string gauge_name = cfg.get("gauge", "zero");
  hflow::Gauge<Dim> gauge;
  if (gauge_name == "zero") gauge = hflow::Gauge<Dim>::zero();
  else if (gauge_name == "logdet") gauge = hflow::Gauge<Dim>::log_det();
  else throw ConfigError("gauge must be 'zero' or 'logdet'");

  const auto start = std::chrono::steady_clock::now();
  const Input<Dim> in = load_input<Dim>(cfg);
  Report r;
  r.add("theta", theta);
  r.add("gauge", gauge_name);
  if (cfg.has("S")) {
    const double S = cfg.get_double("S", 0.0);
    if (!(S >= 0.0)) throw ConfigError("S must be >= 0");
    const auto cert = hflow::a2_certificate(in.metric, S, gauge, theta);
    r.add("S", S);
    r.add("margin", cert.margin);
    r.add("feasible", cert.feasible ? "true" : "false");
  }
  try {
    const auto res = hflow::max_s(in.metric, gauge, theta);
    if (res.unbounded()) {
      r.add("S_max", "unbounded");
    } else {
      r.add("S_max", *res.s_max);
      r.add("witness_node", std::to_string(res.witness_node));
      std::string dir;
      for (int d = 0; d < Dim; ++d) dir += (d ? "," : "") + format_double(res.witness_direction(d));
      r.add("witness_direction", dir);
    }
  } catch (const hflow::InfeasibleAtZero& e) {
    r.add("S_max", std::string("infeasible at S = 0 (margin ") + format_double(e.margin()) + ")");
  }
  fs::create_directories(inv.out);
  const std::string text = r.text();
  hflow::io::write_file_atomic(inv.out / "a2.txt", text);
  std::cout << text;
  write_manifest(inv, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), "ok");
  return kExitOk;
}

template <int Dim>
int cmd_smoothing_probe(Invocation& inv) {
  const auto& cfg = inv.config;
  const auto control = step_control(cfg);
  std::vector<double> times = cfg.has("t_samples") ? cfg.get_doubles("t_samples")
                                                   : std::vector<double>{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0.0) || (k > 0 && !(times[k] > times[k - 1]))) {
      throw ConfigError("t_samples must be positive and strictly increasing");
    }
  }
  const auto start = std::chrono::steady_clock::now();
  const Input<Dim> in = load_input<Dim>(cfg);
  const auto series = hflow::smoothing_probe(in.metric, times, control);
  std::string out = "t,sup_q,t_sup_q\n";
  double a = 0.0;
  for (const auto& s : series) {
    out += format_double(s.t) + "," + format_double(s.sup_q) + "," + format_double(s.t_sup_q) + "\n";
    a = std::max(a, s.t_sup_q);
  }
  fs::create_directories(inv.out);
  hflow::io::write_file_atomic(inv.out / "probe.csv", out);
  std::cout << out << "a_empirical: " << format_double(a) << "\n";
  write_manifest(inv, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), "ok");
  return kExitOk;
}

int cmd_examples() {
  for (const auto& e : hflow::example_registry()) {
    std::cout << e.name << "  n=" << (e.dim == 0 ? std::string("any") : std::to_string(e.dim)) << "  "
              << e.parameters << "\n    " << e.doc << (e.hessian ? "" : " [non-Hessian]") << "\n";
  }
  return kExitOk;
}

template <template <int> class Cmd>
int dispatch(int dim, Invocation& inv) {
  switch (dim) {
    case 1: return Cmd<1>::run(inv);
    case 2: return Cmd<2>::run(inv);
    case 3: return Cmd<3>::run(inv);
    default: throw ConfigError("dimension must be 1, 2 or 3");
  }
}

template <int D> struct Curvature { static int run(Invocation& i) { return cmd_curvature<D>(i); } };
template <int D> struct FlowRunCmd { static int run(Invocation& i) { return cmd_flow_run<D>(i); } };
template <int D> struct FlowCompare { static int run(Invocation& i) { return cmd_flow_compare<D>(i); } };
template <int D> struct A2Check { static int run(Invocation& i) { return cmd_a2_check<D>(i); } };
template <int D> struct SmoothingProbe { static int run(Invocation& i) { return cmd_smoothing_probe<D>(i); } };

int execute(Invocation& inv) {
  if (inv.command == "examples") return cmd_examples();
  validate_keys(inv.config);
  const int dim = resolve_dimension(inv.config);
  if (inv.command == "curvature") return dispatch<Curvature>(dim, inv);
  if (inv.command == "flow-run") return dispatch<FlowRunCmd>(dim, inv);
  if (inv.command == "flow-compare") return dispatch<FlowCompare>(dim, inv);
  if (inv.command == "a2-check") return dispatch<A2Check>(dim, inv);
  if (inv.command == "smoothing-probe") return dispatch<SmoothingProbe>(dim, inv);
  throw ConfigError("unknown command " + inv.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hflow: second-Koszul-form flow and Hessian curvature on periodic affine charts"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "hflow-out";
  std::string probe;
  long long seed = -1;
  std::vector<std::string> overrides;

  app.add_subcommand("examples", "list the example registry");
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"curvature", "curvature and Koszul-form report"},
           {"flow-run", "integrate the tensor flow and write diagnostics"},
           {"flow-compare", "compare the tensor and potential integrators"},
           {"a2-check", "margin and maximal S of the (a2) inequality"},
           {"smoothing-probe", "decay series of sup|Q| along the flow"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed (overrides config)");
    sub->add_option("overrides", overrides, "extra key=value settings");
    if (name == "curvature") sub->add_option("--probe", probe, "comma-separated coordinates of a probe point");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  Invocation inv;
  inv.command = app.get_subcommands().front()->get_name();
  inv.out = out_dir;
  if (!probe.empty()) inv.probe = probe;
  try {
    if (!config_path.empty()) inv.config = Config::load(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("override '" + kv + "' is not key=value");
      inv.config.set(hflow::io::trim(kv.substr(0, eq)), hflow::io::trim(kv.substr(eq + 1)));
    }
    if (seed >= 0) inv.config.set("seed", std::to_string(seed));
    return execute(inv);
  } catch (const hflow::FlowBlowup& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBlowup;
  } catch (const hflow::NotPositiveDefinite& e) {
    std::cerr << "error: input " << e.what() << "\n";
    return kExitNotPositive;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidConfig;
  }
}
