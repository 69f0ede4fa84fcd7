// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// quantities underneath. Usage: acceptance [path-to-hflow-cli]
//
// Without a CLI path, criteria 8 and 9 run in-process only.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hflow/hflow.hpp"

using namespace hflow;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

// Reference constant for criterion 7: max over the probe series of t·sup|Q|_g
// for rough1d (seed 42, N = 512, RK2, sigma 0.2), reached at t = 0.02 in the
// reference run (0.05669165313605745), rounded up to three digits.
constexpr double kSmoothingReferenceA = 0.0567;

// Errors at or below this level are rounding, not truncation.
constexpr double kRoundingFloor = 1e-12;

class Criterion {
 public:
  Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    lines_.push_back(std::string(ok ? "    ok    " : "    FAIL  ") + what);
  }
  void note(const std::string& what) { lines_.push_back("    note  " + what); }

  bool passed() const { return pass_; }

  void print() const {
    std::cout << (pass_ ? "PASS" : "FAIL") << " criterion " << id_ << ": " << title_ << "\n";
    for (const auto& l : lines_) std::cout << l << "\n";
    std::cout.flush();
  }

 private:
  int id_;
  std::string title_;
  bool pass_ = true;
  std::vector<std::string> lines_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string le(const std::string& name, double v, double tol) {
  return name + " = " + fmt(v) + " (<= " + fmt(tol) + ")";
}

/// Refinement ratio check: both values at rounding level counts as exact
/// agreement; otherwise the ratio must fall in [lo, hi].
bool refinement_ok(double coarse, double fine, double lo, double hi) {
  if (coarse <= kRoundingFloor && fine <= kRoundingFloor) return true;
  const double r = coarse / fine;
  return r >= lo && r <= hi;
}

std::string refinement_text(const std::string& name, double coarse, double fine, double lo, double hi) {
  if (coarse <= kRoundingFloor && fine <= kRoundingFloor) {
    return name + ": " + fmt(coarse) + " -> " + fmt(fine) + " (both at rounding level: exact agreement)";
  }
  std::string range = "[" + fmt(lo) + ", " + (std::isinf(hi) ? std::string("inf") : fmt(hi)) + "]";
  return name + ": " + fmt(coarse) + " -> " + fmt(fine) + ", ratio " + fmt(coarse / fine) + " in " + range;
}

template <int Dim>
double q_symmetry_defect(const PotentialMetric<Dim>& pm) {
  const auto dense = hessian_curvature_dense(pm);
  const auto compact = hessian_curvature(pm);
  double worst = 0.0;
  for (std::size_t n = 0; n < dense.node_count(); ++n)
    for (int i = 0; i < Dim; ++i)
      for (int j = 0; j < Dim; ++j)
        for (int k = 0; k < Dim; ++k)
          for (int l = 0; l < Dim; ++l) {
            const double q = dense(n, i, j, k, l);
            worst = std::max(worst, std::abs(q - dense(n, k, j, i, l)));
            worst = std::max(worst, std::abs(q - dense(n, i, l, k, j)));
            worst = std::max(worst, std::abs(q - dense(n, j, i, l, k)));
            worst = std::max(worst, std::abs(q - compact(n, i, j, k, l)));
          }
  return worst;
}

template <int Dim>
double kappa_beta_defect(const MetricField<Dim>& g) {
  const auto f = koszul(g);
  double m = 0.0;
  for (int i = 0; i < Dim; ++i)
    for (int j = i; j < Dim; ++j)
      for (std::size_t n = 0; n < g.node_count(); ++n) m = std::max(m, std::abs(f.kappa(n, i, j) + 0.5 * f.beta(n, i, j)));
  return m;
}

template <int Dim>
std::array<std::size_t, Dim> cube(std::size_t n) {
  std::array<std::size_t, Dim> s{};
  s.fill(n);
  return s;
}

template <int Dim>
void identity_checks(Criterion& c, const std::string& name, std::size_t n) {
  const auto inst = make_example<Dim>(name, cube<Dim>(n));
  const auto fine = make_example<Dim>(name, cube<Dim>(2 * n));
  const auto& g = inst.metric;
  c.check(kappa_beta_defect(g) <= 1e-12, le(name + " sup|kappa + beta/2|", kappa_beta_defect(g), 1e-12));
  c.check(hessian_defect(g) <= 1e-12, le(name + " hessian_defect", hessian_defect(g), 1e-12));
  const double sym = q_symmetry_defect(*inst.potential);
  c.check(sym <= 1e-12, le(name + " Q symmetry defect", sym, 1e-12));

  auto alpha_defect = [](const MetricField<Dim>& m) {
    return sup_difference(koszul(m).alpha, gamma_trace(christoffel(m)));
  };
  const double a0 = alpha_defect(g), a1 = alpha_defect(fine.metric);
  c.check(a0 <= 1e-3, le(name + " sup|alpha - tr gamma|", a0, 1e-3));
  c.check(refinement_ok(a0, a1, 3.5, 4.5), refinement_text(name + " alpha refinement", a0, a1, 3.5, 4.5));

  auto riemann_defect = [](const ExampleInstance<Dim>& e) {
    return sup_difference(riemann_from_gamma(e.metric), riemann_from_q(hessian_curvature(*e.potential)));
  };
  const double r0 = riemann_defect(inst), r1 = riemann_defect(fine);
  c.check(r0 <= 1e-3, le(name + " sup|R(gamma) - R(Q)|", r0, 1e-3));
  c.check(refinement_ok(r0, r1, 3.5, 4.5), refinement_text(name + " Riemann refinement", r0, r1, 3.5, 4.5));
}

Criterion criterion1() {
  Criterion c(1, "identity suite (kappa, Hessian defect, Q symmetries, alpha and Riemann routes)");
  identity_checks<1>(c, "sin1d", 512);
  identity_checks<2>(c, "bump2d", 128);
  return c;
}

template <int Dim>
void kahler_checks(Criterion& c, const std::string& name, std::size_t n) {
  auto rt_defect = [&](std::size_t m) {
    const auto e = make_example<Dim>(name, cube<Dim>(m));
    return kahler_correspondence_defect(kahler_curvature_pullback(*e.potential), hessian_curvature(*e.potential));
  };
  auto contraction = [&](std::size_t m) {
    const auto e = make_example<Dim>(name, cube<Dim>(m));
    return contraction_identity_defect(hessian_curvature(*e.potential), e.metric, beta(e.metric));
  };
  const double k0 = rt_defect(n), k1 = rt_defect(2 * n);
  c.check(k0 <= 1e-3, le(name + " sup|R^T + Q/2|", k0, 1e-3));
  c.check(refinement_ok(k0, k1, 3.0, INFINITY), refinement_text(name + " R^T refinement", k0, k1, 3.0, INFINITY));
  const double c0 = contraction(n), c1 = contraction(2 * n);
  c.check(c0 <= 1e-3, le(name + " sup|beta + 2 tr_g Q|", c0, 1e-3));
  c.check(refinement_ok(c0, c1, 3.0, INFINITY), refinement_text(name + " contraction refinement", c0, c1, 3.0, INFINITY));
}

Criterion criterion2() {
  Criterion c(2, "tangent-bundle Kaehler correspondence (torsion, R^T = -Q/2, contraction)");
  const double t_flat = pullback_chern_torsion(make_example<2>("flat", {64, 64}).metric).norm;
  const double t_sin = pullback_chern_torsion(make_example<1>("sin1d", {512}).metric).norm;
  const double t_bump = pullback_chern_torsion(make_example<2>("bump2d", {128, 128}).metric).norm;
  const double t_rough = pullback_chern_torsion(make_example<1>("rough1d", {512}).metric).norm;
  const double t_twist = pullback_chern_torsion(make_example<2>("twist2d", {128, 128}).metric).norm;
  c.check(t_flat <= 1e-10, le("flat torsion", t_flat, 1e-10));
  c.check(t_sin <= 1e-10, le("sin1d torsion", t_sin, 1e-10));
  c.check(t_bump <= 1e-10, le("bump2d torsion", t_bump, 1e-10));
  c.check(t_rough <= 1e-10, le("rough1d torsion", t_rough, 1e-10));
  c.check(t_twist >= 0.01, "twist2d torsion = " + fmt(t_twist) + " (>= 0.01)");
  kahler_checks<1>(c, "sin1d", 512);
  kahler_checks<2>(c, "bump2d", 128);
  return c;
}

Criterion criterion3() {
  Criterion c(3, "sin1d point probes at N = 512");
  const auto inst = make_example<1>("sin1d", {512});
  const auto& g = inst.metric;
  const auto forms = koszul(g);
  const auto gamma = christoffel(g);
  const auto q = hessian_curvature(*inst.potential);
  auto node = [&](double x) { return g.grid().nearest_node({x}); };
  auto probe = [&](const std::string& name, double got, double want) {
    c.check(std::abs(got - want) <= 1e-3, name + " = " + fmt(got) + " (want " + fmt(want) + " +- 1e-3)");
  };
  probe("beta(0)", forms.beta(node(0.0), 0, 0), 0.25);
  probe("beta(pi/2)", forms.beta(node(kPi / 2), 0, 0), 1.0 / 3.0);
  probe("alpha(0)", forms.alpha(node(0.0), 0), 0.25);
  probe("kappa(0)", forms.kappa(node(0.0), 0, 0), -0.125);
  probe("gamma^1_11(0)", gamma.mixed(node(0.0), 0, 0, 0), 0.25);
  probe("Q(0)", q(node(0.0), 0, 0, 0, 0), -0.25);
  probe("Q(pi/2)", q(node(kPi / 2), 0, 0, 0, 0), -0.5);
  probe("Q(3pi/2)", q(node(1.5 * kPi), 0, 0, 0, 0), 0.5);
  const auto sec = sectional_extremes(q, g);
  c.check(std::abs(sec.max_h - 0.5) <= 0.02, "sectional max_H = " + fmt(sec.max_h) + " (want 0.5 +- 0.02)");
  c.note("sectional min_H = " + fmt(sec.min_h) + " (dense-scan continuum minimum -0.06584)");
  return c;
}

double min_g(const MetricField<1>& g) {
  double m = INFINITY;
  for (double v : g.component(0, 0).values()) m = std::min(m, v);
  return m;
}

Criterion criterion4() {
  Criterion c(4, "flow correctness (stationarity, conservation, convergence, minimum principle, det variance)");
  {
    const auto flat = make_example<2>("flat", {32, 32});
    auto s = initial_state(flat.metric);
    const StepControl ctl;
    for (int k = 0; k < 200; ++k) s = step_tensor(s, stable_dt(s.g, ctl), ctl);
    const double dev = sup_difference(s.g.components(), flat.metric.components());
    c.check(dev <= 1e-12, le("flat: sup|g(200 steps) - I|", dev, 1e-12));
  }
  {
    const auto inst = make_example<1>("sin1d", {256});
    const auto run = run_flow(inst.metric, 5.0, StepControl{});
    double drift = 0.0, dev = 0.0;
    for (const auto& row : run.diagnostics) drift = std::max(drift, row.mean_drift);
    for (double v : run.final_state.g.component(0, 0).values()) dev = std::max(dev, std::abs(v - 2.0));
    c.check(!run.blowup.has_value() && run.final_state.t == 5.0, "sin1d N=256 reached T = 5 in " +
                                                                     std::to_string(run.steps) + " RK2 steps");
    c.check(drift <= 1e-10, le("sin1d mean drift over [0, 5]", drift, 1e-10));
    c.check(dev <= 5e-3, le("sin1d sup|g(5) - 2|", dev, 5e-3));
    c.note("linearised decay of the sin x mode is exp(-t/2): amplitude ~ exp(-2.5) = 0.082 at T = 5");
  }
  {
    const auto inst = make_example<1>("sin1d", {256});
    StepControl ctl;
    ctl.scheme = Scheme::euler;
    auto s = initial_state(inst.metric);
    double worst = 0.0, prev = min_g(s.g);
    std::size_t steps = 0;
    while (s.t < 5.0) {
      s = step_tensor(s, std::min(stable_dt(s.g, ctl), 5.0 - s.t), ctl);
      const double cur = min_g(s.g);
      worst = std::max(worst, prev - cur);
      prev = cur;
      ++steps;
    }
    c.check(worst <= 1e-12, le("sin1d Euler minimum-principle violation over " + std::to_string(steps) + " steps",
                               std::max(worst, 0.0), 1e-12));
  }
  {
    const auto inst = make_example<2>("bump2d", {128, 128});
    const auto run = run_flow(inst.metric, 2.0, StepControl{});
    const double v0 = run.diagnostics.front().var_det;
    const double v1 = run.diagnostics.back().var_det;
    c.check(!run.blowup.has_value() && v1 <= v0 / 10.0,
            "bump2d 128^2 var(det g): " + fmt(v0) + " -> " + fmt(v1) + " at T = 2, drop " + fmt(v0 / v1) + "x (>= 10x)");
  }
  return c;
}

Criterion criterion5() {
  Criterion c(5, "tensor and potential legs agree");
  const StepControl ctl;
  const auto coarse = equivalence_check(make_example<1>("sin1d", {256}).metric, 0.1, 1e-4, ctl);
  const auto fine = equivalence_check(make_example<1>("sin1d", {512}).metric, 0.1, 5e-5, ctl);
  c.check(coarse.discrepancy <= 1e-4, le("sin1d N=256 dt=1e-4 T=0.1 discrepancy", coarse.discrepancy, 1e-4));
  c.check(refinement_ok(coarse.discrepancy, fine.discrepancy, 3.0, INFINITY),
          refinement_text("refinement (dt/2, 2N)", coarse.discrepancy, fine.discrepancy, 3.0, INFINITY));
  c.check(refinement_ok(coarse.quadrature_discrepancy, fine.quadrature_discrepancy, 3.0, INFINITY),
          refinement_text("trapezoid-phi reconstruction", coarse.quadrature_discrepancy, fine.quadrature_discrepancy,
                          3.0, INFINITY));
  return c;
}

Criterion criterion6() {
  Criterion c(6, "(a2) criteria: unbounded flat case, gauge identity, max S, concavity");
  const auto flat = make_example<2>("flat", {32, 32});
  c.check(max_s(flat.metric, Gauge<2>::zero(), 0.5).unbounded(), "flat, u = 0, theta = 0.5: S_max unbounded");

  double gauge_defect = 0.0;
  auto accumulate = [&](const auto& g) {
    const auto ld = log_det(g);
    const auto b = beta(g);
    constexpr int D = std::remove_cvref_t<decltype(g)>::Grid::dim();
    for (int i = 0; i < D; ++i)
      for (int j = i; j < D; ++j) {
        const auto h = partial2(ld, i, j);
        for (std::size_t n = 0; n < g.node_count(); ++n) gauge_defect = std::max(gauge_defect, std::abs(h[n] + b(n, i, j)));
      }
  };
  accumulate(make_example<1>("sin1d", {512}).metric);
  accumulate(make_example<1>("rough1d", {512}).metric);
  accumulate(make_example<2>("bump2d", {128, 128}).metric);
  accumulate(make_example<2>("twist2d", {128, 128}).metric);
  c.check(gauge_defect <= 1e-12, le("sup|dd log det g0 + beta(g0)| over registry", gauge_defect, 1e-12));

  const auto inst = make_example<1>("sin1d", {512});
  const auto& g0 = inst.metric;
  const ScalarField<1> zero(g0.grid());
  const double theta = 0.1;
  double scan = 0.0;
  for (int k = 0; k <= 200000; ++k) {
    const double S = 1e-4 * k;
    if (a2_margin(g0, S, zero, theta) >= 0.0) scan = S;
    else break;
  }
  const auto res = max_s(g0, Gauge<1>::zero(), theta);
  const double s = res.s_max.value_or(INFINITY);
  c.check(std::abs(s - scan) <= 1e-3, "sin1d u = 0 theta = 0.1: S_max = " + fmt(s) + ", dense scan " + fmt(scan) +
                                          " (|diff| <= 1e-3)");
  const double below = a2_margin(g0, s * (1.0 - 1e-6), zero, theta);
  const double above = a2_margin(g0, s * (1.0 + 1e-4), zero, theta);
  c.check(below >= -1e-8 && above < 0.0,
          "bracketing: margin(S_max(1-1e-6)) = " + fmt(below) + " >= -1e-8, margin(S_max(1+1e-4)) = " + fmt(above) + " < 0");

  const auto pencil = a2_pencil(g0, Gauge<1>::zero(), theta);
  GaussianStream rng(kDefaultSeed);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const std::size_t node = rng.below(g0.node_count());
    const double a = min_eigenvalue<1>(pencil.at(node, 0.0));
    const double m = min_eigenvalue<1>(pencil.at(node, 0.5 * s));
    const double b = min_eigenvalue<1>(pencil.at(node, s));
    worst = std::max(worst, 0.5 * (a + b) - m);
  }
  c.check(worst <= 1e-10, le("midpoint-concavity violation over 100 random nodes", std::max(worst, 0.0), 1e-10));
  return c;
}

Criterion criterion7() {
  Criterion c(7, "smoothing probe on rough1d (seed 42, N = 512)");
  const auto inst = make_example<1>("rough1d", {512}, 42);
  const std::vector<double> times{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1};
  const auto series = smoothing_probe(inst.metric, times, StepControl{});
  double a = 0.0;
  for (const auto& s : series) {
    a = std::max(a, s.t_sup_q);
    c.note("t = " + fmt(s.t) + "  sup|Q| = " + fmt(s.sup_q) + "  t*sup|Q| = " + fmt(s.t_sup_q));
  }
  c.check(a <= kSmoothingReferenceA, le("max t*sup|Q| over [1e-3, 1e-1]", a, kSmoothingReferenceA));
  const double drop = series.front().sup_q / series.back().sup_q;
  c.check(drop >= 10.0, "sup|Q|(1e-3) / sup|Q|(0.1) = " + fmt(drop) + " (>= 10)");
  return c;
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Criterion criterion8(const std::string& cli, const fs::path& work) {
  Criterion c(8, "determinism and I/O");
  {
    const auto inst = make_example<2>("bump2d", {32, 32});
    RunOptions opt;
    opt.cadence = 0.01;
    const auto a = io::diagnostics_csv(run_flow(inst.metric, 0.1, StepControl{}, opt).diagnostics);
    const auto b = io::diagnostics_csv(run_flow(inst.metric, 0.1, StepControl{}, opt).diagnostics);
    c.check(a == b, "in-process diagnostics CSV identical across runs (" + std::to_string(a.size()) + " bytes)");
  }
  {
    const auto inst = make_example<2>("bump2d", {32, 24});
    const auto path = work / "roundtrip.hfld";
    const auto snap = io::to_snapshot(inst.metric.components(), 0.25);
    io::write_snapshot(path, snap);
    const auto back = io::read_snapshot(path);
    c.check(back == snap && io::sym_from_snapshot<2>(back) == inst.metric.components(), "snapshot round trip bit-exact");
  }
  if (cli.empty()) {
    c.note("CLI path not given; command-level determinism not exercised");
    return c;
  }
  const fs::path cfg = work / "run.cfg";
  io::write_file_atomic(cfg, "example = rough1d\nsizes = 128\nT = 0.05\ncadence = 0.01\nseed = 42\n");
  const int rc1 = run_cli(cli, "flow-run --config " + cfg.string() + " --out " + (work / "a").string());
  const int rc2 = run_cli(cli, "flow-run --config " + (work / "a" / "manifest.cfg").string() + " --out " +
                                   (work / "b").string());
  const bool same = rc1 == 0 && rc2 == 0 &&
                    io::read_file(work / "a" / "diagnostics.csv") == io::read_file(work / "b" / "diagnostics.csv");
  c.check(same, "flow-run re-run from its manifest gives byte-identical diagnostics.csv");
  const int rc3 = run_cli(cli, "curvature example=bump2d sizes=32 --seed 7 --out " + (work / "c").string());
  const int rc4 = run_cli(cli, "curvature example=bump2d sizes=32 --seed 7 --out " + (work / "d").string());
  c.check(rc3 == 0 && rc4 == 0 &&
              io::read_file(work / "c" / "curvature.txt") == io::read_file(work / "d" / "curvature.txt"),
          "curvature report byte-identical for identical config and seed");
  return c;
}

Criterion criterion9(const std::string& cli, const fs::path& work) {
  Criterion c(9, "performance: bump2d 128^2, 1000 RK2 steps");
  double seconds = 0.0;
  if (!cli.empty()) {
    const auto start = std::chrono::steady_clock::now();
    const int rc = run_cli(cli, "flow-run example=bump2d sizes=128,128 T=100 max_steps=1000 --out " +
                                    (work / "perf").string());
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.check(rc == 0, "flow-run exit code " + std::to_string(rc));
  } else {
    const auto inst = make_example<2>("bump2d", {128, 128});
    RunOptions opt;
    opt.max_steps = 1000;
    const auto start = std::chrono::steady_clock::now();
    const auto run = run_flow(inst.metric, 100.0, StepControl{}, opt);
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.check(run.steps == 1000, "steps taken " + std::to_string(run.steps));
  }
  c.check(seconds < 60.0, "wall time " + fmt(seconds) + " s (< 60 s)");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";
  const fs::path work = fs::temp_directory_path() / ("hflow_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(work);

  const std::vector<std::function<Criterion()>> criteria{
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7,
      [&] { return criterion8(cli, work); }, [&] { return criterion9(cli, work); },
  };
  int failed = 0;
  for (const auto& run : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Criterion c = run();
    c.print();
    std::cout << "    time  " << fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count())
              << " s\n";
    if (!c.passed()) ++failed;
  }
  fs::remove_all(work);
  std::cout << (failed == 0 ? "ALL CRITERIA PASS" : std::to_string(failed) + " CRITERIA FAIL") << "\n";
  return failed == 0 ? 0 : 1;
}
