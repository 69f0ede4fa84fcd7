#pragma once

/// @file flow.hpp
/// @brief Explicit integrators for ∂g/∂t = −β(g) (tensor leg) and for the
/// scalar potential equation ∂φ/∂t = log det(g₀ − tβ(g₀) + ∇dφ)/det g₀
/// (potential leg), with step halving on loss of positivity and per-step
/// diagnostics.
///
/// Time is measured in units of length². β is a pure second-difference
/// field, so every component mean of g is conserved by both schemes.
///
/// Under the tangent-bundle correspondence Ric(g^T) = ¼ β(g) ∘ π, hence
/// g̃(t) = g^T(t/4) satisfies ∂_t g̃ = −¼ β(g(t/4)) = −Ric(g̃): the tensor leg
/// is a Chern-Ricci flow on TM after rescaling time by 4.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hflow/criteria.hpp"
#include "hflow/curvature.hpp"
#include "hflow/metric.hpp"

namespace hflow {

enum class Scheme { euler, rk2 };

inline std::string to_string(Scheme s) { return s == Scheme::euler ? "euler" : "rk2"; }

struct StepControl {
  double sigma = 0.2;
  double dt_min = 1e-14;
  int max_halvings = 20;
  Scheme scheme = Scheme::rk2;

  void validate() const {
    if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("step control: sigma must lie in (0, 1]");
    if (!(dt_min > 0.0)) throw std::invalid_argument("step control: dt_min must be positive");
    if (max_halvings < 0) throw std::invalid_argument("step control: max_halvings must be >= 0");
  }
};

/// Positivity could not be kept within max_halvings or above dt_min.
class FlowBlowup : public std::runtime_error {
 public:
  FlowBlowup(double t, std::size_t node)
      : std::runtime_error("flow left the positive-definite window after t = " + std::to_string(t) +
                           " (node " + std::to_string(node) + ")"),
        t_(t),
        node_(node) {}
  double t() const { return t_; }
  std::size_t node() const { return node_; }

 private:
  double t_;
  std::size_t node_;
};

template <int Dim>
struct FlowReference {
  MetricField<Dim> g0;
  ScalarField<Dim> log_det0;
};

template <int Dim>
struct FlowState {
  double t = 0.0;
  MetricField<Dim> g;
  ScalarField<Dim> phi;        ///< trapezoid accumulation of log(det g / det g₀)
  ScalarField<Dim> log_ratio;  ///< log(det g / det g₀) at time t
  double dt_last = 0.0;
  int halvings_last = 0;
  std::shared_ptr<const FlowReference<Dim>> ref;

  const MetricField<Dim>& g0() const { return ref->g0; }
};

template <int Dim>
FlowState<Dim> initial_state(const MetricField<Dim>& g0) {
  auto ref = std::make_shared<const FlowReference<Dim>>(FlowReference<Dim>{g0, log_det(g0)});
  return {0.0, g0, ScalarField<Dim>(g0.grid()), ScalarField<Dim>(g0.grid()), 0.0, 0, std::move(ref)};
}

/// dt = σ · min_d h_d² / (2n · max_x λ_max(g⁻¹)), the explicit-diffusion bound
/// for the linearisation δġ_ij = ∂_i∂_j(g^{kl} δg_kl).
template <int Dim>
double stable_dt(const MetricField<Dim>& g, const StepControl& control) {
  double lam_min = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < g.node_count(); ++n) lam_min = std::min(lam_min, min_eigenvalue<Dim>(g.matrix(n)));
  const double max_inv = 1.0 / lam_min;
  return control.sigma * g.grid().min_spacing_squared() / (2.0 * Dim * max_inv);
}

namespace detail {

template <int Dim>
MetricField<Dim> euler_update(const MetricField<Dim>& g, const SymTensorField<Dim>& b, double dt) {
  SymTensorField<Dim> next = g.components();
  for (int c = 0; c < kSymCount<Dim>; ++c) next.stored(c) -= dt * b.stored(c);
  return MetricField<Dim>(std::move(next));
}

template <int Dim>
MetricField<Dim> advance_metric(const MetricField<Dim>& g, double dt, Scheme scheme) {
  if (scheme == Scheme::euler) return euler_update(g, beta(g), dt);
  const MetricField<Dim> mid = euler_update(g, beta(g), 0.5 * dt);
  return euler_update(g, beta(mid), dt);
}

}  // namespace detail

/// One accepted step of ∂g/∂t = −β(g). A step whose result (or RK2 midpoint)
/// is not positive definite is retried at dt/2, up to max_halvings times.
template <int Dim>
FlowState<Dim> step_tensor(const FlowState<Dim>& state, double dt, const StepControl& control) {
  control.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("step_tensor: dt must be positive");
  std::size_t bad_node = 0;
  for (int halvings = 0; halvings <= control.max_halvings; ++halvings, dt *= 0.5) {
    if (dt < control.dt_min) break;
    try {
      MetricField<Dim> g = detail::advance_metric(state.g, dt, control.scheme);
      ScalarField<Dim> ratio = log_det(g) - state.ref->log_det0;
      ScalarField<Dim> phi = state.phi;
      for (std::size_t n = 0; n < phi.size(); ++n) phi[n] += 0.5 * dt * (state.log_ratio[n] + ratio[n]);
      return {state.t + dt, std::move(g), std::move(phi), std::move(ratio), dt, halvings, state.ref};
    } catch (const NotPositiveDefinite& e) {
      bad_node = e.node();
    }
  }
  throw FlowBlowup(state.t, bad_node);
}

/// One row of the diagnostics CSV; field order is the column order.
struct DiagnosticsRow {
  double t = 0.0;
  double sup_q = 0.0;       ///< sup_x |Q|_g
  double t_sup_q = 0.0;     ///< t · sup_x |Q|_g
  double lambda_min = 0.0;  ///< λ(t): min generalized eigenvalue of g w.r.t. g₀
  double lambda_max = 0.0;  ///< Λ(t)
  double var_det = 0.0;     ///< population variance of det g
  double mean_drift = 0.0;  ///< max over components |mean g_ij(t) − mean g_ij(0)|
  double sup_phi = 0.0;
  double dt = 0.0;          ///< last accepted step
};

inline const char* diagnostics_header() {
  return "t,sup_q,t_sup_q,lambda_min,lambda_max,var_det,mean_drift,sup_phi,dt";
}

template <int Dim>
DiagnosticsRow diagnostics(const FlowState<Dim>& s) {
  DiagnosticsRow row;
  row.t = s.t;
  row.sup_q = sup_norm(curvature_norm(hessian_curvature(s.g), s.g));
  row.t_sup_q = s.t * row.sup_q;
  const Equivalence eq = uniform_equivalence(s.g, s.g0());
  row.lambda_min = eq.lambda;
  row.lambda_max = eq.Lambda;
  row.var_det = variance(det(s.g));
  for (int c = 0; c < kSymCount<Dim>; ++c)
    row.mean_drift = std::max(row.mean_drift, std::abs(mean(s.g.components().stored(c)) -
                                                       mean(s.g0().components().stored(c))));
  row.sup_phi = sup_norm(s.phi);
  row.dt = s.dt_last;
  return row;
}

struct RunOptions {
  double cadence = 0.0;              ///< diagnostics every `cadence` time units; 0 = endpoints only
  std::vector<double> sample_times;  ///< states kept (and diagnosed) at these times
  std::size_t max_steps = 0;         ///< stop after this many steps; 0 = no limit
  double fixed_dt = 0.0;             ///< 0 = stable_dt each step
};

template <int Dim>
struct FlowRun {
  std::vector<FlowState<Dim>> samples;
  std::vector<DiagnosticsRow> diagnostics;
  FlowState<Dim> final_state;
  std::size_t steps = 0;
  std::optional<FlowBlowup> blowup;  ///< set when the run stopped early; final_state is the last valid one
};

/// Integrates from g₀ to T. Diagnostics are taken at t = 0, every cadence
/// multiple, every sample time and at the end; steps are shortened to land
/// on those times exactly.
template <int Dim>
FlowRun<Dim> run_flow(const MetricField<Dim>& g0, double T, const StepControl& control, const RunOptions& opt = {}) {
  control.validate();
  if (!(T > 0.0)) throw std::invalid_argument("run_flow: T must be positive");
  if (opt.cadence < 0.0 || opt.fixed_dt < 0.0) throw std::invalid_argument("run_flow: negative cadence or dt");

  std::vector<double> events;
  if (opt.cadence > 0.0) {
    for (std::size_t k = 1;; ++k) {
      const double te = static_cast<double>(k) * opt.cadence;
      if (te >= T * (1.0 - 1e-12)) break;
      events.push_back(te);
    }
  }
  std::vector<double> samples = opt.sample_times;
  std::sort(samples.begin(), samples.end());
  for (double ts : samples) {
    if (!(ts > 0.0) || ts > T) throw std::invalid_argument("run_flow: sample times must lie in (0, T]");
    events.push_back(ts);
  }
  events.push_back(T);
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  FlowRun<Dim> run;
  FlowState<Dim> state = initial_state(g0);
  run.diagnostics.push_back(diagnostics(state));
  std::size_t next_sample = 0;

  for (double target : events) {
    while (state.t < target) {
      if (opt.max_steps != 0 && run.steps >= opt.max_steps) break;
      double dt = opt.fixed_dt > 0.0 ? opt.fixed_dt : stable_dt(state.g, control);
      const bool lands = state.t + dt >= target * (1.0 - 1e-13);
      if (lands) dt = target - state.t;
      try {
        FlowState<Dim> next = step_tensor(state, dt, control);
        if (lands && next.halvings_last == 0) next.t = target;
        state = std::move(next);
        ++run.steps;
      } catch (const FlowBlowup& e) {
        run.blowup = e;
        break;
      }
    }
    if (run.blowup || state.t < target) break;
    run.diagnostics.push_back(diagnostics(state));
    while (next_sample < samples.size() && samples[next_sample] <= state.t) {
      run.samples.push_back(state);
      ++next_sample;
    }
  }
  if (run.diagnostics.back().t != state.t) run.diagnostics.push_back(diagnostics(state));
  run.final_state = std::move(state);
  return run;
}

template <int Dim>
struct PotentialReference {
  MetricField<Dim> g0;
  SymTensorField<Dim> beta0;
  ScalarField<Dim> log_det0;
};

template <int Dim>
struct PotentialFlowState {
  double t = 0.0;
  ScalarField<Dim> phi;
  double dt_last = 0.0;
  int halvings_last = 0;
  std::shared_ptr<const PotentialReference<Dim>> ref;

  /// g₀ − tβ(g₀) + ∇dφ; throws NotPositiveDefinite when the constraint fails.
  MetricField<Dim> metric() const { return reconstruct(t, phi); }

  MetricField<Dim> reconstruct(double time, const ScalarField<Dim>& potential) const {
    SymTensorField<Dim> g(ref->g0.grid());
    for (int i = 0; i < Dim; ++i)
      for (int j = i; j < Dim; ++j) {
        ScalarField<Dim> c = ref->g0.component(i, j);
        c -= time * ref->beta0.component(i, j);
        c += partial2(potential, i, j);
        g.component(i, j) = std::move(c);
      }
    return MetricField<Dim>(std::move(g));
  }
};

template <int Dim>
PotentialFlowState<Dim> initial_potential_state(const MetricField<Dim>& g0) {
  auto ref = std::make_shared<const PotentialReference<Dim>>(PotentialReference<Dim>{g0, beta(g0), log_det(g0)});
  return {0.0, ScalarField<Dim>(g0.grid()), 0.0, 0, std::move(ref)};
}

/// One accepted step of the potential equation, halving as in step_tensor.
template <int Dim>
PotentialFlowState<Dim> step_potential(const PotentialFlowState<Dim>& state, double dt, const StepControl& control) {
  control.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("step_potential: dt must be positive");
  auto rate = [&](double time, const ScalarField<Dim>& phi) {
    return log_det(state.reconstruct(time, phi)) - state.ref->log_det0;
  };
  std::size_t bad_node = 0;
  for (int halvings = 0; halvings <= control.max_halvings; ++halvings, dt *= 0.5) {
    if (dt < control.dt_min) break;
    try {
      ScalarField<Dim> phi = state.phi;
      if (control.scheme == Scheme::euler) {
        phi += dt * rate(state.t, state.phi);
      } else {
        const ScalarField<Dim> mid = state.phi + (0.5 * dt) * rate(state.t, state.phi);
        phi += dt * rate(state.t + 0.5 * dt, mid);
      }
      PotentialFlowState<Dim> next{state.t + dt, std::move(phi), dt, halvings, state.ref};
      (void)next.metric();  // re-check positivity of the reconstruction
      return next;
    } catch (const NotPositiveDefinite& e) {
      bad_node = e.node();
    }
  }
  throw FlowBlowup(state.t, bad_node);
}

struct EquivalenceReport {
  /// sup |g_tensor − (g₀ − tβ(g₀) + ∇dφ_potential)| over every step and node.
  double discrepancy = 0.0;
  /// Same comparison with φ taken from the tensor leg's trapezoid accumulation.
  double quadrature_discrepancy = 0.0;
  std::size_t steps = 0;
};

/// Runs both legs in lockstep with step dt (the potential leg follows any
/// halving of the tensor leg) and compares the metrics after every step.
template <int Dim>
EquivalenceReport equivalence_check(const MetricField<Dim>& g0, double T, double dt, const StepControl& control) {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("equivalence_check: T and dt must be positive");
  EquivalenceReport report;
  FlowState<Dim> tensor = initial_state(g0);
  PotentialFlowState<Dim> potential = initial_potential_state(g0);
  while (tensor.t < T * (1.0 - 1e-13)) {
    const double h = std::min(dt, T - tensor.t);
    tensor = step_tensor(tensor, h, control);
    StepControl exact = control;
    exact.max_halvings = 0;
    potential = step_potential(potential, tensor.dt_last, exact);
    ++report.steps;
    const MetricField<Dim> from_potential = potential.metric();
    const MetricField<Dim> from_quadrature = potential.reconstruct(tensor.t, tensor.phi);
    report.discrepancy =
        std::max(report.discrepancy, sup_difference(tensor.g.components(), from_potential.components()));
    report.quadrature_discrepancy =
        std::max(report.quadrature_discrepancy, sup_difference(tensor.g.components(), from_quadrature.components()));
  }
  return report;
}

struct ProbeSample {
  double t = 0.0;
  double sup_q = 0.0;
  double t_sup_q = 0.0;
};

/// Decay series of sup|Q|_g along the tensor flow at the requested times.
template <int Dim>
std::vector<ProbeSample> smoothing_probe(const MetricField<Dim>& g0, const std::vector<double>& t_samples,
                                         const StepControl& control) {
  if (t_samples.empty()) throw std::invalid_argument("smoothing_probe: no sample times");
  for (std::size_t k = 0; k < t_samples.size(); ++k) {
    if (!(t_samples[k] > 0.0) || (k > 0 && !(t_samples[k] > t_samples[k - 1]))) {
      throw std::invalid_argument("smoothing_probe: sample times must be positive and increasing");
    }
  }
  RunOptions opt;
  opt.sample_times = t_samples;
  const FlowRun<Dim> run = run_flow(g0, t_samples.back(), control, opt);
  if (run.blowup) throw *run.blowup;
  std::vector<ProbeSample> out;
  for (const auto& s : run.samples) {
    const double q = sup_norm(curvature_norm(hessian_curvature(s.g), s.g));
    out.push_back({s.t, q, s.t * q});
  }
  return out;
}

}  // namespace hflow
