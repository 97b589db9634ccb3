#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/errors.hpp"
#include "curveflow/flow.hpp"
#include "curveflow/pentadiagonal.hpp"

// One semi-implicit time step of the curve evolution
//
//   beta = -d2k/ds2 + b(k)            (normal velocity)
//
// discretized on flowing finite volumes [x[s-1], x[s]] of length r[s], with
// dual volumes of length q[s] = (r[s] + r[s+1])/2 around the vertices.  A step
// runs, in order:
//
//   1. beta from the current (old) state,
//   2. the tangential velocity alpha (nonlocal recurrence, alpha at the seam
//      vertex = 0) that redistributes vertices toward uniform spacing,
//   3. the log-length update eta -> eta', r' = exp(eta'),
//   4. a cyclic pentadiagonal solve for the new curvatures,
//   5. one cyclic pentadiagonal solve per coordinate for the new positions.
//
// Linear (stiff) terms sit at the new time level; nonlinear coefficients are
// frozen at the old one, so each step costs three pentadiagonal solves.

namespace curveflow {

enum class Redistribution { None, AsymptoticallyUniform };

struct SolverParams {
  enum class Kind { GaussSeidel, Dense };
  Kind kind = Kind::GaussSeidel;
  double rel_tol = 1e-10;
  int max_iters = 10000;

  friend bool operator==(const SolverParams&, const SolverParams&) = default;
};

struct StepParams {
  double tau = 1e-3;
  double omega = 1.0;  // redistribution rate
  Redistribution redistribution = Redistribution::AsymptoticallyUniform;
  SolverParams solver;

  friend bool operator==(const StepParams&, const StepParams&) = default;
};

struct StepDiagnostics {
  double total_length = 0.0;  // L = sum of r
  double mean_length = 0.0;   // L / n
  double kbeta_mean = 0.0;    // (1/L) * sum of r k beta
  double max_abs_beta = 0.0;
  int gs_iters_curvature = 0;
  int gs_iters_position = 0;  // x and y sweeps combined
};

// q[s] = (r[s] + r[s+1]) / 2
inline std::vector<double> dual_lengths(const std::vector<double>& r) {
  const std::size_t n = r.size();
  std::vector<double> q(n);
  for (std::size_t s = 0; s < n; ++s) q[s] = 0.5 * (r[s] + r[next_index(s, n)]);
  return q;
}

// beta[s] = -(1/r[s]) * ((k[s+1]-k[s])/q[s] - (k[s]-k[s-1])/q[s-1]) + b(k[s])
inline std::vector<double> normal_velocity(const DiscreteCurve& curve, const FlowModel& model) {
  const std::size_t n = curve.size();
  const std::vector<double>& r = curve.r;
  const std::vector<double>& k = curve.k;
  const std::vector<double> q = dual_lengths(r);
  std::vector<double> beta(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t sm1 = prev_index(s, n);
    const std::size_t sp1 = next_index(s, n);
    const double second_diff = (k[sp1] - k[s]) / q[s] - (k[s] - k[sm1]) / q[sm1];
    beta[s] = -second_diff / r[s] + model.lower_order_term(k[s]);
  }
  return beta;
}

struct TangentialVelocity {
  // alpha[s] is the tangential speed of vertex x[s]; the recurrence is seeded
  // with alpha = 0 at the seam vertex x[n-1], whose closing value alpha[n-1]
  // telescopes back to zero up to roundoff.
  std::vector<double> alpha;
  StepDiagnostics diag;
};

inline TangentialVelocity tangential_velocity(const DiscreteCurve& curve,
                                              const std::vector<double>& beta,
                                              const StepParams& params) {
  const std::size_t n = curve.size();
  const std::vector<double>& r = curve.r;
  const std::vector<double>& k = curve.k;

  TangentialVelocity tv;
  tv.alpha.assign(n, 0.0);
  StepDiagnostics& d = tv.diag;

  for (std::size_t s = 0; s < n; ++s) {
    d.total_length += r[s];
    d.max_abs_beta = std::max(d.max_abs_beta, std::abs(beta[s]));
  }
  d.mean_length = d.total_length / static_cast<double>(n);
  double weighted = 0.0;
  for (std::size_t s = 0; s < n; ++s) weighted += r[s] * k[s] * beta[s];
  d.kbeta_mean = weighted / d.total_length;

  if (params.redistribution == Redistribution::None) return tv;

  double acc = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    acc += r[s] * k[s] * beta[s] - r[s] * d.kbeta_mean +
           params.omega * (d.mean_length - r[s]);
    tv.alpha[s] = acc;
  }
  return tv;
}

struct LengthUpdate {
  std::vector<double> eta;
  std::vector<double> r;
};

// AsymptoticallyUniform: eta'[s] = eta[s] + tau * (-B + omega * (M/r[s] - 1)),
// r' = exp(eta').  None: lengths are re-read from the current chords instead
// (no forcing), keeping r = exp(eta) in sync.
inline LengthUpdate update_lengths(const DiscreteCurve& curve, const StepDiagnostics& diag,
                                   const StepParams& params) {
  const std::size_t n = curve.size();
  LengthUpdate out;
  out.eta.resize(n);
  out.r.resize(n);

  if (params.redistribution == Redistribution::None) {
    for (std::size_t s = 0; s < n; ++s) {
      const double len = distance(curve.x[s], curve.x[prev_index(s, n)]);
      out.r[s] = len;
      out.eta[s] = std::log(len);
    }
  } else {
    for (std::size_t s = 0; s < n; ++s) {
      out.eta[s] = curve.eta[s] +
                   params.tau * (-diag.kbeta_mean +
                                 params.omega * (diag.mean_length / curve.r[s] - 1.0));
      out.r[s] = std::exp(out.eta[s]);
    }
  }

  const double floor = 1e-14 * diag.mean_length;
  for (std::size_t s = 0; s < n; ++s) {
    if (!(out.r[s] > floor) || !std::isfinite(out.r[s])) {
      throw MeshCollapse("update_lengths: local length " + std::to_string(out.r[s]) +
                         " at segment " + std::to_string(s) + " fell below " +
                         std::to_string(floor));
    }
  }
  return out;
}

// Pentadiagonal system for the new curvatures.  Bands follow the scheme's
// printed coefficients: the fourth-difference stencil on the updated lengths
// r_new/q_new, the tangential fluxes alpha/2, the frozen reaction term
// -r_old k_old beta_old on the diagonal, and the explicit second difference
// of b(k_old) on the right-hand side.  alpha enters rows through the node
// values alpha[s] and alpha[s-1], with the seam seed value 0 for row 0.
inline CyclicPentadiagonal assemble_curvature_system(
    const std::vector<double>& r_new, const std::vector<double>& r_old,
    const std::vector<double>& k_old, const std::vector<double>& beta_old,
    const std::vector<double>& alpha, const FlowModel& model, double tau) {
  const std::size_t n = r_new.size();
  const std::vector<double>& r = r_new;
  const std::vector<double> q = dual_lengths(r_new);

  CyclicPentadiagonal sys = CyclicPentadiagonal::zeros(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t sm1 = prev_index(s, n);
    const std::size_t sm2 = prev_index(sm1, n);
    const std::size_t sp1 = next_index(s, n);
    const double alpha_here = alpha[s];
    const double alpha_prev = s == 0 ? 0.0 : alpha[s - 1];

    sys.sub2[s] = 1.0 / (q[sm1] * r[sm1] * q[sm2]);
    sys.sup2[s] = 1.0 / (q[s] * r[sp1] * q[sp1]);
    sys.sub1[s] = -(1.0 / (r[s] * q[s] * q[sm1]) + 1.0 / (r[s] * q[sm1] * q[sm1]) +
                    1.0 / (q[sm1] * q[sm1] * r[sm1]) + 1.0 / (q[sm1] * r[sm1] * q[sm2])) +
                  0.5 * alpha_prev;
    sys.sup1[s] = -(1.0 / (q[s] * r[sp1] * q[sp1]) + 1.0 / (q[s] * q[s] * r[sp1]) +
                    1.0 / (r[s] * q[s] * q[s]) + 1.0 / (r[s] * q[s] * q[sm1])) -
                  0.5 * alpha_here;
    sys.diag[s] = 1.0 / (q[s] * q[s] * r[sp1]) + 1.0 / (r[s] * q[s] * q[s]) +
                  2.0 / (r[s] * q[s] * q[sm1]) + 1.0 / (r[s] * q[sm1] * q[sm1]) +
                  1.0 / (q[sm1] * q[sm1] * r[sm1]) + r[s] / tau -
                  r_old[s] * k_old[s] * beta_old[s] + 0.5 * (alpha_here - alpha_prev);
    sys.rhs[s] = (r[s] / tau) * k_old[s] +
                 (model.lower_order_term(k_old[sp1]) - model.lower_order_term(k_old[s])) / q[s] -
                 (model.lower_order_term(k_old[s]) - model.lower_order_term(k_old[sm1])) / q[sm1];
  }
  return sys;
}

struct PositionSystems {
  CyclicPentadiagonal x;
  CyclicPentadiagonal y;
};

// Position systems on the dual volumes.  Both coordinates share the same
// bands; only the right-hand sides differ.  The diagonal is defined as
// q/tau minus the sum of the off-diagonal bands, so every row sums to q/tau
// exactly and spatially constant vectors pass through unchanged.
//
// The phi(k) d2x/ds2 term is non-conservative: one node-centered value
// (phi(k[s]) + phi(k[s+1]))/2 multiplies both chord-slope fluxes of the row.
// Splitting it into per-face values turns the term into d/ds(phi dx/ds),
// whose extra d(phi)/ds dx/ds = 2 k k' T is a spurious tangential velocity
// that no grid refinement removes: it stretches the grid against the
// redistribution law and leaks enclosed area.
inline PositionSystems assemble_position_system(const DiscreteCurve& curve,
                                                const std::vector<double>& r_new,
                                                const std::vector<double>& alpha,
                                                const std::vector<double>& k_new,
                                                const FlowModel& model, double tau) {
  const std::size_t n = curve.size();
  const std::vector<double>& r = r_new;
  const std::vector<double> q = dual_lengths(r_new);

  CyclicPentadiagonal sys = CyclicPentadiagonal::zeros(n);
  std::vector<double> rhs_y(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::size_t sm1 = prev_index(s, n);
    const std::size_t sp1 = next_index(s, n);
    const std::size_t sp2 = next_index(sp1, n);
    const double alpha_here = alpha[s];
    const double grad_k2 = 0.75 * (k_new[sp1] * k_new[sp1] - k_new[s] * k_new[s]) / q[s];
    const double phi_node = 0.5 * (model.second_order_coefficient(k_new[s]) +
                                   model.second_order_coefficient(k_new[sp1]));

    sys.sub2[s] = 1.0 / (r[s] * q[sm1] * r[sm1]);
    sys.sup2[s] = 1.0 / (r[sp1] * q[sp1] * r[sp2]);
    sys.sub1[s] = -(1.0 / (r[s] * q[sm1] * r[sm1]) + 1.0 / (r[s] * r[s] * q[sm1]) +
                    1.0 / (r[s] * r[s] * q[s]) + 1.0 / (r[s] * q[s] * r[sp1])) +
                  phi_node / r[s] + 0.5 * alpha_here - grad_k2;
    sys.sup1[s] = -(1.0 / (r[s] * q[s] * r[sp1]) + 1.0 / (r[sp1] * r[sp1] * q[s]) +
                    1.0 / (r[sp1] * r[sp1] * q[sp1]) + 1.0 / (r[sp1] * q[sp1] * r[sp2])) +
                  phi_node / r[sp1] - 0.5 * alpha_here + grad_k2;
    sys.diag[s] = q[s] / tau - (sys.sub2[s] + sys.sub1[s] + sys.sup1[s] + sys.sup2[s]);
    sys.rhs[s] = (q[s] / tau) * curve.x[s].x;
    rhs_y[s] = (q[s] / tau) * curve.x[s].y;
  }

  PositionSystems out;
  out.x = sys;
  out.y = std::move(sys);
  out.y.rhs = std::move(rhs_y);
  return out;
}

struct StepResult {
  DiscreteCurve curve;
  StepDiagnostics diag;
};

namespace detail {

inline std::vector<double> solve_subsystem(const CyclicPentadiagonal& sys,
                                           std::vector<double> warm_start,
                                           const SolverParams& solver, const char* subsystem,
                                           int& iters_accum) {
  try {
    if (solver.kind == SolverParams::Kind::Dense) return solve_dense(sys);
    GaussSeidelResult res =
        solve_gauss_seidel(sys, std::move(warm_start), solver.rel_tol, solver.max_iters);
    iters_accum += res.iterations;
    return std::move(res.solution);
  } catch (const NotConverged& e) {
    throw StepFailed(std::string(subsystem) + " solve failed: " + e.what(), subsystem);
  } catch (const SingularMatrix& e) {
    throw StepFailed(std::string(subsystem) + " solve failed: " + e.what(), subsystem);
  } catch (const ZeroDiagonal& e) {
    throw StepFailed(std::string(subsystem) + " solve failed: " + e.what(), subsystem);
  }
}

}  // namespace detail

inline StepResult step(const DiscreteCurve& curve, const FlowModel& model,
                       const StepParams& params) {
  const std::size_t n = curve.size();

  const std::vector<double> beta = normal_velocity(curve, model);
  TangentialVelocity tv = tangential_velocity(curve, beta, params);
  LengthUpdate lengths = update_lengths(curve, tv.diag, params);

  const CyclicPentadiagonal curvature_sys = assemble_curvature_system(
      lengths.r, curve.r, curve.k, beta, tv.alpha, model, params.tau);
  std::vector<double> k_new = detail::solve_subsystem(curvature_sys, curve.k, params.solver,
                                                      "curvature", tv.diag.gs_iters_curvature);

  const PositionSystems pos =
      assemble_position_system(curve, lengths.r, tv.alpha, k_new, model, params.tau);
  std::vector<double> warm_x(n), warm_y(n);
  for (std::size_t s = 0; s < n; ++s) {
    warm_x[s] = curve.x[s].x;
    warm_y[s] = curve.x[s].y;
  }
  const std::vector<double> x_new = detail::solve_subsystem(
      pos.x, std::move(warm_x), params.solver, "position-x", tv.diag.gs_iters_position);
  const std::vector<double> y_new = detail::solve_subsystem(
      pos.y, std::move(warm_y), params.solver, "position-y", tv.diag.gs_iters_position);

  StepResult out;
  out.curve.x.resize(n);
  for (std::size_t s = 0; s < n; ++s) out.curve.x[s] = {x_new[s], y_new[s]};
  out.curve.k = std::move(k_new);
  out.curve.t = curve.t + params.tau;

  if (params.redistribution == Redistribution::None) {
    // lengths track the actual chords; refresh them from the moved polygon
    out.curve.r.resize(n);
    out.curve.eta.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      const double len = distance(out.curve.x[s], out.curve.x[prev_index(s, n)]);
      if (!(len > 1e-14 * tv.diag.mean_length) || !std::isfinite(len)) {
        throw MeshCollapse("step: chord " + std::to_string(s) + " collapsed to " +
                           std::to_string(len));
      }
      out.curve.r[s] = len;
      out.curve.eta[s] = std::log(len);
    }
  } else {
    out.curve.r = std::move(lengths.r);
    out.curve.eta = std::move(lengths.eta);
  }

  out.diag = tv.diag;
  return out;
}

struct Snapshot {
  long step = 0;
  DiscreteCurve curve;
  StepDiagnostics diag;
  double area = 0.0;
  double uniformity = 1.0;
  double k_min = 0.0;
  double k_max = 0.0;
};

inline Snapshot make_snapshot(long step_index, const DiscreteCurve& curve,
                              const StepDiagnostics& diag) {
  Snapshot snap;
  snap.step = step_index;
  snap.curve = curve;
  snap.diag = diag;
  if (diag.total_length == 0.0) {
    // initial snapshot, before any step has produced diagnostics
    for (double r : curve.r) snap.diag.total_length += r;
    snap.diag.mean_length = snap.diag.total_length / static_cast<double>(curve.size());
  }
  snap.area = area_and_length(curve).area;
  snap.uniformity = uniformity_ratio(curve);
  const auto [lo, hi] = std::minmax_element(curve.k.begin(), curve.k.end());
  snap.k_min = *lo;
  snap.k_max = *hi;
  return snap;
}

using SnapshotSink = std::function<void(const Snapshot&)>;

// Applies round(t_end / tau) steps.  Snapshots go to `sink` (if set) at step 0,
// every `snapshot_every` steps and at the final step.  Solver failures abort
// the run, re-thrown with the 1-based index of the failing step; snapshots
// already emitted stay valid.
inline DiscreteCurve evolve(DiscreteCurve curve, const FlowModel& model, const StepParams& params,
                            double t_end, long snapshot_every, const SnapshotSink& sink = {}) {
  const long steps = std::lround(t_end / params.tau);
  if (sink) sink(make_snapshot(0, curve, StepDiagnostics{}));
  for (long j = 1; j <= steps; ++j) {
    StepResult res;
    try {
      res = step(curve, model, params);
    } catch (const StepFailed& e) {
      throw StepFailed(std::string(e.what()) + " (step " + std::to_string(j) + ")", e.subsystem,
                       j);
    }
    curve = std::move(res.curve);
    if (sink && ((snapshot_every > 0 && j % snapshot_every == 0) || j == steps)) {
      sink(make_snapshot(j, curve, res.diag));
    }
  }
  return curve;
}

}  // namespace curveflow
