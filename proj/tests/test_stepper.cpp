#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "curveflow/curve.hpp"
#include "curveflow/stepper.hpp"

using namespace curveflow;

namespace {

constexpr double pi = std::numbers::pi;

// synthetic state: geometry only matters where a test says it does
DiscreteCurve synthetic(std::vector<double> r, std::vector<double> k) {
  DiscreteCurve c;
  const std::size_t n = r.size();
  c.r = std::move(r);
  c.k = std::move(k);
  c.eta.resize(n);
  c.x.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    c.eta[s] = std::log(c.r[s]);
    const double a = 2.0 * pi * static_cast<double>(s + 1) / static_cast<double>(n);
    c.x[s] = {std::cos(a), std::sin(a)};
  }
  return c;
}

StepParams gs_params(double tau, double omega = 1.0,
                     Redistribution mode = Redistribution::AsymptoticallyUniform) {
  StepParams p;
  p.tau = tau;
  p.omega = omega;
  p.redistribution = mode;
  return p;
}

// Literal long-double transcription of the scheme's printed coefficients,
// kept deliberately dumb and separate from the production assembly.
struct OracleRow {
  long double a, b, c, d, e, f;
};

OracleRow curvature_row_oracle(std::size_t i, const std::vector<double>& r_new,
                               const std::vector<double>& r_old, const std::vector<double>& k_old,
                               const std::vector<double>& beta_old,
                               const std::vector<double>& alpha_node, const FlowModel& model,
                               double tau) {
  const std::size_t n = r_new.size();
  auto R = [&](std::size_t j) { return static_cast<long double>(r_new[j % n]); };
  auto Q = [&](std::size_t j) { return (R(j) + R(j + 1)) / 2.0L; };
  auto K = [&](std::size_t j) { return static_cast<long double>(k_old[j % n]); };
  auto B = [&](std::size_t j) {
    return static_cast<long double>(model.lower_order_term(k_old[j % n]));
  };
  // alpha_node[j] is the tangential velocity at vertex j; row i uses vertices
  // i and i-1 (with the seam seed alpha = 0 behind vertex 0)
  const long double al_i = static_cast<long double>(alpha_node[i]);
  const long double al_im1 =
      i == 0 ? 0.0L : static_cast<long double>(alpha_node[i - 1]);

  // paper-style wrapped neighbours via + n offsets
  const std::size_t im1 = i + n - 1, im2 = i + n - 2, ip1 = i + 1;

  OracleRow row;
  row.a = 1.0L / (Q(im1) * R(im1) * Q(im2));
  row.e = 1.0L / (Q(i) * R(ip1) * Q(ip1));
  row.b = -(1.0L / (R(i) * Q(i) * Q(im1)) + 1.0L / (R(i) * Q(im1) * Q(im1)) +
            1.0L / (Q(im1) * Q(im1) * R(im1)) + 1.0L / (Q(im1) * R(im1) * Q(im2))) +
          al_im1 / 2.0L;
  row.d = -(1.0L / (Q(i) * R(ip1) * Q(ip1)) + 1.0L / (Q(i) * Q(i) * R(ip1)) +
            1.0L / (R(i) * Q(i) * Q(i)) + 1.0L / (R(i) * Q(i) * Q(im1))) -
          al_i / 2.0L;
  row.c = 1.0L / (Q(i) * Q(i) * R(ip1)) + 1.0L / (R(i) * Q(i) * Q(i)) +
          2.0L / (R(i) * Q(i) * Q(im1)) + 1.0L / (R(i) * Q(im1) * Q(im1)) +
          1.0L / (Q(im1) * Q(im1) * R(im1)) + R(i) / static_cast<long double>(tau) -
          static_cast<long double>(r_old[i]) * K(i) * static_cast<long double>(beta_old[i]) +
          al_i / 2.0L - al_im1 / 2.0L;
  row.f = R(i) / static_cast<long double>(tau) * K(i) + (B(ip1) - B(i)) / Q(i) -
          (B(i) - B(im1)) / Q(im1);
  return row;
}

OracleRow position_row_oracle(std::size_t i, const std::vector<double>& r_new,
                              const std::vector<double>& k_new,
                              const std::vector<double>& alpha_node, const FlowModel& model,
                              double tau, const std::vector<Vec2>& x_old, bool y_component) {
  const std::size_t n = r_new.size();
  auto R = [&](std::size_t j) { return static_cast<long double>(r_new[j % n]); };
  auto Q = [&](std::size_t j) { return (R(j) + R(j + 1)) / 2.0L; };
  auto K = [&](std::size_t j) { return static_cast<long double>(k_new[j % n]); };
  auto Phi = [&](std::size_t j) {
    return static_cast<long double>(model.second_order_coefficient(k_new[j % n]));
  };
  const long double al_i = static_cast<long double>(alpha_node[i]);
  const std::size_t im1 = i + n - 1, ip1 = i + 1, ip2 = i + 2;

  const long double grad_k2 = 0.75L * (K(ip1) * K(ip1) - K(i) * K(i)) / Q(i);
  const long double phi_node = (Phi(i) + Phi(ip1)) / 2.0L;

  OracleRow row;
  row.a = 1.0L / (R(i) * Q(im1) * R(im1));
  row.e = 1.0L / (R(ip1) * Q(ip1) * R(ip2));
  row.b = -(1.0L / (R(i) * Q(im1) * R(im1)) + 1.0L / (R(i) * R(i) * Q(im1)) +
            1.0L / (R(i) * R(i) * Q(i)) + 1.0L / (R(i) * Q(i) * R(ip1))) +
          phi_node / R(i) + al_i / 2.0L - grad_k2;
  row.d = -(1.0L / (R(i) * Q(i) * R(ip1)) + 1.0L / (R(ip1) * R(ip1) * Q(i)) +
            1.0L / (R(ip1) * R(ip1) * Q(ip1)) + 1.0L / (R(ip1) * Q(ip1) * R(ip2))) +
          phi_node / R(ip1) - al_i / 2.0L + grad_k2;
  row.c = Q(i) / static_cast<long double>(tau) - (row.a + row.b + row.d + row.e);
  row.f = Q(i) / static_cast<long double>(tau) *
          static_cast<long double>(y_component ? x_old[i].y : x_old[i].x);
  return row;
}

}  // namespace

TEST_CASE("normal velocity vanishes on a uniform circle under surface diffusion") {
  DiscreteCurve c = init_from_points(generate(ShapeSpec::circle(1.0, 100)));
  const std::vector<double> beta = normal_velocity(c, FlowModel::surface_diffusion());
  for (double b : beta) CHECK(std::abs(b) <= 1e-9);
}

TEST_CASE("normal velocity is -1/2 on the uniform unit circle under Willmore") {
  DiscreteCurve c = init_from_points(generate(ShapeSpec::circle(1.0, 100)));
  const std::vector<double> beta = normal_velocity(c, FlowModel::willmore());
  for (double b : beta) CHECK(b == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("normal velocity second-difference hand case") {
  DiscreteCurve c = synthetic({0.1, 0.1, 0.1, 0.1, 0.1}, {0.0, 1.0, 0.0, 0.0, 0.0});
  const std::vector<double> beta = normal_velocity(c, FlowModel::surface_diffusion());
  const double expected[5] = {-100.0, 200.0, -100.0, 0.0, 0.0};
  for (int s = 0; s < 5; ++s) CHECK(beta[s] == doctest::Approx(expected[s]).epsilon(1e-12));
}

TEST_CASE("tangential velocity vanishes on a uniform circle") {
  DiscreteCurve c = init_from_points(generate(ShapeSpec::circle(1.0, 100)));
  const std::vector<double> beta = normal_velocity(c, FlowModel::surface_diffusion());
  for (double omega : {0.0, 1.0, 13.0}) {
    const TangentialVelocity tv = tangential_velocity(c, beta, gs_params(1e-3, omega));
    for (double a : tv.alpha) CHECK(std::abs(a) <= 1e-9);
    CHECK(tv.diag.mean_length == doctest::Approx(tv.diag.total_length / 100.0));
  }
}

TEST_CASE("tangential velocity hand recurrence (n=5, k beta = (0,c,0,0,0))") {
  DiscreteCurve c = synthetic({0.1, 0.1, 0.1, 0.1, 0.1}, {0.0, 1.0, 0.0, 0.0, 0.0});
  const std::vector<double> beta = {0.0, 3.0, 0.0, 0.0, 0.0};
  const TangentialVelocity tv = tangential_velocity(c, beta, gs_params(1e-3, 0.0));
  // B = (0.1 * 1 * 3) / 0.5 = 0.6
  CHECK(tv.diag.kbeta_mean == doctest::Approx(0.6).epsilon(1e-14));
  const double expected[5] = {-0.06, 0.18, 0.12, 0.06, 0.0};
  for (int s = 0; s < 5; ++s) CHECK(tv.alpha[s] == doctest::Approx(expected[s]).epsilon(1e-13));
}

TEST_CASE("tangential recurrence telescopes to zero for random states") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> eta_dist(-3.0, 0.0);
  std::uniform_real_distribution<double> val_dist(-5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + static_cast<std::size_t>(rng() % 60);
    std::vector<double> r(n), k(n), beta(n);
    for (std::size_t s = 0; s < n; ++s) {
      r[s] = std::exp(eta_dist(rng));
      k[s] = val_dist(rng);
      beta[s] = val_dist(rng);
    }
    DiscreteCurve c = synthetic(r, k);
    const double omega = trial % 2 ? 1.0 : 0.0;
    const TangentialVelocity tv = tangential_velocity(c, beta, gs_params(1e-3, omega));
    double scale = omega * tv.diag.total_length;
    for (std::size_t s = 0; s < n; ++s) scale += std::abs(c.r[s] * c.k[s] * beta[s]);
    CHECK(std::abs(tv.alpha[n - 1]) <= 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("tangential velocity is identically zero when redistribution is off") {
  DiscreteCurve c = init_from_points(generate(ShapeSpec::ellipse(2.0, 1.0, 64)));
  const std::vector<double> beta = normal_velocity(c, FlowModel::surface_diffusion());
  const TangentialVelocity tv =
      tangential_velocity(c, beta, gs_params(1e-3, 1.0, Redistribution::None));
  for (double a : tv.alpha) CHECK(a == 0.0);
  CHECK(tv.diag.total_length > 0.0);  // diagnostics still computed
  CHECK(tv.diag.max_abs_beta > 0.0);
}

TEST_CASE("length update fixed points") {
  DiscreteCurve c = synthetic({0.2, 0.2, 0.2, 0.2, 0.2}, {1.0, 1.0, 1.0, 1.0, 1.0});
  StepDiagnostics diag;
  diag.total_length = 1.0;
  diag.mean_length = 0.2;
  diag.kbeta_mean = 0.0;

  SUBCASE("B = 0, omega = 0 leaves lengths unchanged") {
    const LengthUpdate u = update_lengths(c, diag, gs_params(1e-3, 0.0));
    for (int s = 0; s < 5; ++s) {
      CHECK(u.eta[s] == c.eta[s]);
      CHECK(u.r[s] == doctest::Approx(c.r[s]).epsilon(1e-15));
    }
  }
  SUBCASE("uniform grid is a fixed point for any omega") {
    const LengthUpdate u = update_lengths(c, diag, gs_params(1e-3, 7.0));
    for (int s = 0; s < 5; ++s) CHECK(u.r[s] == doctest::Approx(c.r[s]).epsilon(1e-15));
  }
}

TEST_CASE("short segments grow toward the mean (B = 0, omega = 1)") {
  DiscreteCurve c = synthetic({0.1, 0.3, 0.2, 0.2, 0.2}, {0, 0, 0, 0, 0});
  StepDiagnostics diag;
  diag.total_length = 1.0;
  diag.mean_length = 0.2;
  diag.kbeta_mean = 0.0;
  const LengthUpdate u = update_lengths(c, diag, gs_params(1e-3, 1.0));
  CHECK(u.eta[0] > c.eta[0]);  // r < M grows
  CHECK(u.eta[1] < c.eta[1]);  // r > M shrinks
  CHECK(u.eta[2] == doctest::Approx(c.eta[2]));
}

TEST_CASE("length update in none mode re-reads the chords") {
  DiscreteCurve c = init_from_points(generate(ShapeSpec::flower(1.0, 0.4, 5, 64)));
  // make r deliberately inconsistent with the chords
  for (std::size_t s = 0; s < c.size(); ++s) {
    c.r[s] *= 2.0;
    c.eta[s] = std::log(c.r[s]);
  }
  StepDiagnostics diag;
  diag.mean_length = 0.1;
  const LengthUpdate u = update_lengths(c, diag, gs_params(1e-3, 1.0, Redistribution::None));
  for (std::size_t s = 0; s < c.size(); ++s) {
    const double chord = distance(c.x[s], c.x[prev_index(s, c.size())]);
    CHECK(u.r[s] == doctest::Approx(chord).epsilon(1e-15));
    CHECK(u.eta[s] == doctest::Approx(std::log(chord)).epsilon(1e-12));
  }
}

TEST_CASE("length collapse is detected") {
  DiscreteCurve c = synthetic({0.2, 0.2, 0.2, 0.2, 0.2}, {0, 0, 0, 0, 0});
  StepDiagnostics diag;
  diag.total_length = 1.0;
  diag.mean_length = 0.2;
  diag.kbeta_mean = 1e6;  // drives eta to -1000
  CHECK_THROWS_AS(update_lengths(c, diag, gs_params(1e-3, 0.0)), MeshCollapse);
}

TEST_CASE("curvature system collapses to the biharmonic stencil on a uniform grid") {
  const double rho = 0.2, tau = 0.05;
  const std::size_t n = 8;
  std::vector<double> r(n, rho), k(n, 0.0), beta(n, 0.0), alpha(n, 0.0);
  const CyclicPentadiagonal sys =
      assemble_curvature_system(r, r, k, beta, alpha, FlowModel::surface_diffusion(), tau);
  const double inv_rho3 = 1.0 / (rho * rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(sys.sub2[i] == doctest::Approx(inv_rho3).epsilon(1e-13));
    CHECK(sys.sup2[i] == doctest::Approx(inv_rho3).epsilon(1e-13));
    CHECK(sys.sub1[i] == doctest::Approx(-4.0 * inv_rho3).epsilon(1e-13));
    CHECK(sys.sup1[i] == doctest::Approx(-4.0 * inv_rho3).epsilon(1e-13));
    CHECK(sys.diag[i] - rho / tau == doctest::Approx(6.0 * inv_rho3).epsilon(1e-13));
    CHECK(sys.rhs[i] == 0.0);
  }
}

TEST_CASE("constant curvature on a stationary circle satisfies the curvature system") {
  DiscreteCurve c = init_from_points(generate(ShapeSpec::circle(1.0, 100)));
  const FlowModel sd = FlowModel::surface_diffusion();
  const std::vector<double> beta = normal_velocity(c, sd);
  const TangentialVelocity tv = tangential_velocity(c, beta, gs_params(1e-3));
  const LengthUpdate lu = update_lengths(c, tv.diag, gs_params(1e-3));
  const CyclicPentadiagonal sys =
      assemble_curvature_system(lu.r, c.r, c.k, beta, tv.alpha, sd, 1e-3);
  CHECK(residual_norm(sys, c.k) <= 1e-8 * inf_norm(sys.rhs));
}

TEST_CASE("curvature system matches the long-double transcription oracle (n=5 nonuniform)") {
  const std::vector<double> r_new = {0.11, 0.19, 0.12, 0.18, 0.10};
  const std::vector<double> r_old = {0.10, 0.20, 0.10, 0.20, 0.10};
  const std::vector<double> k_old = {0.5, -0.3, 0.8, 0.1, -0.6};
  const std::vector<double> beta_old = {0.7, -1.1, 0.4, 0.0, 2.2};
  const std::vector<double> alpha = {0.3, -0.2, 0.5, 0.1, -0.7};
  const FlowModel wm = FlowModel::willmore();
  const double tau = 0.01;

  const CyclicPentadiagonal sys =
      assemble_curvature_system(r_new, r_old, k_old, beta_old, alpha, wm, tau);
  for (std::size_t i = 0; i < 5; ++i) {
    const OracleRow row = curvature_row_oracle(i, r_new, r_old, k_old, beta_old, alpha, wm, tau);
    CHECK(sys.sub2[i] == doctest::Approx(static_cast<double>(row.a)).epsilon(1e-13));
    CHECK(sys.sub1[i] == doctest::Approx(static_cast<double>(row.b)).epsilon(1e-13));
    CHECK(sys.diag[i] == doctest::Approx(static_cast<double>(row.c)).epsilon(1e-13));
    CHECK(sys.sup1[i] == doctest::Approx(static_cast<double>(row.d)).epsilon(1e-13));
    CHECK(sys.sup2[i] == doctest::Approx(static_cast<double>(row.e)).epsilon(1e-13));
    CHECK(sys.rhs[i] == doctest::Approx(static_cast<double>(row.f)).epsilon(1e-13));
  }
}

TEST_CASE("position systems share identical bands and satisfy the row-sum identity") {
  DiscreteCurve c = init_from_points(generate(ShapeSpec::ellipse(2.0, 1.0, 64)));
  const FlowModel wm = FlowModel::willmore();
  const std::vector<double> beta = normal_velocity(c, wm);
  const TangentialVelocity tv = tangential_velocity(c, beta, gs_params(1e-4));
  const LengthUpdate lu = update_lengths(c, tv.diag, gs_params(1e-4));
  const PositionSystems pos = assemble_position_system(c, lu.r, tv.alpha, c.k, wm, 1e-4);

  CHECK(pos.x.sub2 == pos.y.sub2);
  CHECK(pos.x.sub1 == pos.y.sub1);
  CHECK(pos.x.diag == pos.y.diag);
  CHECK(pos.x.sup1 == pos.y.sup1);
  CHECK(pos.x.sup2 == pos.y.sup2);
  CHECK(pos.x.rhs != pos.y.rhs);

  const std::vector<double> q = dual_lengths(lu.r);
  for (std::size_t i = 0; i < pos.x.n; ++i) {
    const double row_sum =
        pos.x.sub2[i] + pos.x.sub1[i] + pos.x.diag[i] + pos.x.sup1[i] + pos.x.sup2[i];
    const double scale = std::abs(pos.x.sub2[i]) + std::abs(pos.x.sub1[i]) +
                         std::abs(pos.x.diag[i]) + std::abs(pos.x.sup1[i]) +
                         std::abs(pos.x.sup2[i]);
    CHECK(std::abs(row_sum - q[i] / 1e-4) <= 1e-13 * scale);
  }
}

TEST_CASE("a spatially constant vector solves the position system exactly") {
  const std::size_t n = 32;
  DiscreteCurve c = init_from_points(generate(ShapeSpec::flower(1.0, 0.4, 5, n)));
  const Vec2 fixed{1.375, -2.5};
  for (Vec2& p : c.x) p = fixed;  // constant positions, arbitrary r/k state
  const std::vector<double> alpha(n, 0.0);
  const PositionSystems pos =
      assemble_position_system(c, c.r, alpha, c.k, FlowModel::willmore(), 1e-3);
  const std::vector<double> ones_x(n, fixed.x), ones_y(n, fixed.y);
  CHECK(residual_norm(pos.x, ones_x) <= 1e-9 * inf_norm(pos.x.rhs));
  CHECK(residual_norm(pos.y, ones_y) <= 1e-9 * inf_norm(pos.y.rhs));
}

TEST_CASE("position system matches the long-double transcription oracle (n=5 nonuniform)") {
  const std::vector<double> r_new = {0.11, 0.19, 0.12, 0.18, 0.10};
  const std::vector<double> k_new = {0.5, -0.3, 0.8, 0.1, -0.6};
  const std::vector<double> alpha = {0.3, -0.2, 0.5, 0.1, -0.7};
  const FlowModel wm = FlowModel::willmore();
  const double tau = 0.01;
  DiscreteCurve c = synthetic(r_new, k_new);

  const PositionSystems pos = assemble_position_system(c, r_new, alpha, k_new, wm, tau);
  for (std::size_t i = 0; i < 5; ++i) {
    const OracleRow rx = position_row_oracle(i, r_new, k_new, alpha, wm, tau, c.x, false);
    const OracleRow ry = position_row_oracle(i, r_new, k_new, alpha, wm, tau, c.x, true);
    CHECK(pos.x.sub2[i] == doctest::Approx(static_cast<double>(rx.a)).epsilon(1e-13));
    CHECK(pos.x.sub1[i] == doctest::Approx(static_cast<double>(rx.b)).epsilon(1e-13));
    CHECK(pos.x.diag[i] == doctest::Approx(static_cast<double>(rx.c)).epsilon(1e-13));
    CHECK(pos.x.sup1[i] == doctest::Approx(static_cast<double>(rx.d)).epsilon(1e-13));
    CHECK(pos.x.sup2[i] == doctest::Approx(static_cast<double>(rx.e)).epsilon(1e-13));
    CHECK(pos.x.rhs[i] == doctest::Approx(static_cast<double>(rx.f)).epsilon(1e-13));
    CHECK(pos.y.rhs[i] == doctest::Approx(static_cast<double>(ry.f)).epsilon(1e-13));
  }
}

TEST_CASE("a uniformly sampled circle is a fixed point of step under surface diffusion") {
  DiscreteCurve c0 = init_from_points(generate(ShapeSpec::circle(1.0, 100)));
  const StepResult res = step(c0, FlowModel::surface_diffusion(), gs_params(1e-3));
  double max_disp = 0.0;
  for (std::size_t s = 0; s < c0.size(); ++s) {
    max_disp = std::max(max_disp, distance(res.curve.x[s], c0.x[s]));
  }
  CHECK(max_disp <= 1e-8);
  CHECK(res.curve.t == doctest::Approx(1e-3));
}

TEST_CASE("one Willmore step grows the unit circle by tau/2") {
  const double tau = 1e-5;
  DiscreteCurve c0 = init_from_points(generate(ShapeSpec::circle(1.0, 100)));
  const StepResult res = step(c0, FlowModel::willmore(), gs_params(tau));
  CHECK(mean_vertex_radius(res.curve) == doctest::Approx(1.0 + tau / 2.0).epsilon(1e-9));
}

TEST_CASE("redistribution strictly improves ellipse uniformity in one step") {
  DiscreteCurve c0 = init_from_points(generate(ShapeSpec::ellipse(2.0, 1.0, 100)));
  const double before = uniformity_ratio(c0);
  const StepResult res = step(c0, FlowModel::surface_diffusion(), gs_params(1e-3, 1.0));
  CHECK(uniformity_ratio(res.curve) < before);
}

TEST_CASE("evolve emits snapshots at 0, every cadence, and the final step") {
  DiscreteCurve c0 = init_from_points(generate(ShapeSpec::circle(1.0, 64)));
  std::vector<long> steps;
  evolve(c0, FlowModel::surface_diffusion(), gs_params(1e-3), 0.01, 3,
         [&](const Snapshot& snap) { steps.push_back(snap.step); });
  CHECK(steps == std::vector<long>{0, 3, 6, 9, 10});
}

TEST_CASE("evolve reports the failing subsystem and step index") {
  DiscreteCurve c0 = init_from_points(generate(ShapeSpec::ellipse(2.0, 1.0, 64)));
  StepParams p = gs_params(1e-3);
  p.solver.rel_tol = 1e-15;
  p.solver.max_iters = 2;
  try {
    evolve(c0, FlowModel::surface_diffusion(), p, 0.01, 0);
    FAIL("expected StepFailed");
  } catch (const StepFailed& e) {
    CHECK(e.step_index == 1);
    CHECK(e.subsystem == "curvature");
    CHECK(std::string(e.what()).find("curvature") != std::string::npos);
  }
}

TEST_CASE("evolution is translation equivariant") {
  const Vec2 shift{3.0, -2.0};
  std::vector<Vec2> pts = generate(ShapeSpec::flower(1.0, 0.4, 5, 64));
  DiscreteCurve a = init_from_points(pts);
  for (Vec2& p : pts) p += shift;
  DiscreteCurve b = init_from_points(pts);

  const StepParams p = gs_params(1e-5, 1.0);
  const FlowModel sd = FlowModel::surface_diffusion();
  for (int j = 0; j < 20; ++j) {
    a = step(a, sd, p).curve;
    b = step(b, sd, p).curve;
  }
  for (std::size_t s = 0; s < a.size(); ++s) {
    CHECK(distance(a.x[s] + shift, b.x[s]) <= 1e-6);
  }
}

TEST_CASE("odd-polynomial models drive the full pipeline") {
  // c1 > 0 adds a curve-shortening component on top of the fourth-order flow
  const FlowModel model = FlowModel::odd_polynomial(1.0, -0.1, 0.0);
  DiscreteCurve c = init_from_points(generate(ShapeSpec::ellipse(2.0, 1.0, 64)));
  const double length0 = area_and_length(c).polygon_length;
  const StepParams p = gs_params(1e-4, 1.0);
  for (int j = 0; j < 100; ++j) c = step(c, model, p).curve;
  for (std::size_t s = 0; s < c.size(); ++s) {
    CHECK(std::isfinite(c.x[s].x));
    CHECK(std::isfinite(c.k[s]));
    CHECK(c.r[s] > 0.0);
  }
  CHECK(area_and_length(c).polygon_length < length0);
  CHECK(c.t == doctest::Approx(0.01));
}

TEST_CASE("nonconvex flower rounds out under surface diffusion") {
  DiscreteCurve c = init_from_points(generate(ShapeSpec::flower(1.0, 0.4, 5, 100)));
  REQUIRE(isoperimetric_ratio(c) > 1.1);
  const StepParams p = gs_params(1e-6, 1.0);
  const FlowModel sd = FlowModel::surface_diffusion();
  const double area0 = area_and_length(c).area;
  for (int j = 0; j < 12000; ++j) c = step(c, sd, p).curve;
  CHECK(isoperimetric_ratio(c) < 1.01);  // circular well before the preset's t_end
  CHECK(area_and_length(c).area == doctest::Approx(area0).epsilon(0.01));
}

TEST_CASE("none mode keeps lengths locked to the chords") {
  DiscreteCurve c = init_from_points(generate(ShapeSpec::ellipse(2.0, 1.0, 64)));
  StepParams p = gs_params(1e-3, 0.0, Redistribution::None);
  for (int j = 0; j < 10; ++j) c = step(c, FlowModel::surface_diffusion(), p).curve;
  for (std::size_t s = 0; s < c.size(); ++s) {
    const double chord = distance(c.x[s], c.x[prev_index(s, c.size())]);
    CHECK(c.r[s] == doctest::Approx(chord).epsilon(1e-12));
    CHECK(c.r[s] == doctest::Approx(std::exp(c.eta[s])).epsilon(1e-12));
  }
}

TEST_CASE("r = exp(eta) invariant survives stepping in redistribution mode") {
  DiscreteCurve c = init_from_points(generate(ShapeSpec::ellipse(2.0, 1.0, 64)));
  const StepParams p = gs_params(1e-3, 1.0);
  for (int j = 0; j < 10; ++j) c = step(c, FlowModel::surface_diffusion(), p).curve;
  for (std::size_t s = 0; s < c.size(); ++s) {
    CHECK(c.r[s] == doctest::Approx(std::exp(c.eta[s])).epsilon(1e-14));
    CHECK(c.r[s] > 0.0);
  }
}
