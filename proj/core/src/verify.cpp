#include "ascent/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include <json.hpp>

#include "ascent/constraint.hpp"
#include "ascent/icf.hpp"
#include "ascent/network.hpp"
#include "ascent/rap.hpp"
#include "ascent/rng.hpp"
#include "ascent/symmat.hpp"

namespace ascent {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

SymMat random_sym(RngStream& rng, std::size_t p, double scale) {
  SymMat m(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i; j < p; ++j) m.set(i, j, scale * (2.0 * rng.uniform01() - 1.0));
  return m;
}

SymMat random_spd2(RngStream& rng, double lo, double hi) {
  const double theta = 6.283185307179586 * rng.uniform01();
  const Vec2 v{std::cos(theta), std::sin(theta)};
  const Vec2 w{-v[1], v[0]};
  const double a = lo + (hi - lo) * rng.uniform01();
  const double b = lo + (hi - lo) * rng.uniform01();
  SymMat m = SymMat::outer2(a, v);
  m += SymMat::outer2(b, w);
  return m;
}

using Clock = std::chrono::steady_clock;

CheckResult timed(const std::string& name, const std::function<std::pair<bool, std::string>()>& fn) {
  CheckResult result;
  result.name = name;
  const auto start = Clock::now();
  try {
    auto [ok, detail] = fn();
    result.passed = ok;
    result.detail = detail;
  } catch (const std::exception& e) {
    result.passed = false;
    result.detail = std::string("exception: ") + e.what();
  }
  result.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

// ---------------------------------------------------------------------------
// check 1: symmetric kernel properties

std::pair<bool, std::string> check_symmat(std::size_t samples) {
  RngStream rng(0x51, 1);
  double worst_recon = 0.0, worst_ortho = 0.0, worst_idem = 0.0;
  double worst_expansion = 0.0, worst_reverse = 0.0;
  for (std::size_t p : {std::size_t{2}, std::size_t{3}}) {
    for (std::size_t it = 0; it < samples; ++it) {
      const SymMat a = random_sym(rng, p, 5.0);
      const SymMat b = random_sym(rng, p, 5.0);

      const EigDecomp eig = sym_eig(a);
      worst_recon = std::max(worst_recon, (reconstruct(eig) - a).frob_norm());
      double ortho = 0.0;
      for (std::size_t c1 = 0; c1 < p; ++c1)
        for (std::size_t c2 = 0; c2 < p; ++c2) {
          double d = 0.0;
          for (std::size_t r = 0; r < p; ++r)
            d += eig.vector_entry(r, c1) * eig.vector_entry(r, c2);
          ortho += (d - (c1 == c2 ? 1.0 : 0.0)) * (d - (c1 == c2 ? 1.0 : 0.0));
        }
      worst_ortho = std::max(worst_ortho, std::sqrt(ortho));

      const SymMat pa = project_psd(a);
      worst_idem = std::max(worst_idem, (project_psd(pa) - pa).frob_norm());
      worst_expansion = std::max(
          worst_expansion, (pa - project_psd(b)).frob_norm() - (a - b).frob_norm());
      worst_reverse = std::max(
          worst_reverse, std::abs(violation_norm(a) - violation_norm(b)) - (a - b).frob_norm());
    }
  }
  const bool ok = worst_recon <= 1e-10 && worst_ortho <= 1e-10 && worst_idem <= 1e-10 &&
                  worst_expansion <= 1e-12 && worst_reverse <= 1e-12;
  return {ok, "recon " + fmt(worst_recon) + ", ortho " + fmt(worst_ortho) + ", idem " +
                  fmt(worst_idem) + ", expansion slack " + fmt(worst_expansion) +
                  ", reverse-triangle slack " + fmt(worst_reverse)};
}

// ---------------------------------------------------------------------------
// check 2: sensor gradients vs central finite differences

SymMat fd_gradient(const SensorPose& pose, const Vec2& xhat, const SensorModelParams& params,
                   int coord, bool differentiate_target) {
  const double step = 1e-6;
  SensorPose pose_hi = pose, pose_lo = pose;
  Vec2 xhat_hi = xhat, xhat_lo = xhat;
  if (differentiate_target) {
    xhat_hi[coord] += step;
    xhat_lo[coord] -= step;
  } else {
    pose_hi.r[coord] += step;
    pose_lo.r[coord] -= step;
  }
  SymMat diff = info_matrix(pose_hi, xhat_hi, params);
  diff -= info_matrix(pose_lo, xhat_lo, params);
  diff *= 1.0 / (2.0 * step);
  return diff;
}

}  // namespace

double sensor_gradient_fd_error(const InfoGradientFn& gradient, std::size_t samples,
                                std::uint64_t seed) {
  SensorModelParams params;  // defaults
  RngStream rng(seed, 2);
  double worst = 0.0;
  for (std::size_t it = 0; it < samples; ++it) {
    SensorPose pose;
    pose.r = {6.0 * rng.uniform01() - 3.0, 6.0 * rng.uniform01() - 3.0};
    const double angle = 6.283185307179586 * rng.uniform01();
    const double distance = 0.2 + 4.8 * rng.uniform01();
    const Vec2 xhat = {pose.r[0] + distance * std::cos(angle),
                       pose.r[1] + distance * std::sin(angle)};
    for (int coord = 0; coord < 2; ++coord) {
      const SymMat analytic = gradient(pose, xhat, params, coord);
      const SymMat numeric = fd_gradient(pose, xhat, params, coord, false);
      const double err =
          (numeric - analytic).frob_norm() / std::max(analytic.frob_norm(), 1e-12);
      worst = std::max(worst, err);
    }
  }
  return worst;
}

namespace {

std::pair<bool, std::string> check_sensor_gradient(std::size_t samples) {
  const double sensor_err = sensor_gradient_fd_error(
      [](const SensorPose& p, const Vec2& x, const SensorModelParams& prm, int j) {
        return info_gradient(p, x, prm, j);
      },
      samples, 0xFD);

  // Target-coordinate derivative under the same harness.
  SensorModelParams params;
  RngStream rng(0xFD2, 3);
  double target_err = 0.0;
  for (std::size_t it = 0; it < samples; ++it) {
    SensorPose pose;
    pose.r = {6.0 * rng.uniform01() - 3.0, 6.0 * rng.uniform01() - 3.0};
    const double angle = 6.283185307179586 * rng.uniform01();
    const double distance = 0.2 + 4.8 * rng.uniform01();
    const Vec2 xhat = {pose.r[0] + distance * std::cos(angle),
                       pose.r[1] + distance * std::sin(angle)};
    for (int coord = 0; coord < 2; ++coord) {
      const SymMat analytic = info_gradient_target(pose, xhat, params, coord);
      const SymMat numeric = fd_gradient(pose, xhat, params, coord, true);
      target_err = std::max(target_err, (numeric - analytic).frob_norm() /
                                            std::max(analytic.frob_norm(), 1e-12));
    }
  }
  const bool ok = sensor_err <= 1e-5 && target_err <= 1e-5;
  return {ok, "sensor-coord rel err " + fmt(sensor_err) + ", target-coord rel err " +
                  fmt(target_err)};
}

// ---------------------------------------------------------------------------
// check 3: observation noise covariance vs Q^-1

std::pair<bool, std::string> check_sensor_covariance(std::size_t samples) {
  SensorModelParams params;
  const SensorPose pose{{0.0, 0.0}};
  const TargetTruth truth{{1.2, 0.9}};
  const SymMat cov_expected = inverse_spd(info_matrix(pose, truth.x, params));

  RngStream rng(0xC0F, 4);
  double c00 = 0.0, c01 = 0.0, c11 = 0.0;
  for (std::size_t it = 0; it < samples; ++it) {
    const auto y = sample_observation(rng, pose, truth, params);
    const Vec2 zeta = *y - truth.x;
    c00 += zeta[0] * zeta[0];
    c01 += zeta[0] * zeta[1];
    c11 += zeta[1] * zeta[1];
  }
  const double inv_count = 1.0 / static_cast<double>(samples);
  c00 *= inv_count;
  c01 *= inv_count;
  c11 *= inv_count;
  const double e00 = std::abs(c00 - cov_expected(0, 0)) / std::abs(cov_expected(0, 0));
  const double e01 = std::abs(c01 - cov_expected(0, 1)) / std::abs(cov_expected(0, 1));
  const double e11 = std::abs(c11 - cov_expected(1, 1)) / std::abs(cov_expected(1, 1));
  const double worst = std::max({e00, e01, e11});
  return {worst <= 0.05, "worst per-entry rel err " + fmt(worst) + " over " +
                             std::to_string(samples) + " samples"};
}

// ---------------------------------------------------------------------------
// check 4: consensus filter vs centralized fusion

CommGraph named_graph(const std::string& kind, std::size_t n, RngStream& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (kind == "path") {
    for (std::size_t s = 0; s + 1 < n; ++s) edges.emplace_back(s, s + 1);
  } else if (kind == "cycle") {
    for (std::size_t s = 0; s + 1 < n; ++s) edges.emplace_back(s, s + 1);
    edges.emplace_back(0, n - 1);
  } else {  // random: a cycle backbone plus Bernoulli chords, so mixing is
             // never slower than the cycle's
    for (std::size_t s = 0; s + 1 < n; ++s) edges.emplace_back(s, s + 1);
    edges.emplace_back(0, n - 1);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t v = s + 2; v < n; ++v)
        if (!(s == 0 && v == n - 1) && rng.uniform01() < 0.35) edges.emplace_back(s, v);
  }
  return graph_from_edges(n, std::move(edges));
}

std::pair<bool, std::string> check_icf(std::size_t seeds) {
  const std::size_t m = 3;
  double worst_info = 0.0, worst_mean = 0.0;
  const std::vector<std::pair<std::string, std::size_t>> graphs = {
      {"path", 3}, {"path", 4}, {"path", 5}, {"cycle", 5}, {"cycle", 8}, {"random", 8}};

  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    for (const auto& [kind, n] : graphs) {
      RngStream rng(seed, 0x1CF + n);
      const CommGraph graph = named_graph(kind, n, rng);
      const WeightMatrix weights = metropolis_weights(graph);

      SensorModelParams params;
      EstimateSet prior;
      prior.targets.resize(m);
      for (std::size_t i = 0; i < m; ++i)
        prior.targets[i] = {{6.0 * rng.uniform01(), 6.0 * rng.uniform01()},
                            random_spd2(rng, 0.5, 3.0)};
      std::vector<SensorPose> poses(n);
      for (std::size_t s = 0; s < n; ++s)
        poses[s] = {{6.0 * rng.uniform01(), 6.0 * rng.uniform01()}};

      std::vector<ObservationSet> obs(n, ObservationSet(m));
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i < m; ++i)
          obs[s][i] = sample_observation(rng, poses[s], TargetTruth{prior[i].xhat}, params);

      std::vector<InfoSummary> summaries(n);
      for (std::size_t s = 0; s < n; ++s)
        summaries[s] = init_summary(s, prior, obs[s], poses, params, n);

      std::vector<SymMat> initial_sum(m, SymMat(2));
      for (std::size_t s = 0; s < n; ++s)
        for (std::size_t i = 0; i < m; ++i) initial_sum[i] += summaries[s].big_xi[i];

      std::vector<InfoSummary> next(n);
      for (int round = 0; round < 200; ++round) {
        for (std::size_t s = 0; s < n; ++s) {
          std::vector<double> row{weights.at(s, s)};
          std::vector<const InfoSummary*> neighbors;
          for (std::size_t v : graph.adjacency[s]) {
            row.push_back(weights.at(s, v));
            neighbors.push_back(&summaries[v]);
          }
          next[s] = consensus_step(summaries[s], neighbors, row);
        }
        summaries.swap(next);
      }

      const EstimateSet fused = centralized_fusion(prior, obs, poses, params);
      for (std::size_t s = 0; s < n; ++s) {
        const EstimateSet rec = reconstruct_data(summaries[s], n, prior);
        for (std::size_t i = 0; i < m; ++i) {
          SymMat scaled = summaries[s].big_xi[i];
          scaled *= static_cast<double>(n);
          worst_info = std::max(worst_info, (scaled - initial_sum[i]).frob_norm());
          worst_mean = std::max(worst_mean, dist(rec[i].xhat, fused[i].xhat));
        }
      }
    }
  }
  const bool ok = worst_info <= 1e-8 && worst_mean <= 1e-8;
  return {ok, "worst info gap " + fmt(worst_info) + ", worst mean gap " + fmt(worst_mean) +
                  " over " + std::to_string(seeds) + " seeds x 6 graphs"};
}

// ---------------------------------------------------------------------------
// check 5: violation gradient vs finite differences of h_plus

std::pair<bool, std::string> check_psi_gradient(std::size_t samples) {
  RngStream rng(0x851, 5);
  SensorModelParams params;
  double worst = 0.0;
  std::size_t tested = 0;
  while (tested < samples) {
    const std::size_t n = 1 + rng.uniform_below(3);
    const std::size_t m = 1 + rng.uniform_below(3);
    EstimateSet data;
    data.targets.resize(m);
    std::vector<SensorPose> poses(n);
    for (std::size_t s = 0; s < n; ++s)
      poses[s] = {{4.0 * rng.uniform01() - 2.0, 4.0 * rng.uniform01() - 2.0}};
    for (std::size_t i = 0; i < m; ++i)
      data.targets[i] = {{4.0 * rng.uniform01() - 2.0, 4.0 * rng.uniform01() - 2.0},
                         random_spd2(rng, 0.3, 2.0)};

    SolverConfig config;
    config.tau.assign(m, 50.0);
    config.delta.assign(n, 1.0);

    DecisionVector z(m, n);
    for (std::size_t s = 0; s < n; ++s)
      z.set_u(s, {0.8 * (2.0 * rng.uniform01() - 1.0), 0.8 * (2.0 * rng.uniform01() - 1.0)});
    const std::size_t omega = rng.uniform_below(static_cast<std::uint32_t>(m));
    // Force a solid violation: lift the floor past the attainable eigenvalue.
    SymMat attainable = data[omega].info;
    for (std::size_t s = 0; s < n; ++s)
      attainable += info_matrix(poses[s], data[omega].xhat, params);
    z.set_gamma(omega, min_eigenvalue(attainable) + 0.1 + 2.0 * rng.uniform01());

    const double value = h_plus(z, data, omega, poses, params);
    if (value <= 1e-3) continue;
    ++tested;

    const std::vector<double> analytic = h_plus_grad(z, data, omega, poses, params);
    const double step = 1e-6;
    double err_sq = 0.0, norm_sq = 0.0;
    for (std::size_t j = 0; j < z.size(); ++j) {
      DecisionVector hi = z, lo = z;
      hi[j] += step;
      lo[j] -= step;
      const double numeric = (h_plus(hi, data, omega, poses, params) -
                              h_plus(lo, data, omega, poses, params)) /
                             (2.0 * step);
      const double d = numeric - analytic[j];
      err_sq += d * d;
      norm_sq += analytic[j] * analytic[j];
    }
    worst = std::max(worst, std::sqrt(err_sq) / std::max(std::sqrt(norm_sq), 1e-12));
  }
  return {worst <= 1e-4, "worst rel err " + fmt(worst) + " over " + std::to_string(samples) +
                             " violated instances"};
}

}  // namespace

// ---------------------------------------------------------------------------
// grid oracle

double grid_plan_oracle(const PlanningInstance& instance, double u_step, double gamma_step) {
  const std::size_t n = instance.poses.size();
  const std::size_t m = instance.data.size();

  // Constant and per-coordinate matrices of the affine constraint family.
  std::vector<SymMat> constant(m, SymMat(2));
  std::vector<std::vector<SymMat>> gradients(m);
  for (std::size_t i = 0; i < m; ++i) {
    constant[i] = instance.data[i].info;
    for (std::size_t s = 0; s < n; ++s)
      constant[i] += info_matrix(instance.poses[s], instance.data[i].xhat, instance.params);
    gradients[i].reserve(2 * n);
    for (std::size_t s = 0; s < n; ++s)
      for (int j = 0; j < 2; ++j)
        gradients[i].push_back(
            info_gradient(instance.poses[s], instance.data[i].xhat, instance.params, j));
  }

  auto value_at = [&](const std::vector<double>& u) {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      SymMat mat = constant[i];
      for (std::size_t c = 0; c < 2 * n; ++c) {
        SymMat g = gradients[i][c];
        g *= u[c];
        mat += g;
      }
      const double floor_value = min_eigenvalue(mat);
      if (floor_value < 0.0) return -std::numeric_limits<double>::infinity();
      double gamma = std::min(instance.tau[i], floor_value);
      gamma = std::floor(gamma / gamma_step) * gamma_step;
      total += gamma;
    }
    return total;
  };

  auto in_ball = [&](const std::vector<double>& u) {
    for (std::size_t s = 0; s < n; ++s) {
      const double r = std::hypot(u[2 * s], u[2 * s + 1]);
      if (r > instance.delta[s] + 1e-12) return false;
    }
    return true;
  };

  // Full scan at a given step around a center with given half-width per axis.
  auto scan = [&](const std::vector<double>& center, double half, double step,
                  std::vector<double>& best_u, double& best_value) {
    const std::size_t dims = 2 * n;
    const int radius = static_cast<int>(std::round(half / step));
    std::vector<int> idx(dims, -radius);
    std::vector<double> u(dims);
    for (;;) {
      for (std::size_t c = 0; c < dims; ++c) u[c] = center[c] + idx[c] * step;
      if (in_ball(u)) {
        const double v = value_at(u);
        if (v > best_value) {
          best_value = v;
          best_u = u;
        }
      }
      std::size_t c = 0;
      while (c < dims && ++idx[c] > radius) idx[c++] = -radius;
      if (c == dims) break;
    }
  };

  const double delta_max = *std::max_element(instance.delta.begin(), instance.delta.end());
  std::vector<double> best_u(2 * n, 0.0);
  double best_value = value_at(best_u);  // u = 0 is always feasible

  if (n == 1) {
    scan(std::vector<double>(2, 0.0), delta_max, u_step, best_u, best_value);
    return best_value;
  }

  // Coarse-to-fine: exhaustive at delta/8, then halve the step around the
  // incumbent. Exact for this objective, which is concave over a convex set.
  double step = delta_max / 8.0;
  scan(std::vector<double>(2 * n, 0.0), delta_max, step, best_u, best_value);
  while (step > u_step) {
    const double next = std::max(u_step, step / 2.0);
    scan(best_u, 2.0 * step, next, best_u, best_value);
    step = next;
  }
  return best_value;
}

namespace {

// ---------------------------------------------------------------------------
// check 6: solver vs grid oracle on fixed data

struct RapCase {
  std::string name;
  PlanningInstance instance;
};

std::vector<RapCase> rap_cases(bool full) {
  SensorModelParams params;
  std::vector<RapCase> cases;

  {  // single sensor, single landmark, far view: unclamped boundary optimum
    PlanningInstance inst;
    inst.params = params;
    inst.poses = {{{0.0, 0.0}}};
    inst.data.targets = {{{3.0, 0.4}, SymMat::sym2(4.2, 0.3, 5.1)}};
    inst.tau = {9.0};
    inst.delta = {1.0};
    cases.push_back({"n1_m1", std::move(inst)});
  }
  {  // single sensor between two landmarks: interior balance
    PlanningInstance inst;
    inst.params = params;
    inst.poses = {{{0.0, 0.0}}};
    inst.data.targets = {{{0.5, 0.1}, SymMat::sym2(1.6, 0.2, 2.3)},
                         {{-0.45, -0.15}, SymMat::sym2(2.1, -0.3, 1.4)}};
    inst.tau = {9.0, 9.0};
    inst.delta = {1.0};
    cases.push_back({"n1_m2", std::move(inst)});
  }
  if (full) {  // two sensors, one landmark: with a single constraint both
               // agents draw the same index, so their corrections coincide
    PlanningInstance inst;
    inst.params = params;
    inst.poses = {{{0.4, 0.0}}, {{-0.4, 0.1}}};
    inst.data.targets = {{{0.2, 1.6}, SymMat::sym2(5.6, 0.3, 6.4)}};
    inst.tau = {9.0};
    inst.delta = {1.0, 1.0};
    cases.push_back({"n2_m1", std::move(inst)});
  }
  {  // two sensors, two distant landmarks with floors clamped at tau: the
     // iterates settle exactly once the clamp engages
    PlanningInstance inst;
    inst.params = params;
    inst.poses = {{{0.1, 0.3}}, {{-0.1, -0.25}}};
    inst.data.targets = {{{2.9, 1.1}, SymMat::sym2(4.8, 0.25, 5.6)},
                         {{-2.6, -1.4}, SymMat::sym2(5.2, -0.2, 4.5)}};
    inst.tau = {2.0, 2.0};
    inst.delta = {1.0, 1.0};
    cases.push_back({"n2_m2", std::move(inst)});
  }
  return cases;
}

struct RapRunResult {
  double objective = 0.0;
  double disagreement = 0.0;
};

RapRunResult run_rap_fixed_data(const PlanningInstance& instance, std::size_t k_max,
                                std::uint64_t seed, double alpha_a = 1.0) {
  const std::size_t n = instance.poses.size();
  const std::size_t m = instance.data.size();

  SolverConfig solver;
  solver.tau = instance.tau;
  solver.delta = instance.delta;
  solver.k_max = k_max;
  solver.early_stop_rel = 0.0;
  solver.alpha_a = alpha_a;

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t v = s + 1; v < n; ++v) edges.emplace_back(s, v);
  const CommGraph graph = graph_from_edges(n, std::move(edges));

  std::vector<AgentState> agents(n);
  for (std::size_t s = 0; s < n; ++s) {
    agents[s].id = s;
    agents[s].pose = instance.poses[s];
    agents[s].z = DecisionVector(m, n);
    agents[s].rng = RngStream(seed, kAgentStreamBase + s);
    agents[s].data = instance.data;
    // Summaries consistent with the shared data so every reconstruction
    // reproduces it exactly: Xi = S/n, xi = (S/n) xhat.
    agents[s].summary.big_xi.resize(m, SymMat(2));
    agents[s].summary.small_xi.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      SymMat share = instance.data[i].info;
      share *= 1.0 / static_cast<double>(n);
      agents[s].summary.big_xi[i] = share;
      agents[s].summary.small_xi[i] = share.apply2(instance.data[i].xhat);
    }
  }

  InnerLoopContext ctx;
  ctx.graph = &graph;
  ctx.sensor_params = &instance.params;
  ctx.solver = &solver;
  inner_loop(agents, ctx);

  RapRunResult result;
  for (std::size_t s = 0; s < n; ++s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) sum += agents[s].z.gamma(i);
    result.objective += sum;
    for (std::size_t v = s + 1; v < n; ++v)
      result.disagreement = std::max(result.disagreement, distance(agents[s].z, agents[v].z));
  }
  result.objective /= static_cast<double>(n);
  return result;
}

std::pair<bool, std::string> check_rap_oracle(bool full) {
  std::string detail;
  bool ok = true;
  for (const RapCase& c : rap_cases(full)) {
    const double oracle = grid_plan_oracle(c.instance, 1e-2, 1e-3);
    // A faster admissible schedule (5/k is still non-summable and
    // square-summable) reaches the optimizer's fixed point well inside the
    // run; consensus is checked at round 500, the value at round 5000.
    const RapRunResult at_500 = run_rap_fixed_data(c.instance, 500, 0xAB, 5.0);
    const RapRunResult final = run_rap_fixed_data(c.instance, 5000, 0xAB, 5.0);
    const double rel = std::abs(final.objective - oracle) / std::max(oracle, 1e-9);
    const bool case_ok =
        rel <= 0.01 && (c.instance.poses.size() < 2 || at_500.disagreement <= 1e-3);
    ok = ok && case_ok;
    if (!detail.empty()) detail += "; ";
    detail += c.name + " rel " + fmt(rel) + " disagree@500 " + fmt(at_500.disagreement);
  }
  return {ok, detail};
}

// ---------------------------------------------------------------------------
// check 7: summability of the data-error sequences

std::pair<bool, std::string> check_summability() {
  // Cycle of four: no node's neighborhood covers the whole team, so every
  // sensor has a genuinely geometric error sequence, while mixing is fast
  // enough (rate 1/3) that the data gap is gone well before the k=50 cutoff.
  const std::size_t n = 4, m = 4;
  SensorModelParams params;
  RngStream rng(0x5AB, 7);

  std::vector<AgentState> agents(n);
  std::vector<SensorPose> poses = {{{0.0, 0.0}}, {{1.2, 0.4}}, {{2.4, 0.1}}, {{3.1, 0.8}}};
  EstimateSet prior;
  prior.targets.resize(m);
  for (std::size_t i = 0; i < m; ++i)
    prior.targets[i] = {{3.0 * rng.uniform01(), 3.0 * rng.uniform01()},
                        random_spd2(rng, 0.4, 2.0)};

  std::vector<ObservationSet> obs(n, ObservationSet(m));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < m; ++i)
      obs[s][i] = sample_observation(rng, poses[s], TargetTruth{prior[i].xhat}, params);

  for (std::size_t s = 0; s < n; ++s) {
    agents[s].id = s;
    agents[s].pose = poses[s];
    agents[s].z = DecisionVector(m, n);
    agents[s].rng = RngStream(0x5AB, kAgentStreamBase + s);
    agents[s].data = prior;
  }

  const CommGraph graph = graph_from_edges(n, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  SolverConfig solver;
  solver.tau.assign(m, 9.0);
  solver.delta.assign(n, 1.0);
  solver.k_max = 300;
  solver.early_stop_rel = 0.0;

  const EstimateSet reference = consensus_reference(agents, obs, poses, params);
  InnerLoopContext ctx;
  ctx.graph = &graph;
  ctx.sensor_params = &params;
  ctx.solver = &solver;
  ctx.observations = &obs;
  ctx.reference_data = &reference;

  const InnerLoopResult result = inner_loop(agents, ctx);

  double worst_fraction = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    double nu_total = 0.0, nu_tail = 0.0, delta_total = 0.0, delta_tail = 0.0;
    for (const RoundDiagnostics& d : result.diagnostics) {
      if (d.sensor != s) continue;
      nu_total += std::abs(d.nu);
      delta_total += d.delta_norm;
      if (d.k > 50) {
        nu_tail += std::abs(d.nu);
        delta_tail += d.delta_norm;
      }
    }
    // Sequences whose total is float noise around exact agreement carry no
    // decay signal; only genuine error sequences are scored.
    if (nu_total > 1e-9) worst_fraction = std::max(worst_fraction, nu_tail / nu_total);
    if (delta_total > 1e-9) worst_fraction = std::max(worst_fraction, delta_tail / delta_total);
  }
  return {worst_fraction < 0.01, "worst tail fraction beyond k=50: " + fmt(worst_fraction)};
}

}  // namespace

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

VerifyReport run_verify(VerifyLevel level) {
  const bool full = level == VerifyLevel::full;
  VerifyReport report;
  report.checks.push_back(
      timed("symmat_properties", [&] { return check_symmat(full ? 10000 : 2000); }));
  report.checks.push_back(
      timed("sensor_gradient_fd", [&] { return check_sensor_gradient(full ? 1000 : 200); }));
  report.checks.push_back(timed("sensor_mc_covariance",
                                [&] { return check_sensor_covariance(full ? 100000 : 20000); }));
  report.checks.push_back(timed("icf_vs_centralized", [&] { return check_icf(full ? 20 : 5); }));
  report.checks.push_back(
      timed("psi_gradient_fd", [&] { return check_psi_gradient(full ? 1000 : 200); }));
  report.checks.push_back(timed("rap_vs_grid_oracle", [&] { return check_rap_oracle(full); }));
  report.checks.push_back(timed("error_summability", [&] { return check_summability(); }));
  return report;
}

std::string report_json(const VerifyReport& report) {
  nlohmann::json j;
  j["all_passed"] = report.all_passed();
  nlohmann::json checks = nlohmann::json::array();
  for (const CheckResult& c : report.checks) {
    nlohmann::json entry;
    entry["name"] = c.name;
    entry["passed"] = c.passed;
    entry["detail"] = c.detail;
    entry["seconds"] = c.seconds;
    checks.push_back(entry);
  }
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

}  // namespace ascent
