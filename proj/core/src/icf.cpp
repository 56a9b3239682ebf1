#include "ascent/icf.hpp"

#include <cmath>
#include <stdexcept>

namespace ascent {

namespace {
constexpr double kSingularInfo = 1e-12;
constexpr double kStochasticTol = 1e-12;
}  // namespace

double summary_distance(const InfoSummary& a, const InfoSummary& b) {
  if (a.size() != b.size()) throw std::invalid_argument("summary_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double f = (a.big_xi[i] - b.big_xi[i]).frob_norm();
    s += f * f;
    const Vec2 dx = a.small_xi[i] - b.small_xi[i];
    s += dot(dx, dx);
  }
  return std::sqrt(s);
}

InfoSummary init_summary(std::size_t sensor, const EstimateSet& prior,
                         const ObservationSet& obs, std::span<const SensorPose> poses,
                         const SensorModelParams& params, std::size_t n) {
  if (n < 1) throw std::invalid_argument("init_summary: n must be >= 1");
  if (obs.size() != prior.size()) throw std::invalid_argument("init_summary: obs size mismatch");

  const double inv_n = 1.0 / static_cast<double>(n);
  InfoSummary summary;
  summary.big_xi.reserve(prior.size());
  summary.small_xi.reserve(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i) {
    SymMat prior_share = prior[i].info;
    prior_share *= inv_n;
    Vec2 xi = prior_share.apply2(prior[i].xhat);
    SymMat big = prior_share;
    if (obs[i]) {
      const SymMat q = info_matrix(poses[sensor], prior[i].xhat, params);
      big += q;
      xi = xi + q.apply2(*obs[i]);
    }
    summary.big_xi.push_back(std::move(big));
    summary.small_xi.push_back(xi);
  }
  return summary;
}

InfoSummary bootstrap_summary(std::size_t sensor, const ObservationSet& obs,
                              std::span<const SensorPose> poses,
                              const SensorModelParams& params) {
  InfoSummary summary;
  summary.big_xi.reserve(obs.size());
  summary.small_xi.reserve(obs.size());
  for (const std::optional<Vec2>& y : obs) {
    if (y) {
      const SymMat q = info_matrix(poses[sensor], *y, params);
      summary.big_xi.push_back(q);
      summary.small_xi.push_back(q.apply2(*y));
    } else {
      summary.big_xi.emplace_back(2);
      summary.small_xi.push_back(Vec2{0.0, 0.0});
    }
  }
  return summary;
}

InfoSummary consensus_step(const InfoSummary& own, std::span<const InfoSummary* const> neighbors,
                           std::span<const double> weights) {
  if (weights.size() != neighbors.size() + 1)
    throw std::invalid_argument("consensus_step: one weight per summary required");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("consensus_step: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kStochasticTol)
    throw std::invalid_argument("consensus_step: weight row is not stochastic");

  InfoSummary mixed;
  const std::size_t m = own.size();
  mixed.big_xi.reserve(m);
  mixed.small_xi.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    SymMat big = own.big_xi[i];
    big *= weights[0];
    Vec2 small = weights[0] * own.small_xi[i];
    for (std::size_t k = 0; k < neighbors.size(); ++k) {
      SymMat nb = neighbors[k]->big_xi[i];
      nb *= weights[k + 1];
      big += nb;
      small = small + weights[k + 1] * neighbors[k]->small_xi[i];
    }
    mixed.big_xi.push_back(std::move(big));
    mixed.small_xi.push_back(small);
  }
  return mixed;
}

EstimateSet reconstruct_data(const InfoSummary& summary, std::size_t n,
                             const EstimateSet& fallback, std::vector<bool>* available) {
  if (fallback.size() != summary.size())
    throw std::invalid_argument("reconstruct_data: fallback size mismatch");
  EstimateSet data;
  data.targets.resize(summary.size());
  if (available) available->assign(summary.size(), true);

  for (std::size_t i = 0; i < summary.size(); ++i) {
    SymMat info = summary.big_xi[i];
    info *= static_cast<double>(n);
    if (min_eigenvalue(info) < kSingularInfo) {
      if (available) (*available)[i] = false;
      SymMat eps = SymMat::identity(2);
      eps *= kSingularFallback;
      data.targets[i] = {fallback[i].xhat, eps};
      continue;
    }
    // Both the numerator and the denominator scale by n, so the mean is
    // Xi^-1 xi directly.
    data.targets[i] = {solve_spd2(summary.big_xi[i], summary.small_xi[i], kSingularInfo / n),
                       info};
  }
  return data;
}

EstimateSet centralized_fusion(const EstimateSet& prior,
                               std::span<const ObservationSet> obs_per_sensor,
                               std::span<const SensorPose> poses,
                               const SensorModelParams& params) {
  EstimateSet out;
  out.targets.resize(prior.size());
  for (std::size_t i = 0; i < prior.size(); ++i) {
    SymMat info = prior[i].info;
    Vec2 vec = prior[i].info.apply2(prior[i].xhat);
    for (std::size_t s = 0; s < poses.size(); ++s) {
      if (!obs_per_sensor[s][i]) continue;
      const SymMat q = info_matrix(poses[s], prior[i].xhat, params);
      info += q;
      vec = vec + q.apply2(*obs_per_sensor[s][i]);
    }
    if (min_eigenvalue(info) < kSingularInfo) {
      SymMat eps = SymMat::identity(2);
      eps *= kSingularFallback;
      out.targets[i] = {prior[i].xhat, eps};
    } else {
      out.targets[i] = {solve_spd2(info, vec, kSingularInfo), info};
    }
  }
  return out;
}

EstimateSet centralized_bootstrap(std::span<const ObservationSet> obs_per_sensor,
                                  std::span<const SensorPose> poses,
                                  const SensorModelParams& params, const EstimateSet& fallback) {
  EstimateSet out;
  const std::size_t m = fallback.size();
  out.targets.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    SymMat info(2);
    Vec2 vec{0.0, 0.0};
    for (std::size_t s = 0; s < poses.size(); ++s) {
      if (!obs_per_sensor[s][i]) continue;
      const SymMat q = info_matrix(poses[s], *obs_per_sensor[s][i], params);
      info += q;
      vec = vec + q.apply2(*obs_per_sensor[s][i]);
    }
    if (min_eigenvalue(info) < kSingularInfo) {
      SymMat eps = SymMat::identity(2);
      eps *= kSingularFallback;
      out.targets[i] = {fallback[i].xhat, eps};
    } else {
      out.targets[i] = {solve_spd2(info, vec, kSingularInfo), info};
    }
  }
  return out;
}

}  // namespace ascent
