#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "expedition/core/error.hpp"
#include "expedition/core/rng.hpp"
#include "expedition/env/observe.hpp"
#include "expedition/env/params.hpp"
#include "expedition/env/plume.hpp"

namespace expedition::belief {

/// Weighted particle set over VentParams; weights nonnegative and sum to 1.
struct ParamParticleBelief {
  std::vector<env::VentParams> particles;
  std::vector<double> weights;

  std::size_t size() const { return particles.size(); }

  /// Effective sample size 1 / sum(w^2).
  double ess() const {
    double s = 0.0;
    for (double w : weights) s += w * w;
    return 1.0 / s;
  }

  void check() const {
    if (particles.empty() || particles.size() != weights.size())
      throw ValidationError("particle belief: empty or mismatched particle/weight lists");
    double s = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w))
        throw ValidationError("particle belief: negative or non-finite weight");
      s += w;
    }
    if (std::abs(s - 1.0) > 1e-12)
      throw ValidationError("particle belief: weights do not sum to 1");
  }

  nlohmann::json to_json() const {
    nlohmann::json jp = nlohmann::json::array();
    for (const auto& p : particles) jp.push_back(p);
    return nlohmann::json{{"particles", jp}, {"weights", weights}};
  }

  static ParamParticleBelief from_json(const nlohmann::json& j) {
    ParamParticleBelief pb;
    for (const auto& jp : j.at("particles")) pb.particles.push_back(jp.get<env::VentParams>());
    pb.weights = j.at("weights").get<std::vector<double>>();
    pb.check();
    return pb;
  }
};

/// K prior draws with uniform weights.
inline ParamParticleBelief particle_init(const env::ParamPrior& prior, std::size_t k, Rng& rng) {
  if (k == 0) throw ValidationError("particle_init: K must be >= 1");
  ParamParticleBelief pb;
  pb.particles.reserve(k);
  for (std::size_t i = 0; i < k; ++i) pb.particles.push_back(env::sample_params(prior, rng));
  pb.weights.assign(k, 1.0 / static_cast<double>(k));
  return pb;
}

/* Bayes reweighting against a batch of observations: per particle, the
 * Gaussian log-likelihood of both channels is accumulated in log space and
 * weights renormalized with the max subtracted, so underflow only occurs when
 * every particle is impossible.
 */
inline ParamParticleBelief particle_reweight(const ParamParticleBelief& pb,
                                             std::span<const env::Observation> obs,
                                             double sigma_sensor) {
  pb.check();
  if (obs.empty()) throw ValidationError("particle_reweight: empty observation list");
  if (!(sigma_sensor > 0.0)) throw ValidationError("particle_reweight: sigma_sensor must be > 0");

  const double inv_two_s2 = 1.0 / (2.0 * sigma_sensor * sigma_sensor);
  const std::size_t k = pb.size();
  std::vector<double> logw(k);
  for (std::size_t i = 0; i < k; ++i) {
    double ll = std::log(std::max(pb.weights[i], 1e-300));
    for (const auto& o : obs) {
      const env::TracerPair c = env::concentration(pb.particles[i], {o.x, o.y, o.z}, o.t);
      const double dr = o.reactive - c.reactive;
      const double dt = o.turbidity - c.conserved;
      ll -= (dr * dr + dt * dt) * inv_two_s2;
    }
    logw[i] = ll;
  }
  double m = -std::numeric_limits<double>::infinity();
  for (double v : logw) m = std::max(m, v);
  if (!std::isfinite(m))
    throw NumericalError("particle_reweight: all likelihoods vanished (widen prior or sigma)");
  ParamParticleBelief out;
  out.particles = pb.particles;
  out.weights.resize(k);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out.weights[i] = std::exp(logw[i] - m);
    s += out.weights[i];
  }
  for (double& w : out.weights) w /= s;
  return out;
}

/// Systematic resampling to uniform weights when ESS < K/2; identity otherwise.
inline ParamParticleBelief particle_resample(const ParamParticleBelief& pb, Rng& rng) {
  pb.check();
  const std::size_t k = pb.size();
  if (pb.ess() >= 0.5 * static_cast<double>(k)) return pb;
  ParamParticleBelief out;
  out.particles.reserve(k);
  const double u0 = rng.uniform() / static_cast<double>(k);
  double cum = pb.weights[0];
  std::size_t j = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double u = u0 + static_cast<double>(i) / static_cast<double>(k);
    while (u > cum && j + 1 < k) cum += pb.weights[++j];
    out.particles.push_back(pb.particles[j]);
  }
  out.weights.assign(k, 1.0 / static_cast<double>(k));
  return out;
}

}  // namespace expedition::belief
