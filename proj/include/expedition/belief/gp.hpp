#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "expedition/core/error.hpp"
#include "expedition/core/geometry.hpp"
#include "expedition/env/observe.hpp"

namespace expedition::belief {

using json = nlohmann::json;

struct GPHyperparams {
  double sigma_f = 0.3;    // signal std
  double ell_s = 150.0;    // m, spatial lengthscale
  double ell_t = 3600.0;   // s, temporal lengthscale
  double sigma_n = 0.02;   // observation noise std
  double jitter = 1e-8;    // diagonal stabilizer (escalates x10 up to 1e-4)
};

inline void validate(const GPHyperparams& h) {
  if (!(h.sigma_f > 0.0)) throw ValidationError("gp.sigma_f: must be > 0");
  if (!(h.ell_s > 0.0)) throw ValidationError("gp.ell_s: must be > 0");
  if (!(h.ell_t > 0.0)) throw ValidationError("gp.ell_t: must be > 0");
  if (!(h.sigma_n >= 0.0)) throw ValidationError("gp.sigma_n: must be >= 0");
  if (!(h.jitter >= 0.0)) throw ValidationError("gp.jitter: must be >= 0");
}

enum class Channel { reactive, turbidity };

inline std::string to_string(Channel c) {
  return c == Channel::reactive ? "reactive" : "turbidity";
}
inline Channel channel_from_string(const std::string& s) {
  if (s == "reactive") return Channel::reactive;
  if (s == "turbidity") return Channel::turbidity;
  throw ValidationError("gp.channel: expected \"reactive\" or \"turbidity\"");
}

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;
};

/* Spatiotemporal GP posterior over one sensed channel, zero prior mean,
 * separable squared-exponential kernel
 *
 *   k(a,b) = sigma_f^2 exp(-|dp|^2 / (2 ell_s^2)) exp(-dt^2 / (2 ell_t^2))
 *
 * with observation noise sigma_n^2. Maintains the Cholesky factor of
 * K + (sigma_n^2 + jitter) I in packed row-major form so that adding a point
 * costs O(n^2) and a mean/variance query costs one triangular solve. Evicting
 * the oldest point is a rank-1 factor update, not a refactorization.
 *
 * Beliefs are values: updated() returns a new belief, queries are const and
 * safe from any number of concurrent readers.
 */
class GPBelief {
public:
  GPBelief() = default;
  GPBelief(const GPHyperparams& hp, Channel ch, std::size_t capacity = 1500)
      : hp_(hp), ch_(ch), cap_(capacity), jitter_eff_(hp.jitter) {
    validate(hp);
    if (cap_ == 0) throw ValidationError("gp.capacity: must be >= 1");
  }

  std::size_t size() const { return x_.size(); }
  std::size_t capacity() const { return cap_; }
  const GPHyperparams& hyper() const { return hp_; }
  Channel channel() const { return ch_; }
  double effective_jitter() const { return jitter_eff_; }
  const std::vector<SpacetimePoint>& inputs() const { return x_; }
  const std::vector<double>& targets() const { return y_; }

  double kernel(const SpacetimePoint& a, const SpacetimePoint& b) const {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z, dt = a.t - b.t;
    const double qs = (dx * dx + dy * dy + dz * dz) / (2.0 * hp_.ell_s * hp_.ell_s);
    const double qt = dt * dt / (2.0 * hp_.ell_t * hp_.ell_t);
    return hp_.sigma_f * hp_.sigma_f * std::exp(-qs - qt);
  }

  /// Append one training pair. Does not evict; see updated().
  void add(const SpacetimePoint& p, double value) {
    if (!std::isfinite(value) || !std::isfinite(p.x) || !std::isfinite(p.y) ||
        !std::isfinite(p.z) || !std::isfinite(p.t))
      throw ValidationError("gp_update: non-finite training value or coordinate");
    const std::size_t n = x_.size();
    std::vector<double> row(n + 1);
    for (std::size_t j = 0; j < n; ++j) row[j] = kernel(p, x_[j]);
    forward_solve(row.data(), n);  // row[0..n) := L^-1 k
    const double kdiag = diag_value();
    double d = kdiag;
    for (std::size_t j = 0; j < n; ++j) d -= row[j] * row[j];
    if (!(d > kdiag * 1e-14)) {
      // Factor lost positive definiteness; refactorize with a larger jitter.
      x_.push_back(p);
      y_.push_back(value);
      escalate_and_rebuild();
      return;
    }
    row[n] = std::sqrt(d);
    double cy = value;
    for (std::size_t j = 0; j < n; ++j) cy -= row[j] * c_[j];
    x_.push_back(p);
    y_.push_back(value);
    L_.insert(L_.end(), row.begin(), row.end());
    c_.push_back(cy / row[n]);
  }

  /// New belief including the observation's selected channel; evicts the
  /// oldest point beyond capacity.
  [[nodiscard]] GPBelief updated(const env::Observation& o) const {
    GPBelief b(*this);
    const double v = (ch_ == Channel::reactive) ? o.reactive : o.turbidity;
    b.add({o.x, o.y, o.z, o.t}, v);
    while (b.size() > b.cap_) b.evict_oldest();
    return b;
  }

  MeanVar predict(const SpacetimePoint& q) const {
    const std::size_t n = x_.size();
    if (n == 0) return {0.0, hp_.sigma_f * hp_.sigma_f};
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = kernel(q, x_[j]);
    forward_solve(v.data(), n);
    double mu = 0.0, vv = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      mu += v[j] * c_[j];
      vv += v[j] * v[j];
    }
    const double sf2 = hp_.sigma_f * hp_.sigma_f;
    const double var = std::max(sf2 - vv, sf2 * 1e-12);
    return {mu, var};
  }

  std::vector<MeanVar> predict(std::span<const SpacetimePoint> qs) const {
    std::vector<MeanVar> out;
    out.reserve(qs.size());
    for (const auto& q : qs) out.push_back(predict(q));
    return out;
  }

  /// Drop the oldest training point via a rank-1 update of the factor.
  void evict_oldest() {
    const std::size_t n = x_.size();
    if (n == 0) return;
    if (n == 1) {
      x_.clear();
      y_.clear();
      L_.clear();
      c_.clear();
      return;
    }
    const std::size_t m = n - 1;
    std::vector<double> w(m);  // column 0 below the pivot
    for (std::size_t i = 0; i < m; ++i) w[i] = L_[tri(i + 1)];
    std::vector<double> Lnew(tri(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j <= i; ++j) Lnew[tri(i) + j] = L_[tri(i + 1) + j + 1];
    // chol(L22 L22' + w w')
    for (std::size_t k = 0; k < m; ++k) {
      double& dkk = Lnew[tri(k) + k];
      const double r = std::hypot(dkk, w[k]);
      const double cth = r / dkk;
      const double sth = w[k] / dkk;
      dkk = r;
      for (std::size_t i = k + 1; i < m; ++i) {
        double& lik = Lnew[tri(i) + k];
        lik = (lik + sth * w[i]) / cth;
        w[i] = cth * w[i] - sth * lik;
      }
    }
    L_ = std::move(Lnew);
    x_.erase(x_.begin());
    y_.erase(y_.begin());
    recompute_c();
  }

  json to_json() const {
    json jx = json::array();
    for (const auto& p : x_) jx.push_back({p.x, p.y, p.z, p.t});
    return json{{"hyper",
                 {{"sigma_f", hp_.sigma_f},
                  {"ell_s", hp_.ell_s},
                  {"ell_t", hp_.ell_t},
                  {"sigma_n", hp_.sigma_n},
                  {"jitter", hp_.jitter}}},
                {"channel", to_string(ch_)},
                {"capacity", cap_},
                {"x", jx},
                {"y", y_}};
  }

  static GPBelief from_json(const json& j) {
    GPHyperparams hp;
    const json& jh = j.at("hyper");
    hp.sigma_f = jh.at("sigma_f").get<double>();
    hp.ell_s = jh.at("ell_s").get<double>();
    hp.ell_t = jh.at("ell_t").get<double>();
    hp.sigma_n = jh.at("sigma_n").get<double>();
    hp.jitter = jh.value("jitter", hp.jitter);
    GPBelief b(hp, channel_from_string(j.at("channel").get<std::string>()),
               j.value("capacity", std::size_t{1500}));
    const json& jx = j.at("x");
    const json& jy = j.at("y");
    if (jx.size() != jy.size()) throw ValidationError("gp snapshot: x/y size mismatch");
    for (std::size_t i = 0; i < jx.size(); ++i) {
      const auto& q = jx[i];
      b.add({q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>()},
            jy[i].get<double>());
    }
    return b;
  }

private:
  static std::size_t tri(std::size_t i) { return i * (i + 1) / 2; }
  double diag_value() const { return hp_.sigma_f * hp_.sigma_f + hp_.sigma_n * hp_.sigma_n + jitter_eff_; }

  // In-place forward substitution against the packed factor: b := L^-1 b.
  void forward_solve(double* b, std::size_t n) const {
    const double* L = L_.data();
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = L + tri(i);
      double s = b[i];
      for (std::size_t j = 0; j < i; ++j) s -= row[j] * b[j];
      b[i] = s / row[i];
    }
  }

  void recompute_c() {
    c_ = y_;
    forward_solve(c_.data(), c_.size());
  }

  void rebuild(double jitter) {
    jitter_eff_ = jitter;
    const std::size_t n = x_.size();
    L_.assign(tri(n), 0.0);
    const double kdiag = diag_value();
    for (std::size_t i = 0; i < n; ++i) {
      double* row = L_.data() + tri(i);
      for (std::size_t j = 0; j < i; ++j) row[j] = kernel(x_[i], x_[j]);
      row[i] = kdiag;
      // factor row i given rows 0..i-1
      for (std::size_t j = 0; j < i; ++j) {
        const double* rj = L_.data() + tri(j);
        double s = row[j];
        for (std::size_t k = 0; k < j; ++k) s -= row[k] * rj[k];
        row[j] = s / rj[j];
      }
      double d = row[i];
      for (std::size_t j = 0; j < i; ++j) d -= row[j] * row[j];
      if (!(d > kdiag * 1e-14)) throw NumericalError("gp: factorization failed");
      row[i] = std::sqrt(d);
    }
    recompute_c();
  }

  void escalate_and_rebuild() {
    double j = jitter_eff_;
    while (true) {
      j = (j <= 0.0) ? 1e-8 : j * 10.0;
      if (j > 1e-4 * (1.0 + 1e-12))
        throw NumericalError("gp: kernel matrix not positive definite after jitter escalation");
      try {
        rebuild(j);
        return;
      } catch (const NumericalError&) {
        continue;
      }
    }
  }

  GPHyperparams hp_;
  Channel ch_ = Channel::reactive;
  std::size_t cap_ = 1500;
  double jitter_eff_ = 1e-8;
  std::vector<SpacetimePoint> x_;
  std::vector<double> y_;
  std::vector<double> L_;  // packed row-major lower-triangular factor
  std::vector<double> c_;  // L^-1 y
};

/// Spec-named operation wrappers.
inline GPBelief gp_update(const GPBelief& b, const env::Observation& o) { return b.updated(o); }
inline std::vector<MeanVar> gp_predict(const GPBelief& b, std::span<const SpacetimePoint> qs) {
  return b.predict(qs);
}

}  // namespace expedition::belief
