// Periodic complex curvature potentials: trigonometric-polynomial
// representation, gauging of quasi-periodic curvatures, Hasimoto map.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "fingap/hyperbolic.hpp"
#include "fingap/sl2.hpp"

namespace fingap {

// A T-periodic potential q(t) = sum_{|k|<=K} m_k exp(2 pi i k t / T),
// together with the total-torsion rate theta of the curve it came from.
// Uniform samples may be attached as a secondary representation.
class Potential {
 public:
  Potential() = default;

  Potential(double T, double theta, int K)
      : T_(T), theta_(theta), K_(K), modes_(2 * K + 1, cplx(0.0)) {
    if (!(T > 0.0)) throw input_error("Potential: period must be positive");
    if (K < 0) throw input_error("Potential: negative mode cutoff");
  }

  static Potential constant(double T, cplx value, double theta = 0.0) {
    Potential q(T, theta, 0);
    q.set_mode(0, value);
    return q;
  }

  static Potential from_modes(double T, double theta,
                              const std::map<int, cplx>& modes) {
    int K = 0;
    for (const auto& [k, v] : modes) K = std::max(K, std::abs(k));
    Potential q(T, theta, K);
    for (const auto& [k, v] : modes) q.set_mode(k, v);
    return q;
  }

  double T() const { return T_; }
  double theta() const { return theta_; }
  void set_theta(double th) { theta_ = th; }
  int K() const { return K_; }

  cplx mode(int k) const {
    return std::abs(k) <= K_ ? modes_[static_cast<std::size_t>(k + K_)] : cplx(0.0);
  }
  void set_mode(int k, cplx v) {
    if (std::abs(k) > K_) grow(std::abs(k));
    modes_[static_cast<std::size_t>(k + K_)] = v;
  }

  const std::vector<cplx>& raw_modes() const { return modes_; }

  const std::optional<std::vector<cplx>>& samples() const { return samples_; }
  void attach_samples(std::vector<cplx> s) { samples_ = std::move(s); }

  // q(t) by direct synthesis; exactly T-periodic by construction.
  cplx evaluate(double t) const {
    const cplx w = std::exp(cplx(0.0, 2.0 * kPi * t / T_));
    const cplx wc = std::conj(w);
    cplx pos(0.0), neg(0.0);
    for (int k = K_; k >= 1; --k) {
      pos = (pos + modes_[static_cast<std::size_t>(k + K_)]) * w;
      neg = (neg + modes_[static_cast<std::size_t>(K_ - k)]) * wc;
    }
    return pos + neg + modes_[static_cast<std::size_t>(K_)];
  }

  std::vector<cplx> sample_grid(int n) const {
    std::vector<cplx> s(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] = evaluate(T_ * j / n);
    return s;
  }

  double sup_norm(int oversample = 4) const {
    const int n = std::max(32, oversample * (2 * K_ + 1));
    double m = 0.0;
    for (int j = 0; j < n; ++j) m = std::max(m, std::abs(evaluate(T_ * j / n)));
    return m;
  }

  // max_t |Im q| small, equivalently m_{-k} = conj(m_k) for all k.
  bool is_real(double tol = 1e-9) const {
    double dev = 0.0;
    for (int k = 0; k <= K_; ++k)
      dev = std::max(dev, std::abs(mode(-k) - std::conj(mode(k))));
    return dev <= tol;
  }

  Potential conjugated() const {
    Potential r(T_, -theta_, K_);
    for (int k = -K_; k <= K_; ++k) r.set_mode(k, std::conj(mode(-k)));
    return r;
  }

  // tau_x q(t) = q(t+x): mode k picks up the phase exp(2 pi i k x / T).
  Potential translated(double x) const {
    Potential r(T_, theta_, K_);
    for (int k = -K_; k <= K_; ++k)
      r.set_mode(k, mode(k) * std::exp(cplx(0.0, 2.0 * kPi * k * x / T_)));
    return r;
  }

 private:
  void grow(int K_new) {
    std::vector<cplx> m(2 * K_new + 1, cplx(0.0));
    for (int k = -K_; k <= K_; ++k)
      m[static_cast<std::size_t>(k + K_new)] = modes_[static_cast<std::size_t>(k + K_)];
    modes_ = std::move(m);
    K_ = K_new;
  }

  double T_{2.0 * kPi};
  double theta_{0.0};
  int K_{0};
  std::vector<cplx> modes_{cplx(0.0)};
  std::optional<std::vector<cplx>> samples_;
};

// Synthesis coefficients of uniform samples s_j = f(jT/n), |k| <= K.
// Exact for trigonometric polynomials when n > 2K.
inline Potential project_to_modes(const std::vector<cplx>& s, double T, double theta,
                                  int K) {
  const int n = static_cast<int>(s.size());
  if (n < 2 * K + 1)
    throw input_error("project_to_modes: grid too coarse for requested cutoff");
  Potential q(T, theta, K);
  for (int k = -K; k <= K; ++k) {
    cplx acc(0.0);
    for (int j = 0; j < n; ++j)
      acc += s[static_cast<std::size_t>(j)] *
             std::exp(cplx(0.0, -2.0 * kPi * k * j / static_cast<double>(n)));
    q.set_mode(k, acc / static_cast<double>(n));
  }
  return q;
}

// Parseval form of the L^2([0,T]) distance.
inline double l2_distance(const Potential& q1, const Potential& q2) {
  if (std::abs(q1.T() - q2.T()) > 1e-12 * (1.0 + q1.T()))
    throw input_error("l2_distance: mismatched periods");
  const int K = std::max(q1.K(), q2.K());
  double acc = 0.0;
  for (int k = -K; k <= K; ++k) acc += std::norm(q1.mode(k) - q2.mode(k));
  return std::sqrt(acc * q1.T());
}

inline double l2_norm(const Potential& q) {
  double acc = 0.0;
  for (int k = -q.K(); k <= q.K(); ++k) acc += std::norm(q.mode(k));
  return std::sqrt(acc * q.T());
}

// Gauge a quasi-periodic curvature q_raw(t+T) = exp(i theta T) q_raw(t) to a
// periodic potential q~(t) = exp(-i theta t) q_raw(t). Input samples live on
// t_j = jT/n for j = 0..n (endpoint included; it carries the phase offset).
// theta is the unwrapped phase increment over one period divided by T,
// which also is the least-squares phase for this model.
inline Potential gauge_periodic(const std::vector<cplx>& raw, double T, int K = 32,
                                double tol = 1e-8) {
  const int n = static_cast<int>(raw.size()) - 1;
  if (n < 8) throw input_error("gauge_periodic: need at least 9 samples");
  double scale = 0.0;
  for (const cplx& v : raw) scale = std::max(scale, std::abs(v));
  if (!(scale > 0.0)) throw numeric_error("gauge", "identically zero curvature");
  double phase = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx r0 = raw[static_cast<std::size_t>(j)];
    const cplx r1 = raw[static_cast<std::size_t>(j + 1)];
    if (std::abs(r0) < 1e-12 * scale || std::abs(r1) < 1e-12 * scale)
      throw numeric_error("gauge", "vanishing curvature sample: phase undefined");
    phase += std::arg(r1 / r0);
  }
  const double theta = phase / T;

  std::vector<cplx> gauged(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double t = T * j / n;
    gauged[static_cast<std::size_t>(j)] =
        raw[static_cast<std::size_t>(j)] * std::exp(cplx(0.0, -theta * t));
  }
  // Endpoint consistency: after the gauge the wrap must land on sample 0.
  const cplx wrap = raw[static_cast<std::size_t>(n)] * std::exp(cplx(0.0, -theta * T));
  if (std::abs(wrap - gauged[0]) > tol * scale)
    throw numeric_error("gauge", "not quasi-periodic: residual above tolerance");

  const int Keff = std::min(K, (n - 1) / 2);
  Potential q = project_to_modes(gauged, T, theta, Keff);
  q.attach_samples(std::move(gauged));
  return q;
}

// Hasimoto map: complex curvature q = kappa exp(i int tau) of a closed
// unit-speed sampled curve, gauged to a periodic potential.
inline Potential hasimoto_curvature(const CurveSamples& curve, int K = 32,
                                    double tol = 1e-4) {
  const int n = static_cast<int>(curve.size());
  if (n < 8) throw input_error("hasimoto_curvature: need at least 8 samples");

  const double h = curve.dt();
  for (int j = 0; j + 1 < n; ++j) {
    const double d = h3_distance(curve.points[static_cast<std::size_t>(j)],
                                 curve.points[static_cast<std::size_t>(j + 1)]);
    if (std::abs(d - h) > tol * std::max(h, 1e-12) * 10.0 + 1e-9)
      throw input_error("hasimoto_curvature: curve is not unit-speed");
  }

  // Frenet data first: a vanishing-curvature (degenerate) input is reported
  // as such even when the segment is also not closed.
  const FrenetData fr = frenet_data(curve);

  const double wrap_gap =
      h3_distance(curve.points.back(), curve.points.front());
  if (std::abs(wrap_gap - h) > 0.5 * h)
    throw input_error("hasimoto_curvature: curve is not closed");

  // Accumulate the torsion phase by composite Simpson (n even) or trapezoid.
  std::vector<double> phi(static_cast<std::size_t>(n + 1), 0.0);
  auto tau_at = [&](int j) { return fr.tau[static_cast<std::size_t>(j % n)]; };
  for (int j = 0; j < n; ++j) {
    const double mid = 0.5 * (tau_at(j) + tau_at(j + 1));
    phi[static_cast<std::size_t>(j + 1)] = phi[static_cast<std::size_t>(j)] + h * mid;
  }

  std::vector<cplx> raw(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j)
    raw[static_cast<std::size_t>(j)] =
        fr.kappa[static_cast<std::size_t>(j % n)] *
        std::exp(cplx(0.0, phi[static_cast<std::size_t>(j)]));

  return gauge_periodic(raw, curve.T, K, 1e-3);
}

}  // namespace fingap
