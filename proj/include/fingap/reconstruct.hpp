// Sym-formula reconstruction of curves in H^3 from a potential, closure-gap
// measurement, and Frenet data for round trips.
#pragma once

#include <cmath>
#include <vector>

#include "fingap/config.hpp"
#include "fingap/frame.hpp"
#include "fingap/hyperbolic.hpp"
#include "fingap/potential.hpp"
#include "fingap/sl2.hpp"

namespace fingap {

// gamma(t) = F(t, i+theta) F(t, -i+theta)^{-1}. By the reality condition
// F(t, -i+theta) = (F(t, i+theta)^*)^{-1}, so gamma = F F^* and only one Sym
// point is integrated. Velocity gamma' = i F eps F^*.
inline CurveSamples sym_reconstruct(const Potential& q, double theta, int n_samples,
                                    const Config& cfg) {
  if (n_samples < 8) throw input_error("sym_reconstruct: need at least 8 samples");
  const cplx lambda_star(theta, 1.0);
  const int per = std::max(1, (cfg.n_steps + n_samples - 1) / n_samples);
  const int n_steps = per * n_samples;
  const FrameResult fr = integrate_frame(q, lambda_star, n_steps);

  CurveSamples curve;
  curve.T = q.T();
  curve.t.reserve(static_cast<std::size_t>(n_samples));
  curve.points.reserve(static_cast<std::size_t>(n_samples));
  std::vector<Mat2> vel;
  vel.reserve(static_cast<std::size_t>(n_samples));
  for (int j = 0; j < n_samples; ++j) {
    const Mat2& F = fr.F[static_cast<std::size_t>(j * per)];
    curve.t.push_back(fr.t[static_cast<std::size_t>(j * per)]);
    curve.points.emplace_back(F * F.star());
    vel.push_back(cplx(0.0, 1.0) * (F * kEps * F.star()));
  }
  curve.velocity = std::move(vel);
  curve.endpoint = H3Point(fr.M * fr.M.star());
  return curve;
}

// max over s = +-1 picked best of ||M(i+theta) - s 1||; zero iff the curve
// closes.
inline double curve_closure_gap(const Potential& q, double theta, const Config& cfg) {
  const Mat2 M = monodromy(q, cplx(theta, 1.0), cfg);
  const double gp = (M - Mat2::identity()).frob();
  const double gm = (M + Mat2::identity()).frob();
  return std::min(gp, gm);
}

// Unit-speed defect |<gamma',gamma'> - 1| over the grid, with the metric
// normalized by <eps,eps> = 1.
inline double unit_speed_defect(const CurveSamples& curve) {
  if (!curve.velocity) throw input_error("unit_speed_defect: no velocities attached");
  double worst = 0.0;
  for (const Mat2& v : *curve.velocity) {
    const Vec4 comp = pauli_components(v);
    worst = std::max(worst, std::abs(-mink(comp, comp) - 1.0));
  }
  return worst;
}

}  // namespace fingap
