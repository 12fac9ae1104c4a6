// Sampled curves on the hyperboloid model and numerical Frenet data
// (geodesic curvature and torsion by covariant differencing).
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "fingap/sl2.hpp"

namespace fingap {

// A curve sampled on a uniform grid t_j = j*T/n, j = 0..n-1. The endpoint
// gamma(T) is kept separately when known; for closed curves it coincides
// with gamma(0) up to the closure gap.
struct CurveSamples {
  double T{0.0};
  std::vector<double> t;
  std::vector<H3Point> points;
  std::optional<std::vector<Mat2>> velocity;
  std::optional<H3Point> endpoint;

  std::size_t size() const { return points.size(); }
  double dt() const { return t.size() > 1 ? t[1] - t[0] : T; }

  double closure_gap() const {
    if (!endpoint || points.empty()) return 0.0;
    return h3_distance(points.front(), *endpoint);
  }
  bool is_closed(double tol = 1e-6) const { return closure_gap() <= tol; }
};

namespace detail {

// 4th-order first derivative of periodically indexed Vec4 samples.
inline std::vector<Vec4> d1_periodic(const std::vector<Vec4>& s, double h) {
  const int n = static_cast<int>(s.size());
  std::vector<Vec4> out(n);
  auto at = [&](int j) -> const Vec4& { return s[((j % n) + n) % n]; };
  for (int j = 0; j < n; ++j) {
    out[j] = (at(j - 2) - at(j + 2) + (at(j + 1) - at(j - 1)) * 8.0) * (1.0 / (12.0 * h));
  }
  return out;
}

// 4th-order first derivative with one-sided stencils at the ends.
inline std::vector<Vec4> d1_open(const std::vector<Vec4>& s, double h) {
  const int n = static_cast<int>(s.size());
  std::vector<Vec4> out(n);
  const double inv = 1.0 / (12.0 * h);
  for (int j = 2; j + 2 < n; ++j)
    out[j] = (s[j - 2] - s[j + 2] + (s[j + 1] - s[j - 1]) * 8.0) * inv;
  auto fwd = [&](int j) {
    return (s[j] * -25.0 + s[j + 1] * 48.0 + s[j + 2] * -36.0 + s[j + 3] * 16.0 +
            s[j + 4] * -3.0) * inv;
  };
  auto bwd = [&](int j) {
    return (s[j] * 25.0 + s[j - 1] * -48.0 + s[j - 2] * 36.0 + s[j - 3] * -16.0 +
            s[j - 4] * 3.0) * inv;
  };
  if (n >= 5) {
    out[0] = fwd(0);
    out[1] = fwd(1);
    out[n - 2] = bwd(n - 2);
    out[n - 1] = bwd(n - 1);
  }
  return out;
}

// Tangential projection at a hyperboloid point (|x|^2 = +1).
inline Vec4 project_tangent(const Vec4& w, const Vec4& x) {
  return w - x * mink(w, x);
}

// Hodge-type completion: the unique (up to sign) unit tangent vector
// orthogonal to gamma, e1, e2. Built from 3x3 minors of the component
// matrix; the lowered index is raised with eta = diag(1,-1,-1,-1).
inline Vec4 frame_completion(const Vec4& g, const Vec4& e1, const Vec4& e2) {
  const double m[3][4] = {{g.x0, g.x1, g.x2, g.x3},
                          {e1.x0, e1.x1, e1.x2, e1.x3},
                          {e2.x0, e2.x1, e2.x2, e2.x3}};
  auto minor3 = [&](int skip) {
    double a[3][3];
    for (int r = 0; r < 3; ++r) {
      int cc = 0;
      for (int col = 0; col < 4; ++col) {
        if (col == skip) continue;
        a[r][cc++] = m[r][col];
      }
    }
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  };
  Vec4 low{minor3(0), -minor3(1), minor3(2), -minor3(3)};
  // raise index
  Vec4 up{low.x0, -low.x1, -low.x2, -low.x3};
  const double n2 = -mink(up, up);
  if (!(n2 > 0.0)) throw numeric_error("frenet", "degenerate frame completion");
  return up * (1.0 / std::sqrt(n2));
}

}  // namespace detail

struct FrenetData {
  std::vector<double> kappa;
  std::vector<double> tau;
};

// Geodesic curvature and torsion of a sampled unit-speed curve in H^3.
// Uses periodic stencils when the curve closes, one-sided ones otherwise.
// Throws when the curvature vanishes on the grid (frame undefined).
inline FrenetData frenet_data(const CurveSamples& curve, double kappa_floor = 1e-6) {
  const int n = static_cast<int>(curve.size());
  if (n < 8) throw input_error("frenet_data: need at least 8 samples");
  const double h = curve.dt();

  std::vector<Vec4> g(n);
  for (int j = 0; j < n; ++j) g[j] = curve.points[j].hyperboloid();

  const bool closed = curve.is_closed(1e-4 * curve.T);
  auto d1 = closed ? detail::d1_periodic : detail::d1_open;

  const std::vector<Vec4> gp = d1(g, h);
  std::vector<Vec4> e1(n);
  for (int j = 0; j < n; ++j) {
    const double sp = -mink(gp[j], gp[j]);
    if (!(sp > 0.25))
      throw input_error("frenet_data: curve is not unit-speed on the grid");
    e1[j] = gp[j] * (1.0 / std::sqrt(sp));
  }

  const std::vector<Vec4> e1p = d1(e1, h);
  FrenetData out;
  out.kappa.resize(n);
  out.tau.resize(n);
  std::vector<Vec4> e2(n);
  for (int j = 0; j < n; ++j) {
    const Vec4 k = detail::project_tangent(e1p[j], g[j]);
    const double kn2 = -mink(k, k);
    const double kappa = kn2 > 0.0 ? std::sqrt(kn2) : 0.0;
    out.kappa[j] = kappa;
    if (kappa < kappa_floor)
      throw numeric_error("frenet", "vanishing curvature: Frenet frame undefined");
    e2[j] = k * (1.0 / kappa);
  }

  const std::vector<Vec4> e2p = d1(e2, h);
  for (int j = 0; j < n; ++j) {
    const Vec4 de2 = detail::project_tangent(e2p[j], g[j]);
    const Vec4 e3 = detail::frame_completion(g[j], e1[j], e2[j]);
    out.tau[j] = -mink(de2, e3);
  }
  return out;
}

}  // namespace fingap
