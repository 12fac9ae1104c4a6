// Extended-frame integration dF/dt = F alpha(t,lambda), monodromy,
// discriminant and Floquet multipliers.
#pragma once

#include <cmath>
#include <vector>

#include "fingap/config.hpp"
#include "fingap/potential.hpp"
#include "fingap/sl2.hpp"

namespace fingap {

// alpha^q(t,lambda) = (1/2)(lambda eps + q eps_+ + conj(q) eps_-).
inline Mat2 alpha(const Potential& q, double t, cplx lambda) {
  const cplx qt = q.evaluate(t);
  const cplx il = cplx(0.0, 0.5) * lambda;
  return {il, 0.5 * qt, -0.5 * std::conj(qt), -il};
}

struct FrameResult {
  cplx lambda;
  double T{0.0};
  std::vector<double> t;       // t_j = j*T/n, j = 0..n
  std::vector<Mat2> F;         // F(t_j, lambda), F[0] = 1
  Mat2 M;                      // monodromy F(T, lambda)
  double det_drift{0.0};       // max_j |det F_j - 1|, never renormalized
};

// 4th-order commutator-free Magnus integrator on the right-invariant
// equation. Each step is a product of two exact sl2 exponentials sampled at
// the Gauss-Legendre nodes, so det F and the reality condition hold to
// rounding by construction; determinant drift stays a diagnostic.
inline FrameResult integrate_frame(const Potential& q, cplx lambda, int n_steps) {
  if (n_steps < 8) throw input_error("integrate_frame: step count too small");
  const double T = q.T();
  const double h = T / n_steps;
  const double r3 = std::sqrt(3.0);
  const double c1 = 0.5 - r3 / 6.0, c2 = 0.5 + r3 / 6.0;
  const double wa = 0.25 + r3 / 6.0, wb = 0.25 - r3 / 6.0;

  FrameResult out;
  out.lambda = lambda;
  out.T = T;
  out.t.resize(static_cast<std::size_t>(n_steps) + 1);
  out.F.resize(static_cast<std::size_t>(n_steps) + 1);
  out.F[0] = Mat2::identity();
  out.t[0] = 0.0;

  Mat2 F = Mat2::identity();
  double drift = 0.0;
  for (int j = 0; j < n_steps; ++j) {
    const double t0 = j * h;
    const Mat2 a1 = alpha(q, t0 + c1 * h, lambda);
    const Mat2 a2 = alpha(q, t0 + c2 * h, lambda);
    const Mat2 g1 = exp_tracefree((a1 * wa + a2 * wb) * h);
    const Mat2 g2 = exp_tracefree((a1 * wb + a2 * wa) * h);
    F = F * g1 * g2;
    const double fn = F.frob();
    if (!std::isfinite(fn) || fn > 1e150)
      throw numeric_error("frame", "integration overflow (|Im lambda| too large?)");
    out.t[static_cast<std::size_t>(j) + 1] = (j + 1) * h;
    out.F[static_cast<std::size_t>(j) + 1] = F;
    drift = std::max(drift, std::abs(F.det() - 1.0));
  }
  out.M = F;
  out.det_drift = drift;
  return out;
}

inline Mat2 monodromy(const Potential& q, cplx lambda, const Config& cfg) {
  return integrate_frame(q, lambda, cfg.n_steps).M;
}

namespace detail {

// Differential of the closed-form tracefree exponential at X applied to dX:
//   d exp(X) = sinc(w) dX + ( g(w) X - sinc(w) 1 ) * tr(adj(X) dX) / 2,
// with w^2 = det X and g(w) = sinc'(w)/w, both even in w (branch-free).
inline Mat2 dexp_tracefree(const Mat2& X, const Mat2& dX) {
  const cplx w2 = X.det();
  const cplx w = std::sqrt(w2);
  const cplx s = sinc(w);
  cplx g;
  if (std::abs(w) < 1e-3) {
    g = -(1.0 / 3.0) + w2 / 30.0 * (1.0 - w2 * (3.0 / 56.0));
  } else {
    g = (std::cos(w) - s) / w2;
  }
  const cplx half_ddet = 0.5 * (X.adjugate() * dX).tr();
  return dX * s + (X * g - Mat2::identity() * s) * half_ddet;
}

}  // namespace detail

struct MonodromyDerivative {
  Mat2 M;
  Mat2 dM;  // dM/dlambda
};

// Monodromy together with its exact lambda-derivative: the integrator's
// update F -> F e^{X1} e^{X2} is differentiated in lambda term by term
// (dX_i = (h/4) eps), so dM carries no stencil noise.
inline MonodromyDerivative monodromy_with_derivative(const Potential& q, cplx lambda,
                                                     int n_steps) {
  if (n_steps < 8) throw input_error("monodromy_with_derivative: step count too small");
  const double T = q.T();
  const double h = T / n_steps;
  const double r3 = std::sqrt(3.0);
  const double c1 = 0.5 - r3 / 6.0, c2 = 0.5 + r3 / 6.0;
  const double wa = 0.25 + r3 / 6.0, wb = 0.25 - r3 / 6.0;
  const Mat2 dX = kEps * (h / 4.0);

  Mat2 F = Mat2::identity();
  Mat2 dF = Mat2::zero();
  for (int j = 0; j < n_steps; ++j) {
    const double t0 = j * h;
    const Mat2 a1 = alpha(q, t0 + c1 * h, lambda);
    const Mat2 a2 = alpha(q, t0 + c2 * h, lambda);
    const Mat2 X1 = (a1 * wa + a2 * wb) * h;
    const Mat2 X2 = (a1 * wb + a2 * wa) * h;
    const Mat2 E1 = exp_tracefree(X1);
    const Mat2 E2 = exp_tracefree(X2);
    const Mat2 dS = detail::dexp_tracefree(X1, dX) * E2 + E1 * detail::dexp_tracefree(X2, dX);
    dF = dF * (E1 * E2) + F * dS;
    F = F * E1 * E2;
    if (!std::isfinite(F.frob()) || F.frob() > 1e150)
      throw numeric_error("frame", "integration overflow (|Im lambda| too large?)");
  }
  return {F, dF};
}

struct Discriminant {
  cplx delta;
  cplx delta1;
  cplx delta2;
};

// Delta = tr M and its lambda-derivatives by 5-point central stencils
// (4th order; Delta is entire, so the step is limited only by rounding).
inline Discriminant discriminant(const Potential& q, cplx lambda, const Config& cfg) {
  const double h = cfg.lambda_stencil_h * (1.0 + std::abs(lambda));
  const cplx d0 = monodromy(q, lambda, cfg).tr();
  const cplx dp = monodromy(q, lambda + h, cfg).tr();
  const cplx dm = monodromy(q, lambda - h, cfg).tr();
  const cplx dp2 = monodromy(q, lambda + 2.0 * h, cfg).tr();
  const cplx dm2 = monodromy(q, lambda - 2.0 * h, cfg).tr();
  return {d0, (8.0 * (dp - dm) - (dp2 - dm2)) / (12.0 * h),
          (-dp2 + 16.0 * dp - 30.0 * d0 + 16.0 * dm - dm2) / (12.0 * h * h)};
}

// Floquet multiplier mu = (Delta + sheet*sqrt(Delta^2-4))/2.
inline cplx floquet_mu(cplx delta, int sheet) {
  const cplx s = std::sqrt(delta * delta - 4.0);
  return 0.5 * (delta + static_cast<double>(sheet) * s);
}

// Sheet carrying |mu| >= 1 at this point.
inline int dominant_sheet(cplx delta) {
  return std::abs(floquet_mu(delta, +1)) >= 1.0 ? +1 : -1;
}

// mu along a lambda-path keeping continuity: the branch of the square root
// is flipped whenever that gives the smaller jump from the previous value.
inline std::vector<cplx> mu_along_path(const std::vector<cplx>& deltas, int sheet0) {
  std::vector<cplx> mus;
  mus.reserve(deltas.size());
  int sheet = sheet0;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    cplx m = floquet_mu(deltas[i], sheet);
    if (i > 0) {
      const cplx other = floquet_mu(deltas[i], -sheet);
      if (std::abs(other - mus.back()) < std::abs(m - mus.back())) {
        sheet = -sheet;
        m = other;
      }
    }
    mus.push_back(m);
  }
  return mus;
}

struct DiagnosticRow {
  cplx lambda;
  cplx delta;
  double det_drift;
};

// One row per lambda: the CSV dump of the frame module.
inline std::vector<DiagnosticRow> diagnostic_scan(const Potential& q,
                                                  const std::vector<cplx>& lambdas,
                                                  const Config& cfg) {
  std::function<DiagnosticRow(int)> eval = [&](int i) {
    const FrameResult fr = integrate_frame(q, lambdas[static_cast<std::size_t>(i)],
                                           cfg.n_steps);
    return DiagnosticRow{fr.lambda, fr.M.tr(), fr.det_drift};
  };
  return parallel_map<DiagnosticRow>(static_cast<int>(lambdas.size()), cfg.threads,
                                     eval);
}

}  // namespace fingap
