// Simple-factor dressing: evaluation of g_{lambda_*,L}, the dressed
// potential, and the dressed monodromy.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "fingap/config.hpp"
#include "fingap/frame.hpp"
#include "fingap/potential.hpp"
#include "fingap/sl2.hpp"

namespace fingap {

// The pair (lambda_*, L) with non-real pole. Evaluates to the loop
//   g(lambda) = s [ (1-lambda_*/lambda) pi_L + (1-conj(lambda_*)/lambda) pi_L^perp ],
//   s = ((1-lambda_*/lambda)(1-conj(lambda_*)/lambda))^{-1/2},
// normalized to g(infinity) = 1.
struct SimpleFactor {
  cplx lambda_star;
  CPLine line;

  SimpleFactor(cplx ls, const CPLine& L) : lambda_star(ls), line(L) {
    if (std::abs(ls.imag()) < 1e-12 * (1.0 + std::abs(ls)))
      throw input_error("SimpleFactor: pole must not be real");
  }
};

inline Mat2 simple_factor_eval(const SimpleFactor& sf, cplx lambda) {
  const cplx ls = sf.lambda_star;
  const cplx lc = std::conj(ls);
  const double scale = 1.0 + std::abs(ls);
  if (std::abs(lambda) < 1e-13 * scale || std::abs(lambda - ls) < 1e-13 * scale ||
      std::abs(lambda - lc) < 1e-13 * scale)
    throw input_error("simple_factor_eval: evaluation at a pole of the factor");
  const cplx u = 1.0 - ls / lambda;
  const cplx uc = 1.0 - lc / lambda;
  const cplx s = 1.0 / std::sqrt(u * uc);
  const Mat2 pi = hermitian_projection(sf.line);
  const Mat2 pip = Mat2::identity() - pi;
  return (pi * u + pip * uc) * s;
}

// g_{lambda_*,L}^{-1} = g_{lambda_*,L^perp}.
inline SimpleFactor invert_factor(const SimpleFactor& sf) {
  return SimpleFactor(sf.lambda_star, sf.line.perp());
}

struct DressResult {
  Potential potential;
  bool periodicity_warning{false};
  std::vector<double> t;       // sample grid of c
  std::vector<cplx> c;         // dressed potential minus input at the grid
};

// g # q = q + c, with c the upper-right entry of the Hermitian matrix
// 2i(lambda_* - conj lambda_*) pi_{L'(t)}, L'(t) = F(t, lambda_*)^{-1} L.
// c is sampled on the frame grid and re-projected onto modes. When L is an
// eigenline of M(lambda_*) the output is T-periodic; otherwise a periodicity
// warning is attached.
inline DressResult dress_potential(const Potential& q, const SimpleFactor& sf,
                                   const FrameResult& frame_at_star,
                                   const Config& cfg) {
  if (std::abs(frame_at_star.lambda - sf.lambda_star) >
      1e-10 * (1.0 + std::abs(sf.lambda_star)))
    throw input_error("dress_potential: frame was computed at a different lambda");
  const int n = static_cast<int>(frame_at_star.F.size()) - 1;
  const double factor = -4.0 * sf.lambda_star.imag();  // 2i(ls - conj ls)

  std::vector<cplx> c(static_cast<std::size_t>(n + 1));
  std::vector<double> t(static_cast<std::size_t>(n + 1));
  const Vec2 L = sf.line.v();
  for (int j = 0; j <= n; ++j) {
    const Vec2 lp = frame_at_star.F[static_cast<std::size_t>(j)].adjugate().apply(L);
    const double nn = std::norm(lp[0]) + std::norm(lp[1]);
    // upper-right entry of pi_{L'} = v v*/|v|^2
    c[static_cast<std::size_t>(j)] = factor * lp[0] * std::conj(lp[1]) / nn;
    t[static_cast<std::size_t>(j)] = frame_at_star.t[static_cast<std::size_t>(j)];
  }

  std::vector<cplx> dressed(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    dressed[static_cast<std::size_t>(j)] =
        q.evaluate(t[static_cast<std::size_t>(j)]) + c[static_cast<std::size_t>(j)];

  const int K = std::max(q.K(), cfg.dress_modes);
  Potential out = project_to_modes(dressed, q.T(), q.theta(), K);
  out.attach_samples(dressed);

  DressResult res;
  // periodicity: L'(T) = M^{-1} L equals L' (0) = L projectively iff L is an
  // eigenline of the monodromy
  const Vec2 lpT = frame_at_star.M.adjugate().apply(L);
  const CPLine lineT(lpT[0], lpT[1]);
  res.periodicity_warning = !lineT.same_line(sf.line, 1e-7);
  res.potential = std::move(out);
  res.t = std::move(t);
  res.c = std::move(c);
  return res;
}

// g # M = g M g^{-1} evaluated at one spectral value. With eigen_check the
// caller supplies M(lambda_*) and L is verified to be an eigenline of it.
inline Mat2 dressed_monodromy(const Mat2& M_at_lambda, cplx lambda,
                              const SimpleFactor& sf, bool eigen_check = false,
                              const Mat2* M_at_star = nullptr,
                              double tol = 1e-6) {
  if (eigen_check) {
    if (!M_at_star)
      throw input_error("dressed_monodromy: eigen_check needs M(lambda_*)");
    const Vec2 v = sf.line.v();
    const Vec2 Mv = M_at_star->apply(v);
    const cplx mu = std::conj(v[0]) * Mv[0] + std::conj(v[1]) * Mv[1];
    const double res = std::sqrt(std::norm(Mv[0] - mu * v[0]) +
                                 std::norm(Mv[1] - mu * v[1]));
    if (res > tol * M_at_star->frob())
      throw numeric_error("dressing",
                          "L is not an eigenline of M(lambda_*); dressed flow not periodic");
  }
  const Mat2 g = simple_factor_eval(sf, lambda);
  return g * M_at_lambda * g.inverse();
}

}  // namespace fingap
