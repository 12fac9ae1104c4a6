// Closing-condition diagnostics, Newton inversion of the spectral target
// map, and the truncate-Newton-dress pipeline producing closed finite-gap
// potentials.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fingap/config.hpp"
#include "fingap/dressing.hpp"
#include "fingap/frame.hpp"
#include "fingap/potential.hpp"
#include "fingap/spectral.hpp"
#include "fingap/sl2.hpp"

namespace fingap {

struct ClosureReport {
  cplx lambda_star;
  cplx delta;
  cplx delta1;
  int sign{+1};            // nearest admissible value of Delta among +-2
  double m_residual{0.0};  // max over both Sym points of ||M -+ 1||
  int n{0};
  int j0{0};
  bool semisimple{false};
};

// Closing condition at lambda_* = i + theta. The second Sym point is checked
// through the reality identity M(-i+theta) = (conj M(i+theta)^t)^{-1}, so a
// single integration suffices.
inline ClosureReport closure_residual(const Potential& q, double theta,
                                      const Config& cfg) {
  const cplx ls(theta, 1.0);
  const Mat2 M = monodromy(q, ls, cfg);
  const Discriminant disc = discriminant(q, ls, cfg);

  ClosureReport rep;
  rep.lambda_star = ls;
  rep.delta = M.tr();
  rep.delta1 = disc.delta1;
  rep.sign = std::abs(rep.delta - 2.0) <= std::abs(rep.delta + 2.0) ? +1 : -1;
  const Mat2 target = Mat2::identity() * static_cast<double>(rep.sign);
  const Mat2 M_other = M.star().adjugate();  // M(-i+theta) by reality
  rep.m_residual = std::max((M - target).frob(), (M_other - target).frob());
  rep.semisimple = rep.m_residual <= cfg.closure_tol;

  const OrderReport ord = zero_order_at(q, ls, cfg);
  rep.n = ord.n;
  rep.j0 = ord.j0;
  return rep;
}

namespace detail {

// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
template <int N>
std::array<double, N> sym_eigenvalues(std::array<std::array<double, N>, N> A) {
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) off += A[i][j] * A[i][j];
    if (off < 1e-28) break;
    for (int p = 0; p < N; ++p)
      for (int qq = p + 1; qq < N; ++qq) {
        if (std::abs(A[p][qq]) < 1e-300) continue;
        const double phi = 0.5 * std::atan2(2.0 * A[p][qq], A[qq][qq] - A[p][p]);
        const double c = std::cos(phi), s = std::sin(phi);
        for (int k = 0; k < N; ++k) {
          const double akp = A[k][p], akq = A[k][qq];
          A[k][p] = c * akp - s * akq;
          A[k][qq] = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          const double apk = A[p][k], aqk = A[qq][k];
          A[p][k] = c * apk - s * aqk;
          A[qq][k] = s * apk + c * aqk;
        }
      }
  }
  std::array<double, N> ev;
  for (int i = 0; i < N; ++i) ev[static_cast<std::size_t>(i)] = A[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Gaussian elimination with partial pivoting; returns the solution and a
// cheap condition proxy from the pivot spread.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> A,
                                       std::vector<double> b, double* cond_proxy) {
  const int n = static_cast<int>(b.size());
  double pmax = 0.0, pmin = 1e300;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
          std::abs(A[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
        piv = r;
    std::swap(A[static_cast<std::size_t>(col)], A[static_cast<std::size_t>(piv)]);
    std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
    const double d = A[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
    pmax = std::max(pmax, std::abs(d));
    pmin = std::min(pmin, std::abs(d));
    if (std::abs(d) < 1e-300) {
      if (cond_proxy) *cond_proxy = 1e300;
      return b;
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / d;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c)
        A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * A[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c)
      acc -= A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] *
             x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = acc / A[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
  }
  if (cond_proxy) *cond_proxy = pmin > 0.0 ? pmax / pmin : 1e300;
  return x;
}

}  // namespace detail

struct DirectionSelection {
  std::array<Potential, 4> directions;
  double sigma_min{0.0};
  // eta matrix rows: Re dDelta, Im dDelta, Re dDelta', Im dDelta'
  std::array<std::array<double, 4>, 4> eta;
};

// Lemma-4.3-style direction search: low-frequency unit perturbations
// (modes |k| <= 6, real and imaginary amplitudes), scored by the smallest
// singular value of the 4x4 real eta-matrix; the first full-rank quadruple
// wins.
inline DirectionSelection select_directions(const Potential& q, double theta,
                                            const Config& cfg,
                                            double sigma_threshold = 1e-6,
                                            int k_max_cand = 6) {
  const cplx ls(theta, 1.0);
  const double h = cfg.lambda_stencil_h * (1.0 + std::abs(ls));
  const int nsteps = cfg.n_steps % 2 == 0 ? cfg.n_steps : cfg.n_steps + 1;
  const FrameResult fr0 = integrate_frame(q, ls, nsteps);
  const FrameResult frp = integrate_frame(q, ls + h, nsteps);
  const FrameResult frm = integrate_frame(q, ls - h, nsteps);

  std::vector<Potential> cands;
  for (int k = 0; k <= k_max_cand; ++k) {
    const std::vector<int> ks = k == 0 ? std::vector<int>{0} : std::vector<int>{k, -k};
    for (int kk : ks) {
      Potential e(q.T(), theta, std::abs(kk));
      e.set_mode(kk, 1.0);
      cands.push_back(e);
      Potential ei(q.T(), theta, std::abs(kk));
      ei.set_mode(kk, cplx(0.0, 1.0));
      cands.push_back(ei);
    }
  }

  std::vector<std::array<double, 4>> cols(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const cplx dd = directional_derivative_delta(q, ls, cands[i], cfg, &fr0);
    const cplx ddp = directional_derivative_delta(q, ls + h, cands[i], cfg, &frp);
    const cplx ddm = directional_derivative_delta(q, ls - h, cands[i], cfg, &frm);
    const cplx dd1 = (ddp - ddm) / (2.0 * h);
    cols[i] = {dd.real(), dd.imag(), dd1.real(), dd1.imag()};
  }

  double best_sigma = -1.0;
  std::array<std::size_t, 4> best_idx{0, 1, 2, 3};
  const std::size_t nc = cands.size();
  for (std::size_t i1 = 0; i1 < nc; ++i1)
    for (std::size_t i2 = i1 + 1; i2 < nc; ++i2)
      for (std::size_t i3 = i2 + 1; i3 < nc; ++i3)
        for (std::size_t i4 = i3 + 1; i4 < nc; ++i4) {
          const std::array<std::size_t, 4> idx{i1, i2, i3, i4};
          std::array<std::array<double, 4>, 4> G{};
          for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
              double acc = 0.0;
              for (int m = 0; m < 4; ++m)
                acc += cols[idx[static_cast<std::size_t>(r)]][static_cast<std::size_t>(m)] *
                       cols[idx[static_cast<std::size_t>(c)]][static_cast<std::size_t>(m)];
              G[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = acc;
            }
          const auto ev = detail::sym_eigenvalues<4>(G);
          const double sigma = std::sqrt(std::max(0.0, ev[0]));
          if (sigma > best_sigma) {
            best_sigma = sigma;
            best_idx = idx;
          }
          if (sigma > sigma_threshold) {
            DirectionSelection sel{{cands[i1], cands[i2], cands[i3], cands[i4]},
                                   sigma,
                                   {}};
            for (int r = 0; r < 4; ++r)
              for (int c = 0; c < 4; ++c)
                sel.eta[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                    cols[idx[static_cast<std::size_t>(c)]][static_cast<std::size_t>(r)];
            sel.directions = {cands[idx[0]], cands[idx[1]], cands[idx[2]], cands[idx[3]]};
            return sel;
          }
        }
  throw numeric_error("directions",
                      "no full-rank direction quadruple found; best sigma_min = " +
                          std::to_string(best_sigma));
}

// z^{(n)}: keep z_k for |k| <= n, zero beyond; in real mode the conjugate
// symmetry z_{-k} = conj(z_k) is enforced on the kept coefficients.
inline std::map<int, cplx> truncate_coeffs(const std::vector<SpectralSample>& samples,
                                           int n, bool real_mode = false) {
  std::map<int, cplx> z;
  for (const auto& s : samples) z[s.k] = std::abs(s.k) <= n ? s.z : cplx(0.0);
  if (real_mode) {
    for (auto& [k, v] : z) {
      if (k <= 0) continue;
      const auto it = z.find(-k);
      if (it != z.end()) {
        const cplx sym = 0.5 * (v + std::conj(it->second));
        v = sym;
        it->second = std::conj(sym);
      }
    }
  }
  return z;
}

enum class SpaceForm { H3, R2, S2, H2 };

// The finite-dimensional truncation of the spectral target map. Fixed low
// modes |k| <= N of the base potential are never touched; the free
// coordinates are the modes N < |k| <= K plus four direction amplitudes
// placed on the modes +-(K+1), outside both the fixed and the targeted
// bands. Targets: z_k for N < |k| <= K, Delta(lambda_*) = +-2,
// Delta'(lambda_*) = 0.
struct NewtonTarget {
  int N_fixed{0};
  int K{0};
  std::map<int, cplx> z_targets;  // keys N < |k| <= K (k > 0 only in real mode)
  cplx delta_target{2.0};
  bool with_closure{true};
  bool real_mode{false};
  double theta{0.0};
};

struct NewtonResult {
  Potential q;
  int iterations{0};
  std::vector<double> residual_history;  // 2-norms, including the initial one
  double final_residual{0.0};            // max-norm
  bool converged{false};
};

namespace detail {

struct NewtonWork {
  const NewtonTarget* tgt;
  const Config* cfg;
  double T;
  cplx lambda_star;

  // last free mode: K for the truncation-only map, K+1 (the direction
  // amplitudes) when the closing rows are present
  int k_top() const { return tgt->with_closure ? tgt->K + 1 : tgt->K; }

  std::vector<int> band() const {
    std::vector<int> ks;
    for (int k = tgt->N_fixed + 1; k <= tgt->K; ++k) ks.push_back(k);
    return ks;
  }

  Potential apply(const Potential& base, const std::vector<double>& x) const {
    Potential q = base;
    std::size_t i = 0;
    for (int k = tgt->N_fixed + 1; k <= k_top(); ++k) {
      if (tgt->real_mode) {
        const cplx u(x[i], x[i + 1]);
        i += 2;
        q.set_mode(k, u);
        q.set_mode(-k, std::conj(u));
      } else {
        q.set_mode(k, cplx(x[i], x[i + 1]));
        q.set_mode(-k, cplx(x[i + 2], x[i + 3]));
        i += 4;
      }
    }
    return q;
  }

  std::vector<double> pack(const Potential& q) const {
    std::vector<double> x;
    for (int k = tgt->N_fixed + 1; k <= k_top(); ++k) {
      const cplx mk = q.mode(k);
      x.push_back(mk.real());
      x.push_back(mk.imag());
      if (!tgt->real_mode) {
        const cplx mm = q.mode(-k);
        x.push_back(mm.real());
        x.push_back(mm.imag());
      }
    }
    return x;
  }

  std::vector<double> residual(const Potential& q, std::map<int, cplx>& warm) const {
    std::vector<double> r;
    const auto ks = band();
    if (!ks.empty()) {
      // One symmetric range per evaluation: root labels for +k and -k are
      // then assigned inside a single matching and cannot collide.
      const std::vector<SpectralSample> smp =
          tgt->real_mode
              ? perturbed_coeffs(q, ks.front(), ks.back(), *cfg, &warm)
              : perturbed_coeffs(q, -ks.back(), ks.back(), *cfg, &warm);
      std::map<int, cplx> z;
      for (const auto& s : smp) {
        warm[s.k] = s.lambda;
        z[s.k] = s.z;
      }
      for (int k : ks) {
        const cplx d = z[k] - tgt->z_targets.at(k);
        r.push_back(d.real());
        r.push_back(d.imag());
        if (!tgt->real_mode) {
          const cplx dm = z[-k] - tgt->z_targets.at(-k);
          r.push_back(dm.real());
          r.push_back(dm.imag());
        }
      }
    }
    if (tgt->with_closure) {
      const Discriminant disc = discriminant(q, lambda_star, *cfg);
      const cplx d0 = disc.delta;
      const cplx d1 = disc.delta1;
      if (tgt->real_mode) {
        // for real potentials Delta is real and Delta' imaginary on i + R
        r.push_back((d0 - tgt->delta_target).real());
        r.push_back(d1.imag());
      } else {
        const cplx dd = d0 - tgt->delta_target;
        r.push_back(dd.real());
        r.push_back(dd.imag());
        r.push_back(d1.real());
        r.push_back(d1.imag());
      }
    }
    return r;
  }
};

inline double norm2(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}
inline double norm_inf(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc = std::max(acc, std::abs(x));
  return acc;
}

}  // namespace detail

// Damped Newton on the truncated target map. Low modes |k| <= N of q0 are
// preserved bit-identically. The Jacobian is built column by column from
// forward differences; columns are independent integrations and run through
// the deterministic parallel map.
inline NewtonResult newton_close(const NewtonTarget& target, const Potential& q0,
                                 const Config& cfg) {
  detail::NewtonWork work;
  work.tgt = &target;
  work.cfg = &cfg;
  work.T = q0.T();
  work.lambda_star = cplx(target.theta, 1.0);
  if (target.K < target.N_fixed + 1)
    throw input_error("newton_close: need K >= N+1");

  // consistency of the target keys
  for (int k = target.N_fixed + 1; k <= target.K; ++k) {
    if (!target.z_targets.count(k) ||
        (!target.real_mode && !target.z_targets.count(-k)))
      throw input_error("newton_close: missing z target for band mode " +
                        std::to_string(k));
  }

  const Potential base = q0;
  std::vector<double> x = work.pack(base);
  const int dim = static_cast<int>(x.size());

  auto apply_x = [&](const std::vector<double>& xv) { return work.apply(base, xv); };

  std::map<int, cplx> warm;
  std::vector<double> r = work.residual(q0, warm);
  if (static_cast<int>(r.size()) != dim)
    throw numeric_error("newton", "residual/unknown dimension mismatch");

  NewtonResult out;
  out.residual_history.push_back(detail::norm2(r));
  out.q = q0;
  out.final_residual = detail::norm_inf(r);
  if (out.final_residual <= cfg.newton_tol) {
    out.converged = true;
    return out;
  }

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    // forward-difference Jacobian, one column per free coordinate
    std::function<std::vector<double>(int)> column = [&](int i) {
      std::vector<double> xp = x;
      const double h = 1e-6 * std::max(1.0, std::abs(xp[static_cast<std::size_t>(i)]));
      xp[static_cast<std::size_t>(i)] += h;
      std::map<int, cplx> w = warm;
      std::vector<double> rp = work.residual(apply_x(xp), w);
      for (int j = 0; j < dim; ++j)
        rp[static_cast<std::size_t>(j)] =
            (rp[static_cast<std::size_t>(j)] - r[static_cast<std::size_t>(j)]) / h;
      return rp;
    };
    const auto cols = parallel_map<std::vector<double>>(dim, cfg.threads, column);

    std::vector<std::vector<double>> J(static_cast<std::size_t>(dim),
                                       std::vector<double>(static_cast<std::size_t>(dim)));
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        J[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
            cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

    std::vector<double> rhs(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) rhs[static_cast<std::size_t>(j)] = -r[static_cast<std::size_t>(j)];
    double cond = 0.0;
    const std::vector<double> s = detail::solve_dense(J, rhs, &cond);
    if (cond > 1e12)
      throw numeric_error("newton", "Jacobian singular (pivot-ratio condition " +
                                        std::to_string(cond) + ")");

    const double rn = detail::norm2(r);
    double step = 1.0;
    bool accepted = false;
    std::vector<double> x_try, r_try;
    std::map<int, cplx> warm_try;
    for (int bt = 0; bt < 9; ++bt) {
      x_try = x;
      for (int i = 0; i < dim; ++i)
        x_try[static_cast<std::size_t>(i)] += step * s[static_cast<std::size_t>(i)];
      warm_try = warm;
      r_try = work.residual(apply_x(x_try), warm_try);
      if (detail::norm2(r_try) <= (1.0 - 0.25 * step) * rn) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw numeric_error("newton", "line search stalled at iteration " +
                                        std::to_string(iter));
    x = x_try;
    r = r_try;
    warm = warm_try;
    out.iterations = iter;
    out.residual_history.push_back(detail::norm2(r));
    out.final_residual = detail::norm_inf(r);
    if (out.final_residual <= cfg.newton_tol) {
      out.converged = true;
      break;
    }
  }
  if (!out.converged)
    throw numeric_error("newton", "max_iter exceeded (final residual " +
                                      std::to_string(out.final_residual) + ")");
  out.q = apply_x(x);
  return out;
}

struct PipelineResult {
  Potential q_n;
  ClosureReport closure_in;
  ClosureReport closure_out;
  OrderReport order_in;
  NewtonResult newton;
  bool undressed{false};
  bool redressed{false};
  double l2_to_input{0.0};
};

namespace detail {

inline std::vector<SpectralSample> band_coeffs(const Potential& q, int N, int K,
                                               bool positive_only, const Config& cfg) {
  const std::vector<SpectralSample> all =
      positive_only ? perturbed_coeffs(q, N + 1, K, cfg)
                    : perturbed_coeffs(q, -K, K, cfg);
  std::vector<SpectralSample> out;
  for (const auto& s : all)
    if (std::abs(s.k) > N) out.push_back(s);
  return out;
}

}  // namespace detail

// Truncate-Newton-dress pipeline after the density construction: undress at
// the Baker-Akhiezer eigenline, truncate the perturbed Fourier coefficients,
// Newton back onto the closing targets, re-dress at the new Baker-Akhiezer
// eigenline. In the degenerate n = 2 j0 case (leading coefficient
// invertible) the undressing is skipped and the post-Newton report decides
// whether a repair dressing is needed.
inline PipelineResult finite_gap_approximate(const Potential& q, double theta, int n,
                                             const Config& cfg,
                                             SpaceForm form = SpaceForm::H3) {
  const bool real_mode = form != SpaceForm::H3;
  if (real_mode && !q.is_real(1e-7))
    throw input_error("finite_gap_approximate: non-real input for a 2D space form");
  if (real_mode && std::abs(theta) > 1e-12)
    throw input_error("finite_gap_approximate: real pipeline needs theta = 0");

  PipelineResult res;
  const cplx ls(theta, 1.0);
  const bool with_closure = form == SpaceForm::H3 || form == SpaceForm::H2;

  Potential work = q;
  std::optional<CPLine> undress_line;

  if (with_closure) {
    res.closure_in = closure_residual(q, theta, cfg);
    if (!res.closure_in.semisimple ||
        std::abs(res.closure_in.delta - 2.0 * static_cast<double>(res.closure_in.sign)) >
            10.0 * cfg.closure_tol)
      throw numeric_error("pipeline", "input fails closing condition");

    res.order_in = zero_order_at(q, ls, cfg);
    const bool degenerate = !res.order_in.nilpotent;
    if (!(degenerate && cfg.degenerate_skip_undress)) {
      CPLine L = baker_akhiezer_line(res.order_in);
      if (real_mode && !L.is_real(1e-6))
        throw numeric_error("pipeline", "Baker-Akhiezer line left RP^1 on real input");
      undress_line = L;
      const FrameResult fr = integrate_frame(q, ls, cfg.n_steps);
      const SimpleFactor undress(ls, L.perp());
      DressResult dr = dress_potential(q, undress, fr, cfg);
      if (dr.periodicity_warning)
        throw numeric_error("pipeline", "undressing produced a non-periodic potential");
      if (real_mode && !dr.potential.is_real(1e-6))
        throw numeric_error("pipeline", "undressed potential lost realness");
      work = std::move(dr.potential);
      res.undressed = true;
    }
  }

  // spectral targets of the (possibly undressed) potential
  const int K = n + cfg.K_margin;
  const int N = cfg.N_fixed;
  const std::vector<SpectralSample> smp =
      detail::band_coeffs(work, N, K, real_mode, cfg);
  NewtonTarget tgt;
  tgt.N_fixed = N;
  tgt.K = K;
  tgt.z_targets = truncate_coeffs(smp, n, real_mode);
  tgt.with_closure = with_closure;
  tgt.real_mode = real_mode;
  tgt.theta = theta;
  tgt.delta_target = with_closure ? cplx(2.0 * res.closure_in.sign, 0.0) : cplx(0.0);

  res.newton = newton_close(tgt, work, cfg);
  Potential closed = res.newton.q;

  if (with_closure) {
    OrderReport ord_out = zero_order_at(closed, ls, cfg);
    const bool skip_redress = !res.undressed && ord_out.j0 >= 1;
    if (!skip_redress) {
      CPLine Ln = baker_akhiezer_line(ord_out);
      if (real_mode && !Ln.is_real(1e-6))
        throw numeric_error("pipeline", "re-dressing line left RP^1 on real input");
      const FrameResult fr = integrate_frame(closed, ls, cfg.n_steps);
      const SimpleFactor redress(ls, Ln);
      DressResult dr = dress_potential(closed, redress, fr, cfg);
      if (dr.periodicity_warning)
        throw numeric_error("pipeline", "re-dressing produced a non-periodic potential");
      closed = std::move(dr.potential);
      res.redressed = true;
    }
    res.closure_out = closure_residual(closed, theta, cfg);
    if (!res.closure_out.semisimple)
      throw numeric_error("pipeline", "output monodromy is not semisimple");
  }

  if (real_mode) {
    if (!closed.is_real(1e-7))
      throw numeric_error("pipeline", "realness drift beyond tolerance");
    // flush the conjugate-symmetry dust
    for (int k = 1; k <= closed.K(); ++k) {
      const cplx sym = 0.5 * (closed.mode(k) + std::conj(closed.mode(-k)));
      closed.set_mode(k, sym);
      closed.set_mode(-k, std::conj(sym));
    }
    closed.set_mode(0, cplx(closed.mode(0).real(), 0.0));
  }

  res.q_n = std::move(closed);
  res.l2_to_input = l2_distance(res.q_n, q);
  return res;
}

// Real pipeline for the 2-dimensional space forms. H2 runs the full
// truncate-Newton-dress loop with real projective lines; R2 and S2 run the
// truncation-Newton stage only, with conjugate-symmetric targets.
inline PipelineResult finite_gap_approximate_real(const Potential& q, SpaceForm form,
                                                  int n, const Config& cfg) {
  if (form == SpaceForm::H3)
    throw input_error("finite_gap_approximate_real: use finite_gap_approximate for H3");
  if (!q.is_real(1e-9))
    throw input_error("finite_gap_approximate_real: input potential is not real");
  return finite_gap_approximate(q, 0.0, n, cfg, form);
}

}  // namespace fingap
