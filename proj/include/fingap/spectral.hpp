// Spectral data of the monodromy: roots of a-d, perturbed Fourier
// coefficients, eigenprojectors, directional derivatives of the
// discriminant, zero orders at lambda_* and the Baker-Akhiezer eigenline.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "fingap/config.hpp"
#include "fingap/frame.hpp"
#include "fingap/potential.hpp"
#include "fingap/sl2.hpp"

namespace fingap {

struct SpectralSample {
  int k{0};
  cplx lambda;
  cplx z;
  bool rescued{false};  // assigned by the global sweep, not the local search
};

struct EigenData {
  cplx lambda;
  cplx mu;
  Vec2 v;  // right eigenvector of M
  Vec2 w;  // right eigenvector of M^t
  Mat2 P;  // v w^t / (w^t v)
};

struct OrderReport {
  cplx lambda_star;
  int n{0};               // order of the zero of Delta^2 - 4
  int j0{0};              // order of the zero of N = M - (1/2) Delta 1
  Mat2 N_tilde;           // leading Taylor coefficient of N at lambda_*
  bool nilpotent{false};  // |det N_tilde| below the noise floor
  double noise_floor{0.0};
  std::optional<CPLine> ba_line;
};

namespace detail {

inline cplx a_minus_d(const Potential& q, cplx lambda, const Config& cfg) {
  const Mat2 M = monodromy(q, lambda, cfg);
  return M.a - M.d;
}

// Total argument increment / 2pi along a closed loop of nonzero values.
inline double winding_of_values(const std::vector<cplx>& f) {
  double acc = 0.0;
  const std::size_t n = f.size();
  for (std::size_t j = 0; j < n; ++j)
    acc += std::arg(f[(j + 1) % n] / f[j]);
  return acc / (2.0 * kPi);
}

struct Rect {
  double re0, re1, im0, im1;
  double width() const { return re1 - re0; }
  double height() const { return im1 - im0; }
  cplx center() const { return {0.5 * (re0 + re1), 0.5 * (im0 + im1)}; }
  bool contains(cplx z, double pad = 0.0) const {
    return z.real() >= re0 - pad && z.real() <= re1 + pad &&
           z.imag() >= im0 - pad && z.imag() <= im1 + pad;
  }
};

template <typename F>
int rect_winding(const Rect& r, F&& eval, int samples_per_side) {
  std::vector<cplx> vals;
  vals.reserve(static_cast<std::size_t>(4 * samples_per_side));
  const int m = samples_per_side;
  double fmin = 1e300, fmax = 0.0;
  auto push = [&](cplx z) {
    const cplx f = eval(z);
    const double af = std::abs(f);
    fmin = std::min(fmin, af);
    fmax = std::max(fmax, af);
    vals.push_back(f);
  };
  for (int j = 0; j < m; ++j) push({r.re0 + r.width() * j / m, r.im0});
  for (int j = 0; j < m; ++j) push({r.re1, r.im0 + r.height() * j / m});
  for (int j = 0; j < m; ++j) push({r.re1 - r.width() * j / m, r.im1});
  for (int j = 0; j < m; ++j) push({r.re0, r.im1 - r.height() * j / m});
  if (fmin < 1e-11 * (1.0 + fmax))
    throw numeric_error("rootfind", "root on winding contour");
  const double w = winding_of_values(vals);
  const int wi = static_cast<int>(std::lround(w));
  if (std::abs(w - wi) > 0.2)
    throw numeric_error("rootfind", "non-integer winding number: contour radius misconfigured");
  return wi;
}

// Winding with small deterministic inflations when a root sits on the contour.
template <typename F>
int rect_winding_robust(const Rect& r, F&& eval, int samples_per_side) {
  double grow = 1.0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Rect rr = r;
    const double dw = 0.5 * r.width() * (grow - 1.0);
    const double dh = 0.5 * r.height() * (grow - 1.0);
    rr.re0 -= dw; rr.re1 += dw; rr.im0 -= dh; rr.im1 += dh;
    try {
      return rect_winding(rr, eval, samples_per_side);
    } catch (const numeric_error&) {
      grow *= 1.0371;
    }
  }
  return rect_winding(r, eval, samples_per_side);
}

struct NewtonRootResult {
  cplx lambda;
  bool converged{false};
};

template <typename F>
NewtonRootResult newton_root(F&& eval, cplx seed, double leash, int max_iter = 40) {
  cplx z = seed;
  cplx f = eval(z);
  for (int it = 0; it < max_iter; ++it) {
    const double h = 1e-5 * (1.0 + std::abs(z));
    const cplx fp = (eval(z + h) - eval(z - h)) / (2.0 * h);
    if (std::abs(fp) < 1e-14 * (1.0 + std::abs(f))) return {z, false};
    const cplx step = f / fp;
    z -= step;
    if (std::abs(z - seed) > leash) return {z, false};
    f = eval(z);
    if (std::abs(f) < 1e-12 && std::abs(step) < 1e-10 * (1.0 + std::abs(z)))
      return {z, true};
  }
  return {z, std::abs(f) < 1e-10};
}

// Subdivide a rectangle known to hold exactly one root until it is small,
// then polish by Newton.
template <typename F>
cplx isolate_single_root(Rect r, F&& eval, int samples_per_side, int depth = 0) {
  if (r.width() < 1e-7 && r.height() < 1e-7) {
    const NewtonRootResult nr = newton_root(eval, r.center(), 1e-3);
    if (nr.converged) return nr.lambda;
    return r.center();
  }
  if (depth > 48) throw numeric_error("rootfind", "root isolation depth exceeded");
  // try a Newton shortcut from the center first
  const NewtonRootResult nr = newton_root(eval, r.center(),
                                          2.0 * (r.width() + r.height()));
  if (nr.converged && r.contains(nr.lambda, 1e-9)) return nr.lambda;
  const double fs = 0.51787;  // off-center split dodges roots on cut lines
  std::vector<Rect> parts;
  if (r.width() >= r.height()) {
    const double cut = r.re0 + fs * r.width();
    parts.push_back({r.re0, cut, r.im0, r.im1});
    parts.push_back({cut, r.re1, r.im0, r.im1});
  } else {
    const double cut = r.im0 + fs * r.height();
    parts.push_back({r.re0, r.re1, r.im0, cut});
    parts.push_back({r.re0, r.re1, cut, r.im1});
  }
  for (const Rect& p : parts) {
    if (rect_winding_robust(p, eval, samples_per_side) == 1)
      return isolate_single_root(p, eval, samples_per_side, depth + 1);
  }
  throw numeric_error("rootfind", "winding lost during isolation");
}

// All roots inside a rectangle, by recursive winding subdivision.
template <typename F>
void collect_roots(Rect r, F&& eval, int samples_per_side, std::vector<cplx>& out,
                   int depth = 0) {
  const int w = rect_winding_robust(r, eval, samples_per_side);
  if (w == 0) return;
  if (w == 1) {
    out.push_back(isolate_single_root(r, eval, samples_per_side));
    return;
  }
  if (depth > 48) throw numeric_error("rootfind", "root sweep depth exceeded");
  const double fs = 0.51787;
  std::vector<Rect> parts;
  if (r.width() >= r.height()) {
    const double cut = r.re0 + fs * r.width();
    parts.push_back({r.re0, cut, r.im0, r.im1});
    parts.push_back({cut, r.re1, r.im0, r.im1});
  } else {
    const double cut = r.im0 + fs * r.height();
    parts.push_back({r.re0, r.re1, r.im0, cut});
    parts.push_back({r.re0, r.re1, cut, r.im1});
  }
  for (const Rect& p : parts) collect_roots(p, eval, samples_per_side, out, depth + 1);
}

}  // namespace detail

// Roots of a - d near the seeds lambda_{k,0} = 2 pi k / T. Newton from the
// seed first, then an argument-principle disc around the seed, then a global
// sweep of the band assigning leftover roots to leftover seeds by distance.
inline std::vector<SpectralSample> find_lambda_k(
    const Potential& q, int k_min, int k_max, const Config& cfg,
    const std::map<int, cplx>* warm_seeds = nullptr) {
  if (k_min > k_max) throw input_error("find_lambda_k: empty k range");
  const double T = q.T();
  const double spacing = 2.0 * kPi / T;
  const double window = cfg.root_window_scale * kPi / T;
  auto eval = [&](cplx z) { return detail::a_minus_d(q, z, cfg); };

  std::vector<SpectralSample> out;
  std::vector<int> pending;
  for (int k = k_min; k <= k_max; ++k) {
    const cplx seed = warm_seeds && warm_seeds->count(k)
                          ? warm_seeds->at(k)
                          : cplx(spacing * k, 0.0);
    const double leash = warm_seeds && warm_seeds->count(k) ? 0.45 * spacing
                                                            : 4.0 * window;
    const detail::NewtonRootResult nr = detail::newton_root(eval, seed, leash);
    if (nr.converged && std::abs(nr.lambda - seed) <= (warm_seeds && warm_seeds->count(k)
                                                           ? 0.45 * spacing
                                                           : window)) {
      out.push_back({k, nr.lambda, cplx(0.0), false});
    } else {
      pending.push_back(k);
    }
  }

  // argument-principle disc (as a square of the same half-width) per seed
  std::vector<int> still_pending;
  const int side_samples = std::max(16, cfg.winding_samples / 4);
  for (int k : pending) {
    const double s0 = spacing * k;
    detail::Rect r{s0 - window, s0 + window, -window, window};
    int w = 0;
    try {
      w = detail::rect_winding_robust(r, eval, side_samples);
    } catch (const numeric_error&) {
      still_pending.push_back(k);
      continue;
    }
    if (w == 1) {
      out.push_back({k, detail::isolate_single_root(r, eval, side_samples), false});
    } else {
      still_pending.push_back(k);
    }
  }

  // Global rescue sweep for seeds whose local search failed: find every root
  // in a padded band, then match unclaimed roots against all integer seeds
  // inside the band (including unrequested "phantom" neighbors, so that a
  // displaced ladder cannot steal a neighbor's root), greedily by distance.
  if (!still_pending.empty()) {
    const double pad = 1.5 * spacing;
    detail::Rect band{spacing * k_min - pad, spacing * k_max + pad,
                      -cfg.root_rescue_im, cfg.root_rescue_im};
    std::vector<cplx> roots;
    detail::collect_roots(band, eval, side_samples, roots);

    std::vector<cplx> leftover;
    for (cplx r : roots) {
      bool taken = false;
      for (const auto& s : out)
        if (std::abs(r - s.lambda) < 1e-6) { taken = true; break; }
      if (!taken) leftover.push_back(r);
    }
    std::sort(leftover.begin(), leftover.end(), [](cplx a, cplx b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });

    std::vector<int> claimants;
    const int kk_lo = static_cast<int>(std::ceil(band.re0 / spacing));
    const int kk_hi = static_cast<int>(std::floor(band.re1 / spacing));
    for (int kk = kk_lo; kk <= kk_hi; ++kk) {
      bool resolved = false;
      for (const auto& s : out)
        if (s.k == kk) { resolved = true; break; }
      if (!resolved) claimants.push_back(kk);
    }

    std::map<int, cplx> assigned;
    std::vector<bool> root_used(leftover.size(), false);
    std::vector<bool> seed_used(claimants.size(), false);
    for (std::size_t round = 0; round < std::min(leftover.size(), claimants.size());
         ++round) {
      double best = 1e300;
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < leftover.size(); ++i) {
        if (root_used[i]) continue;
        for (std::size_t j = 0; j < claimants.size(); ++j) {
          if (seed_used[j]) continue;
          const double d = std::abs(leftover[i] - cplx(spacing * claimants[j], 0.0));
          if (d < best - 1e-12) {
            best = d;
            bi = i;
            bj = j;
          }
        }
      }
      root_used[bi] = true;
      seed_used[bj] = true;
      assigned[claimants[bj]] = leftover[bi];
    }

    for (int k : still_pending) {
      const auto it = assigned.find(k);
      if (it == assigned.end())
        throw numeric_error("rootfind",
                            "root localization failed for k=" + std::to_string(k) +
                                ": no unclaimed root in the band (seed Re " +
                                std::to_string(spacing * k) + ", window " +
                                std::to_string(window) + ")");
      out.push_back({k, it->second, true});
    }
  }

  std::sort(out.begin(), out.end(),
            [](const SpectralSample& a, const SpectralSample& b) { return a.k < b.k; });
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (std::abs(out[i].lambda - out[j].lambda) < 1e-8)
        throw numeric_error("rootfind", "duplicate roots for k=" +
                                            std::to_string(out[i].k) + " and k=" +
                                            std::to_string(out[j].k));
  return out;
}

// z_k = 2 (-1)^k b(lambda_k) with b the upper-right entry of the monodromy.
inline std::vector<SpectralSample> perturbed_coeffs(const Potential& q, int k_min,
                                                    int k_max, const Config& cfg,
                                                    const std::map<int, cplx>* warm =
                                                        nullptr) {
  std::vector<SpectralSample> s = find_lambda_k(q, k_min, k_max, cfg, warm);
  for (auto& smp : s) {
    const Mat2 M = monodromy(q, smp.lambda, cfg);
    const double sign = (smp.k % 2 == 0) ? 2.0 : -2.0;
    smp.z = sign * M.b;
  }
  return s;
}

// Eigenvalue, eigenvectors of M and M^t and the projector P = v w^t/(w^t v).
inline EigenData eigen_projector(const Mat2& M, int sheet, cplx lambda = cplx(0.0)) {
  const cplx delta = M.tr();
  const cplx disc = delta * delta - 4.0;
  if (std::abs(disc) < 1e-12 * (1.0 + std::norm(delta)))
    throw numeric_error("spectral",
                        "eigenline ill-conditioned (mu near +-1), use OrderReport path");
  const cplx mu = floquet_mu(delta, sheet);

  auto pick = [](const Vec2& x, const Vec2& y) {
    const double nx = std::norm(x[0]) + std::norm(x[1]);
    const double ny = std::norm(y[0]) + std::norm(y[1]);
    return nx >= ny ? x : y;
  };
  const Vec2 v = pick({M.b, mu - M.a}, {mu - M.d, M.c});
  const Vec2 w = pick({M.c, mu - M.a}, {mu - M.d, M.b});
  const cplx wtv = w[0] * v[0] + w[1] * v[1];
  const double nv = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  const double nw = std::sqrt(std::norm(w[0]) + std::norm(w[1]));
  if (std::abs(wtv) < 1e-12 * nv * nw)
    throw numeric_error("spectral", "degenerate eigenvector pairing w^t v ~ 0");
  const Mat2 P{v[0] * w[0] / wtv, v[0] * w[1] / wtv,
               v[1] * w[0] / wtv, v[1] * w[1] / wtv};
  return {lambda, mu, v, w, P};
}

// dDelta(lambda)/dq applied to the perturbation dq:
//   dmu/dq dq = mu/(w^t v) * int_0^T w(t)^t dalpha(t) v(t) dt,
//   dDelta/dq dq = (mu - 1/mu)/mu * dmu/dq dq,
// with v(t) = F(t)^{-1} v, w(t) = F(t)^t w, integrated by Simpson along the
// stored frame.
inline cplx directional_derivative_delta(const Potential& q, cplx lambda,
                                         const Potential& dq, const Config& cfg,
                                         const FrameResult* frame = nullptr) {
  FrameResult local;
  if (!frame) {
    local = integrate_frame(q, lambda, cfg.n_steps % 2 == 0 ? cfg.n_steps
                                                            : cfg.n_steps + 1);
    frame = &local;
  }
  const int n = static_cast<int>(frame->F.size()) - 1;
  if (n % 2 != 0)
    throw input_error("directional_derivative_delta: need an even step count");
  const EigenData ed = eigen_projector(frame->M, dominant_sheet(frame->M.tr()), lambda);

  const cplx wtv = ed.w[0] * ed.v[0] + ed.w[1] * ed.v[1];
  const cplx factor = (ed.mu - 1.0 / ed.mu) / wtv;

  auto integrand = [&](int j) {
    const Mat2& F = frame->F[static_cast<std::size_t>(j)];
    const Mat2 Finv = F.adjugate();  // det F = 1 up to measured drift
    const Vec2 vt = Finv.apply(ed.v);
    const Vec2 wt = F.transpose().apply(ed.w);
    const cplx dqt = dq.evaluate(frame->t[static_cast<std::size_t>(j)]);
    // w(t)^t * dalpha * v(t) with dalpha = [[0, dq],[-conj dq, 0]]/2
    return 0.5 * (wt[0] * dqt * vt[1] - wt[1] * std::conj(dqt) * vt[0]);
  };
  const double h = frame->T / n;
  cplx acc = integrand(0) + integrand(n);
  for (int j = 1; j < n; ++j) acc += integrand(j) * ((j % 2 == 1) ? 4.0 : 2.0);
  return factor * (acc * h / 3.0);
}

// dDelta'(lambda)/dq by a central lambda-stencil over the derivative above.
inline cplx directional_derivative_delta1(const Potential& q, cplx lambda,
                                          const Potential& dq, const Config& cfg) {
  const double h = cfg.lambda_stencil_h * (1.0 + std::abs(lambda));
  const cplx p = directional_derivative_delta(q, lambda + h, dq, cfg);
  const cplx m = directional_derivative_delta(q, lambda - h, dq, cfg);
  return (p - m) / (2.0 * h);
}

// Orders of Delta^2-4 (winding) and of N = M - (1/2) Delta 1 (Cauchy-integral
// Taylor coefficients) on a circle around lambda_*.
inline OrderReport zero_order_at(const Potential& q, cplx lambda_star, const Config& cfg) {
  const int m = cfg.contour_nodes;
  const double r0 = cfg.contour_radius;

  std::function<std::pair<Mat2, cplx>(int)> node = [&](int j) {
    const cplx lam = lambda_star + r0 * std::exp(cplx(0.0, 2.0 * kPi * j / m));
    const Mat2 M = monodromy(q, lam, cfg);
    const cplx delta = M.tr();
    return std::make_pair(M - Mat2::identity() * (0.5 * delta),
                          delta * delta - 4.0);
  };
  const auto nodes = parallel_map<std::pair<Mat2, cplx>>(m, cfg.threads, node);

  std::vector<cplx> wvals(static_cast<std::size_t>(m));
  double wmax = 0.0;
  for (int j = 0; j < m; ++j) {
    wvals[static_cast<std::size_t>(j)] = nodes[static_cast<std::size_t>(j)].second;
    wmax = std::max(wmax, std::abs(wvals[static_cast<std::size_t>(j)]));
  }
  for (const cplx& wv : wvals)
    if (std::abs(wv) < 1e-12 * (1.0 + wmax))
      throw numeric_error("order", "Delta^2-4 vanishes on the contour: radius misconfigured");
  const double wind = detail::winding_of_values(wvals);
  const int n = static_cast<int>(std::lround(wind));
  if (std::abs(wind - n) > 0.15 || n < 0)
    throw numeric_error("order", "non-integer winding of Delta^2-4: radius misconfigured");

  double S = 0.0;
  for (int j = 0; j < m; ++j) S = std::max(S, nodes[static_cast<std::size_t>(j)].first.frob());
  if (S < 1e-13)
    throw numeric_error("order", "N below noise floor on the whole contour");

  OrderReport rep;
  rep.lambda_star = lambda_star;
  rep.n = n;
  rep.noise_floor = std::max(cfg.ord_rel_tol * S, 1e-12);

  int j0 = -1;
  Mat2 lead;
  const int pmax = std::min(cfg.taylor_terms, m / 2 - 1);
  for (int p = 0; p <= pmax; ++p) {
    Mat2 acc;
    for (int j = 0; j < m; ++j) {
      const cplx ph = std::exp(cplx(0.0, -2.0 * kPi * p * j / m));
      acc = acc + nodes[static_cast<std::size_t>(j)].first * ph;
    }
    const double rp = std::pow(r0, p);
    acc = acc * (1.0 / (m * rp));
    if (acc.frob() * rp > rep.noise_floor) {
      j0 = p;
      lead = acc;
      break;
    }
  }
  if (j0 < 0) throw numeric_error("order", "order detection failed: all Taylor terms below floor");
  rep.j0 = j0;
  rep.N_tilde = lead;
  if (rep.j0 > rep.n / 2)
    throw numeric_error("order", "order arithmetic violated: j0 > floor(n/2)");
  rep.nilpotent = std::abs(lead.det()) <= cfg.nilpotent_tol * lead.frob() * lead.frob();
  return rep;
}

// Kernel line of the leading coefficient when it is nilpotent; otherwise an
// eigenline of the (invertible) leading coefficient, flagged as the
// degenerate n = 2 j0 case.
inline CPLine baker_akhiezer_line(OrderReport& rep) {
  if (rep.n < 1) throw input_error("baker_akhiezer_line: no zero at lambda_*");
  const Mat2& C = rep.N_tilde;
  const double nC = C.frob();
  if (nC < 1e-13) throw numeric_error("order", "N_tilde below noise floor");

  Vec2 vec;
  if (rep.nilpotent) {
    // smallest singular vector of C via the Hermitian 2x2 C* C
    const Mat2 H = C.star() * C;
    const double p = H.tr().real();
    const double r = H.det().real();
    const double lam_min = 0.5 * (p - std::sqrt(std::max(0.0, p * p - 4.0 * r)));
    const Vec2 cand1{-H.b, H.a - lam_min};
    const Vec2 cand2{H.d - lam_min, -H.c};
    const double n1 = std::norm(cand1[0]) + std::norm(cand1[1]);
    const double n2 = std::norm(cand2[0]) + std::norm(cand2[1]);
    vec = n1 >= n2 ? cand1 : cand2;
    if (n1 < 1e-24 && n2 < 1e-24) vec = {1.0, 0.0};  // C proportional to unitary*0
  } else {
    // tracefree invertible: eigenline for nu = sqrt(-det C)
    const cplx nu = std::sqrt(-C.det());
    const Vec2 cand1{-C.b, C.a - nu};
    const Vec2 cand2{C.d - nu, -C.c};
    const double n1 = std::norm(cand1[0]) + std::norm(cand1[1]);
    const double n2 = std::norm(cand2[0]) + std::norm(cand2[1]);
    vec = n1 >= n2 ? cand1 : cand2;
  }
  CPLine L(vec[0], vec[1]);
  rep.ba_line = L;
  return L;
}

}  // namespace fingap
