#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fingap/dressing.hpp"
#include "fingap/spectral.hpp"
#include "test_helpers.hpp"

using namespace fingap;
using testutil::mat_dist;

TEST_CASE("lambda_k of the vacuum") {
  Config cfg;
  cfg.n_steps = 1024;
  const Potential vac = Potential::constant(2 * kPi, 0.0);
  const auto roots = find_lambda_k(vac, -3, 3, cfg);
  REQUIRE(roots.size() == 7);
  for (const auto& s : roots) {
    CHECK(std::abs(s.lambda - cplx(static_cast<double>(s.k), 0.0)) < 1e-9);
    CHECK_FALSE(s.rescued);
  }
}

TEST_CASE("lambda_k of the constant circle potential") {
  Config cfg;
  cfg.n_steps = 1024;
  const Potential circ = Potential::constant(2 * kPi, std::sqrt(2.0));
  const auto roots = find_lambda_k(circ, 0, 4, cfg);
  REQUIRE(roots.size() == 5);
  CHECK(std::abs(roots[0].lambda) < 1e-9);                      // k = 0
  CHECK(std::abs(roots[1].lambda - std::sqrt(2.0)) < 1e-9);     // k = 1
  CHECK(std::abs(roots[3].lambda - std::sqrt(7.0)) < 1e-9);     // k = 3
  CHECK(std::abs(roots[4].lambda - std::sqrt(14.0)) < 1e-9);    // k = 4
  // every reported value is a root, all distinct
  for (const auto& s : roots)
    CHECK(std::abs(detail::a_minus_d(circ, s.lambda, cfg)) < 1e-8);
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      CHECK(std::abs(roots[i].lambda - roots[j].lambda) > 1e-6);
}

TEST_CASE("real-potential root symmetry") {
  Config cfg;
  cfg.n_steps = 1024;
  std::mt19937 rng(41);
  const Potential q = testutil::random_potential(rng, 3, 1.2, 2 * kPi, true);
  REQUIRE(q.is_real(1e-12));
  const auto roots = find_lambda_k(q, -3, 3, cfg);
  std::map<int, cplx> by_k;
  for (const auto& s : roots) by_k[s.k] = s.lambda;
  for (int k = 1; k <= 3; ++k)
    CHECK(std::abs(by_k[-k] + std::conj(by_k[k])) < 1e-8);
}

TEST_CASE("perturbed coefficients") {
  Config cfg;
  cfg.n_steps = 1024;

  SECTION("vacuum: all z vanish") {
    const Potential vac = Potential::constant(2 * kPi, 0.0);
    for (const auto& s : perturbed_coeffs(vac, -2, 2, cfg))
      CHECK(std::abs(s.z) < 1e-12);
  }

  SECTION("real potential: z_{-k} = conj(z_k)") {
    std::mt19937 rng(42);
    const Potential q = testutil::random_potential(rng, 3, 1.2, 2 * kPi, true);
    const auto s = perturbed_coeffs(q, -3, 3, cfg);
    std::map<int, cplx> z;
    for (const auto& e : s) z[e.k] = e.z;
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(z[-k] - std::conj(z[k])) < 1e-8);
  }

  SECTION("step-halving consistency of z_1") {
    Potential q(2 * kPi, 0.0, 1);
    q.set_mode(1, 0.1);
    Config c1 = cfg;
    c1.n_steps = 1024;
    Config c2 = cfg;
    c2.n_steps = 2048;
    const cplx z1a = perturbed_coeffs(q, 1, 1, c1)[0].z;
    const cplx z1b = perturbed_coeffs(q, 1, 1, c2)[0].z;
    CHECK(std::abs(z1a - z1b) < 1e-8);
  }
}

TEST_CASE("eigen projector") {
  const Mat2 D{2.0, 0.0, 0.0, 0.5};
  const EigenData ed = eigen_projector(D, +1);
  CHECK(std::abs(ed.mu - 2.0) < 1e-14);
  CHECK(mat_dist(ed.P, Mat2{1.0, 0.0, 0.0, 0.0}) < 1e-14);

  std::mt19937 rng(43);
  for (int i = 0; i < 25; ++i) {
    const Mat2 M = testutil::random_sl2(rng);
    if (std::abs(M.tr() * M.tr() - 4.0) < 1e-3) continue;
    const EigenData p = eigen_projector(M, +1);
    const EigenData m = eigen_projector(M, -1);
    CHECK(std::abs((p.P * M).tr() - p.mu) < 1e-10);
    CHECK(mat_dist(p.P * p.P, p.P) < 1e-10);
    CHECK(mat_dist(p.P + m.P, Mat2::identity()) < 1e-10);
    CHECK(mat_dist(p.P * p.mu + m.P * m.mu, M) < 1e-9);
    // tr(P A) = w^t A v / (w^t v) on a random test matrix
    const Mat2 A = testutil::random_sl2(rng);
    const cplx wtv = p.w[0] * p.v[0] + p.w[1] * p.v[1];
    const auto Av = A.apply(p.v);
    const cplx expect = (p.w[0] * Av[0] + p.w[1] * Av[1]) / wtv;
    CHECK(std::abs((p.P * A).tr() - expect) < 1e-10);
  }

  CHECK_THROWS_AS(eigen_projector(Mat2::identity() * -1.0, +1), numeric_error);
}

TEST_CASE("directional derivative of Delta") {
  Config cfg;
  cfg.n_steps = 2048;
  std::mt19937 rng(44);
  const Potential q = testutil::random_potential(rng, 3, 1.5);
  const cplx lambda(0.45, 0.8);

  SECTION("zero perturbation") {
    const Potential zero(q.T(), 0.0, 0);
    CHECK(std::abs(directional_derivative_delta(q, lambda, zero, cfg)) < 1e-14);
  }

  SECTION("linearity") {
    const Potential d1 = testutil::random_potential(rng, 2, 1.0);
    const Potential d2 = testutil::random_potential(rng, 2, 1.0);
    Potential sum(q.T(), 0.0, 2);
    for (int k = -2; k <= 2; ++k) sum.set_mode(k, 2.0 * d1.mode(k) + d2.mode(k));
    const cplx lhs = directional_derivative_delta(q, lambda, sum, cfg);
    const cplx rhs = 2.0 * directional_derivative_delta(q, lambda, d1, cfg) +
                     directional_derivative_delta(q, lambda, d2, cfg);
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }

  SECTION("finite-difference oracle") {
    for (int trial = 0; trial < 5; ++trial) {
      const Potential qq = testutil::random_potential(rng, 3, 1.5);
      const Potential dq = testutil::random_potential(rng, 3, 1.0);
      const cplx lam = testutil::rand_unit_complex(rng) + cplx(0.0, 0.6);
      const cplx dd = directional_derivative_delta(qq, lam, dq, cfg);
      const double s = 1e-5;
      Potential qp = qq, qm = qq;
      for (int k = -3; k <= 3; ++k) {
        qp.set_mode(k, qq.mode(k) + s * dq.mode(k));
        qm.set_mode(k, qq.mode(k) - s * dq.mode(k));
      }
      const cplx fd = (monodromy(qp, lam, cfg).tr() - monodromy(qm, lam, cfg).tr()) /
                      (2.0 * s);
      CHECK(std::abs(dd - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("zero orders at lambda_*") {
  Config cfg;
  cfg.n_steps = 1024;

  SECTION("vacuum at i: no zero") {
    const Potential vac = Potential::constant(2 * kPi, 0.0);
    const OrderReport rep = zero_order_at(vac, cplx(0.0, 1.0), cfg);
    CHECK(rep.n == 0);
    CHECK(rep.j0 == 0);
  }

  SECTION("circle at i: n = 2, j0 = 1, degenerate leading coefficient") {
    const Potential circ = Potential::constant(2 * kPi, std::sqrt(2.0));
    OrderReport rep = zero_order_at(circ, cplx(0.0, 1.0), cfg);
    CHECK(rep.n == 2);
    CHECK(rep.j0 == 1);
    CHECK_FALSE(rep.nilpotent);  // n = 2 j0: det N~ stays away from zero
    CHECK(rep.j0 <= rep.n / 2);
    const CPLine L = baker_akhiezer_line(rep);
    // the returned line is an eigenline of N~(lambda_*)
    const auto v = L.v();
    const auto Nv = rep.N_tilde.apply(v);
    const cplx ratio = std::abs(v[0]) > 0.5 ? Nv[0] / v[0] : Nv[1] / v[1];
    CHECK(std::abs(Nv[0] - ratio * v[0]) < 1e-7);
    CHECK(std::abs(Nv[1] - ratio * v[1]) < 1e-7);
  }

  SECTION("dressed circle: j0 = 0 with n >= 2, nilpotent leading coefficient") {
    const Potential circ = Potential::constant(2 * kPi, std::sqrt(2.0));
    const cplx ls(0.0, 1.0);
    // [1:0] is an eigenline of M(i) = -1 but not of N~(i)
    const SimpleFactor sf(ls, CPLine(1.0, 0.0));
    const FrameResult fr = integrate_frame(circ, ls, cfg.n_steps);
    const DressResult dr = dress_potential(circ, sf, fr, cfg);
    CHECK_FALSE(dr.periodicity_warning);
    OrderReport rep = zero_order_at(dr.potential, ls, cfg);
    CHECK(rep.n == 2);
    CHECK(rep.j0 == 0);
    CHECK(rep.nilpotent);
    CHECK(rep.j0 <= rep.n / 2);
    // leading coefficient is N(lambda_*) itself, nilpotent and nonzero
    CHECK(std::abs(rep.N_tilde.det()) < 1e-6 * rep.N_tilde.frob() * rep.N_tilde.frob());
    CHECK(rep.N_tilde.frob() > 1e-3);
  }
}

TEST_CASE("baker-akhiezer line from explicit leading coefficients") {
  OrderReport rep;
  rep.lambda_star = cplx(0.0, 1.0);
  rep.n = 2;
  rep.j0 = 0;
  rep.nilpotent = true;

  rep.N_tilde = Mat2{0.0, 1.0, 0.0, 0.0};
  CHECK(baker_akhiezer_line(rep).same_line(CPLine(1.0, 0.0), 1e-10));

  rep.N_tilde = Mat2{1.0, -1.0, 1.0, -1.0};
  CHECK(baker_akhiezer_line(rep).same_line(CPLine(1.0, 1.0), 1e-10));
}
