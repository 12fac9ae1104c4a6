#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fingap/closing.hpp"
#include "test_helpers.hpp"

using namespace fingap;

namespace {

Potential perturbed_circle() {
  Potential q(2 * kPi, 0.0, 1);
  q.set_mode(0, std::sqrt(2.0));
  q.set_mode(1, 0.025);
  q.set_mode(-1, 0.025);  // 0.05 cos t
  return q;
}

NewtonTarget closing_target_of(const Potential& q, int N, int K, const Config& cfg) {
  NewtonTarget tgt;
  tgt.N_fixed = N;
  tgt.K = K;
  const auto smp = detail::band_coeffs(q, N, K, false, cfg);
  tgt.z_targets = truncate_coeffs(smp, K);  // keep all current z in the band
  tgt.delta_target = -2.0;
  tgt.with_closure = true;
  tgt.real_mode = false;
  tgt.theta = 0.0;
  return tgt;
}

}  // namespace

TEST_CASE("closure report of circle and vacuum") {
  Config cfg;
  const Potential circ = Potential::constant(2 * kPi, std::sqrt(2.0));
  const ClosureReport rep = closure_residual(circ, 0.0, cfg);
  CHECK(std::abs(rep.delta + 2.0) < 1e-10);
  CHECK(std::abs(rep.delta1) < 1e-7);
  CHECK(rep.sign == -1);
  CHECK(rep.m_residual < 1e-10);
  CHECK(rep.semisimple);
  CHECK(rep.n == 2);
  CHECK(rep.j0 == 1);

  const Potential vac = Potential::constant(2 * kPi, 0.0);
  const ClosureReport vrep = closure_residual(vac, 0.0, cfg);
  CHECK(std::abs(vrep.delta - 2.0 * std::cosh(kPi)) < 1e-6);
  CHECK_FALSE(vrep.semisimple);
}

TEST_CASE("semisimple closure forces Delta' = 0") {
  Config cfg;
  const Potential circ = Potential::constant(2 * kPi, std::sqrt(2.0));
  const ClosureReport rep = closure_residual(circ, 0.0, cfg);
  REQUIRE(rep.semisimple);
  REQUIRE(std::abs(rep.delta - 2.0 * rep.sign) < 1e-8);
  CHECK(std::abs(rep.delta1) < 1e-6);
}

TEST_CASE("direction selection") {
  Config cfg;
  cfg.n_steps = 1024;

  SECTION("generic potential yields a full-rank quadruple") {
    std::mt19937 rng(71);
    const Potential q = testutil::random_potential(rng, 3, 1.3);
    const DirectionSelection sel = select_directions(q, 0.0, cfg);
    CHECK(sel.sigma_min > 1e-6);
  }

  SECTION("scaling a direction scales its eta column") {
    const Potential circ = perturbed_circle();
    Potential d(2 * kPi, 0.0, 2);
    d.set_mode(2, cplx(1.0, 0.5));
    Potential d2 = d;
    d2.set_mode(2, 2.0 * d.mode(2));
    const cplx ls(0.0, 1.0);
    const cplx e1 = directional_derivative_delta(circ, ls + cplx(0.3, 0.0), d, cfg);
    const cplx e2 = directional_derivative_delta(circ, ls + cplx(0.3, 0.0), d2, cfg);
    CHECK(std::abs(e2 - 2.0 * e1) < 1e-10);
  }

  SECTION("vacuum degenerates gracefully") {
    const Potential vac = Potential::constant(2 * kPi, 0.0);
    try {
      const DirectionSelection sel = select_directions(vac, 0.0, cfg);
      CHECK(sel.sigma_min >= 0.0);  // success is acceptable
    } catch (const numeric_error& e) {
      CHECK(std::string(e.what()).find("sigma") != std::string::npos);
    }
  }
}

TEST_CASE("truncate coefficients") {
  std::vector<SpectralSample> smp;
  for (int k = -3; k <= 3; ++k)
    smp.push_back({k, cplx(k, 0.0), cplx(0.1 * k, 0.3), false});

  SECTION("n beyond the support is the identity") {
    const auto z = truncate_coeffs(smp, 5);
    for (const auto& s : smp) CHECK(z.at(s.k) == s.z);
  }

  SECTION("n = 0 zeroes every tail target") {
    const auto z = truncate_coeffs(smp, 0);
    for (const auto& s : smp)
      if (s.k != 0) CHECK(z.at(s.k) == cplx(0.0));
  }

  SECTION("real mode keeps conjugate symmetry") {
    const auto z = truncate_coeffs(smp, 2, true);
    for (int k = 1; k <= 3; ++k)
      CHECK(std::abs(z.at(-k) - std::conj(z.at(k))) < 1e-15);
  }
}

TEST_CASE("newton_close fixed point") {
  Config cfg;
  cfg.n_steps = 1024;
  const Potential circ = Potential::constant(2 * kPi, std::sqrt(2.0));
  const NewtonTarget tgt = closing_target_of(circ, 0, 4, cfg);
  const NewtonResult res = newton_close(tgt, circ, cfg);
  CHECK(res.iterations == 0);
  CHECK(res.converged);
  CHECK(l2_distance(res.q, circ) == 0.0);
}

TEST_CASE("newton_close closes the perturbed circle") {
  Config cfg;
  cfg.n_steps = 1024;
  cfg.newton_tol = 1e-10;
  const Potential q0 = perturbed_circle();
  const int N = 0, K = 5;
  const NewtonTarget tgt = closing_target_of(q0, N, K, cfg);

  const NewtonResult res = newton_close(tgt, q0, cfg);
  CHECK(res.converged);
  CHECK(res.final_residual <= 1e-9);

  // low modes |k| <= N are preserved bit-identically
  CHECK(res.q.mode(0).real() == q0.mode(0).real());
  CHECK(res.q.mode(0).imag() == q0.mode(0).imag());

  // the closing conditions hold at the solution
  const ClosureReport rep = closure_residual(res.q, 0.0, cfg);
  CHECK(std::abs(rep.delta + 2.0) < 1e-8);
  CHECK(std::abs(rep.delta1) < 1e-6);

  // variational cross-check of one finite-difference Jacobian column:
  // d Delta / d Re(mode 2) by FD against the directional-derivative formula
  Potential d(2 * kPi, 0.0, 2);
  d.set_mode(2, 1.0);
  const cplx var = directional_derivative_delta(res.q, cplx(0.0, 1.0), d, cfg);
  const double s = 1e-6;
  Potential qp = res.q, qm = res.q;
  qp.set_mode(2, res.q.mode(2) + s);
  qm.set_mode(2, res.q.mode(2) - s);
  const cplx fd = (monodromy(qp, cplx(0.0, 1.0), cfg).tr() -
                   monodromy(qm, cplx(0.0, 1.0), cfg).tr()) /
                  (2.0 * s);
  CHECK(std::abs(var - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
}

TEST_CASE("pipeline on the circle is a fixed point") {
  Config cfg;
  cfg.n_steps = 1024;
  const Potential circ = Potential::constant(2 * kPi, std::sqrt(2.0));
  const PipelineResult res = finite_gap_approximate(circ, 0.0, 2, cfg);
  CHECK(res.closure_out.semisimple);
  CHECK(res.closure_out.m_residual <= 1e-7);
  CHECK(res.l2_to_input < 1e-7);
}

TEST_CASE("real pipeline: H2 circle fixed point and realness") {
  Config cfg;
  cfg.n_steps = 1024;
  const Potential circ = Potential::constant(2 * kPi, std::sqrt(2.0));
  const PipelineResult res = finite_gap_approximate_real(circ, SpaceForm::H2, 2, cfg);
  CHECK(res.q_n.is_real(1e-9));
  CHECK(res.l2_to_input < 1e-7);
  CHECK(res.closure_out.semisimple);

  // output z-symmetry
  const auto smp = perturbed_coeffs(res.q_n, 1, 3, cfg);
  const auto neg = perturbed_coeffs(res.q_n, -3, -1, cfg);
  std::map<int, cplx> z;
  for (const auto& s : smp) z[s.k] = s.z;
  for (const auto& s : neg) z[s.k] = s.z;
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(z[-k] - std::conj(z[k])) < 1e-8);
}

TEST_CASE("real pipeline: R2 truncation-only stage") {
  Config cfg;
  cfg.n_steps = 1024;
  cfg.K_margin = 4;
  Potential q(2 * kPi, 0.0, 1);
  q.set_mode(0, 1.0);
  q.set_mode(1, 0.1);
  q.set_mode(-1, 0.1);
  REQUIRE(q.is_real(1e-12));

  const PipelineResult res = finite_gap_approximate_real(q, SpaceForm::R2, 2, cfg);
  CHECK(res.q_n.is_real(1e-9));
  // tail z beyond n are zeroed to Newton tolerance
  const auto smp = perturbed_coeffs(res.q_n, 3, 6, cfg);
  for (const auto& s : smp) CHECK(std::abs(s.z) < 1e-8);
  CHECK_FALSE(res.undressed);
  CHECK_FALSE(res.redressed);

  // non-real input rejected
  Potential bad = q;
  bad.set_mode(1, cplx(0.1, 0.05));
  CHECK_THROWS_AS(finite_gap_approximate_real(bad, SpaceForm::R2, 2, cfg), input_error);
}

TEST_CASE("pipeline rejects non-closed input") {
  Config cfg;
  cfg.n_steps = 1024;
  const Potential vac = Potential::constant(2 * kPi, 0.0);
  CHECK_THROWS_AS(finite_gap_approximate(vac, 0.0, 2, cfg), numeric_error);
}
