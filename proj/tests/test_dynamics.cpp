#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "qsb/adiabatic.hpp"
#include "qsb/dynamics.hpp"
#include "test_support.hpp"

using namespace qsb;
using qsbtest::Rng;

namespace {
constexpr double kPi = 3.14159265358979323846;

double diff(const Mat2& a, const Mat2& b) { return frobenius_norm(a - b); }

std::vector<double> grid(double t1, int n) {
  std::vector<double> ts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = t1 * i / (n - 1);
  return ts;
}
}  // namespace

TEST_CASE("mode hamiltonian") {
  CHECK(diff(mode_hamiltonian(0.35, 0.7, 0.9), 0.9 * sigma_x()) < 1e-15);
  CHECK(diff(mode_hamiltonian(1.4, 0.6, 0.0), 1.1 * sigma_z()) < 1e-15);
  const Mat2 h = mode_hamiltonian(1.0, 0.0, 3.0);
  const auto d = decompose_hermitian(h);
  CHECK(d.c0 == 0.0);
  CHECK(d.pauli_norm() == Approx(std::sqrt(10.0)).margin(1e-14));
}

TEST_CASE("mode unitary equals the phase times the closed-form exponential") {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    Mode m;
    m.E = rng.uniform(-5.0, 5.0);
    m.Omega = rng.uniform(-5.0, 5.0);
    m.Eplus = m.Omega + m.E;
    m.Eminus = m.Omega - m.E;
    const double alpha = rng.uniform(-3.0, 3.0);
    m.f = alpha == 0.0 ? 0.0 : riccati_f(m.E, alpha);
    const double t = rng.uniform(-4.0, 4.0);

    const Mat2 u = mode_unitary(m, t, alpha);
    const cplx phase = std::polar(1.0, -m.Omega * t);
    const Mat2 ref = phase * herm2_exp(Mat2{cplx(m.E), cplx(alpha), cplx(alpha), cplx(-m.E)}, t);
    CHECK(diff(u, ref) < 1e-14);
    CHECK(unitarity_error(u) < 1e-13);

    // the explicit mixed representation is the same operator
    CHECK(diff(u, qsbtest::mode_unitary_mixed_form(m, t, alpha)) < 1e-12);
  }
}

TEST_CASE("mode unitary special values") {
  Mode m;
  m.E = 0.8;
  m.Omega = 1.4;
  m.Eplus = 2.2;
  m.Eminus = 0.6;

  SECTION("t = 0 is the identity") {
    CHECK(diff(mode_unitary(m, 0.0, 1.1), Mat2::identity()) == 0.0);
  }

  SECTION("alpha = 0 gives pure phases e^{-i E+- t}") {
    m.f = 0.0;
    const double t = 1.9;
    const Mat2 u = mode_unitary(m, t, 0.0);
    CHECK(std::abs(u.a11 - std::polar(1.0, -m.Eplus * t)) < 1e-14);
    CHECK(std::abs(u.a22 - std::polar(1.0, -m.Eminus * t)) < 1e-14);
    CHECK(std::abs(u.a12) == 0.0);
  }
}

TEST_CASE("channel at t = 0 is the identity map") {
  Rng rng(42);
  const ModelParams p = qsbtest::random_params(rng, 4);
  const QubitChannel ch = build_channel(0.0, p);
  CHECK(ch.total_weight() == Approx(1.0).margin(1e-12));
  for (const ChannelElement& e : ch.elements) CHECK(diff(e.U, Mat2::identity()) == 0.0);
  const DensityMatrix2 rho = qsbtest::random_state(rng);
  CHECK(trace_distance(apply_channel(ch, rho), rho) < 1e-15);
}

TEST_CASE("channel elements are unitary and the frame matches V_t") {
  Rng rng(43);
  const ModelParams p = qsbtest::random_params(rng, 5);
  const double t = 1.3;
  const QubitChannel ch = build_channel(t, p);
  for (const ChannelElement& e : ch.elements) CHECK(unitarity_error(e.U) < 1e-12);
  CHECK(std::abs(ch.frame_rotation.a11 - std::polar(1.0, -0.5 * p.omega_drive * t)) < 1e-15);
  CHECK(std::abs(ch.frame_rotation.a22 - std::polar(1.0, 0.5 * p.omega_drive * t)) < 1e-15);
}

TEST_CASE("hamming and enumeration channels agree on a uniform bath") {
  Rng rng(44);
  ModelParams p = ModelParams::uniform(8, 0.9, 0.35);
  p.alpha = 0.8;
  p.beta = -0.4;
  p.omega_drive = 1.7;
  p.theta = 1.2;
  const DensityMatrix2 rho = qsbtest::random_state(rng);
  for (double t : grid(8.0, 9)) {
    const DensityMatrix2 a = apply_channel(build_channel(t, p, SpectrumPath::enumerate), rho);
    const DensityMatrix2 b = apply_channel(build_channel(t, p, SpectrumPath::hamming), rho);
    CHECK(trace_distance(a, b) < 1e-12);
  }
}

TEST_CASE("kraus completeness holds in both orders") {
  // K_i = sqrt(w_i) V_t U_i: each element is a scaled unitary, so both
  // sum K K^dag and sum K^dag K must equal the identity.
  Rng rng(54);
  for (int trial = 0; trial < 8; ++trial) {
    const ModelParams p = qsbtest::random_params(rng, rng.integer(1, 5));
    const QubitChannel ch = build_channel(rng.uniform(0.0, 8.0), p);
    Mat2 left, right;
    for (const ChannelElement& e : ch.elements) {
      const Mat2 k = ch.frame_rotation * e.U;
      left = left + e.weight * (k * adjoint(k));
      right = right + e.weight * (adjoint(k) * k);
    }
    CHECK(diff(left, Mat2::identity()) < 1e-12);
    CHECK(diff(right, Mat2::identity()) < 1e-12);
  }
}

TEST_CASE("channel is unital and never raises purity") {
  Rng rng(45);
  for (int trial = 0; trial < 10; ++trial) {
    const ModelParams p = qsbtest::random_params(rng, rng.integer(1, 5));
    const double t = rng.uniform(0.0, 6.0);
    const QubitChannel ch = build_channel(t, p);

    const DensityMatrix2 mixed = DensityMatrix2::maximally_mixed();
    CHECK(trace_distance(apply_channel(ch, mixed), mixed) < 1e-13);

    const DensityMatrix2 rho = qsbtest::random_state(rng);
    const DensityMatrix2 out = apply_channel(ch, rho);
    CHECK(out.purity() <= rho.purity() + 1e-12);
    CHECK(std::abs(trace(out.matrix()) - cplx(1.0)) < 1e-12);
    CHECK(hermiticity_error(out.matrix()) < 1e-12);
    CHECK(out.eigenvalues()[0] >= -1e-10);
  }
}

TEST_CASE("zero temperature freezes dissipation") {
  Rng rng(46);
  ModelParams p = qsbtest::random_params(rng, 4);
  p.theta = std::numeric_limits<double>::infinity();
  const DensityMatrix2 rho = qsbtest::random_state(rng);
  const double t = 2.6;

  const DensityMatrix2 out = apply_channel(build_channel(t, p), rho);
  CHECK(out.purity() == Approx(rho.purity()).margin(1e-12));

  // single Kraus element: conjugation by W_t = V_t U_ground(t, beta_eff)
  const ModeSpectrum s = channel_spectrum(p);
  const std::uint64_t ground = zero_temperature_index(p);
  const Mat2 w = frame_rotation(t, p.omega_drive) *
                 mode_unitary(s.modes[ground], t, p.alpha);
  const DensityMatrix2 expect{w * rho.matrix() * adjoint(w)};
  CHECK(trace_distance(out, expect) < 1e-13);
}

TEST_CASE("zero temperature through the hamming path") {
  ModelParams p = ModelParams::uniform(20, 1.3, 0.07);  // auto resolves to hamming
  p.alpha = 0.9;
  p.beta = 0.2;
  p.omega_drive = 0.8;
  p.theta = std::numeric_limits<double>::infinity();
  REQUIRE(resolve_path(p, SpectrumPath::automatic) == SpectrumPath::hamming);

  const DensityMatrix2 pure = DensityMatrix2::pure(cplx(0.6), cplx(0.0, 0.8));
  const ModeSpectrum s = channel_spectrum(p);
  for (double t : grid(7.0, 8)) {
    const DensityMatrix2 out = apply_channel(build_channel(t, p, s), pure);
    CHECK(out.purity() == Approx(1.0).margin(1e-12));
    // omega > 0: the ground class is k = N (the single all-down index)
    const Mat2 w = frame_rotation(t, p.omega_drive) * mode_unitary(s.modes.back(), t, p.alpha);
    CHECK(trace_distance(out, DensityMatrix2{w * pure.matrix() * adjoint(w)}) < 1e-13);
  }
}

TEST_CASE("dephasing trajectories") {
  Rng rng(47);
  ModelParams p = qsbtest::random_params(rng, 4, /*zero_alpha=*/true);
  const DensityMatrix2 rho = DensityMatrix2::from_bloch(0.6, 0.2, 0.4);
  const std::vector<double> ts = grid(6.0, 25);
  const Trajectory tr = evolve(p, rho, ts);

  SECTION("populations are constant") {
    for (const DensityMatrix2& st : tr.states)
      CHECK(std::abs(st.matrix().a11 - rho.matrix().a11) < 1e-12);
  }

  SECTION("coherence follows the mode sum") {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const cplx expect = dephasing_factor(ts[i], p) * rho.matrix().a12;
      CHECK(std::abs(tr.states[i].matrix().a12 - expect) < 1e-12);
    }
  }

  SECTION("the drive frequency drops out") {
    ModelParams q = p;
    q.omega_drive = 5.0;
    p.omega_drive = 0.0;
    const Trajectory a = evolve(p, rho, ts);
    const Trajectory b = evolve(q, rho, ts);
    for (std::size_t i = 0; i < ts.size(); ++i)
      CHECK(trace_distance(a.states[i], b.states[i]) < 1e-12);
  }
}

TEST_CASE("dephasing factor") {
  Rng rng(48);
  ModelParams p = ModelParams::uniform(1, 0.8, 0.45);
  p.alpha = 0.0;
  CHECK(dephasing_factor(0.0, p) == cplx(1.0, 0.0));
  for (double t : grid(7.0, 11))
    CHECK(dephasing_factor(t, p).real() == std::cos(2.0 * 0.45 * t));

  for (int trial = 0; trial < 10; ++trial) {
    const ModelParams q = qsbtest::random_params(rng, rng.integer(1, 6));
    CHECK(std::abs(dephasing_factor(rng.uniform(0.0, 10.0), q)) <= 1.0 + 1e-12);
  }

  // uniform bath, beta = 0: exactly periodic with period pi/g
  ModelParams u = ModelParams::uniform(5, 1.1, 0.6);
  u.alpha = 0.0;
  u.beta = 0.0;
  u.theta = 0.9;
  const double period = kPi / 0.6;
  for (double t : grid(4.0, 7))
    CHECK(std::abs(dephasing_factor(t + period, u) - dephasing_factor(t, u)) < 1e-12);
}

TEST_CASE("uncoupled qubit follows the closed evolution") {
  Rng rng(49);
  ModelParams p = qsbtest::random_params(rng, 3);
  p.g_n.assign(3, 0.0);
  const DensityMatrix2 rho = qsbtest::random_state(rng);
  const std::vector<double> ts = grid(9.0, 21);
  const Trajectory tr = evolve(p, rho, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Mat2 u = closed_evolution(ts[i], p);
    const DensityMatrix2 expect{u * rho.matrix() * adjoint(u)};
    CHECK(trace_distance(tr.states[i], expect) < 1e-12);
  }
}

TEST_CASE("closed evolution properties") {
  Rng rng(50);
  ModelParams p = qsbtest::random_params(rng, 2);
  p.g_n.assign(2, 0.0);

  CHECK(diff(closed_evolution(0.0, p), Mat2::identity()) == 0.0);

  SECTION("couplings must vanish") {
    ModelParams bad = p;
    bad.g_n[1] = 0.3;
    CHECK_THROWS_AS(closed_evolution(1.0, bad), contract_error);
  }

  SECTION("static field reduces to one exponential") {
    ModelParams st = p;
    st.omega_drive = 0.0;
    const Mat2 h{cplx(st.beta), cplx(st.alpha), cplx(st.alpha), cplx(-st.beta)};
    CHECK(diff(closed_evolution(1.7, st), herm2_exp(h, 1.7)) < 1e-14);
  }

  SECTION("solves the time-dependent Schrodinger equation") {
    const double t = 1.3, h = 1e-6;
    const Mat2 up = closed_evolution(t + h, p);
    const Mat2 um = closed_evolution(t - h, p);
    const Mat2 dudt = (1.0 / (2.0 * h)) * (up - um);
    const Mat2 hq = Mat2{cplx(p.beta), 0.0, 0.0, cplx(-p.beta)} +
                    p.alpha * std::sin(p.omega_drive * t) * sigma_y() +
                    p.alpha * std::cos(p.omega_drive * t) * sigma_x();
    const Mat2 residual = cplx(0.0, 1.0) * dudt - hq * closed_evolution(t, p);
    CHECK(frobenius_norm(residual) < 1e-6);
  }

  SECTION("quarter period with beta = 0 lands on the rotated flip") {
    ModelParams q = p;
    q.beta = 0.0;
    const double beta_eff = -0.5 * q.omega_drive;
    const double z = std::hypot(q.alpha, beta_eff);
    const double t = kPi / (2.0 * z);
    const double nx = q.alpha / z, nz = beta_eff / z;
    const Mat2 flip = cplx(0.0, -1.0) * (nx * sigma_x() + nz * sigma_z());
    CHECK(diff(closed_evolution(t, q), frame_rotation(t, q.omega_drive) * flip) < 1e-13);
  }
}

TEST_CASE("channel family is not a semigroup") {
  ModelParams p;
  p.N = 2;
  p.omega_n = {1.1, 0.6};
  p.g_n = {0.4, 0.9};
  p.alpha = 1.0;
  p.beta = 0.3;
  p.omega_drive = 0.7;
  p.theta = 1.0;
  const DensityMatrix2 rho = DensityMatrix2::from_bloch(1.0, 0.0, 0.0);
  const double t = 0.7;
  const DensityMatrix2 once = apply_channel(build_channel(2.0 * t, p), rho);
  const DensityMatrix2 twice =
      apply_channel(build_channel(t, p), apply_channel(build_channel(t, p), rho));
  CHECK(trace_distance(once, twice) > 1e-6);
}

TEST_CASE("one-shot channel equals the trajectory point") {
  Rng rng(51);
  const ModelParams p = qsbtest::random_params(rng, 3);
  const DensityMatrix2 rho = qsbtest::random_state(rng);
  const std::vector<double> ts = grid(5.0, 6);
  const Trajectory tr = evolve(p, rho, ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const DensityMatrix2 one = apply_channel(build_channel(ts[i], p), rho);
    CHECK(trace_distance(tr.states[i], one) == 0.0);
  }
}

TEST_CASE("continuity as the coupling channel closes") {
  Rng rng(52);
  ModelParams p = qsbtest::random_params(rng, 3);
  ModelParams q = p;
  p.alpha = 1e-6;
  q.alpha = 0.0;
  const DensityMatrix2 rho = qsbtest::random_state(rng);
  for (double t : grid(10.0, 21)) {
    const DensityMatrix2 a = apply_channel(build_channel(t, p), rho);
    const DensityMatrix2 b = apply_channel(build_channel(t, q), rho);
    CHECK(trace_distance(a, b) <= 1e-4);
  }
}

TEST_CASE("grid validation") {
  Rng rng(53);
  const ModelParams p = qsbtest::random_params(rng, 2);
  const DensityMatrix2 rho = qsbtest::random_state(rng);
  CHECK_THROWS_AS(evolve(p, rho, {}), contract_error);
  CHECK_THROWS_AS(evolve(p, rho, {0.0, 0.0}), contract_error);
  CHECK_THROWS_AS(evolve(p, rho, {1.0, 0.5}), contract_error);

  CHECK(time_grid(0.0, 1.0, 5).size() == 5);
  CHECK(time_grid(2.0, 9.0, 1) == std::vector<double>{2.0});
  CHECK_THROWS_AS(time_grid(1.0, 0.0, 3), contract_error);
  CHECK_THROWS_AS(time_grid(0.0, 1.0, 0), contract_error);

  const Trajectory single = evolve(p, rho, {0.0});
  CHECK(trace_distance(single.states[0], rho) < 1e-15);
}
