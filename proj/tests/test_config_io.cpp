#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "qsb/config.hpp"
#include "qsb/io.hpp"
#include "test_support.hpp"

using namespace qsb;

namespace {
const std::string kBase =
    "# minimal run\n"
    "model.N = 3\n"
    "model.omega = 1.0\n"
    "model.g = 0.5\n"
    "model.theta = 1.0\n"
    "drive.alpha = 0.3\n"
    "drive.beta = 0.4\n"
    "drive.omega = 0.8\n"
    "time.start = 0\n"
    "time.end = 5\n"
    "time.steps = 11\n"
    "state.bx = 1.0\n";
}

TEST_CASE("config parsing basics") {
  const RunConfig cfg = parse_config_text(kBase);
  CHECK(cfg.model.N == 3);
  CHECK(cfg.model.omega_n == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(cfg.model.g_n == std::vector<double>{0.5, 0.5, 0.5});
  CHECK(cfg.model.theta == 1.0);
  CHECK(cfg.model.alpha == 0.3);
  CHECK(cfg.model.beta == 0.4);
  CHECK(cfg.model.omega_drive == 0.8);
  CHECK(cfg.beta0 == Approx(0.5).margin(1e-15));
  CHECK(cfg.steps == 11);
  CHECK(cfg.times().size() == 11);
  CHECK(cfg.times().front() == 0.0);
  CHECK(cfg.times().back() == 5.0);
  CHECK(cfg.has_state);
  CHECK(cfg.initial_state().matrix().a12 == cplx(0.5, 0.0));
}

TEST_CASE("explicit lists and matrix state") {
  const std::string text =
      "model.N = 2\n"
      "model.omega_n = 1.0, -0.5\n"
      "model.g_n = 0.2 0.3\n"
      "drive.alpha = 0\n"
      "drive.beta = 1\n"
      "time.end = 1\n"
      "time.steps = 2\n"
      "state.rho00_re = 0.25\n"
      "state.rho01_re = 0.1\n"
      "state.rho01_im = -0.05\n"
      "state.rho11_re = 0.75\n"
      "mode = hamming\n"
      "output = out.csv\n";
  const RunConfig cfg = parse_config_text(text);
  CHECK(cfg.model.omega_n == std::vector<double>{1.0, -0.5});
  CHECK(cfg.model.g_n == std::vector<double>{0.2, 0.3});
  CHECK(cfg.path == SpectrumPath::hamming);
  CHECK(cfg.output == "out.csv");
  const Mat2 rho = cfg.initial_state().matrix();
  CHECK(rho.a11 == cplx(0.25));
  CHECK(rho.a12 == cplx(0.1, -0.05));
  CHECK(rho.a21 == cplx(0.1, 0.05));
}

TEST_CASE("theta sentinels") {
  std::string t = kBase;
  t.replace(t.find("model.theta = 1.0"), 17, "model.theta = inf");
  CHECK(std::isinf(parse_config_text(t).model.theta));
  t.replace(t.find("model.theta = inf"), 17, "model.theta = zero");
  CHECK(parse_config_text(t).model.theta == 0.0);
}

TEST_CASE("polar and cartesian drives coincide") {
  const double beta0 = 1.25, phi = 0.73;
  std::ostringstream polar, cart;
  polar << "model.N = 2\nmodel.omega = 0.9\nmodel.g = 0.2\n"
        << "drive.beta0 = " << fmt_real(beta0) << "\ndrive.phi = " << fmt_real(phi) << "\n"
        << "drive.omega = 0.4\ntime.end = 2\ntime.steps = 3\nstate.bz = 1\n";
  cart << "model.N = 2\nmodel.omega = 0.9\nmodel.g = 0.2\n"
       << "drive.alpha = " << fmt_real(beta0 * std::sin(phi)) << "\ndrive.beta = "
       << fmt_real(beta0 * std::cos(phi)) << "\n"
       << "drive.omega = 0.4\ntime.end = 2\ntime.steps = 3\nstate.bz = 1\n";
  const RunConfig a = parse_config_text(polar.str());
  const RunConfig b = parse_config_text(cart.str());
  CHECK(a.polar_drive);
  CHECK_FALSE(b.polar_drive);
  CHECK(a.model.alpha == Approx(b.model.alpha).margin(1e-14));
  CHECK(a.model.beta == Approx(b.model.beta).margin(1e-14));
  CHECK(a.beta0 == Approx(b.beta0).margin(1e-14));
  CHECK(a.phi == Approx(b.phi).margin(1e-14));

  const DensityMatrix2 rho = a.initial_state();
  const Trajectory ta = evolve(a.model, rho, a.times());
  const Trajectory tb = evolve(b.model, rho, b.times());
  for (std::size_t i = 0; i < ta.times.size(); ++i)
    CHECK(trace_distance(ta.states[i], tb.states[i]) < 1e-14);
}

TEST_CASE("config rejection") {
  auto drop = [&](const std::string& needle) {
    std::string t = kBase;
    const auto pos = t.find(needle);
    REQUIRE(pos != std::string::npos);
    t.erase(pos, t.find('\n', pos) - pos + 1);
    return t;
  };

  CHECK_THROWS_AS(parse_config_text(drop("model.N")), config_error);
  CHECK_THROWS_AS(parse_config_text(drop("time.end")), config_error);
  CHECK_THROWS_AS(parse_config_text(drop("drive.alpha")), config_error);
  CHECK_THROWS_AS(parse_config_text(kBase + "model.omega_n = 1 1 1\n"), config_error);
  CHECK_THROWS_AS(parse_config_text(kBase + "drive.beta0 = 1\ndrive.phi = 0\n"), config_error);
  CHECK_THROWS_AS(parse_config_text(kBase + "state.rho00_re = 1\n"), config_error);
  CHECK_THROWS_AS(parse_config_text(kBase + "unknown.key = 1\n"), config_error);
  CHECK_THROWS_AS(parse_config_text(kBase + "mode = turbo\n"), config_error);

  std::string bad = kBase;
  bad.replace(bad.find("time.steps = 11"), 15, "time.steps = 0");
  CHECK_THROWS_AS(parse_config_text(bad), config_error);

  bad = kBase;
  bad.replace(bad.find("state.bx = 1.0"), 14, "state.bx = 1.5");
  CHECK_THROWS_AS(parse_config_text(bad), config_error);

  bad = kBase;
  bad.replace(bad.find("model.theta = 1.0"), 17, "model.theta = -2");
  CHECK_THROWS_AS(parse_config_text(bad), config_error);

  CHECK_THROWS_AS(parse_config_file("/nonexistent/qsb.conf"), config_error);
}

TEST_CASE("sweep keys") {
  const std::string text = kBase + "sweep.variable = x\nsweep.values = 0 0.1 0.5\n";
  const RunConfig cfg = parse_config_text(text);
  CHECK(cfg.sweep_variable == "x");
  CHECK(cfg.sweep_values == std::vector<double>{0.0, 0.1, 0.5});
  CHECK_THROWS_AS(parse_config_text(kBase + "sweep.variable = q\nsweep.values = 1\n"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(kBase + "sweep.values = 1\n"), config_error);
}

TEST_CASE("single point grid") {
  std::string t = kBase;
  t.replace(t.find("time.end = 5"), 12, "time.end = 0");
  t.replace(t.find("time.steps = 11"), 15, "time.steps = 1");
  const RunConfig cfg = parse_config_text(t);
  CHECK(cfg.times() == std::vector<double>{0.0});
}

TEST_CASE("real formatting round-trips") {
  qsbtest::Rng rng(81);
  for (int i = 0; i < 200; ++i) {
    const double x = rng.uniform(-1e3, 1e3) * std::pow(10.0, rng.integer(-12, 12));
    CHECK(std::stod(fmt_real(x)) == x);
  }
  CHECK(fmt_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(fmt_real(0.5) == "0.5");
}

TEST_CASE("csv emission") {
  ModelParams p = ModelParams::uniform(1, 1.0, 0.5);
  const Trajectory tr = evolve(p, DensityMatrix2::from_bloch(1, 0, 0), {0.0, 1.0});

  std::ostringstream os;
  write_trajectory_csv(os, tr);
  const std::string text = os.str();
  CHECK(text.rfind("t,rho00_re,rho01_re,rho01_im,rho11_re,coherence,purity\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  CHECK(text.find('\r') == std::string::npos);

  std::ostringstream oc;
  write_coherence_csv(oc, tr);
  CHECK(oc.str().rfind("t,coherence\n", 0) == 0);

  std::ostringstream sp;
  write_spectrum_csv(sp, bath_spectrum(p, p.beta));
  CHECK(sp.str().rfind("index_or_class,multiplicity,E,Omega,Eplus,Eminus,weight,f\n", 0) == 0);

  std::ostringstream fi;
  std::vector<double> times{0.0, 1.0}, fch{1.0, 0.9};
  write_fidelity_csv(fi, times, fch, nullptr);
  CHECK(fi.str() == "t,F_closed_form,F_channel\n0,,1\n1,,0.90000000000000002\n");
}
