#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "raman/schrodinger.hpp"

using namespace raman;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::VectorXcd basis(Eigen::Index n, Eigen::Index k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
  v[k] = 1.0;
  return v;
}

CouplingVectors random_couplings(std::uint64_t seed, int levels) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CouplingVectors c{Eigen::VectorXcd(levels), Eigen::VectorXcd(levels)};
  for (int i = 0; i < levels; ++i) {
    c.pump[i] = {g(rng), g(rng)};
    c.stokes[i] = {g(rng), g(rng)};
  }
  return c;
}

StepOptions options(double dt, long every = 1) {
  StepOptions o;
  o.dt = dt;
  o.sample_every = every;
  return o;
}

}  // namespace

TEST_CASE("free evolution leaves the state unchanged") {
  Eigen::VectorXcd psi(3);
  psi << 0.6, Complex(0, 0.8), 0.0;
  auto tr = integrate([](double) { return HamiltonianMatrix::Zero(3, 3); }, psi, 2.0, options(0.01, 10));
  for (auto &s : tr.states) CHECK((s - psi).norm() == 0.0);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(tr.times.size() == 21);
}

TEST_CASE("resonant two-level rabi oscillation") {
  const double Om = 1.3;
  HamiltonianMatrix h(2, 2);
  h << 0, Om / 2, Om / 2, 0;
  auto tr = integrate([&](double) { return h; }, basis(2, 0), 3 * pi / Om, options(1e-3, 25));
  for (std::size_t k = 0; k < tr.times.size(); ++k)
    CHECK(std::norm(tr.states[k][1]) == doctest::Approx(std::pow(std::sin(Om * tr.times[k] / 2), 2)).epsilon(1e-10).scale(1.0));

  auto st = integrate_static(h, basis(2, 0), 3 * pi / Om, options(1e-3, 25));
  for (std::size_t k = 0; k < tr.times.size(); ++k) CHECK((st.states[k] - tr.states[k]).norm() < 1e-12);
}

TEST_CASE("unitarity over a million steps") {
  HamiltonianMatrix h(3, 3);
  h << 0.2, 0.5, Complex(0, 0.3),
      0.5, -0.4, 0.1,
      Complex(0, -0.3), 0.1, 0.7;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(3, 1.0 / std::sqrt(3.0));
  auto tr = integrate_static(h, psi, 1000.0, options(1e-3, 100000));
  CHECK(tr.steps == 1000000);
  CHECK(tr.max_norm_drift <= 1e-7);

  // energy expectation is conserved
  const double e0 = (psi.adjoint() * h * psi).value().real();
  for (auto &s : tr.states) CHECK(std::abs((s.adjoint() * h * s).value().real() - e0) < 1e-9);
}

TEST_CASE("fourth-order convergence") {
  auto c = random_couplings(41, 2);
  DetuningSet d{6.0, 0.4, {}};
  AmplitudePair init;
  const double T = 3.0;
  auto run = [&](double dt) {
    auto o = options(dt, 1L << 30);
    o.max_norm_drift = 1e-2;
    return integrate_raman(c, d, init, T, o, RamanFrame::interaction);
  };
  const Eigen::VectorXd ref = run(0.005 / 16).states.back().cwiseAbs2();
  const double e1 = (run(0.02).states.back().cwiseAbs2() - ref).norm();
  const double e2 = (run(0.01).states.back().cwiseAbs2() - ref).norm();
  const double e3 = (run(0.005).states.back().cwiseAbs2() - ref).norm();
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.2));
  CHECK(e2 / e3 == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("interaction and co-rotating frames agree") {
  auto c = random_couplings(42, 3);
  DetuningSet d{-25.0, 0.3, Eigen::Vector3d(-25.0, -24.0, -26.5)};
  AmplitudePair init{Complex(0.6, 0.0), Complex(0.0, 0.8)};
  const double dt = suggest_step(max_angular_frequency(build_interaction_hamiltonian(c, d, 0.0), d.delta));
  auto a = integrate_raman(c, d, init, 40.0, options(dt, 50), RamanFrame::interaction);
  auto b = integrate_raman(c, d, init, 40.0, options(dt, 50), RamanFrame::corotating);
  REQUIRE(a.states.size() == b.states.size());
  // different discretisations of the same equation
  for (std::size_t k = 0; k < a.states.size(); ++k) CHECK((a.states[k] - b.states[k]).norm() < 1e-7);

  // and the dense generic path sees the same Hamiltonian
  Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(5);
  psi0[0] = init.a0;
  psi0[1] = init.a1;
  auto g = integrate([&](double t) { return build_interaction_hamiltonian(c, d, t); }, psi0, 40.0, options(dt, 50));
  for (std::size_t k = 0; k < a.states.size(); ++k) CHECK((a.states[k] - g.states[k]).norm() < 1e-10);
}

TEST_CASE("step heuristic and drift abort") {
  HamiltonianMatrix h(2, 2);
  h << 0, 1, 1, 10;
  const double w = max_angular_frequency(h);
  CHECK(w == doctest::Approx(11.0));
  CHECK(suggest_step(w) < max_step(w));
  CHECK(max_step(w) == doctest::Approx(2 * pi / (20 * w)));
  CHECK_THROWS_AS(suggest_step(0.0), std::invalid_argument);

  try {
    integrate_static(h, basis(2, 0), 50.0, options(0.25));
    FAIL("expected a drift abort");
  } catch (const IntegrationError &e) {
    CHECK(e.drift > 1e-6);
    CHECK(e.suggested_dt < e.dt);
    CHECK(std::string(e.what()).find("retry with dt") != std::string::npos);
  }

  Eigen::VectorXcd unnormalised = Eigen::VectorXcd::Constant(2, 1.0);
  CHECK_THROWS_AS(integrate_static(h, unnormalised, 1.0, options(0.01)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_static(h, basis(2, 0), -1.0, options(0.01)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_static(h, basis(2, 0), 1.0, options(0.0)), std::invalid_argument);
  CHECK_THROWS_AS(integrate_static(h, basis(3, 0), 1.0, options(0.01)), std::invalid_argument);
}

TEST_CASE("lab-frame hamiltonian") {
  auto spec = LabFrameSpec::from_detunings(0.0, 100.0, 1000.0, 20.0, -0.3, 1.0, 0.5);
  CHECK(spec.Delta() == doctest::Approx(20.0));
  CHECK(spec.delta() == doctest::Approx(-0.3));
  CHECK(spec.omegaP == 1020.0);
  CHECK(spec.omegaS == doctest::Approx(920.3));

  auto h0 = build_lab_hamiltonian(spec, 0.0);
  CHECK(h0(0, 2) == 1.0);
  CHECK(h0(1, 2) == 0.5);
  for (double t : {0.1, 3.7, 11.0}) {
    auto h = build_lab_hamiltonian(spec, t);
    CHECK((h - h.transpose()).norm() == 0.0);
    CHECK(h.imag().norm() == 0.0);
  }
  LabFrameSpec dark = spec;
  dark.OmegaP = dark.OmegaS = 0.0;
  Eigen::Vector3cd bohr(0.0, 100.0, 1000.0);
  CHECK((build_lab_hamiltonian(dark, 2.5) - HamiltonianMatrix(bohr.asDiagonal())).norm() == 0.0);
}

TEST_CASE("lab frame reduces to the interaction picture") {
  // short run, scaled optical frequency
  const double Om = 1.0, Delta = 20.0;
  auto spec = LabFrameSpec::from_detunings(-50.0, 50.0, 1000.0, Delta, 0.0, Om, Om);
  const double T = 40.0;
  auto lab = integrate_lab(spec, basis(3, 0), T, options(suggest_step(lab_max_angular_frequency(spec), 150.0), 200));

  CouplingVectors c{Eigen::VectorXcd::Constant(1, Om), Eigen::VectorXcd::Constant(1, Om)};
  DetuningSet d{Delta, 0.0, {}};
  auto rwa = integrate_raman(c, d, {}, T, options(lab.dt, 200));
  REQUIRE(lab.times.size() == rwa.times.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < lab.times.size(); ++k)
    for (int i = 0; i < 2; ++i)
      worst = std::max(worst, std::abs(std::norm(lab.states[k][i]) - std::norm(rwa.states[k][i])));
  CHECK(worst < 0.05);
}

TEST_CASE("four intermediate levels follow the closed form") {
  auto c = random_couplings(43, 4);
  const double Delta = 200.0 * coupling_scale(c);
  DetuningSet d{Delta, 0.0, {}};
  auto e = mixing_angles(c, d);
  d.delta = e.DeltaB;
  e = mixing_angles(c, d);
  const double T = 2 * pi / e.OmegaTildeD;
  const double dt = suggest_step(max_angular_frequency(build_interaction_hamiltonian(c, d, 0.0), d.delta));
  auto tr = integrate_raman(c, d, {}, T, options(dt, 5000));
  auto cmp = compare_with_analytic(tr, e, {}, d.delta);
  CHECK(cmp.max_ground_deviation <= 0.02);
  CHECK(cmp.max_intermediate_population <= 3 * std::pow(coupling_scale(c) / (2 * Delta), 2));

  // halving the step changes nothing at this tolerance
  auto half = integrate_raman(c, d, {}, T, options(dt / 2, 10000));
  for (std::size_t k = 0; k < tr.states.size(); ++k)
    CHECK((tr.states[k].cwiseAbs2() - half.states[k].cwiseAbs2()).norm() < 1e-5);
}

TEST_CASE("analytic comparison report") {
  const double Om = 1.0, Delta = 100.0;
  CouplingVectors c{Eigen::VectorXcd::Constant(1, Om), Eigen::VectorXcd::Constant(1, 0.6 * Om)};
  DetuningSet d{Delta, 0.0, {}};
  auto e = mixing_angles(c, d);
  d.delta = e.DeltaB;
  e = mixing_angles(c, d);
  const double T = 2 * 2 * pi / e.OmegaTildeD;
  const double dt = suggest_step(max_angular_frequency(build_interaction_hamiltonian(c, d, 0.0), d.delta), 96.0);
  auto tr = integrate_raman(c, d, {}, T, options(dt, 500));
  auto r = compare_with_analytic(tr, e, {}, d.delta);
  CHECK(r.numeric_contrast == doctest::Approx(1.0).epsilon(0.02));
  CHECK(r.analytic_contrast == doctest::Approx(1.0).epsilon(1e-6));
  // adiabatic admixture plus the switch-on transient of the pumped leg
  const double bound = std::pow((coupling_scale(c) + c.pump.norm()) / (2 * Delta), 2);
  CHECK(r.max_intermediate_population <= bound * 1.01);
  CHECK(r.max_intermediate_population >= 0.9 * 4 * std::pow(c.pump.norm() / (2 * Delta), 2));
  CHECK(r.numeric_frequency == doctest::Approx(r.analytic_frequency).epsilon(0.01));
  CHECK(r.lightshift_estimate == doctest::Approx(e.DeltaB).epsilon(0.05));

  // orthogonal couplings do not drive the transition
  CouplingVectors orth{Eigen::Vector2cd(Om, 0.0), Eigen::Vector2cd(0.0, Om)};
  DetuningSet d2{Delta, 0.0, {}};
  const double w = max_angular_frequency(build_interaction_hamiltonian(orth, d2, 0.0));
  auto o = integrate_raman(orth, d2, {}, 1500.0, options(suggest_step(w, 96.0), 1000));
  for (auto &s : o.states) CHECK(std::norm(s[0]) >= 0.99);
}

TEST_CASE("oscillation estimate on a synthetic signal") {
  Trajectory tr;
  const double w = 0.37;
  for (int k = 0; k <= 600; ++k) {
    const double t = 0.1 * k;
    Eigen::VectorXcd s(2);
    s << std::cos(w * t / 2), Complex(0, std::sin(w * t / 2));
    tr.times.push_back(t);
    tr.states.push_back(s);
  }
  auto est = estimate_oscillation(tr);
  CHECK(est.frequency == doctest::Approx(w).epsilon(1e-6));
  CHECK(est.contrast == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("trajectory csv") {
  HamiltonianMatrix h(2, 2);
  h << 0, 0.5, 0.5, 0;
  auto tr = integrate_static(h, basis(2, 0), 1.0, options(0.1, 5));
  std::ostringstream out;
  write_trajectory_csv(out, tr, true);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t_s,P0,P1,re0,im0,re1,im1");
  std::getline(in, line);
  CHECK(line == "0,1,0,1,0,0,0");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
  CHECK(tr.populations().rows() == 3);
  CHECK(tr.populations().row(0).sum() == 1.0);
}
