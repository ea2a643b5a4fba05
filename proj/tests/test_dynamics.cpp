#include <numbers>
#include <sstream>

#include "doctest.h"
#include "superint/dynamics.hpp"

using namespace superint;
using dynamics::Integrator;
using models::AngularProfile;
using phase::make_state;

namespace {

constexpr double kPi = std::numbers::pi;

phase::HamiltonianSystem oscillator() { return models::spherical_separable({{0.5, 2}}, {}, {}); }

AngularProfile bounded_profile() {
  // positive everywhere, so orbits never reach the axis
  AngularProfile k;
  k.add_constant(1.5).add_fourier(1, 0.2, -0.15).add_fourier(2, 0.1, 0.05);
  return k;
}

}  // namespace

TEST_SUITE_BEGIN("dynamics");

TEST_CASE("free particle travels in a straight line") {
  const auto sys = models::layered_xy(models::zero_potential(), {});
  const auto tr = dynamics::integrate(sys, make_state({0, 0, 0}, {1, 0, 0}), 1e-3, 1.0,
                                      Integrator::yoshida4);
  REQUIRE(tr.status == dynamics::RunStatus::completed);
  const auto& last = tr.states.back();
  CHECK(last.q[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(last.q[1] == doctest::Approx(0.0));
  CHECK(tr.times.back() == doctest::Approx(1.0));
}

TEST_CASE("oscillator returns to the start after one period") {
  const auto sys = oscillator();
  const int n = static_cast<int>(std::ceil(2.0 * kPi / 1e-3));
  const double dt = 2.0 * kPi / n;
  const auto tr = dynamics::integrate(sys, make_state({1, 0, 0}, {0, 0, 0}), dt, 2.0 * kPi + dt / 2,
                                      Integrator::yoshida4);
  REQUIRE(tr.status == dynamics::RunStatus::completed);
  const auto& last = tr.states.back();
  CHECK(std::abs(last.q[0] - 1.0) < 1e-6);
  CHECK(std::abs(last.p[0]) < 1e-6);
}

TEST_CASE("axial family runs to completion or truncates cleanly") {
  const auto sys = models::rotational_family(bounded_profile());
  const auto tr = dynamics::integrate(sys, make_state({1.0, 0.3, 0.2}, {0.1, 0.4, 0.05}), 1e-3,
                                      50.0, Integrator::yoshida4);
  CHECK((tr.status == dynamics::RunStatus::completed ||
         tr.status == dynamics::RunStatus::truncated_singularity));
  for (const auto& z : tr.states)
    for (int i = 0; i < 3; ++i) {
      CHECK(std::isfinite(z.q[size_t(i)]));
      CHECK(std::isfinite(z.p[size_t(i)]));
    }
}

TEST_CASE("an orbit aimed at the axis truncates with a status instead of blowing up") {
  AngularProfile k;
  k.add_constant(-1.0);  // attractive toward the axis
  const auto sys = models::rotational_family(k);
  for (auto m : {Integrator::yoshida4, Integrator::stormer_verlet2, Integrator::rk4_reference}) {
    const auto tr = dynamics::integrate(sys, make_state({0.5, 0, 0}, {-0.4, 0, 0}), 1e-3, 10.0, m);
    CHECK(tr.status == dynamics::RunStatus::truncated_singularity);
    CHECK(tr.states.size() > 1);
  }
}

TEST_CASE("drift of conserved and non-conserved quantities") {
  const auto set = integrals::catalog_rotational(bounded_profile());
  const auto tr = dynamics::integrate(set.system(), make_state({1.0, 0.3, 0.2}, {0.1, 0.4, 0.05}),
                                      1e-3, 50.0, Integrator::yoshida4);
  REQUIRE(tr.status == dynamics::RunStatus::completed);
  for (const auto& e : dynamics::drift_report(tr, set)) CHECK(e.max_relative_drift <= 1e-6);

  const auto bad = dynamics::drift_of(tr, phase::coordinate_observable(0));
  CHECK(bad.max_relative_drift > 0.1);
}

TEST_CASE("momentum along the symmetry axis is conserved exactly by the splitting methods") {
  const auto sys = models::rotational_family(bounded_profile());
  const auto f3 = integrals::catalog_rotational(bounded_profile()).members()[3];
  for (auto m : {Integrator::stormer_verlet2, Integrator::yoshida4}) {
    const auto tr = dynamics::integrate(sys, make_state({1.1, 0.2, 0.0}, {0.2, 0.3, 0.17}), 1e-3,
                                        50.0, m);
    REQUIRE(tr.status == dynamics::RunStatus::completed);
    CHECK(dynamics::drift_of(tr, f3).max_relative_drift <= 1e-10);
  }
}

TEST_CASE("halving the step shrinks the oscillator energy drift by the method order") {
  const auto sys = oscillator();
  const auto h = sys.hamiltonian();
  auto drift_at = [&](double dt) {
    const auto tr = dynamics::integrate(sys, make_state({1, 0.2, -0.3}, {0.1, 0.5, 0.2}), dt, 10.0,
                                        Integrator::yoshida4);
    return dynamics::drift_of(tr, h).max_relative_drift;
  };
  const double d1 = drift_at(2e-2);
  const double d2 = drift_at(1e-2);
  CHECK(d1 / d2 >= 8.0);
}

TEST_CASE("reference and splitting integrators agree on a regular orbit") {
  const auto sys = models::rotational_family(bounded_profile());
  const auto z0 = make_state({1.0, 0.4, 0.1}, {0.2, 0.3, 0.1});
  const auto a = dynamics::integrate(sys, z0, 1e-4, 1.0, Integrator::yoshida4);
  const auto b = dynamics::integrate(sys, z0, 1e-4, 1.0, Integrator::rk4_reference);
  REQUIRE(a.states.size() == b.states.size());
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(a.states.back().q[size_t(i)] - b.states.back().q[size_t(i)]));
    worst = std::max(worst, std::abs(a.states.back().p[size_t(i)] - b.states.back().p[size_t(i)]));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("closure probe") {
  SUBCASE("isotropic oscillator closes at its period") {
    const auto r = dynamics::closure_probe(oscillator(), make_state({1, 0, 0}, {0, 0.6, 0}), 20.0);
    REQUIRE(r.closed);
    CHECK(std::abs(r.closed_at - 2.0 * kPi) < 1e-4);
  }
  SUBCASE("free motion escapes") {
    const auto sys = models::layered_xy(models::zero_potential(), {});
    const auto r =
        dynamics::closure_probe(sys, make_state({0.1, 0, 0}, {1, 0, 0}), 150.0, 1e-3, 1e-2);
    CHECK(r.status == dynamics::RunStatus::escaping);
    CHECK_FALSE(r.closed);
  }
  SUBCASE("coordinate-plane oscillator family: closure expected and recorded") {
    const auto set = integrals::catalog_coordinate_planes(0.1, 0.2, 0.3, {{1.0, 2}});
    const auto r = dynamics::closure_probe(set.system(),
                                           make_state({1.0, 0.8, 0.9}, {0.2, -0.1, 0.15}), 30.0);
    CHECK(r.status == dynamics::RunStatus::completed);
    // diagnostic: the probe reports the minimum return distance either way
    CHECK(std::isfinite(r.min_distance));
    CHECK(r.closed);
  }
  SUBCASE("generic axial profile: diagnostic only, no closure expectation") {
    const auto sys = models::rotational_family(bounded_profile());
    const auto r = dynamics::closure_probe(sys, make_state({1.0, 0.3, 0.0}, {0.1, 0.5, 0.0}), 30.0);
    CHECK(std::isfinite(r.min_distance));
  }
}

TEST_CASE("csv export shape") {
  const auto sys = models::layered_xy(models::zero_potential(), {});
  const auto tr = dynamics::integrate(sys, make_state({0, 0, 0}, {1, 0, 0}), 0.25, 1.0,
                                      Integrator::stormer_verlet2);
  std::ostringstream os;
  dynamics::write_csv(tr, os);
  const std::string csv = os.str();
  CHECK(csv.rfind("t,q1,q2,q3,p1,p2,p3\n", 0) == 0);
  // final row reaches q1 = 1 exactly on the grid
  CHECK(csv.find("\n1,1,") != std::string::npos);
}

TEST_CASE("argument validation") {
  const auto sys = oscillator();
  CHECK_THROWS_AS(dynamics::integrate(sys, make_state({1, 0, 0}, {0, 0, 0}), -1.0, 1.0,
                                      Integrator::yoshida4),
                  std::invalid_argument);
  CHECK_THROWS_AS(dynamics::integrator_from_name("leapfrog"), std::invalid_argument);
  CHECK(dynamics::integrator_from_name("stormer-verlet-2") == Integrator::stormer_verlet2);
}

TEST_SUITE_END();
