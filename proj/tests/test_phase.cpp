#include "doctest.h"
#include "superint/charts.hpp"
#include "superint/integrals.hpp"
#include "superint/models.hpp"

using namespace superint;
using phase::make_state;
using phase::Observable;
using phase::PhaseState;

namespace {

num::DiffConfig fd_oracle() {
  num::DiffConfig cfg;
  cfg.mode = num::DiffConfig::Mode::finite_difference;
  cfg.fd_step = 1e-4;
  cfg.richardson = true;
  return cfg;
}

PhaseState random_regular_state(num::Rng& rng, const integrals::IntegralSet& set) {
  for (;;) {
    PhaseState z;
    z.n = set.system().dim();
    for (int i = 0; i < z.n; ++i) {
      z.q[size_t(i)] = rng.uniform(-2, 2);
      z.p[size_t(i)] = rng.uniform(-1, 1);
    }
    if (set.margin(z) >= 1e-3) return z;
  }
}

}  // namespace

TEST_SUITE_BEGIN("phase");

TEST_CASE("state validation") {
  CHECK_THROWS_AS(make_state({1.0}, {1.0}), num::DimensionError);
  CHECK_THROWS_AS(make_state({1.0, 2.0}, {1.0}), num::DimensionError);
  CHECK_THROWS_AS(make_state({1.0, std::nan(""), 0.0}, {0.0, 0.0, 0.0}), num::EvaluationError);
}

TEST_CASE("bracket of H with itself vanishes") {
  const auto sys = models::rotational_family(models::AngularProfile::constant(0.7));
  const auto z = make_state({1.0, 0.5, -0.3}, {0.2, -0.4, 0.6});
  CHECK(phase::poisson_bracket(sys.hamiltonian(), sys.hamiltonian(), z) == doctest::Approx(0.0));
}

TEST_CASE("angular momenta close under the bracket") {
  const auto l1 = integrals::angular_momentum(0);
  const auto l2 = integrals::angular_momentum(1);
  const auto l3 = integrals::angular_momentum(2);
  const auto z = make_state({1, 0, 0}, {0, 1, 0});
  CHECK(phase::poisson_bracket(l1, l2, z) == doctest::Approx(l3(z)));
  CHECK(l3(z) == doctest::Approx(1.0));
}

TEST_CASE("axial-family bracket vanishes, cross-checked by finite differences") {
  models::AngularProfile k;
  k.add_constant(1.2).add_fourier(1, 0.3, -0.2).add_inverse_square(0.4, 1.0, 0.5);
  const auto set = integrals::catalog_rotational(k);
  num::Rng rng(0x5EED);
  for (int t = 0; t < 10; ++t) {
    const auto z = random_regular_state(rng, set);
    const double auto_b =
        phase::poisson_bracket(set.system().hamiltonian(), set.members()[2], z);
    const double fd_b =
        phase::poisson_bracket(set.system().hamiltonian(), set.members()[2], z, fd_oracle());
    CHECK(std::abs(auto_b) < 1e-9);
    CHECK(std::abs(fd_b) < 1e-6);
  }
}

TEST_CASE("vector field conventions") {
  const auto free3 = models::layered_xy(models::zero_potential(), {});
  const auto f = free3.vector_field(make_state({0, 0, 0}, {1, 0, 0}));
  CHECK(f[0] == doctest::Approx(1.0));
  for (int i = 1; i < 6; ++i) CHECK(f[size_t(i)] == doctest::Approx(0.0));

  const auto osc = models::spherical_separable({{0.5, 2}}, {}, {});
  const auto g = osc.vector_field(make_state({1, 0, 0}, {0, 0, 0}));
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[3] == doctest::Approx(-1.0));
}

TEST_CASE("vector field of the chain equals minus the potential gradient at rest") {
  const auto sys = models::calogero_three_body(0.0, 1.0, 1.0, 1.0);
  const auto z = make_state({1, 2, 4}, {0, 0, 0});
  const auto f = sys.vector_field(z);
  const auto fd = sys.potential().gradient(z, fd_oracle());
  for (int i = 0; i < 3; ++i) {
    CHECK(f[size_t(i)] == doctest::Approx(0.0));
    CHECK(f[size_t(3 + i)] == doctest::Approx(-fd[size_t(i)]).epsilon(1e-8));
  }
}

TEST_CASE("directional derivative along the field equals the bracket with H") {
  models::AngularProfile k;
  k.add_constant(0.9).add_fourier(2, 0.2, 0.1);
  const auto sys = models::rotational_family(k);
  const auto f2 = integrals::catalog_rotational(k).members()[2];
  const auto z = make_state({1.1, 0.7, -0.4}, {0.3, -0.5, 0.2});
  const auto field = sys.vector_field(z);
  const auto grad = f2.gradient(z);
  double dir = 0.0;
  for (int i = 0; i < 6; ++i) dir += grad[size_t(i)] * field[size_t(i)];
  CHECK(dir == doctest::Approx(phase::poisson_bracket(f2, sys.hamiltonian(), z)).epsilon(1e-12));
}

TEST_CASE("pushforward through the frame rotation") {
  const auto rot = phase::linear_map(charts::rotation_matrix());
  SUBCASE("identity map") {
    const auto id = phase::linear_map(num::Mat3::identity());
    const auto z = make_state({1, 2, 3}, {0.1, 0.2, 0.3});
    const auto w = phase::pushforward_state(id, z);
    for (int i = 0; i < 3; ++i) {
      CHECK(w.q[size_t(i)] == z.q[size_t(i)]);
      CHECK(w.p[size_t(i)] == z.p[size_t(i)]);
    }
  }
  SUBCASE("first column of the rotation") {
    const auto z = make_state({std::sqrt(6.0), 0, 0}, {0, 0, 0});
    const auto w = phase::pushforward_state(rot, z);
    CHECK(w.q[0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(w.q[1] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(w.q[2] == doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("orthogonal maps preserve momentum norm") {
    num::Rng rng(0x5EED);
    for (int t = 0; t < 100; ++t) {
      PhaseState z;
      z.n = 3;
      for (int i = 0; i < 3; ++i) {
        z.q[size_t(i)] = rng.uniform(-2, 2);
        z.p[size_t(i)] = rng.uniform(-1, 1);
      }
      const auto w = phase::pushforward_state(rot, z);
      CHECK(num::norm(w.p) == doctest::Approx(num::norm(z.p)).epsilon(1e-13));
    }
  }
  SUBCASE("the hamiltonian in rotated coordinates evaluates to the same energy") {
    const auto set = integrals::catalog_rotational(models::calogero_profile(1, 1, 1));
    const auto& h = set.system().hamiltonian();
    // H written in the new frame is the pullback along the inverse map
    const auto h_new = phase::compose_linear(h, charts::rotation_matrix().transposed());
    num::Rng rng(0x5EED);
    int done = 0;
    while (done < 50) {
      PhaseState z;
      z.n = 3;
      for (int i = 0; i < 3; ++i) {
        z.q[size_t(i)] = rng.uniform(-2, 2);
        z.p[size_t(i)] = rng.uniform(-1, 1);
      }
      if (set.margin(z) < 1e-3) continue;
      const auto w = phase::pushforward_state(rot, z);
      CHECK(h_new(w) == doctest::Approx(h(z)).epsilon(1e-12));
      ++done;
    }
  }
}

TEST_CASE("bracket antisymmetry and the Leibniz rule") {
  models::AngularProfile k = models::calogero_profile(1, 1, 1);
  const auto set = integrals::catalog_rotational(k);
  num::Rng rng(0xA11CE);
  for (int t = 0; t < 20; ++t) {
    const auto z = random_regular_state(rng, set);
    const auto& a = set.members()[1];
    const auto& b = set.members()[4];
    const auto& c = set.members()[0];
    CHECK(phase::poisson_bracket(a, b, z) == doctest::Approx(-phase::poisson_bracket(b, a, z)));
    const auto lhs = phase::poisson_bracket_normalized(a * b, c, z);
    const double rhs =
        a(z) * phase::poisson_bracket(b, c, z) + phase::poisson_bracket(a, c, z) * b(z);
    CHECK(std::abs(lhs.bracket - rhs) <= 1e-9 * (lhs.norm_a * lhs.norm_b + 1.0));
  }
}

TEST_CASE("bracket is invariant under the orthogonal pushforward") {
  models::AngularProfile k = models::calogero_profile(1, 0.5, 0.25);
  const auto set = integrals::catalog_rotational(k);
  const num::Mat3 m = charts::rotation_matrix();
  const auto a = phase::compose_linear(set.members()[1], m);
  const auto b = phase::compose_linear(set.members()[2], m);
  num::Rng rng(0xB0B);
  int done = 0;
  while (done < 20) {
    PhaseState z;
    z.n = 3;
    for (int i = 0; i < 3; ++i) {
      z.q[size_t(i)] = rng.uniform(-2, 2);
      z.p[size_t(i)] = rng.uniform(-1, 1);
    }
    PhaseState mz;
    mz.n = 3;
    mz.q = m.apply(z.q);
    mz.p = m.apply(z.p);
    if (set.margin(mz) < 1e-2) continue;
    const double lhs = phase::poisson_bracket(a, b, z);
    const double rhs = phase::poisson_bracket(set.members()[1], set.members()[2], mz);
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    ++done;
  }
}

TEST_CASE("dimension mismatch is rejected") {
  const auto l3 = integrals::angular_momentum(2);
  const auto sys2 = models::calogero_reduced_2d(0, 1, 1, 1);
  const auto z2 = make_state({1.0, 0.4}, {0.2, -0.3});
  CHECK_THROWS_AS(phase::poisson_bracket(l3, sys2.hamiltonian(), z2), num::DimensionError);
}

TEST_CASE("singularity guard raises on the collision set") {
  const auto sys = models::calogero_three_body(0.0, 1.0, 1.0, 1.0);
  const auto z = make_state({0.5, 0.5, 0.5}, {0, 0, 0});
  CHECK_THROWS_AS(sys.potential()(z), num::SingularityError);
}

TEST_CASE("automatic and FD gradients agree across the catalog") {
  models::AngularProfile k;
  k.add_constant(1.0).add_inverse_square(0.5, 1.0, -0.7).add_fourier(1, 0.2, 0.3);
  const auto set = integrals::catalog_rotational(k);
  num::Rng rng(0x5EED);
  for (int t = 0; t < 100; ++t) {
    const auto z = random_regular_state(rng, set);
    for (const auto& f : set.members()) {
      const auto ga = f.gradient(z);
      const auto gf = f.gradient(z, fd_oracle());
      for (size_t i = 0; i < ga.size(); ++i)
        CHECK(std::abs(ga[i] - gf[i]) <= 1e-5 * std::max(1.0, std::abs(ga[i])));
    }
  }
}

TEST_SUITE_END();
