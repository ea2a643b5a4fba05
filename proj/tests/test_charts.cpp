#include <numbers>

#include "doctest.h"
#include "superint/charts.hpp"

using namespace superint;
using charts::Chart;
using charts::ChartKind;
using num::Vec3;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE_BEGIN("charts");

TEST_CASE("jacobi coordinates") {
  SUBCASE("centre-of-mass ray") {
    const auto j = charts::jacobi_transform({0.8, 0.8, 0.8});
    CHECK(j.R == doctest::Approx(0.8));
    CHECK(j.rho == doctest::Approx(0.0));
    CHECK(j.lambda == doctest::Approx(0.0));
  }
  SUBCASE("antisymmetric pair") {
    const auto j = charts::jacobi_transform({1.0, -1.0, 0.0});
    CHECK(j.R == doctest::Approx(0.0));
    CHECK(j.rho == doctest::Approx(std::sqrt(2.0)));
    CHECK(j.lambda == doctest::Approx(0.0));
  }
  SUBCASE("roundtrip") {
    const Vec3 x{0.3, -1.2, 2.1};
    const auto back = charts::jacobi_inverse(charts::jacobi_transform(x));
    for (int i = 0; i < 3; ++i) CHECK(back[size_t(i)] == doctest::Approx(x[size_t(i)]).epsilon(1e-14));
  }
}

TEST_CASE("jacobi map diagonalizes the kinetic form") {
  // canonical pushforward through u = (R, rho, lambda)
  const auto map = phase::linear_map(charts::jacobi_matrix());
  num::Rng rng(0x5EED);
  for (int t = 0; t < 50; ++t) {
    phase::PhaseState z;
    z.n = 3;
    for (int i = 0; i < 3; ++i) {
      z.q[size_t(i)] = rng.uniform(-2, 2);
      z.p[size_t(i)] = rng.uniform(-1, 1);
    }
    const auto w = phase::pushforward_state(map, z);
    const double lhs = num::dot(z.p, z.p);
    // P_R is the total momentum; P_R^2/3 = 3 * (mean momentum)^2
    const double rhs = w.p[1] * w.p[1] + w.p[2] * w.p[2] + w.p[0] * w.p[0] / 3.0;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(w.p[0] == doctest::Approx(z.p[0] + z.p[1] + z.p[2]).epsilon(1e-12));
  }
}

TEST_CASE("frame rotation columns and roundtrip") {
  const Vec3 a = charts::rotation_tr({0.0, 0.0, std::sqrt(3.0)});
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(a[1] == doctest::Approx(1.0));
  CHECK(a[2] == doctest::Approx(1.0));

  const Vec3 b = charts::rotation_tr({0.0, std::sqrt(6.0), 0.0});
  CHECK(b[0] == doctest::Approx(0.0));
  CHECK(b[1] == doctest::Approx(std::sqrt(3.0)));
  CHECK(b[2] == doctest::Approx(-std::sqrt(3.0)));

  num::Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const Vec3 xt{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Vec3 back = charts::rotation_tr_inverse(charts::rotation_tr(xt));
    for (int i = 0; i < 3; ++i) CHECK(std::abs(back[size_t(i)] - xt[size_t(i)]) < 1e-14);
  }
  const auto m = charts::rotation_matrix();
  CHECK((m.transposed() * m - num::Mat3::identity()).max_abs() < 1e-15);
  CHECK(m.det() == doctest::Approx(1.0));
}

TEST_CASE("spherical chart values") {
  Chart sph(ChartKind::spherical);
  const Vec3 a = sph.forward({1.0, kPi / 2, 0.0});
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(a[1] == doctest::Approx(0.0));
  CHECK(a[2] == doctest::Approx(0.0).epsilon(1e-15));
  const Vec3 b = sph.forward({2.0, kPi / 2, kPi / 2});
  CHECK(b[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(b[1] == doctest::Approx(2.0));
}

TEST_CASE("chart domain violations raise") {
  Chart sph(ChartKind::spherical);
  CHECK_THROWS_AS(sph.forward({1.0, -0.1, 0.0}), charts::ChartDomainError);
  CHECK_THROWS_AS(sph.forward({-1.0, 1.0, 0.0}), charts::ChartDomainError);
  Chart par(ChartKind::rotational_parabolic);
  CHECK_THROWS_AS(par.forward({0.0, 1.0, 0.0}), charts::ChartDomainError);
  CHECK_THROWS_AS(Chart(ChartKind::prolate_spheroidal, -1.0), std::invalid_argument);
}

TEST_CASE("all five charts roundtrip and stay orthogonal") {
  num::Rng rng(0x5EED);
  std::vector<Chart> cs;
  cs.emplace_back(ChartKind::spherical);
  cs.emplace_back(ChartKind::circular_cylindrical);
  cs.emplace_back(ChartKind::rotational_parabolic);
  cs.emplace_back(ChartKind::prolate_spheroidal, 0.7);
  cs.emplace_back(ChartKind::oblate_spheroidal, 1.4);
  for (const auto& c : cs) {
    for (int t = 0; t < 100; ++t) {
      Vec3 u;
      switch (c.kind()) {
        case ChartKind::spherical:
        case ChartKind::prolate_spheroidal:
        case ChartKind::oblate_spheroidal:
          u = {rng.uniform(0.3, 2.0), rng.uniform(0.3, kPi - 0.3), rng.uniform(0, 2 * kPi)};
          break;
        case ChartKind::circular_cylindrical:
          u = {rng.uniform(0.3, 2.0), rng.uniform(-2, 2), rng.uniform(0, 2 * kPi)};
          break;
        case ChartKind::rotational_parabolic:
          u = {rng.uniform(0.3, 1.8), rng.uniform(0.3, 1.8), rng.uniform(0, 2 * kPi)};
          break;
      }
      const Vec3 x = c.forward(u);
      const Vec3 x2 = c.forward(c.inverse(x));
      for (int i = 0; i < 3; ++i)
        CHECK(std::abs(x2[size_t(i)] - x[size_t(i)]) <= 1e-12 * std::max(1.0, num::norm(x)));

      const auto j = c.jacobian(u);
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          double dot = 0, na = 0, nb = 0;
          for (int i = 0; i < 3; ++i) {
            dot += j(i, a) * j(i, b);
            na += j(i, a) * j(i, a);
            nb += j(i, b) * j(i, b);
          }
          CHECK(std::abs(dot) <= 1e-10 * std::sqrt(na * nb));
        }
    }
  }
}

TEST_CASE("the azimuth is the same coordinate in every chart") {
  num::Rng rng(7);
  std::vector<Chart> cs;
  cs.emplace_back(ChartKind::spherical);
  cs.emplace_back(ChartKind::circular_cylindrical);
  cs.emplace_back(ChartKind::rotational_parabolic);
  cs.emplace_back(ChartKind::prolate_spheroidal, 0.9);
  cs.emplace_back(ChartKind::oblate_spheroidal, 1.1);
  for (int t = 0; t < 50; ++t) {
    const Vec3 x{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    if (x[0] * x[0] + x[1] * x[1] < 0.05) continue;
    const double phi = charts::azimuth(x);
    for (const auto& c : cs) CHECK(std::abs(c.inverse(x)[2] - phi) < 1e-12);
  }
}

TEST_CASE("rotation maps x3t-planes to planes orthogonal to the diagonal") {
  num::Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const Vec3 xt{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const Vec3 x = charts::rotation_tr(xt);
    CHECK(std::abs(x[0] + x[1] + x[2] - std::sqrt(3.0) * xt[2]) < 1e-14);
  }
}

TEST_CASE("chart pushforward is canonical: spherical kinetic form") {
  // mapping (u, p_u) through the forward map with p_x = J^{-T} p_u must turn
  // the curvilinear kinetic form into the flat one
  Chart sph(ChartKind::spherical);
  num::Rng rng(0x5EED);
  const auto map = sph.as_map();
  for (int t = 0; t < 50; ++t) {
    phase::PhaseState zu;
    zu.n = 3;
    zu.q = {rng.uniform(0.4, 2.0), rng.uniform(0.4, kPi - 0.4), rng.uniform(0, 2 * kPi)};
    zu.p = {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto zx = phase::pushforward_state(map, zu);
    const double r = zu.q[0], th = zu.q[1];
    const double curvilinear = zu.p[0] * zu.p[0] + zu.p[1] * zu.p[1] / (r * r) +
                               zu.p[2] * zu.p[2] / (r * r * std::sin(th) * std::sin(th));
    CHECK(num::dot(zx.p, zx.p) == doctest::Approx(curvilinear).epsilon(1e-12));
  }
}

TEST_CASE("relative coordinates and the rotation differ by an orthogonal map") {
  const auto jm = charts::jacobi_matrix();
  num::Mat3 b;
  for (int j = 0; j < 3; ++j) {
    b(0, j) = jm(1, j);                   // rho
    b(1, j) = jm(2, j);                   // lambda
    b(2, j) = std::sqrt(3.0) * jm(0, j);  // sqrt3 R
  }
  const num::Mat3 map = charts::rotation_matrix().transposed() * b.transposed();
  CHECK((map.transposed() * map - num::Mat3::identity()).max_abs() < 1e-14);
}

TEST_SUITE_END();
