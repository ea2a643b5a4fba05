#include "doctest.h"
#include "superint/models.hpp"
#include "superint/numcore.hpp"

using namespace superint;
using num::DiffConfig;
using num::Dual;
using num::Mat;

namespace {

template <class F>
std::vector<double> grad(const F& f, std::initializer_list<double> z, DiffConfig cfg = {}) {
  std::vector<double> v(z);
  return num::gradient(f, std::span<const double>(v), cfg);
}

DiffConfig fd_config(double step = 1e-6, bool richardson = false) {
  DiffConfig cfg;
  cfg.mode = DiffConfig::Mode::finite_difference;
  cfg.fd_step = step;
  cfg.richardson = richardson;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("numcore");

TEST_CASE("dual arithmetic matches calculus") {
  const Dual x = Dual::variable(0.7, 0);
  const Dual y = Dual::variable(-1.3, 1);
  const Dual f = x * y + sin(x) / cosh(y);
  const double expect = 0.7 * -1.3 + std::sin(0.7) / std::cosh(-1.3);
  CHECK(f.value() == doctest::Approx(expect).epsilon(1e-14));
  CHECK(f.deriv(0) == doctest::Approx(-1.3 + std::cos(0.7) / std::cosh(-1.3)).epsilon(1e-14));
  const double d1 = 0.7 - std::sin(0.7) * std::sinh(-1.3) / num::sq(std::cosh(-1.3));
  CHECK(f.deriv(1) == doctest::Approx(d1).epsilon(1e-12));
}

TEST_CASE("atan2 derivative") {
  const Dual y = Dual::variable(0.8, 0);
  const Dual x = Dual::variable(-0.5, 1);
  const Dual a = atan2(y, x);
  const double r2 = 0.8 * 0.8 + 0.25;
  CHECK(a.value() == doctest::Approx(std::atan2(0.8, -0.5)));
  CHECK(a.deriv(0) == doctest::Approx(-0.5 / r2));
  CHECK(a.deriv(1) == doctest::Approx(-0.8 / r2).epsilon(1e-14));
}

TEST_CASE("gradient of simple polynomials") {
  auto sq1 = [](auto z) { return z[0] * z[0]; };
  CHECK(grad(sq1, {3.0})[0] == doctest::Approx(6.0));

  auto bil = [](auto z) { return z[0] * z[1]; };
  const auto g = grad(bil, {2.0, 5.0});
  CHECK(g[0] == doctest::Approx(5.0));
  CHECK(g[1] == doctest::Approx(2.0));
}

TEST_CASE("automatic and finite-difference gradients agree on the chain potential") {
  const auto sys = models::calogero_three_body(0.0, 1.0, 1.0, 1.0);
  auto f = [&sys](auto z) {
    using T = std::decay_t<decltype(z[0])>;
    phase::State<T> s;
    s.n = 3;
    s.q = {z[0], z[1], z[2]};
    return sys.potential()(s);
  };
  const auto ga = grad(f, {1.0, 2.0, 4.0});
  const auto gf = grad(f, {1.0, 2.0, 4.0}, fd_config(1e-4, true));
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(ga[size_t(i)] - gf[size_t(i)]) <=
          1e-6 * std::max(1.0, std::abs(ga[size_t(i)])));
}

TEST_CASE("non-finite evaluation raises with the offending coordinate") {
  auto f = [](auto z) {
    using std::log;
    return log(z[0]);
  };
  CHECK_THROWS_AS(grad(f, {-1.0}), num::EvaluationError);
  try {
    grad(f, {-1.0}, fd_config());
  } catch (const num::EvaluationError& e) {
    CHECK(e.coordinate() == 0);
  }
}

TEST_CASE("fd step validation") {
  DiffConfig bad;
  bad.fd_step = 0.5;
  auto f = [](auto z) { return z[0]; };
  CHECK_THROWS_AS(grad(f, {1.0}, bad), std::invalid_argument);
}

TEST_CASE("numerical rank basics") {
  Mat id3(3, 3);
  for (int i = 0; i < 3; ++i) id3(i, i) = 1.0;
  CHECK(num::numerical_rank(id3, 1e-8) == 3);

  Mat outer(4, 3);
  const double u[4] = {1, -2, 0.5, 3}, v[3] = {2, 1, -1};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j) outer(i, j) = u[i] * v[j];
  CHECK(num::numerical_rank(outer) == 1);

  Mat zero(3, 4);
  CHECK(num::numerical_rank(zero) == 0);

  Mat bad(1, 1);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(num::numerical_rank(bad), num::EvaluationError);
  CHECK_THROWS_AS(num::numerical_rank(id3, 2.0), std::invalid_argument);
}

TEST_CASE("rank is invariant under permutation and scaling") {
  num::Rng rng(0x5EED);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 3 + trial % 3, q = 4 + trial % 2, r = 1 + trial % 3;
    Mat a(p, r), b(r, q), m(p, q);
    for (int i = 0; i < p; ++i)
      for (int k = 0; k < r; ++k) a(i, k) = rng.uniform(-1, 1);
    for (int k = 0; k < r; ++k)
      for (int j = 0; j < q; ++j) b(k, j) = rng.uniform(-1, 1);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < q; ++j) {
        double s = 0;
        for (int k = 0; k < r; ++k) s += a(i, k) * b(k, j);
        m(i, j) = s;
      }
    const int rank = num::numerical_rank(m);
    CHECK(rank == r);  // generic factors

    Mat perm(p, q), scaled(p, q);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < q; ++j) {
        perm(i, j) = m((i + 1) % p, (j + 2) % q);
        scaled(i, j) = -7.3 * m(i, j);
      }
    CHECK(num::numerical_rank(perm) == rank);
    CHECK(num::numerical_rank(scaled) == rank);
  }
}

TEST_CASE("least squares reproduces an exact solution") {
  Mat a(6, 3);
  num::Rng rng(42);
  std::vector<double> x = {1.5, -0.25, 2.0};
  std::vector<double> bvec(6, 0.0);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = rng.uniform(-1, 1);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) bvec[size_t(i)] += a(i, j) * x[size_t(j)];
  const auto sol = num::least_squares(a, bvec);
  for (int j = 0; j < 3; ++j) CHECK(sol[size_t(j)] == doctest::Approx(x[size_t(j)]).epsilon(1e-10));
}

TEST_CASE("symmetric eigen decomposition") {
  num::Mat3 m;
  m(0, 0) = 2.0;
  m(1, 1) = 3.0;
  m(2, 2) = 5.0;
  m(0, 1) = m(1, 0) = 1.0;
  const auto e = num::sym_eigen3(m);
  // residual of M V = V diag(lambda)
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i) {
      double mv = 0;
      for (int j = 0; j < 3; ++j) mv += m(i, j) * e.vectors(j, k);
      CHECK(mv == doctest::Approx(e.values[size_t(k)] * e.vectors(i, k)).epsilon(1e-10));
    }
}

TEST_SUITE_END();
