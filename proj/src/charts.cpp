#include "superint/charts.hpp"

#include <cmath>
#include <numbers>

namespace superint::charts {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_2pi(double phi) {
  if (phi < 0.0) phi += 2.0 * kPi;
  if (phi >= 2.0 * kPi) phi -= 2.0 * kPi;
  return phi;
}

/// Forward maps, scalar-generic so Jacobians come from dual evaluation.
template <class T>
std::array<T, 3> forward_impl(ChartKind kind, double a, const std::array<T, 3>& u) {
  using num::sq;
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  const T& c0 = u[0];
  const T& c1 = u[1];
  const T& phi = u[2];
  switch (kind) {
    case ChartKind::spherical:  // (r, theta, phi)
      return {c0 * sin(c1) * cos(phi), c0 * sin(c1) * sin(phi), c0 * cos(c1)};
    case ChartKind::circular_cylindrical:  // (rho, z, phi)
      return {c0 * cos(phi), c0 * sin(phi), c1};
    case ChartKind::rotational_parabolic: {  // (xi, eta, phi)
      const T m = c0 * c1;
      return {m * cos(phi), m * sin(phi), (sq(c0) - sq(c1)) * 0.5};
    }
    case ChartKind::prolate_spheroidal: {  // (u, v, phi)
      const T s = a * sinh(c0) * sin(c1);
      return {s * cos(phi), s * sin(phi), a * cosh(c0) * cos(c1)};
    }
    case ChartKind::oblate_spheroidal: {
      const T s = a * cosh(c0) * sin(c1);
      return {s * cos(phi), s * sin(phi), a * sinh(c0) * cos(c1)};
    }
  }
  throw std::logic_error("unreachable chart kind");
}

}  // namespace

std::string chart_name(ChartKind k) {
  switch (k) {
    case ChartKind::spherical:
      return "spherical";
    case ChartKind::circular_cylindrical:
      return "circular-cylindrical";
    case ChartKind::rotational_parabolic:
      return "rotational-parabolic";
    case ChartKind::prolate_spheroidal:
      return "prolate-spheroidal";
    case ChartKind::oblate_spheroidal:
      return "oblate-spheroidal";
  }
  return "?";
}

std::optional<ChartKind> chart_from_name(const std::string& name) {
  for (ChartKind k :
       {ChartKind::spherical, ChartKind::circular_cylindrical, ChartKind::rotational_parabolic,
        ChartKind::prolate_spheroidal, ChartKind::oblate_spheroidal})
    if (chart_name(k) == name) return k;
  return std::nullopt;
}

Chart::Chart(ChartKind kind, double focal) : kind_(kind), focal_(focal) {
  if ((kind == ChartKind::prolate_spheroidal || kind == ChartKind::oblate_spheroidal) &&
      !(focal > 0.0))
    throw std::invalid_argument("spheroidal charts need focal parameter a > 0");
}

bool Chart::in_domain(const Vec3& u) const {
  switch (kind_) {
    case ChartKind::spherical:
      return u[0] > 0.0 && u[1] > 0.0 && u[1] < kPi;
    case ChartKind::circular_cylindrical:
      return u[0] > 0.0;
    case ChartKind::rotational_parabolic:
      return u[0] > 0.0 && u[1] > 0.0;
    case ChartKind::prolate_spheroidal:
    case ChartKind::oblate_spheroidal:
      return u[0] > 0.0 && u[1] > 0.0 && u[1] < kPi;
  }
  return false;
}

Vec3 Chart::forward(const Vec3& u) const {
  if (!in_domain(u)) throw ChartDomainError(name() + ": point outside regular domain");
  return forward_impl(kind_, focal_, u);
}

Vec3 Chart::inverse(const Vec3& x) const {
  const double phi = wrap_2pi(std::atan2(x[1], x[0]));
  const double rho = std::hypot(x[0], x[1]);
  switch (kind_) {
    case ChartKind::spherical: {
      const double r = num::norm(x);
      return {r, std::atan2(rho, x[2]), phi};
    }
    case ChartKind::circular_cylindrical:
      return {rho, x[2], phi};
    case ChartKind::rotational_parabolic: {
      const double r = std::hypot(rho, x[2]);
      return {std::sqrt(std::max(0.0, r + x[2])), std::sqrt(std::max(0.0, r - x[2])), phi};
    }
    case ChartKind::prolate_spheroidal: {
      const double a = focal_;
      const double d1 = std::hypot(rho, x[2] - a);
      const double d2 = std::hypot(rho, x[2] + a);
      const double cu = std::max(1.0, (d1 + d2) / (2.0 * a));
      const double cv = std::clamp((d2 - d1) / (2.0 * a), -1.0, 1.0);
      return {std::acosh(cu), std::acos(cv), phi};
    }
    case ChartKind::oblate_spheroidal: {
      const double a = focal_;
      const double d1 = std::hypot(rho - a, x[2]);
      const double d2 = std::hypot(rho + a, x[2]);
      const double cu = std::max(1.0, (d1 + d2) / (2.0 * a));
      const double sv = std::clamp((d2 - d1) / (2.0 * a), -1.0, 1.0);
      const double u = std::acosh(cu);
      const double sh = std::sinh(u);
      double cv;
      if (sh > 1e-12) {
        cv = std::clamp(x[2] / (a * sh), -1.0, 1.0);
      } else {
        cv = std::copysign(std::sqrt(std::max(0.0, 1.0 - sv * sv)), x[2]);
      }
      return {u, std::atan2(sv, cv), phi};
    }
  }
  throw std::logic_error("unreachable chart kind");
}

Mat3 Chart::jacobian(const Vec3& u) const {
  if (!in_domain(u)) throw ChartDomainError(name() + ": point outside regular domain");
  std::array<num::Dual, 3> du;
  for (int i = 0; i < 3; ++i) du[static_cast<size_t>(i)] = num::Dual::variable(u[static_cast<size_t>(i)], i);
  const auto x = forward_impl(kind_, focal_, du);
  Mat3 j;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) j(i, k) = x[static_cast<size_t>(i)].deriv(k);
  return j;
}

phase::PointMap Chart::as_map() const {
  const Chart c = *this;
  return {[c](const Vec3& u) { return c.forward(u); }, [c](const Vec3& u) { return c.jacobian(u); }};
}

JacobiCoords jacobi_transform(const Vec3& x) {
  return {(x[0] + x[1] + x[2]) / 3.0, (x[0] - x[1]) / std::sqrt(2.0),
          (x[0] + x[1] - 2.0 * x[2]) / std::sqrt(6.0)};
}

Vec3 jacobi_inverse(const JacobiCoords& j) {
  const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  return {j.R + j.rho / s2 + j.lambda / s6, j.R - j.rho / s2 + j.lambda / s6,
          j.R - 2.0 * j.lambda / s6};
}

Mat3 jacobi_matrix() {
  const double s2 = std::sqrt(2.0), s6 = std::sqrt(6.0);
  Mat3 m;
  m(0, 0) = 1.0 / 3.0;
  m(0, 1) = 1.0 / 3.0;
  m(0, 2) = 1.0 / 3.0;
  m(1, 0) = 1.0 / s2;
  m(1, 1) = -1.0 / s2;
  m(1, 2) = 0.0;
  m(2, 0) = 1.0 / s6;
  m(2, 1) = 1.0 / s6;
  m(2, 2) = -2.0 / s6;
  return m;
}

Mat3 rotation_matrix() {
  const double s = 1.0 / std::sqrt(6.0);
  Mat3 m;
  m(0, 0) = 2.0 * s;
  m(0, 1) = 0.0;
  m(0, 2) = std::sqrt(2.0) * s;
  m(1, 0) = -s;
  m(1, 1) = std::sqrt(3.0) * s;
  m(1, 2) = std::sqrt(2.0) * s;
  m(2, 0) = -s;
  m(2, 1) = -std::sqrt(3.0) * s;
  m(2, 2) = std::sqrt(2.0) * s;
  return m;
}

Vec3 rotation_tr(const Vec3& xt) { return rotation_matrix().apply(xt); }

Vec3 rotation_tr_inverse(const Vec3& x) { return rotation_matrix().transposed().apply(x); }

double azimuth(const Vec3& x) { return wrap_2pi(std::atan2(x[1], x[0])); }

}  // namespace superint::charts
