#include "superint/models.hpp"

#include <cmath>
#include <limits>

namespace superint::models {

namespace {

using num::guarded_inverse;
using num::sq;

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
T radial_power(const T& r2, const T& r, int power, const char* what) {
  // r^power from r2 = r*r; negative powers are guarded.
  if (power < 0) {
    T inv = guarded_inverse(power % 2 == 0 ? num::sq(r) : r, what);
    T acc = inv;
    int k = -power;
    if (power % 2 == 0) k /= 2;
    for (int i = 1; i < k; ++i) acc = acc * inv;
    return acc;
  }
  T acc = T(1.0);
  for (int i = 0; i < power / 2; ++i) acc = acc * r2;
  if (power % 2 == 1) acc = acc * r;
  return acc;
}

template <class T>
T axial_power(const T& x3, int power) {
  if (power < 0) {
    T inv = guarded_inverse(x3, "x3 = 0 plane");
    T acc = inv;
    for (int i = 1; i < -power; ++i) acc = acc * inv;
    return acc;
  }
  T acc = T(1.0);
  for (int i = 0; i < power; ++i) acc = acc * x3;
  return acc;
}

}  // namespace

double AngularProfile::ray_margin(double x1, double x2) const {
  double m = kInf;
  for (const auto& t : inv_sq_) m = std::min(m, sq(t.alpha * x1 + t.beta * x2));
  if (constant_ != 0.0 || !fourier_.empty()) m = std::min(m, sq(x1) + sq(x2));
  return m;
}

Observable zero_potential(int dim) {
  return Observable::make("0", dim, [](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    return T(0.0);
  });
}

HamiltonianSystem calogero_three_body(double omega, double g1, double g2, double g3) {
  auto v = Observable::make("V", 3, [=](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    const auto& x = z.q;
    const T d12 = x[0] - x[1], d23 = x[1] - x[2], d13 = x[0] - x[2];
    T acc = T(0.0);
    if (omega != 0.0) acc += (omega * omega / 8.0) * (sq(d12) + sq(d23) + sq(d13));
    if (g1 != 0.0) acc += g1 * guarded_inverse(sq(d23), "pair collision x2=x3");
    if (g2 != 0.0) acc += g2 * guarded_inverse(sq(d13), "pair collision x1=x3");
    if (g3 != 0.0) acc += g3 * guarded_inverse(sq(d12), "pair collision x1=x2");
    return acc;
  });
  auto margin = [=](const PhaseState& z) {
    double m = kInf;
    if (g1 != 0.0) m = std::min(m, sq(z.q[1] - z.q[2]));
    if (g2 != 0.0) m = std::min(m, sq(z.q[0] - z.q[2]));
    if (g3 != 0.0) m = std::min(m, sq(z.q[0] - z.q[1]));
    return m;
  };
  return HamiltonianSystem("calogero-1d", 3, 1.0, v, margin);
}

HamiltonianSystem calogero_reduced_2d(double omega, double g1, double g2, double g3) {
  const double s3 = std::sqrt(3.0);
  auto v = Observable::make("V", 2, [=](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    const T& rho = z.q[0];
    const T& lam = z.q[1];
    T acc = T(0.0);
    if (omega != 0.0) acc += (3.0 / 8.0) * omega * omega * (sq(rho) + sq(lam));
    if (g1 != 0.0) acc += 2.0 * g1 * guarded_inverse(sq(s3 * lam - rho), "collision ray");
    if (g2 != 0.0) acc += 2.0 * g2 * guarded_inverse(sq(s3 * lam + rho), "collision ray");
    if (g3 != 0.0) acc += 0.5 * g3 * guarded_inverse(sq(rho), "collision ray rho=0");
    return acc;
  });
  auto margin = [=](const PhaseState& z) {
    double m = kInf;
    if (g1 != 0.0) m = std::min(m, sq(s3 * z.q[1] - z.q[0]));
    if (g2 != 0.0) m = std::min(m, sq(s3 * z.q[1] + z.q[0]));
    if (g3 != 0.0) m = std::min(m, sq(z.q[0]));
    return m;
  };
  return HamiltonianSystem("calogero-2d", 2, 1.0, v, margin);
}

HamiltonianSystem rotational_family(AngularProfile k) {
  auto v = Observable::make("V", 3, [k](const auto& z) { return k.over_rho2(z.q[0], z.q[1]); });
  auto margin = [k](const PhaseState& z) {
    return std::min(k.ray_margin(z.q[0], z.q[1]), sq(z.q[0]) + sq(z.q[1]));
  };
  return HamiltonianSystem("rotational", 3, 0.5, v, margin);
}

AngularProfile calogero_profile(double g1, double g2, double g3) {
  const double s3 = std::sqrt(3.0);
  AngularProfile k;
  if (g1 != 0.0) k.add_inverse_square(0.5 * g1, 0.0, 1.0);
  if (g2 != 0.0) k.add_inverse_square(2.0 * g2, s3, 1.0);
  if (g3 != 0.0) k.add_inverse_square(2.0 * g3, s3, -1.0);
  return k;
}

HamiltonianSystem minimal_potential(MinimalVariant variant, double alpha, double beta,
                                    AngularProfile h) {
  switch (variant) {
    case MinimalVariant::v1: {
      auto v = Observable::make("V", 3, [=](const auto& z) {
        using T = std::decay_t<decltype(z.q[0])>;
        const auto& x = z.q;
        T acc = alpha * (sq(x[0]) + sq(x[1]) + sq(x[2]));
        if (beta != 0.0) acc += beta * guarded_inverse(sq(x[2]), "x3 = 0 plane");
        acc += h.over_rho2(x[0], x[1]);
        return acc;
      });
      auto margin = [=](const PhaseState& z) {
        double m = h.ray_margin(z.q[0], z.q[1]);
        if (beta != 0.0) m = std::min(m, sq(z.q[2]));
        return m;
      };
      return HamiltonianSystem("minimal-v1", 3, 0.5, v, margin);
    }
    case MinimalVariant::v2: {
      auto v = Observable::make("V", 3, [=](const auto& z) {
        using T = std::decay_t<decltype(z.q[0])>;
        using std::sqrt;
        const auto& x = z.q;
        const T r2 = sq(x[0]) + sq(x[1]) + sq(x[2]);
        const T r = sqrt(r2);
        const T rho2 = sq(x[0]) + sq(x[1]);
        T acc = alpha * guarded_inverse(r, "origin");
        if (beta != 0.0) acc += beta * x[2] * guarded_inverse(r * rho2, "x3-axis");
        acc += h.over_rho2(x[0], x[1]);
        return acc;
      });
      auto margin = [=](const PhaseState& z) {
        const double r2 = sq(z.q[0]) + sq(z.q[1]) + sq(z.q[2]);
        const double rho2 = sq(z.q[0]) + sq(z.q[1]);
        double m = std::min(r2, h.ray_margin(z.q[0], z.q[1]));
        if (beta != 0.0) m = std::min(m, rho2);
        return m;
      };
      return HamiltonianSystem("minimal-v2", 3, 0.5, v, margin);
    }
    case MinimalVariant::v3: {
      const double kappa = alpha;
      auto v = Observable::make("V", 3, [=](const auto& z) {
        using T = std::decay_t<decltype(z.q[0])>;
        const auto& x = z.q;
        T acc = kappa * (sq(x[0]) + sq(x[1])) + 4.0 * kappa * sq(x[2]);
        acc += h.over_rho2(x[0], x[1]);
        return acc;
      });
      auto margin = [=](const PhaseState& z) { return h.ray_margin(z.q[0], z.q[1]); };
      return HamiltonianSystem("minimal-v3", 3, 0.5, v, margin);
    }
  }
  throw std::logic_error("unreachable variant");
}

HamiltonianSystem spherical_separable(std::vector<RadialTerm> f, std::vector<PolarTerm> g,
                                      AngularProfile k) {
  auto v = Observable::make("V", 3, [f, g, k](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    using std::sqrt;
    const auto& x = z.q;
    const T r2 = sq(x[0]) + sq(x[1]) + sq(x[2]);
    T acc = T(0.0);
    if (!f.empty()) {
      const T r = sqrt(r2);
      for (const auto& t : f) acc += t.c * radial_power(r2, r, t.power, "origin");
    }
    for (const auto& t : g) {
      switch (t.kind) {
        case PolarKind::inv_cos2:  // c/(r^2 cos^2 th) = c/x3^2
          acc += t.c * guarded_inverse(sq(x[2]), "x3 = 0 plane");
          break;
        case PolarKind::inv_sin2:  // c/(r^2 sin^2 th) = c/rho^2
          acc += t.c * guarded_inverse(sq(x[0]) + sq(x[1]), "x3-axis");
          break;
        case PolarKind::cos_over_sin2:  // c cos th/(r^2 sin^2 th) = c x3/(r rho^2)
          acc += t.c * x[2] * guarded_inverse(sqrt(r2) * (sq(x[0]) + sq(x[1])), "x3-axis");
          break;
        case PolarKind::constant:
          acc += t.c * guarded_inverse(r2, "origin");
          break;
      }
    }
    acc += k.over_rho2(x[0], x[1]);
    return acc;
  });
  auto margin = [f, g, k](const PhaseState& z) {
    const double r2 = sq(z.q[0]) + sq(z.q[1]) + sq(z.q[2]);
    const double rho2 = sq(z.q[0]) + sq(z.q[1]);
    double m = k.ray_margin(z.q[0], z.q[1]);
    for (const auto& t : f)
      if (t.power < 0) m = std::min(m, r2);
    for (const auto& t : g) {
      switch (t.kind) {
        case PolarKind::inv_cos2:
          m = std::min(m, sq(z.q[2]));
          break;
        case PolarKind::inv_sin2:
        case PolarKind::cos_over_sin2:
          m = std::min(m, rho2);
          break;
        case PolarKind::constant:
          m = std::min(m, r2);
          break;
      }
    }
    return m;
  };
  return HamiltonianSystem("spherical-separable", 3, 0.5, v, margin);
}

HamiltonianSystem layered_xy(Observable base, std::vector<AxialTerm> f) {
  auto v = Observable::make("V", 3, [base, f](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    T acc = base(z);
    for (const auto& t : f) acc += t.c * axial_power(z.q[2], t.power);
    return acc;
  });
  auto margin = [f](const PhaseState& z) {
    for (const auto& t : f)
      if (t.power < 0) return std::abs(z.q[2]);
    return kInf;
  };
  return HamiltonianSystem("layered-xy", 3, 0.5, v, margin);
}

HamiltonianSystem layered_rtheta(Observable base, AngularProfile k) {
  auto v = Observable::make("V", 3, [base, k](const auto& z) {
    return base(z) + k.over_rho2(z.q[0], z.q[1]);
  });
  auto margin = [k](const PhaseState& z) {
    return std::min(k.ray_margin(z.q[0], z.q[1]), sq(z.q[0]) + sq(z.q[1]));
  };
  return HamiltonianSystem("layered-rtheta", 3, 0.5, v, margin);
}

}  // namespace superint::models
