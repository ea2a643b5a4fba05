#include "superint/integrals.hpp"

#include <cmath>
#include <cstdio>

namespace superint::integrals {

namespace {

using num::guarded_inverse;
using num::sq;

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class T>
T l_axis(const std::array<T, 3>& q, const std::array<T, 3>& p, int axis) {
  const int a = (axis + 1) % 3, b = (axis + 2) % 3;
  return q[static_cast<size_t>(a)] * p[static_cast<size_t>(b)] -
         q[static_cast<size_t>(b)] * p[static_cast<size_t>(a)];
}

}  // namespace

Observable angular_momentum(int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
  return Observable::make("L" + std::to_string(axis + 1), 3,
                          [axis](const auto& z) { return l_axis(z.q, z.p, axis); });
}

std::array<double, 3> angular_momenta(const PhaseState& z) {
  if (z.n != 3) throw num::DimensionError("angular_momenta expects n=3");
  return {l_axis(z.q, z.p, 0), l_axis(z.q, z.p, 1), l_axis(z.q, z.p, 2)};
}

IntegralSet catalog_rotational(const AngularProfile& k) {
  HamiltonianSystem sys = models::rotational_family(k);
  std::vector<Observable> members;
  members.push_back(sys.hamiltonian());
  members.push_back(Observable::make("F1", 3, [k](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    const auto& q = z.q;
    T acc = sq(l_axis(q, z.p, 0)) + sq(l_axis(q, z.p, 1)) + sq(l_axis(q, z.p, 2));
    if (!k.is_zero()) {
      const T r2 = sq(q[0]) + sq(q[1]) + sq(q[2]);
      acc += 2.0 * r2 * k.over_rho2(q[0], q[1]);
    }
    return acc;
  }));
  members.push_back(Observable::make("F2", 3, [k](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    T acc = sq(l_axis(z.q, z.p, 2));
    if (!k.is_zero()) acc += 2.0 * k.at_xy(z.q[0], z.q[1]);
    return acc;
  }));
  members.push_back(Observable::make("F3", 3, [](const auto& z) { return 0.5 * sq(z.p[2]); }));
  members.push_back(Observable::make("F4", 3, [k](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    const auto& q = z.q;
    const auto& p = z.p;
    T acc = 2.0 * (l_axis(q, p, 0) * p[1] - l_axis(q, p, 1) * p[0]);
    if (!k.is_zero()) acc -= 4.0 * q[2] * k.over_rho2(q[0], q[1]);
    return acc;
  }));
  std::vector<InvolutivePair> pairs = {{1, 2, "spherical"},
                                       {2, 3, "circular-cylindrical"},
                                       {2, 4, "rotational-parabolic"}};
  auto extra = [](const PhaseState& z) { return sq(z.q[0]) + sq(z.q[1]); };
  IntegralSet set("rotational", "2.13", std::move(sys), std::move(members), std::move(pairs), 4,
                  extra);
  set.set_noninvolutive_witness(3, 4);
  set.set_printed_rank(5,
                       "members satisfy F4^2 = 4[(2H-2F3)(F1-F2) - 2 F2 F3] for every profile, "
                       "so the generic gradient rank is 4");
  return set;
}

double rotational_dependence_residual(const IntegralSet& rotational, const PhaseState& z) {
  const auto& m = rotational.members();
  if (m.size() < 5) throw std::invalid_argument("needs the rotational catalog");
  const double h = m[0](z), f1 = m[1](z), f2 = m[2](z), f3 = m[3](z), f4 = m[4](z);
  const double lhs = f4 * f4;
  const double cross = 4.0 * (2.0 * h - 2.0 * f3) * (f1 - f2);
  const double rhs = cross - 8.0 * f2 * f3;
  const double scale = std::max({std::abs(lhs), std::abs(cross), std::abs(8.0 * f2 * f3), 1.0});
  return std::abs(lhs - rhs) / scale;
}

void add_spheroidal_members(IntegralSet& set, double a) {
  const auto& m = set.members();
  const Observable f1 = m[1];
  const Observable f3 = m[3];
  char sa[24];
  std::snprintf(sa, sizeof sa, "%g", a);
  Observable oblate = (f1 - (2.0 * a * a) * f3).renamed(std::string("F1-2a2F3[a=") + sa + "]");
  Observable prolate = (f1 + (2.0 * a * a) * f3).renamed(std::string("F1+2a2F3[a=") + sa + "]");
  const int base = static_cast<int>(m.size());
  set.add_member(std::move(oblate));
  set.add_member(std::move(prolate));
  set.add_pair({2, base, std::string("oblate-spheroidal[a=") + sa + "]"});
  set.add_pair({2, base + 1, std::string("prolate-spheroidal[a=") + sa + "]"});
}

LinearConnectionResult linear_connection_residual(const IntegralSet& rotational,
                                                  const PhaseState& z) {
  const auto& m = rotational.members();
  if (m.size() < 5) throw std::invalid_argument("linear connection needs the rotational catalog");
  const double r2 = sq(z.q[0]) + sq(z.q[1]) + sq(z.q[2]);
  LinearConnectionResult res{};
  res.coefficients = {2.0 * sq(z.q[2]), 1.0, -1.0, -2.0 * r2, z.q[2]};
  double sum = 0.0, scale = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double term = res.coefficients[static_cast<size_t>(i)] * m[static_cast<size_t>(i)](z);
    sum += term;
    scale = std::max(scale, std::abs(term));
  }
  res.residual = sum;
  res.term_scale = scale;
  return res;
}

LinearConnectionResult linear_connection_residual(const PhaseState& z, const AngularProfile& k) {
  return linear_connection_residual(catalog_rotational(k), z);
}

QuadraticDecomposition quadratic_part(const Observable& f) {
  QuadraticDecomposition d;
  d.tensor = killing::killing_from_quadratic(f);
  d.scalar_part = Observable::make("U[" + f.label() + "]", 3, [f](const auto& z) {
    std::decay_t<decltype(z)> z0 = z;
    using T = std::decay_t<decltype(z.q[0])>;
    z0.p = {T(0.0), T(0.0), T(0.0)};
    return f(z0);
  });
  return d;
}

IntegralSet catalog_coordinate_planes(double c1, double c2, double c3,
                                      std::vector<models::RadialTerm> radial) {
  std::vector<models::PolarTerm> polar;
  if (c3 != 0.0) polar.push_back({c3, models::PolarKind::inv_cos2});
  AngularProfile k;
  if (c1 != 0.0) k.add_inverse_square(c1, 1.0, 0.0);
  if (c2 != 0.0) k.add_inverse_square(c2, 0.0, 1.0);
  HamiltonianSystem sys = models::spherical_separable(std::move(radial), std::move(polar), k);

  auto plane_term = [](double c, int num_axis, int den_axis) {
    return [c, num_axis, den_axis](const auto& z) {
      using T = std::decay_t<decltype(z.q[0])>;
      if (c == 0.0) return T(0.0);
      return 2.0 * c * sq(z.q[static_cast<size_t>(num_axis)]) *
             guarded_inverse(sq(z.q[static_cast<size_t>(den_axis)]), "coordinate plane");
    };
  };
  std::vector<Observable> members;
  members.push_back(sys.hamiltonian());
  members.push_back(Observable::make("F1", 3, [=](const auto& z) {
    return sq(l_axis(z.q, z.p, 0)) + plane_term(c2, 2, 1)(z) + plane_term(c3, 1, 2)(z);
  }));
  members.push_back(Observable::make("F2", 3, [=](const auto& z) {
    return sq(l_axis(z.q, z.p, 1)) + plane_term(c1, 2, 0)(z) + plane_term(c3, 0, 2)(z);
  }));
  members.push_back(Observable::make("F3", 3, [=](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    T acc = sq(l_axis(z.q, z.p, 2));
    const T rho2 = sq(z.q[0]) + sq(z.q[1]);
    if (c1 != 0.0) acc += 2.0 * c1 * rho2 * guarded_inverse(sq(z.q[0]), "coordinate plane");
    if (c2 != 0.0) acc += 2.0 * c2 * rho2 * guarded_inverse(sq(z.q[1]), "coordinate plane");
    return acc;
  }));
  auto extra = [=](const PhaseState& z) {
    double m = kInf;
    if (c1 != 0.0) m = std::min(m, sq(z.q[0]));
    if (c2 != 0.0) m = std::min(m, sq(z.q[1]));
    if (c3 != 0.0) m = std::min(m, sq(z.q[2]));
    return m;
  };
  IntegralSet set("coordinate-planes", "3.2", std::move(sys), std::move(members), {}, 4, extra);
  set.set_noninvolutive_witness(1, 2);
  return set;
}

PolarIntegral reduced_polar_integral(double g1, double g2, double g3) {
  const double s3 = std::sqrt(3.0);
  // W(phi) = s^2 times the angular part of the reduced potential
  auto w = [=](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    const T& rho = z.q[0];
    const T& lam = z.q[1];
    const T s2 = sq(rho) + sq(lam);
    T acc = T(0.0);
    if (g1 != 0.0) acc += 2.0 * g1 * s2 * guarded_inverse(sq(s3 * lam - rho), "collision ray");
    if (g2 != 0.0) acc += 2.0 * g2 * s2 * guarded_inverse(sq(s3 * lam + rho), "collision ray");
    if (g3 != 0.0) acc += 0.5 * g3 * s2 * guarded_inverse(sq(rho), "collision ray");
    return acc;
  };
  auto candidate = [&](int sign) {
    return Observable::make("F", 2, [w, sign](const auto& z) {
      using T = std::decay_t<decltype(z.q[0])>;
      const T l3 = z.q[0] * z.p[1] - z.q[1] * z.p[0];
      return sq(l3) + double(sign) * w(z);
    });
  };
  const HamiltonianSystem probe_sys = models::calogero_reduced_2d(0.0, g1, g2, g3);
  const std::array<PhaseState, 8> probe_states = {
      phase::make_state({1.1, 0.4}, {0.3, -0.7}),  phase::make_state({-0.8, 0.9}, {0.5, 0.2}),
      phase::make_state({0.6, -1.2}, {-0.4, 0.8}), phase::make_state({-1.3, -0.5}, {0.9, 0.1}),
      phase::make_state({0.9, 1.4}, {-0.2, -0.6}), phase::make_state({1.7, -0.3}, {0.1, 0.9}),
      phase::make_state({-0.5, 1.1}, {-0.8, 0.3}), phase::make_state({1.2, 0.8}, {0.6, -0.5})};
  for (int sign : {+1, -1}) {
    Observable f = candidate(sign);
    bool ok = true;
    for (const auto& z : probe_states) {
      if (phase::poisson_bracket_normalized(probe_sys.hamiltonian(), f, z).normalized() > 1e-9) {
        ok = false;
        break;
      }
    }
    if (ok) return {std::move(f), sign};
  }
  throw std::runtime_error("reduced_polar_integral: no sign choice is conserved");
}

IntegralSet catalog_reduced_2d(double omega, double g1, double g2, double g3) {
  HamiltonianSystem sys = models::calogero_reduced_2d(omega, g1, g2, g3);
  PolarIntegral pi = reduced_polar_integral(g1, g2, g3);
  std::vector<Observable> members;
  members.push_back(sys.hamiltonian());
  members.push_back(std::move(pi.f));
  const double s3 = std::sqrt(3.0);
  auto extra = [=](const PhaseState& z) {
    double m = kInf;
    if (g1 != 0.0) m = std::min(m, sq(s3 * z.q[1] - z.q[0]));
    if (g2 != 0.0) m = std::min(m, sq(s3 * z.q[1] + z.q[0]));
    if (g3 != 0.0) m = std::min(m, sq(z.q[0]));
    return m;
  };
  return IntegralSet("reduced-2d", "2.24", std::move(sys), std::move(members), {}, 2, extra);
}

std::vector<Observable> layered_triplets(double a) {
  if (a == 0.0) throw std::invalid_argument("layered_triplets needs a != 0");
  std::vector<Observable> xs;
  xs.push_back(Observable::make("X1", 3, [](const auto& z) { return sq(z.p[0]); }));
  xs.push_back(Observable::make("X2", 3, [](const auto& z) { return sq(l_axis(z.q, z.p, 2)); }));
  xs.push_back(Observable::make(
      "X3", 3, [](const auto& z) { return 2.0 * l_axis(z.q, z.p, 2) * z.p[0]; }));
  xs.push_back(Observable::make("X4", 3, [a](const auto& z) {
    return sq(l_axis(z.q, z.p, 2)) + a * a * (sq(z.p[0]) - sq(z.p[1]));
  }));
  return xs;
}

IntegralSet catalog_layered(const std::vector<models::AxialTerm>& f, double a) {
  HamiltonianSystem sys = models::layered_xy(models::zero_potential(), f);
  std::vector<Observable> members;
  members.push_back(sys.hamiltonian());
  members.push_back(Observable::make("F1", 3, [f](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    T acc = 0.5 * sq(z.p[2]);
    for (const auto& t : f) {
      T x3p = T(1.0);
      for (int i = 0; i < t.power; ++i) x3p = x3p * z.q[2];
      if (t.power >= 0) acc += t.c * x3p;
    }
    // negative powers reuse the system potential's guard path
    for (const auto& t : f)
      if (t.power < 0) {
        T inv = guarded_inverse(z.q[2], "x3 = 0 plane");
        T p = inv;
        for (int i = 1; i < -t.power; ++i) p = p * inv;
        acc += t.c * p;
      }
    return acc;
  }));
  members.push_back(Observable::make("p1", 3, [](const auto& z) { return z.p[0]; }));
  members.push_back(Observable::make("p2", 3, [](const auto& z) { return z.p[1]; }));
  members.push_back(angular_momentum(2));
  std::vector<InvolutivePair> pairs;
  auto xs = layered_triplets(a);
  const char* charts[] = {"cartesian", "polar", "parabolic-translational", "elliptic-translational"};
  for (size_t i = 0; i < xs.size(); ++i) {
    members.push_back(xs[i]);
    pairs.push_back({1, static_cast<int>(5 + i), charts[i]});
  }
  IntegralSet set("layered", "3.4", std::move(sys), std::move(members), std::move(pairs), 4);
  set.set_noninvolutive_witness(5, 6);  // X1, X2
  return set;
}

IntegralSet catalog_minimal(models::MinimalVariant variant, double alpha, double beta,
                            const AngularProfile& h, double spheroidal_a) {
  using models::MinimalVariant;
  HamiltonianSystem sys = models::minimal_potential(variant, alpha, beta, h);

  auto f2 = Observable::make("F2", 3, [h](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    T acc = sq(l_axis(z.q, z.p, 2));
    if (!h.is_zero()) acc += 2.0 * h.at_xy(z.q[0], z.q[1]);
    return acc;
  });

  std::vector<Observable> members;
  std::vector<InvolutivePair> pairs;
  members.push_back(sys.hamiltonian());
  members.push_back(f2);

  const std::string tag = variant == MinimalVariant::v1   ? "2.20-V1"
                          : variant == MinimalVariant::v2 ? "2.20-V2"
                                                          : "2.20-V3";

  switch (variant) {
    case MinimalVariant::v1: {
      members.push_back(Observable::make("F1", 3, [beta, h](const auto& z) {
        using T = std::decay_t<decltype(z.q[0])>;
        const auto& q = z.q;
        T acc = sq(l_axis(q, z.p, 0)) + sq(l_axis(q, z.p, 1)) + sq(l_axis(q, z.p, 2));
        const T r2 = sq(q[0]) + sq(q[1]) + sq(q[2]);
        if (beta != 0.0) acc += 2.0 * beta * r2 * guarded_inverse(sq(q[2]), "x3 = 0 plane");
        if (!h.is_zero()) acc += 2.0 * r2 * h.over_rho2(q[0], q[1]);
        return acc;
      }));
      members.push_back(Observable::make("F3", 3, [alpha, beta](const auto& z) {
        using T = std::decay_t<decltype(z.q[0])>;
        T acc = 0.5 * sq(z.p[2]) + alpha * sq(z.q[2]);
        if (beta != 0.0) acc += beta * guarded_inverse(sq(z.q[2]), "x3 = 0 plane");
        return acc;
      }));
      pairs = {{1, 2, "spherical"}, {1, 3, "circular-cylindrical"}};
      const double a2 = spheroidal_a * spheroidal_a;
      members.push_back((members[2] - (2.0 * a2) * members[3]).renamed("F1-2a2F3"));
      members.push_back((members[2] + (2.0 * a2) * members[3]).renamed("F1+2a2F3"));
      pairs.push_back({1, 4, "oblate-spheroidal"});
      pairs.push_back({1, 5, "prolate-spheroidal"});
      break;
    }
    case MinimalVariant::v2: {
      members.push_back(Observable::make("F1", 3, [beta, h](const auto& z) {
        using T = std::decay_t<decltype(z.q[0])>;
        using std::sqrt;
        const auto& q = z.q;
        T acc = sq(l_axis(q, z.p, 0)) + sq(l_axis(q, z.p, 1)) + sq(l_axis(q, z.p, 2));
        const T r2 = sq(q[0]) + sq(q[1]) + sq(q[2]);
        const T rho2 = sq(q[0]) + sq(q[1]);
        if (beta != 0.0)
          acc += 2.0 * beta * q[2] * sqrt(r2) * guarded_inverse(rho2, "x3-axis");
        if (!h.is_zero()) acc += 2.0 * r2 * h.over_rho2(q[0], q[1]);
        return acc;
      }));
      members.push_back(Observable::make("F4", 3, [alpha, beta, h](const auto& z) {
        using T = std::decay_t<decltype(z.q[0])>;
        using std::sqrt;
        const auto& q = z.q;
        const auto& p = z.p;
        T acc = 2.0 * (l_axis(q, p, 0) * p[1] - l_axis(q, p, 1) * p[0]);
        const T r2 = sq(q[0]) + sq(q[1]) + sq(q[2]);
        const T r = sqrt(r2);
        const T rho2 = sq(q[0]) + sq(q[1]);
        if (alpha != 0.0) acc -= 2.0 * alpha * q[2] * guarded_inverse(r, "origin");
        if (!h.is_zero()) acc -= 4.0 * q[2] * h.over_rho2(q[0], q[1]);
        if (beta != 0.0)
          acc -= 2.0 * beta * (r2 + sq(q[2])) * guarded_inverse(r * rho2, "x3-axis");
        return acc;
      }));
      pairs = {{1, 2, "spherical"}, {1, 3, "rotational-parabolic"}};
      break;
    }
    case MinimalVariant::v3: {
      const double kappa = alpha;
      members.push_back(Observable::make("F3", 3, [kappa](const auto& z) {
        return 0.5 * sq(z.p[2]) + 4.0 * kappa * sq(z.q[2]);
      }));
      members.push_back(Observable::make("F4", 3, [kappa, h](const auto& z) {
        using T = std::decay_t<decltype(z.q[0])>;
        const auto& q = z.q;
        const auto& p = z.p;
        T acc = 2.0 * (l_axis(q, p, 0) * p[1] - l_axis(q, p, 1) * p[0]);
        const T rho2 = sq(q[0]) + sq(q[1]);
        acc += 4.0 * kappa * q[2] * rho2;
        if (!h.is_zero()) acc -= 4.0 * q[2] * h.over_rho2(q[0], q[1]);
        return acc;
      }));
      pairs = {{1, 2, "circular-cylindrical"}, {1, 3, "rotational-parabolic"}};
      break;
    }
  }

  AngularProfile hm = h;
  double beta_m = beta;
  auto extra = [hm, beta_m, variant](const PhaseState& z) {
    double m = std::min(hm.ray_margin(z.q[0], z.q[1]), sq(z.q[0]) + sq(z.q[1]));
    if (variant != models::MinimalVariant::v3 && beta_m != 0.0)
      m = std::min(m, sq(z.q[2]));
    if (variant == models::MinimalVariant::v2)
      m = std::min(m, sq(z.q[0]) + sq(z.q[1]) + sq(z.q[2]));
    return m;
  };
  IntegralSet set(std::string("minimal-") + (variant == MinimalVariant::v1   ? "v1"
                                             : variant == MinimalVariant::v2 ? "v2"
                                                                             : "v3"),
                  tag, std::move(sys), std::move(members), std::move(pairs), 4, extra);
  set.set_noninvolutive_witness(2, 3);
  return set;
}

}  // namespace superint::integrals
