#pragma once

#include <vector>

#include "superint/phase.hpp"

/// Catalog of potentials and Hamiltonian systems. Two kinetic conventions
/// coexist: the three-body chain and its planar reduction use H = p^2 + V,
/// everything else uses H = p^2/2 + V.
namespace superint::models {

using phase::HamiltonianSystem;
using phase::Observable;
using phase::PhaseState;

/// Periodic angular profile
///   k(phi) = sum c/(alpha cos phi + beta sin phi)^2
///          + sum a_m cos(m phi) + b_m sin(m phi) + constant.
class AngularProfile {
 public:
  struct InvSquareTerm {
    double c, alpha, beta;
  };
  struct FourierTerm {
    int m;
    double a, b;
  };

  AngularProfile() = default;

  static AngularProfile constant(double c) {
    AngularProfile k;
    k.constant_ = c;
    return k;
  }

  AngularProfile& add_inverse_square(double c, double alpha, double beta) {
    if (alpha == 0.0 && beta == 0.0)
      throw std::invalid_argument("inverse-square term needs (alpha,beta) != (0,0)");
    inv_sq_.push_back({c, alpha, beta});
    return *this;
  }
  AngularProfile& add_fourier(int m, double a, double b) {
    if (m < 1) throw std::invalid_argument("fourier term needs m >= 1");
    fourier_.push_back({m, a, b});
    return *this;
  }
  AngularProfile& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  const std::vector<InvSquareTerm>& inverse_square_terms() const { return inv_sq_; }
  const std::vector<FourierTerm>& fourier_terms() const { return fourier_; }
  double constant_term() const { return constant_; }

  bool is_zero() const { return inv_sq_.empty() && fourier_.empty() && constant_ == 0.0; }

  /// k(phi).
  template <class T>
  T operator()(const T& phi) const {
    using num::guarded_inverse;
    using num::sq;
    using std::cos;
    using std::sin;
    T acc = T(constant_);
    for (const auto& t : inv_sq_)
      acc += t.c * guarded_inverse(sq(t.alpha * cos(phi) + t.beta * sin(phi)), "angular ray");
    for (const auto& t : fourier_) acc += t.a * cos(double(t.m) * phi) + t.b * sin(double(t.m) * phi);
    return acc;
  }

  /// k(phi) evaluated from the transverse Cartesian pair; the inverse-square
  /// terms become c rho^2/(alpha x1 + beta x2)^2 which avoids the azimuth
  /// where possible.
  template <class T>
  T at_xy(const T& x1, const T& x2) const {
    using num::guarded_inverse;
    using num::sq;
    T acc = T(constant_);
    const T rho2 = sq(x1) + sq(x2);
    for (const auto& t : inv_sq_)
      acc += t.c * rho2 * guarded_inverse(sq(t.alpha * x1 + t.beta * x2), "angular ray");
    if (!fourier_.empty()) {
      using std::atan2;
      using std::cos;
      using std::sin;
      if (num::value_of(rho2) < num::kSingularGuard)
        throw num::SingularityError("singular denominator: x3-axis");
      const T phi = atan2(x2, x1);
      for (const auto& t : fourier_)
        acc += t.a * cos(double(t.m) * phi) + t.b * sin(double(t.m) * phi);
    }
    return acc;
  }

  /// k(phi)/(x1^2 + x2^2).
  template <class T>
  T over_rho2(const T& x1, const T& x2) const {
    using num::guarded_inverse;
    using num::sq;
    T acc = T(0.0);
    for (const auto& t : inv_sq_)
      acc += t.c * guarded_inverse(sq(t.alpha * x1 + t.beta * x2), "angular ray");
    if (constant_ != 0.0 || !fourier_.empty()) {
      const T rho2 = sq(x1) + sq(x2);
      T base = T(constant_);
      if (!fourier_.empty()) {
        using std::atan2;
        using std::cos;
        using std::sin;
        if (num::value_of(rho2) < num::kSingularGuard)
          throw num::SingularityError("singular denominator: x3-axis");
        const T phi = atan2(x2, x1);
        for (const auto& t : fourier_)
          base += t.a * cos(double(t.m) * phi) + t.b * sin(double(t.m) * phi);
      }
      acc += base * guarded_inverse(rho2, "x3-axis");
    }
    return acc;
  }

  /// Smallest guarded denominator at the transverse point.
  double ray_margin(double x1, double x2) const;

 private:
  std::vector<InvSquareTerm> inv_sq_;
  std::vector<FourierTerm> fourier_;
  double constant_ = 0.0;
};

// --------------------------------------------------------------------------
// Term lists for separable potentials
// --------------------------------------------------------------------------

struct RadialTerm {
  double c;
  int power;  // c * r^power, negative powers guarded at r = 0
};

enum class PolarKind { inv_cos2, inv_sin2, cos_over_sin2, constant };

struct PolarTerm {
  double c;
  PolarKind kind;
};

struct AxialTerm {
  double c;
  int power;  // c * x3^power
};

// --------------------------------------------------------------------------
// Systems
// --------------------------------------------------------------------------

/// Three bodies on a line, H = p^2 + V with
/// V = (omega^2/8) sum_{i<j} (x_i-x_j)^2 + g1/(x2-x3)^2 + g2/(x1-x3)^2 + g3/(x1-x2)^2.
HamiltonianSystem calogero_three_body(double omega, double g1, double g2, double g3);

/// The same chain with the centre of mass removed, in the orthonormal
/// relative pair (rho, lambda). The coefficients are obtained by substituting
/// the Jacobi map into the chain potential:
/// V = (3/8) omega^2 (rho^2+lambda^2) + 2 g1/(sqrt3 lambda - rho)^2
///   + 2 g2/(sqrt3 lambda + rho)^2 + g3/(2 rho^2).
HamiltonianSystem calogero_reduced_2d(double omega, double g1, double g2, double g3);

/// V = k(phi)/(x1^2 + x2^2), H = p^2/2 + V, singular on the x3-axis.
HamiltonianSystem rotational_family(AngularProfile k);

/// The profile that makes rotational_family match the rotated chain
/// potential with omega = 0:
/// k = g1/(2 sin^2 phi) + 2 g2/(sqrt3 cos phi + sin phi)^2
///   + 2 g3/(sqrt3 cos phi - sin phi)^2.
AngularProfile calogero_profile(double g1, double g2, double g3);

enum class MinimalVariant { v1, v2, v3 };

/// Minimally superintegrable families:
///   v1: alpha r^2 + beta/x3^2 + h(phi)/rho^2
///   v2: alpha/r + beta cos(theta)/(r^2 sin^2 theta) + h(phi)/(r^2 sin^2 theta)
///   v3: kappa rho^2 + 4 kappa x3^2 + h(phi)/rho^2   (kappa passed as alpha)
HamiltonianSystem minimal_potential(MinimalVariant variant, double alpha, double beta,
                                    AngularProfile h);

/// V = f(r) + g(theta)/r^2 + k(phi)/(r^2 sin^2 theta).
HamiltonianSystem spherical_separable(std::vector<RadialTerm> f, std::vector<PolarTerm> g,
                                      AngularProfile k);

/// V = base(x1,x2) + f(x3). The base must not depend on x3.
HamiltonianSystem layered_xy(Observable base, std::vector<AxialTerm> f);

/// V = base(r,theta) + k(phi)/(r^2 sin^2 theta). The base must be axially
/// symmetric.
HamiltonianSystem layered_rtheta(Observable base, AngularProfile k);

Observable zero_potential(int dim = 3);

}  // namespace superint::models
