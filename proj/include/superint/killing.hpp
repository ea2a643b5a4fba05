#pragma once

#include <span>
#include <string>

#include "superint/phase.hpp"

/// Killing tensors of flat three-space with polynomial components of degree
/// at most two, stored with exact coefficients so the algebraic identities
/// fail only at rounding level.
namespace superint::killing {

using num::Mat3;
using num::Vec3;
using phase::Observable;

/// Polynomial in (x1,x2,x3) of total degree <= 2. Coefficient order:
/// 1, x1, x2, x3, x1^2, x2^2, x3^2, x1 x2, x1 x3, x2 x3.
class Poly2 {
 public:
  Poly2() = default;

  double& operator[](int i) { return c_[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c_[static_cast<size_t>(i)]; }

  template <class T>
  T eval(const std::array<T, 3>& x) const {
    return T(c_[0]) + c_[1] * x[0] + c_[2] * x[1] + c_[3] * x[2] + c_[4] * x[0] * x[0] +
           c_[5] * x[1] * x[1] + c_[6] * x[2] * x[2] + c_[7] * x[0] * x[1] + c_[8] * x[0] * x[2] +
           c_[9] * x[1] * x[2];
  }
  double operator()(const Vec3& x) const { return eval(x); }

  /// Partial derivative, a polynomial of degree <= 1.
  Poly2 derivative(int axis) const;

  /// P(x1, x2, x3 + t), exact on coefficients.
  Poly2 shifted_x3(double t) const;

  /// P(x + t).
  Poly2 shifted(const Vec3& t) const;

  /// Product of two polynomials whose degrees sum to at most 2.
  static Poly2 product(const Poly2& a, const Poly2& b);

  int degree() const;
  double max_abs_coeff() const;

  Poly2& operator+=(const Poly2& o);
  Poly2& operator-=(const Poly2& o);
  Poly2& operator*=(double s);
  friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
  friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
  friend Poly2 operator*(double s, Poly2 a) { return a *= s; }

 private:
  std::array<double, 10> c_{};
};

/// Symmetric position-dependent 3x3 component field K^{ij}(x); the quadratic
/// observable K^{ij} p_i p_j Poisson-commutes with the free Hamiltonian.
class KillingTensor {
 public:
  KillingTensor() = default;
  explicit KillingTensor(std::string label) : label_(std::move(label)) {}

  const std::string& label() const { return label_; }
  KillingTensor relabeled(std::string l) const {
    KillingTensor k = *this;
    k.label_ = std::move(l);
    return k;
  }

  /// Shared storage for (i,j) and (j,i).
  Poly2& component(int i, int j) { return c_[static_cast<size_t>(index(i, j))]; }
  const Poly2& component(int i, int j) const { return c_[static_cast<size_t>(index(i, j))]; }

  Mat3 eval(const Vec3& x) const;

  template <class T>
  T quadratic_form(const std::array<T, 3>& x, const std::array<T, 3>& p) const {
    T acc = T(0.0);
    for (int i = 0; i < 3; ++i) {
      acc += component(i, i).eval(x) * p[static_cast<size_t>(i)] * p[static_cast<size_t>(i)];
      for (int j = i + 1; j < 3; ++j)
        acc += 2.0 * component(i, j).eval(x) * p[static_cast<size_t>(i)] * p[static_cast<size_t>(j)];
    }
    return acc;
  }

  /// K^{ij} p_i p_j as an observable on n = 3.
  Observable quadratic_observable() const;

  KillingTensor shifted_x3(double t) const;

  double max_abs_coeff() const;

  KillingTensor& operator+=(const KillingTensor& o);
  KillingTensor& operator*=(double s);
  friend KillingTensor operator+(KillingTensor a, const KillingTensor& b) { return a += b; }
  friend KillingTensor operator*(double s, KillingTensor a) { return a *= s; }
  friend KillingTensor operator-(const KillingTensor& a, const KillingTensor& b) {
    KillingTensor r = a;
    KillingTensor nb = b;
    nb *= -1.0;
    r += nb;
    return r;
  }

 private:
  static int index(int i, int j);
  std::array<Poly2, 6> c_{};  // 11,22,33,12,13,23
  std::string label_;
};

KillingTensor metric_tensor();

/// Linear family a1 g + c2 K1 + c3 K2 generating the spherical web:
/// diagonal (a1+c2 x3^2+c3 x2^2, a1+c3 x1^2+c2 x3^2, a1+c2 x1^2+c2 x2^2),
/// off-diagonal (-c3 x1 x2, -c2 x1 x3, -c2 x2 x3).
KillingTensor spherical_pencil(double a1, double c2, double c3);

/// Lie derivative along the rotation field (-x2, x1, 0), computed exactly on
/// polynomial coefficients. Zero iff the tensor is axially symmetric.
KillingTensor lie_derivative_rotation(const KillingTensor& k);
Mat3 lie_derivative_rotation_at(const KillingTensor& k, const Vec3& x);

/// Largest least-squares defect when each basis member, translated by
/// x3 -> x3 + t, is expressed back in the span of the original basis
/// (components sampled at 20 points). Resamples once if the sample set is
/// degenerate.
double translation_span_residual(std::span<const KillingTensor> basis, double t,
                                 uint64_t seed = 0x5EED);

struct EigenframeResult {
  bool commute = false;
  bool degenerate = false;  // eigenvalue gap below 1e-8 of the spectral radius
  Mat3 frame = Mat3::identity();
  double commutator_norm = 0.0;
};

/// True iff K1(x) and K2(x) commute within tol times the entry scale; the
/// shared orthonormal eigenframe is returned when they do.
EigenframeResult common_eigenframe(const KillingTensor& k1, const KillingTensor& k2, const Vec3& x,
                                   double tol = 1e-10);

/// Extract the polynomial component field of an observable that is exactly
/// quadratic in the momenta. Throws NotQuadraticError otherwise.
KillingTensor killing_from_quadratic(const Observable& f);

/// Max normalized residual of {K p p, |p|^2/2} over sampled states.
double killing_property_residual(const KillingTensor& k, int n_samples = 25,
                                 uint64_t seed = 0x5EED);

}  // namespace superint::killing
