#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

/// Differentiation and small-matrix linear algebra used by every other layer.
/// Everything here is a pure function of its inputs.
namespace superint::num {

inline constexpr int kMaxVars = 6;

/// Denominator magnitudes below this raise SingularityError during evaluation.
inline constexpr double kSingularGuard = 1e-8;

class EvaluationError : public std::runtime_error {
 public:
  explicit EvaluationError(const std::string& what, int coordinate = -1)
      : std::runtime_error(what), coordinate_(coordinate) {}
  /// Index of the offending coordinate, or -1 when not attributable.
  int coordinate() const { return coordinate_; }

 private:
  int coordinate_;
};

class SingularityError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotQuadraticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Forward-mode differentiation on up to kMaxVars variables.
// A Dual carries a value and the partial derivatives with respect to every
// seeded variable, so one evaluation yields the full gradient.
// ---------------------------------------------------------------------------

class Dual {
 public:
  Dual() = default;
  Dual(double v) : val_(v) {}  // NOLINT: constants promote implicitly

  static Dual variable(double v, int index) {
    Dual d(v);
    d.der_[static_cast<size_t>(index)] = 1.0;
    return d;
  }

  double value() const { return val_; }
  double deriv(int i) const { return der_[static_cast<size_t>(i)]; }

  Dual& operator+=(const Dual& o) {
    val_ += o.val_;
    for (int i = 0; i < kMaxVars; ++i) der_[i] += o.der_[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    val_ -= o.val_;
    for (int i = 0; i < kMaxVars; ++i) der_[i] -= o.der_[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < kMaxVars; ++i) der_[i] = der_[i] * o.val_ + val_ * o.der_[i];
    val_ *= o.val_;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.val_;
    for (int i = 0; i < kMaxVars; ++i) der_[i] = (der_[i] - val_ * inv * o.der_[i]) * inv;
    val_ *= inv;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) {
    Dual r(-a.val_);
    for (int i = 0; i < kMaxVars; ++i) r.der_[i] = -a.der_[i];
    return r;
  }

  friend bool operator<(const Dual& a, const Dual& b) { return a.val_ < b.val_; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.val_ > b.val_; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.val_ <= b.val_; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.val_ >= b.val_; }

  /// Chain rule: g(x) with g(x.value)=fv, g'(x.value)=dfv.
  static Dual lift(double fv, double dfv, const Dual& x) {
    Dual r(fv);
    for (int i = 0; i < kMaxVars; ++i) r.der_[i] = dfv * x.der_[i];
    return r;
  }

 private:
  double val_ = 0.0;
  std::array<double, kMaxVars> der_{};
};

inline Dual sin(const Dual& x) { return Dual::lift(std::sin(x.value()), std::cos(x.value()), x); }
inline Dual cos(const Dual& x) { return Dual::lift(std::cos(x.value()), -std::sin(x.value()), x); }
inline Dual tan(const Dual& x) {
  const double t = std::tan(x.value());
  return Dual::lift(t, 1.0 + t * t, x);
}
inline Dual sinh(const Dual& x) { return Dual::lift(std::sinh(x.value()), std::cosh(x.value()), x); }
inline Dual cosh(const Dual& x) { return Dual::lift(std::cosh(x.value()), std::sinh(x.value()), x); }
inline Dual exp(const Dual& x) {
  const double e = std::exp(x.value());
  return Dual::lift(e, e, x);
}
inline Dual log(const Dual& x) { return Dual::lift(std::log(x.value()), 1.0 / x.value(), x); }
inline Dual sqrt(const Dual& x) {
  const double s = std::sqrt(x.value());
  return Dual::lift(s, 0.5 / s, x);
}
inline Dual abs(const Dual& x) { return x.value() < 0.0 ? -x : x; }
inline Dual pow(const Dual& x, double e) {
  const double v = std::pow(x.value(), e);
  return Dual::lift(v, e * std::pow(x.value(), e - 1.0), x);
}
inline Dual atan2(const Dual& y, const Dual& x) {
  const double vx = x.value(), vy = y.value();
  const double denom = vx * vx + vy * vy;
  // vx*y - vy*x has value 0 and carries exactly the derivative numerator.
  const Dual d = Dual(vx) * y - Dual(vy) * x;
  return Dual(std::atan2(vy, vx)) + d / Dual(denom);
}

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.value(); }

template <class T>
T sq(const T& x) {
  return x * x;
}

/// 1/denom with the singularity guard applied to |denom|.
template <class T>
T guarded_inverse(const T& denom, const char* what) {
  if (std::abs(value_of(denom)) < kSingularGuard)
    throw SingularityError(std::string("singular denominator: ") + what);
  return T(1.0) / denom;
}

// ---------------------------------------------------------------------------
// Gradients
// ---------------------------------------------------------------------------

struct DiffConfig {
  enum class Mode { automatic, finite_difference };
  Mode mode = Mode::automatic;
  double fd_step = 1e-6;  // relative step, must lie in (0, 1e-2)
  bool richardson = false;

  void validate() const {
    if (!(fd_step > 0.0 && fd_step < 1e-2))
      throw std::invalid_argument("fd_step must lie in (0, 1e-2)");
  }
};

/// Gradient of a scalar function of m reals, m <= kMaxVars.
/// Automatic mode is exact to rounding; finite differences serve as the
/// independent cross-check.
template <class F>
std::vector<double> gradient(const F& f, std::span<const double> z,
                             const DiffConfig& cfg = {}) {
  cfg.validate();
  const int m = static_cast<int>(z.size());
  if (m > kMaxVars) throw DimensionError("gradient: too many variables");
  std::vector<double> g(static_cast<size_t>(m));
  if (cfg.mode == DiffConfig::Mode::automatic) {
    if constexpr (std::is_invocable_v<const F&, std::span<const Dual>>) {
      std::vector<Dual> zz(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i)
        zz[static_cast<size_t>(i)] = Dual::variable(z[static_cast<size_t>(i)], i);
      const Dual r = f(std::span<const Dual>(zz));
      if (!std::isfinite(r.value())) throw EvaluationError("non-finite value in gradient");
      for (int i = 0; i < m; ++i) {
        g[static_cast<size_t>(i)] = r.deriv(i);
        if (!std::isfinite(g[static_cast<size_t>(i)]))
          throw EvaluationError("non-finite derivative in gradient", i);
      }
      return g;
    } else {
      throw std::logic_error("automatic gradient needs a dual-evaluable function");
    }
  }
  std::vector<double> w(z.begin(), z.end());
  auto eval_at = [&](int i, double step) {
    const double keep = w[static_cast<size_t>(i)];
    w[static_cast<size_t>(i)] = keep + step;
    const double v = f(std::span<const double>(w));
    w[static_cast<size_t>(i)] = keep;
    if (!std::isfinite(v)) throw EvaluationError("non-finite value in finite difference", i);
    return v;
  };
  for (int i = 0; i < m; ++i) {
    const double h = cfg.fd_step * std::max(1.0, std::abs(z[static_cast<size_t>(i)]));
    auto central = [&](double hh) { return (eval_at(i, hh) - eval_at(i, -hh)) / (2.0 * hh); };
    if (cfg.richardson) {
      const double d1 = central(h);
      const double d2 = central(h / 2.0);
      g[static_cast<size_t>(i)] = (4.0 * d2 - d1) / 3.0;
    } else {
      g[static_cast<size_t>(i)] = central(h);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Small dense matrices (at most a few hundred entries in this project)
// ---------------------------------------------------------------------------

class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows * cols), 0.0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<size_t>(i * cols_ + j)]; }
  double operator()(int i, int j) const { return a_[static_cast<size_t>(i * cols_ + j)]; }

  Mat transposed() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool all_finite() const {
    for (double v : a_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

/// Singular values by one-sided Jacobi column orthogonalization, descending.
inline std::vector<double> singular_values(Mat a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  if (a.rows() < a.cols()) a = a.transposed();
  const int m = a.rows(), n = a.cols();
  auto col_dot = [&](int p, int q) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += a(i, p) * a(i, q);
    return s;
  };
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double app = col_dot(p, p), aqq = col_dot(q, q), apq = col_dot(p, q);
        if (std::abs(apq) <= 1e-32 + 1e-15 * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        for (int i = 0; i < m; ++i) {
          const double vp = a(i, p), vq = a(i, q);
          a(i, p) = c * vp - s * vq;
          a(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) sv[static_cast<size_t>(j)] = std::sqrt(col_dot(j, j));
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

/// Count of singular values at or above rel_tol times the largest one.
/// The zero matrix has rank 0.
inline int numerical_rank(const Mat& m, double rel_tol = 1e-8) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("rel_tol must lie in (0,1)");
  if (!m.all_finite()) throw EvaluationError("numerical_rank: non-finite entry");
  const auto sv = singular_values(m);
  if (sv.empty() || sv.front() == 0.0) return 0;
  int r = 0;
  for (double s : sv)
    if (s >= rel_tol * sv.front()) ++r;
  return r;
}

/// Minimum-norm least squares solution of A x = b via Jacobi SVD.
inline std::vector<double> least_squares(const Mat& a0, const std::vector<double>& b) {
  const int m = a0.rows(), n = a0.cols();
  if (static_cast<int>(b.size()) != m) throw DimensionError("least_squares: size mismatch");
  Mat a = a0;
  Mat v(n, n);
  for (int i = 0; i < n; ++i) v(i, i) = 1.0;
  auto col_dot = [&](int p, int q) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += a(i, p) * a(i, q);
    return s;
  };
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double app = col_dot(p, p), aqq = col_dot(q, q), apq = col_dot(p, q);
        if (std::abs(apq) <= 1e-32 + 1e-15 * std::sqrt(app * aqq)) continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        for (int i = 0; i < m; ++i) {
          const double vp = a(i, p), vq = a(i, q);
          a(i, p) = c * vp - s * vq;
          a(i, q) = s * vp + c * vq;
        }
        for (int i = 0; i < n; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sigma(static_cast<size_t>(n));
  double smax = 0.0;
  for (int j = 0; j < n; ++j) {
    sigma[static_cast<size_t>(j)] = std::sqrt(col_dot(j, j));
    smax = std::max(smax, sigma[static_cast<size_t>(j)]);
  }
  const double cut = 1e-13 * smax;
  std::vector<double> x(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    if (sigma[static_cast<size_t>(j)] <= cut) continue;
    double utb = 0.0;  // (column j of U) . b, with U column = A_j / sigma_j
    for (int i = 0; i < m; ++i) utb += a(i, j) * b[static_cast<size_t>(i)];
    utb /= sigma[static_cast<size_t>(j)];
    const double w = utb / sigma[static_cast<size_t>(j)];
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] += v(i, j) * w;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Fixed 3-vectors and 3x3 matrices
// ---------------------------------------------------------------------------

using Vec3 = std::array<double, 3>;

struct Mat3 {
  std::array<double, 9> a{};

  static Mat3 identity() {
    Mat3 m;
    m.a = {1, 0, 0, 0, 1, 0, 0, 0, 1};
    return m;
  }
  double& operator()(int i, int j) { return a[static_cast<size_t>(3 * i + j)]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(3 * i + j)]; }

  Mat3 transposed() const {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  friend Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += x(i, k) * y(k, j);
        r(i, j) = s;
      }
    return r;
  }
  friend Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[static_cast<size_t>(i)] = x.a[static_cast<size_t>(i)] - y.a[static_cast<size_t>(i)];
    return r;
  }
  friend Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[static_cast<size_t>(i)] = x.a[static_cast<size_t>(i)] + y.a[static_cast<size_t>(i)];
    return r;
  }
  friend Mat3 operator*(double s, const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.a[static_cast<size_t>(i)] = s * x.a[static_cast<size_t>(i)];
    return r;
  }
  Vec3 apply(const Vec3& v) const {
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r[static_cast<size_t>(i)] += (*this)(i, j) * v[static_cast<size_t>(j)];
    return r;
  }
  double det() const {
    const Mat3& m = *this;
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  }
  Mat3 inverse() const {
    const double d = det();
    if (std::abs(d) < 1e-14) throw EvaluationError("Mat3: non-invertible");
    const Mat3& m = *this;
    Mat3 r;
    r(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / d;
    r(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / d;
    r(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / d;
    r(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / d;
    r(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / d;
    r(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / d;
    r(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / d;
    r(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / d;
    r(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / d;
    return r;
  }
  double max_abs() const {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
  }
};

inline Mat3 commutator(const Mat3& x, const Mat3& y) { return x * y - y * x; }

inline double dot(const Vec3& x, const Vec3& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}
inline double norm(const Vec3& x) { return std::sqrt(dot(x, x)); }

struct SymEigen3 {
  Vec3 values;   // ascending
  Mat3 vectors;  // columns
};

/// Cyclic Jacobi eigen decomposition of a symmetric 3x3 matrix.
inline SymEigen3 sym_eigen3(Mat3 m) {
  Mat3 v = Mat3::identity();
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = std::abs(m(0, 1)) + std::abs(m(0, 2)) + std::abs(m(1, 2));
    if (off < 1e-15 * (1.0 + m.max_abs())) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(m(p, q)) < 1e-300) continue;
        const double tau = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = c * t;
        Mat3 r = Mat3::identity();
        r(p, p) = c;
        r(q, q) = c;
        r(p, q) = s;
        r(q, p) = -s;
        m = r.transposed() * m * r;
        v = v * r;
      }
    }
  }
  std::array<int, 3> idx = {0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return m(i, i) < m(j, j); });
  SymEigen3 out;
  Mat3 sorted;
  for (int k = 0; k < 3; ++k) {
    out.values[static_cast<size_t>(k)] = m(idx[static_cast<size_t>(k)], idx[static_cast<size_t>(k)]);
    for (int i = 0; i < 3; ++i) sorted(i, k) = v(i, idx[static_cast<size_t>(k)]);
  }
  out.vectors = sorted;
  return out;
}

// ---------------------------------------------------------------------------
// Reproducible sampling
// ---------------------------------------------------------------------------

/// mt19937_64 with a platform-independent double conversion, so that reports
/// generated from the same seed are byte-identical everywhere.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}
  double next01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next01(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace superint::num
