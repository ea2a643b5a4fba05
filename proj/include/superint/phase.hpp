#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>

#include "superint/numcore.hpp"

/// Phase-space states, observables, Poisson brackets and canonical point
/// transformations. States have n = 2 or 3 degrees of freedom.
namespace superint::phase {

using num::DiffConfig;
using num::Dual;
using num::Mat3;
using num::Vec3;

template <class T>
struct State {
  int n = 3;
  std::array<T, 3> q{};
  std::array<T, 3> p{};
};

using PhaseState = State<double>;
using DualState = State<Dual>;

inline PhaseState make_state(std::initializer_list<double> q, std::initializer_list<double> p) {
  if (q.size() != p.size() || (q.size() != 2 && q.size() != 3))
    throw num::DimensionError("state needs matching q,p of length 2 or 3");
  PhaseState z;
  z.n = static_cast<int>(q.size());
  int i = 0;
  for (double v : q) z.q[static_cast<size_t>(i++)] = v;
  i = 0;
  for (double v : p) z.p[static_cast<size_t>(i++)] = v;
  for (int k = 0; k < z.n; ++k)
    if (!std::isfinite(z.q[static_cast<size_t>(k)]) || !std::isfinite(z.p[static_cast<size_t>(k)]))
      throw num::EvaluationError("state components must be finite", k);
  return z;
}

/// Seed q_i on lane i and p_i on lane n+i, giving full phase gradients in one
/// evaluation.
inline DualState seeded(const PhaseState& z) {
  DualState d;
  d.n = z.n;
  for (int i = 0; i < z.n; ++i) {
    d.q[static_cast<size_t>(i)] = Dual::variable(z.q[static_cast<size_t>(i)], i);
    d.p[static_cast<size_t>(i)] = Dual::variable(z.p[static_cast<size_t>(i)], z.n + i);
  }
  return d;
}

/// A smooth scalar function on phase space. Evaluation is deterministic and
/// immutable after construction; closed under sum, difference, product and
/// scalar multiple.
class Observable {
  struct Concept {
    virtual ~Concept() = default;
    virtual double eval(const PhaseState&) const = 0;
    virtual Dual eval(const DualState&) const = 0;
  };
  template <class F>
  struct Model final : Concept {
    explicit Model(F f) : fn(std::move(f)) {}
    double eval(const PhaseState& z) const override { return fn(z); }
    Dual eval(const DualState& z) const override { return fn(z); }
    F fn;
  };

 public:
  Observable() = default;

  template <class F>
  static Observable make(std::string label, int dim, F f) {
    Observable o;
    o.label_ = std::move(label);
    o.dim_ = dim;
    o.self_ = std::make_shared<Model<F>>(std::move(f));
    return o;
  }

  const std::string& label() const { return label_; }
  int dim() const { return dim_; }
  bool valid() const { return static_cast<bool>(self_); }

  double operator()(const PhaseState& z) const {
    check(z.n);
    return self_->eval(z);
  }
  Dual operator()(const DualState& z) const {
    check(z.n);
    return self_->eval(z);
  }

  /// Full phase gradient (dF/dq, dF/dp), 2n entries.
  std::vector<double> gradient(const PhaseState& z, const DiffConfig& cfg = {}) const {
    check(z.n);
    cfg.validate();
    const int n = z.n;
    if (cfg.mode == DiffConfig::Mode::automatic) {
      const Dual r = (*this)(seeded(z));
      if (!std::isfinite(r.value())) throw num::EvaluationError("non-finite observable value");
      std::vector<double> g(static_cast<size_t>(2 * n));
      for (int i = 0; i < 2 * n; ++i) {
        g[static_cast<size_t>(i)] = r.deriv(i);
        if (!std::isfinite(g[static_cast<size_t>(i)]))
          throw num::EvaluationError("non-finite observable derivative", i);
      }
      return g;
    }
    std::vector<double> flat(static_cast<size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
      flat[static_cast<size_t>(i)] = z.q[static_cast<size_t>(i)];
      flat[static_cast<size_t>(n + i)] = z.p[static_cast<size_t>(i)];
    }
    auto f = [this, n](std::span<const double> w) {
      PhaseState s;
      s.n = n;
      for (int i = 0; i < n; ++i) {
        s.q[static_cast<size_t>(i)] = w[static_cast<size_t>(i)];
        s.p[static_cast<size_t>(i)] = w[static_cast<size_t>(n + i)];
      }
      return (*this)(s);
    };
    return num::gradient(f, std::span<const double>(flat), cfg);
  }

  Observable renamed(std::string label) const {
    Observable o = *this;
    o.label_ = std::move(label);
    return o;
  }

  friend Observable operator+(const Observable& a, const Observable& b) {
    return combine(a, b, "+", [](auto x, auto y) { return x + y; });
  }
  friend Observable operator-(const Observable& a, const Observable& b) {
    return combine(a, b, "-", [](auto x, auto y) { return x - y; });
  }
  friend Observable operator*(const Observable& a, const Observable& b) {
    return combine(a, b, "*", [](auto x, auto y) { return x * y; });
  }
  friend Observable operator*(double s, const Observable& a) {
    return make(std::to_string(s) + "*" + a.label_, a.dim_,
                [s, a](const auto& z) { return s * a(z); });
  }

 private:
  void check(int n) const {
    if (!self_) throw std::logic_error("empty observable");
    if (n != dim_) throw num::DimensionError("observable dimension mismatch");
  }
  template <class Op>
  static Observable combine(const Observable& a, const Observable& b, const char* sym, Op op) {
    if (a.dim_ != b.dim_) throw num::DimensionError("observable dimension mismatch");
    return make("(" + a.label_ + sym + b.label_ + ")", a.dim_,
                [a, b, op](const auto& z) { return op(a(z), b(z)); });
  }

  std::shared_ptr<const Concept> self_;
  std::string label_;
  int dim_ = 3;
};

inline Observable coordinate_observable(int index, int dim = 3) {
  return Observable::make("q" + std::to_string(index + 1), dim,
                          [index](const auto& z) { return z.q[static_cast<size_t>(index)]; });
}

/// {A,B}(z) = sum_i dA/dq_i dB/dp_i - dA/dp_i dB/dq_i.
inline double poisson_bracket(const Observable& a, const Observable& b, const PhaseState& z,
                              const DiffConfig& cfg = {}) {
  if (a.dim() != b.dim() || a.dim() != z.n)
    throw num::DimensionError("poisson_bracket: dimension mismatch");
  const auto ga = a.gradient(z, cfg);
  const auto gb = b.gradient(z, cfg);
  double s = 0.0;
  for (int i = 0; i < z.n; ++i)
    s += ga[static_cast<size_t>(i)] * gb[static_cast<size_t>(z.n + i)] -
         ga[static_cast<size_t>(z.n + i)] * gb[static_cast<size_t>(i)];
  return s;
}

/// Bracket together with the gradient norms used for scale-free residuals.
struct BracketResult {
  double bracket;
  double norm_a;
  double norm_b;
  double normalized() const { return std::abs(bracket) / (norm_a * norm_b + 1e-300); }
};

inline BracketResult poisson_bracket_normalized(const Observable& a, const Observable& b,
                                                const PhaseState& z, const DiffConfig& cfg = {}) {
  if (a.dim() != b.dim() || a.dim() != z.n)
    throw num::DimensionError("poisson_bracket: dimension mismatch");
  const auto ga = a.gradient(z, cfg);
  const auto gb = b.gradient(z, cfg);
  double s = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < z.n; ++i)
    s += ga[static_cast<size_t>(i)] * gb[static_cast<size_t>(z.n + i)] -
         ga[static_cast<size_t>(z.n + i)] * gb[static_cast<size_t>(i)];
  for (size_t i = 0; i < ga.size(); ++i) {
    na += ga[i] * ga[i];
    nb += gb[i] * gb[i];
  }
  return {s, std::sqrt(na), std::sqrt(nb)};
}

/// Kinetic convention plus a position-only potential. kinetic_factor is 1/2
/// for the H = p^2/2 + V normalization and 1 for the H = p^2 + V one.
class HamiltonianSystem {
 public:
  using MarginFn = std::function<double(const PhaseState&)>;

  HamiltonianSystem() = default;
  HamiltonianSystem(std::string label, int dim, double kinetic_factor, Observable potential,
                    MarginFn margin = {})
      : label_(std::move(label)),
        dim_(dim),
        kinetic_factor_(kinetic_factor),
        potential_(std::move(potential)),
        margin_(std::move(margin)) {
    const double kf = kinetic_factor_;
    const Observable v = potential_;
    const int n = dim_;
    hamiltonian_ = Observable::make("H", n, [kf, v, n](const auto& z) {
      using T = std::decay_t<decltype(z.q[0])>;
      T kin = T(0.0);
      for (int i = 0; i < n; ++i) kin += z.p[static_cast<size_t>(i)] * z.p[static_cast<size_t>(i)];
      return kf * kin + v(z);
    });
  }

  const std::string& label() const { return label_; }
  int dim() const { return dim_; }
  double kinetic_factor() const { return kinetic_factor_; }
  const Observable& potential() const { return potential_; }
  const Observable& hamiltonian() const { return hamiltonian_; }

  /// Smallest guarded denominator magnitude at q, +inf when the potential is
  /// regular everywhere.
  double margin(const PhaseState& z) const {
    return margin_ ? margin_(z) : std::numeric_limits<double>::infinity();
  }

  /// (dH/dp, -dH/dq); the directional derivative of any observable F along
  /// this field equals {F, H}.
  std::vector<double> vector_field(const PhaseState& z) const {
    const auto g = hamiltonian_.gradient(z);
    std::vector<double> f(static_cast<size_t>(2 * dim_));
    for (int i = 0; i < dim_; ++i) {
      f[static_cast<size_t>(i)] = g[static_cast<size_t>(dim_ + i)];
      f[static_cast<size_t>(dim_ + i)] = -g[static_cast<size_t>(i)];
    }
    return f;
  }

 private:
  std::string label_;
  int dim_ = 3;
  double kinetic_factor_ = 0.5;
  Observable potential_;
  Observable hamiltonian_;
  MarginFn margin_;
};

/// Invertible position map with Jacobian access, for canonical point
/// transformations q' = C(q), p' = J^{-T} p.
struct PointMap {
  std::function<Vec3(const Vec3&)> apply;
  std::function<Mat3(const Vec3&)> jacobian;
};

inline PointMap linear_map(const Mat3& m) {
  return {[m](const Vec3& x) { return m.apply(x); }, [m](const Vec3&) { return m; }};
}

inline PhaseState pushforward_state(const PointMap& c, const PhaseState& z) {
  if (z.n != 3) throw num::DimensionError("pushforward_state expects n=3");
  PhaseState out;
  out.n = 3;
  out.q = c.apply(z.q);
  const Mat3 jt_inv = c.jacobian(z.q).transposed().inverse();
  out.p = jt_inv.apply(z.p);
  return out;
}

/// Pullback A(Mq, Mp) along a linear phase map, M orthogonal.
inline Observable compose_linear(const Observable& a, const Mat3& m) {
  return Observable::make(a.label() + "@rot", a.dim(), [a, m](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    std::decay_t<decltype(z)> w;
    w.n = z.n;
    for (int i = 0; i < 3; ++i) {
      T qi = T(0.0), pi = T(0.0);
      for (int j = 0; j < 3; ++j) {
        qi += m(i, j) * z.q[static_cast<size_t>(j)];
        pi += m(i, j) * z.p[static_cast<size_t>(j)];
      }
      w.q[static_cast<size_t>(i)] = qi;
      w.p[static_cast<size_t>(i)] = pi;
    }
    return a(w);
  });
}

}  // namespace superint::phase
