#include "superint/killing.hpp"

#include <cmath>

namespace superint::killing {

namespace {

// monomial exponents per coefficient slot
constexpr int kExp[10][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0},
                             {0, 2, 0}, {0, 0, 2}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};

int slot_of(int e1, int e2, int e3) {
  for (int s = 0; s < 10; ++s)
    if (kExp[s][0] == e1 && kExp[s][1] == e2 && kExp[s][2] == e3) return s;
  return -1;
}

}  // namespace

Poly2 Poly2::derivative(int axis) const {
  Poly2 d;
  for (int s = 0; s < 10; ++s) {
    if (c_[static_cast<size_t>(s)] == 0.0) continue;
    int e[3] = {kExp[s][0], kExp[s][1], kExp[s][2]};
    if (e[axis] == 0) continue;
    const double factor = e[axis];
    e[axis] -= 1;
    d[slot_of(e[0], e[1], e[2])] += factor * c_[static_cast<size_t>(s)];
  }
  return d;
}

Poly2 Poly2::shifted_x3(double t) const { return shifted({0.0, 0.0, t}); }

Poly2 Poly2::shifted(const Vec3& t) const {
  const auto& c = c_;
  Poly2 r = *this;
  r[0] = c[0] + c[1] * t[0] + c[2] * t[1] + c[3] * t[2] + c[4] * t[0] * t[0] + c[5] * t[1] * t[1] +
         c[6] * t[2] * t[2] + c[7] * t[0] * t[1] + c[8] * t[0] * t[2] + c[9] * t[1] * t[2];
  r[1] = c[1] + 2.0 * c[4] * t[0] + c[7] * t[1] + c[8] * t[2];
  r[2] = c[2] + 2.0 * c[5] * t[1] + c[7] * t[0] + c[9] * t[2];
  r[3] = c[3] + 2.0 * c[6] * t[2] + c[8] * t[0] + c[9] * t[1];
  return r;
}

Poly2 Poly2::product(const Poly2& a, const Poly2& b) {
  if (a.degree() + b.degree() > 2)
    throw std::invalid_argument("Poly2::product would exceed degree 2");
  Poly2 r;
  for (int s = 0; s < 10; ++s) {
    if (a[s] == 0.0) continue;
    for (int u = 0; u < 10; ++u) {
      if (b[u] == 0.0) continue;
      const int slot = slot_of(kExp[s][0] + kExp[u][0], kExp[s][1] + kExp[u][1],
                               kExp[s][2] + kExp[u][2]);
      r[slot] += a[s] * b[u];
    }
  }
  return r;
}

int Poly2::degree() const {
  int d = 0;
  for (int s = 0; s < 10; ++s) {
    if (c_[static_cast<size_t>(s)] == 0.0) continue;
    d = std::max(d, kExp[s][0] + kExp[s][1] + kExp[s][2]);
  }
  return d;
}

double Poly2::max_abs_coeff() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

Poly2& Poly2::operator+=(const Poly2& o) {
  for (int s = 0; s < 10; ++s) c_[static_cast<size_t>(s)] += o[s];
  return *this;
}
Poly2& Poly2::operator-=(const Poly2& o) {
  for (int s = 0; s < 10; ++s) c_[static_cast<size_t>(s)] -= o[s];
  return *this;
}
Poly2& Poly2::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

int KillingTensor::index(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == j) return i;            // 0,1,2
  return 2 + i + j;                // (0,1)->3, (0,2)->4, (1,2)->5
}

Mat3 KillingTensor::eval(const Vec3& x) const {
  Mat3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      const double v = component(i, j)(x);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

Observable KillingTensor::quadratic_observable() const {
  const KillingTensor k = *this;
  return Observable::make(label_.empty() ? "Kpp" : label_, 3,
                          [k](const auto& z) { return k.quadratic_form(z.q, z.p); });
}

KillingTensor KillingTensor::shifted_x3(double t) const {
  KillingTensor r = *this;
  for (auto& p : r.c_) p = p.shifted_x3(t);
  return r;
}

double KillingTensor::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& p : c_) m = std::max(m, p.max_abs_coeff());
  return m;
}

KillingTensor& KillingTensor::operator+=(const KillingTensor& o) {
  for (int s = 0; s < 6; ++s) c_[static_cast<size_t>(s)] += o.c_[static_cast<size_t>(s)];
  return *this;
}
KillingTensor& KillingTensor::operator*=(double s) {
  for (auto& p : c_) p *= s;
  return *this;
}

KillingTensor metric_tensor() {
  KillingTensor g("g");
  for (int i = 0; i < 3; ++i) g.component(i, i)[0] = 1.0;
  return g;
}

KillingTensor spherical_pencil(double a1, double c2, double c3) {
  // slots: 4 = x1^2, 5 = x2^2, 6 = x3^2, 7 = x1x2, 8 = x1x3, 9 = x2x3
  KillingTensor k("pencil");
  k.component(0, 0)[0] = a1;
  k.component(0, 0)[6] = c2;
  k.component(0, 0)[5] = c3;
  k.component(1, 1)[0] = a1;
  k.component(1, 1)[4] = c3;
  k.component(1, 1)[6] = c2;
  k.component(2, 2)[0] = a1;
  k.component(2, 2)[4] = c2;
  k.component(2, 2)[5] = c2;
  k.component(0, 1)[7] = -c3;
  k.component(0, 2)[8] = -c2;
  k.component(1, 2)[9] = -c2;
  return k;
}

KillingTensor lie_derivative_rotation(const KillingTensor& k) {
  // X = (-x2, x1, 0); (L_X K)^{ij} = X^m d_m K^{ij} - K^{mj} d_m X^i - K^{im} d_m X^j.
  Poly2 mx2, x1;
  mx2[2] = -1.0;
  x1[1] = 1.0;
  // dX: A(i,m) = d X^i / d x^m
  auto a = [](int i, int m) { return (i == 0 && m == 1) ? -1.0 : (i == 1 && m == 0) ? 1.0 : 0.0; };
  KillingTensor out("L3[" + k.label() + "]");
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      Poly2 term = Poly2::product(mx2, k.component(i, j).derivative(0)) +
                   Poly2::product(x1, k.component(i, j).derivative(1));
      for (int m = 0; m < 3; ++m) {
        if (a(i, m) != 0.0) term -= a(i, m) * k.component(m, j);
        if (a(j, m) != 0.0) term -= a(j, m) * k.component(i, m);
      }
      out.component(i, j) = term;
    }
  return out;
}

Mat3 lie_derivative_rotation_at(const KillingTensor& k, const Vec3& x) {
  return lie_derivative_rotation(k).eval(x);
}

double translation_span_residual(std::span<const KillingTensor> basis, double t, uint64_t seed) {
  if (basis.empty()) throw std::invalid_argument("translation_span_residual: empty basis");
  const int b = static_cast<int>(basis.size());
  for (int attempt = 0; attempt < 4; ++attempt) {
    num::Rng rng(seed + static_cast<uint64_t>(attempt));
    const int npts = 20 + 10 * attempt;
    std::vector<Vec3> pts(static_cast<size_t>(npts));
    for (auto& p : pts)
      p = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const int rows = npts * 6;
    num::Mat a(rows, b);
    for (int c = 0; c < b; ++c) {
      int r = 0;
      for (const auto& p : pts) {
        const Mat3 m = basis[static_cast<size_t>(c)].eval(p);
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j) a(r++, c) = m(i, j);
      }
    }
    // degenerate sampling: the sample matrix must expose the span's full rank
    const int sample_rank = num::numerical_rank(a, 1e-10);
    int coeff_rank = 0;
    {
      num::Mat cm(b, 60);
      for (int c = 0; c < b; ++c) {
        int col = 0;
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j)
            for (int s = 0; s < 10; ++s) cm(c, col++) = basis[static_cast<size_t>(c)].component(i, j)[s];
      }
      coeff_rank = num::numerical_rank(cm, 1e-10);
    }
    if (sample_rank < coeff_rank) continue;  // resample

    double worst = 0.0;
    for (int c = 0; c < b; ++c) {
      const KillingTensor shifted = basis[static_cast<size_t>(c)].shifted_x3(t);
      std::vector<double> rhs(static_cast<size_t>(rows));
      int r = 0;
      for (const auto& p : pts) {
        const Mat3 m = shifted.eval(p);
        for (int i = 0; i < 3; ++i)
          for (int j = i; j < 3; ++j) rhs[static_cast<size_t>(r++)] = m(i, j);
      }
      const auto coef = num::least_squares(a, rhs);
      for (int i = 0; i < rows; ++i) {
        double fit = 0.0;
        for (int cc = 0; cc < b; ++cc) fit += a(i, cc) * coef[static_cast<size_t>(cc)];
        worst = std::max(worst, std::abs(fit - rhs[static_cast<size_t>(i)]));
      }
    }
    return worst;
  }
  throw num::SamplingError("translation_span_residual: degenerate sample set");
}

EigenframeResult common_eigenframe(const KillingTensor& k1, const KillingTensor& k2, const Vec3& x,
                                   double tol) {
  EigenframeResult res;
  const Mat3 m1 = k1.eval(x);
  const Mat3 m2 = k2.eval(x);
  const double scale = std::max({m1.max_abs(), m2.max_abs(), 1e-30});
  res.commutator_norm = num::commutator(m1, m2).max_abs();
  res.commute = res.commutator_norm <= tol * scale;
  if (!res.commute) return res;

  const auto e1 = num::sym_eigen3(m1);
  const double rad1 = std::max(std::abs(e1.values[0]), std::abs(e1.values[2]));
  const double gap1 = std::min(e1.values[1] - e1.values[0], e1.values[2] - e1.values[1]);
  if (gap1 > 1e-8 * std::max(rad1, 1e-30)) {
    res.frame = e1.vectors;
    return res;
  }
  // break the degeneracy with a generic pencil member
  for (double mu : {0.37, 1.13, -0.71}) {
    const auto em = num::sym_eigen3(m1 + mu * m2);
    const double rad = std::max(std::abs(em.values[0]), std::abs(em.values[2]));
    const double gap = std::min(em.values[1] - em.values[0], em.values[2] - em.values[1]);
    if (gap > 1e-8 * std::max(rad, 1e-30)) {
      res.frame = em.vectors;
      return res;
    }
  }
  res.degenerate = true;
  res.frame = e1.vectors;
  return res;
}

KillingTensor killing_from_quadratic(const Observable& f) {
  if (f.dim() != 3) throw num::DimensionError("killing_from_quadratic expects n=3");

  // K^{ij}(q) by momentum polarization; U(q) and any linear part cancel in
  // the combinations below.
  auto k_at = [&f](const Vec3& q) {
    auto eval = [&](const Vec3& p) {
      phase::PhaseState z;
      z.n = 3;
      z.q = q;
      z.p = p;
      return f(z);
    };
    const double f0 = eval({0, 0, 0});
    Mat3 k;
    std::array<double, 3> plus{}, minus{};
    for (int i = 0; i < 3; ++i) {
      Vec3 e{};
      e[static_cast<size_t>(i)] = 1.0;
      plus[static_cast<size_t>(i)] = eval(e);
      e[static_cast<size_t>(i)] = -1.0;
      minus[static_cast<size_t>(i)] = eval(e);
      k(i, i) = 0.5 * (plus[static_cast<size_t>(i)] + minus[static_cast<size_t>(i)]) - f0;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        Vec3 e{};
        e[static_cast<size_t>(i)] = 1.0;
        e[static_cast<size_t>(j)] = 1.0;
        const double fij = eval(e);
        const double bi = 0.5 * (plus[static_cast<size_t>(i)] - minus[static_cast<size_t>(i)]);
        const double bj = 0.5 * (plus[static_cast<size_t>(j)] - minus[static_cast<size_t>(j)]);
        const double kij = 0.5 * (fij - f0 - bi - bj - k(i, i) - k(j, j));
        k(i, j) = kij;
        k(j, i) = kij;
      }
    const double scale = std::max(1.0, k.max_abs());
    for (int i = 0; i < 3; ++i) {
      const double bi = 0.5 * (plus[static_cast<size_t>(i)] - minus[static_cast<size_t>(i)]);
      if (std::abs(bi) > 1e-8 * scale)
        throw num::NotQuadraticError(f.label() + ": linear momentum part present");
    }
    return k;
  };

  // fit each component on a 10-point stencil, jittering the base point away
  // from singular sets of the potential part
  Vec3 base{0.63, 0.41, -0.57};
  const double h = 0.5;
  const std::array<Vec3, 10> offsets = {{{0, 0, 0},
                                         {h, 0, 0},
                                         {-h, 0, 0},
                                         {0, h, 0},
                                         {0, -h, 0},
                                         {0, 0, h},
                                         {0, 0, -h},
                                         {h, h, 0},
                                         {h, 0, h},
                                         {0, h, h}}};
  std::array<Mat3, 10> samples;
  for (int attempt = 0;; ++attempt) {
    try {
      for (int s = 0; s < 10; ++s) {
        Vec3 q;
        for (int i = 0; i < 3; ++i)
          q[static_cast<size_t>(i)] = base[static_cast<size_t>(i)] + offsets[static_cast<size_t>(s)][static_cast<size_t>(i)];
        samples[static_cast<size_t>(s)] = k_at(q);
      }
      break;
    } catch (const num::SingularityError&) {
      if (attempt >= 8) throw;
      base = {base[0] * 1.137 + 0.11, base[1] * 1.071 - 0.07, base[2] * 1.093 + 0.05};
    }
  }

  KillingTensor out(f.label());
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      auto at = [&](int s) { return samples[static_cast<size_t>(s)](i, j); };
      Poly2 local;  // coefficients in offsets around base
      local[0] = at(0);
      local[4] = (at(1) + at(2) - 2.0 * at(0)) / (2.0 * h * h);
      local[5] = (at(3) + at(4) - 2.0 * at(0)) / (2.0 * h * h);
      local[6] = (at(5) + at(6) - 2.0 * at(0)) / (2.0 * h * h);
      local[1] = (at(1) - at(2)) / (2.0 * h);
      local[2] = (at(3) - at(4)) / (2.0 * h);
      local[3] = (at(5) - at(6)) / (2.0 * h);
      local[7] = (at(7) - at(0) - local[1] * h - local[2] * h - local[4] * h * h -
                  local[5] * h * h) /
                 (h * h);
      local[8] = (at(8) - at(0) - local[1] * h - local[3] * h - local[4] * h * h -
                  local[6] * h * h) /
                 (h * h);
      local[9] = (at(9) - at(0) - local[2] * h - local[3] * h - local[5] * h * h -
                  local[6] * h * h) /
                 (h * h);
      Vec3 neg{-base[0], -base[1], -base[2]};
      out.component(i, j) = local.shifted(neg);
    }

  // snap coefficients that are rounding noise
  const double snap = 1e-9 * std::max(1.0, out.max_abs_coeff());
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int s = 0; s < 10; ++s)
        if (std::abs(out.component(i, j)[s]) < snap) out.component(i, j)[s] = 0.0;

  // reconstruction check at generic points catches components that are not
  // degree <= 2 polynomials as well as momentum parts beyond quadratic
  num::Rng rng(0x51C4);
  for (int trial = 0; trial < 6; ++trial) {
    Vec3 q{rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
    for (int retry = 0; retry < 16; ++retry) {
      try {
        phase::PhaseState z;
        z.n = 3;
        z.q = q;
        z.p = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        phase::PhaseState z0 = z;
        z0.p = {0, 0, 0};
        const double direct = f(z) - f(z0);
        const double viaK = out.quadratic_form(z.q, z.p);
        const double scale = std::max({1.0, std::abs(direct), std::abs(viaK)});
        if (std::abs(direct - viaK) > 1e-8 * scale)
          throw num::NotQuadraticError(f.label() + ": not exactly quadratic in momenta");
        break;
      } catch (const num::SingularityError&) {
        q = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5)};
      }
    }
  }
  return out;
}

double killing_property_residual(const KillingTensor& k, int n_samples, uint64_t seed) {
  const Observable kpp = k.quadratic_observable();
  const Observable hfree = Observable::make("Hfree", 3, [](const auto& z) {
    using T = std::decay_t<decltype(z.q[0])>;
    T acc = T(0.0);
    for (int i = 0; i < 3; ++i) acc += z.p[static_cast<size_t>(i)] * z.p[static_cast<size_t>(i)];
    return 0.5 * acc;
  });
  num::Rng rng(seed);
  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    phase::PhaseState z;
    z.n = 3;
    for (int i = 0; i < 3; ++i) {
      z.q[static_cast<size_t>(i)] = rng.uniform(-2.0, 2.0);
      z.p[static_cast<size_t>(i)] = rng.uniform(-1.0, 1.0);
    }
    worst = std::max(worst, phase::poisson_bracket_normalized(kpp, hfree, z).normalized());
  }
  return worst;
}

}  // namespace superint::killing
