#include "superint/dynamics.hpp"

#include <cmath>
#include <ostream>

namespace superint::dynamics {

namespace {

constexpr double kGuardDistance = 1e-4;

using num::Vec3;

std::array<double, 3> force(const HamiltonianSystem& sys, const PhaseState& z) {
  // -dV/dq via one seeded evaluation of the potential
  phase::DualState d;
  d.n = z.n;
  for (int i = 0; i < z.n; ++i) {
    d.q[static_cast<size_t>(i)] = num::Dual::variable(z.q[static_cast<size_t>(i)], i);
    d.p[static_cast<size_t>(i)] = num::Dual(z.p[static_cast<size_t>(i)]);
  }
  const num::Dual v = sys.potential()(d);
  std::array<double, 3> f{};
  for (int i = 0; i < z.n; ++i) {
    f[static_cast<size_t>(i)] = -v.deriv(i);
    if (!std::isfinite(f[static_cast<size_t>(i)]))
      throw num::EvaluationError("non-finite force", i);
  }
  return f;
}

/// One kick-drift-kick step of size h.
void verlet_step(const HamiltonianSystem& sys, PhaseState& z, double h) {
  const double vel = 2.0 * sys.kinetic_factor();
  auto f = force(sys, z);
  for (int i = 0; i < z.n; ++i) z.p[static_cast<size_t>(i)] += 0.5 * h * f[static_cast<size_t>(i)];
  for (int i = 0; i < z.n; ++i) z.q[static_cast<size_t>(i)] += h * vel * z.p[static_cast<size_t>(i)];
  f = force(sys, z);
  for (int i = 0; i < z.n; ++i) z.p[static_cast<size_t>(i)] += 0.5 * h * f[static_cast<size_t>(i)];
}

void yoshida_step(const HamiltonianSystem& sys, PhaseState& z, double h) {
  static const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
  static const double w0 = -std::cbrt(2.0) * w1;
  verlet_step(sys, z, w1 * h);
  verlet_step(sys, z, w0 * h);
  verlet_step(sys, z, w1 * h);
}

std::array<double, 6> field(const HamiltonianSystem& sys, const PhaseState& z) {
  const double vel = 2.0 * sys.kinetic_factor();
  const auto f = force(sys, z);
  std::array<double, 6> d{};
  for (int i = 0; i < z.n; ++i) {
    d[static_cast<size_t>(i)] = vel * z.p[static_cast<size_t>(i)];
    d[static_cast<size_t>(z.n + i)] = f[static_cast<size_t>(i)];
  }
  return d;
}

PhaseState advanced(const PhaseState& z, const std::array<double, 6>& d, double h) {
  PhaseState w = z;
  for (int i = 0; i < z.n; ++i) {
    w.q[static_cast<size_t>(i)] += h * d[static_cast<size_t>(i)];
    w.p[static_cast<size_t>(i)] += h * d[static_cast<size_t>(z.n + i)];
  }
  return w;
}

void rk4_step(const HamiltonianSystem& sys, PhaseState& z, double h) {
  const auto k1 = field(sys, z);
  const auto k2 = field(sys, advanced(z, k1, h / 2.0));
  const auto k3 = field(sys, advanced(z, k2, h / 2.0));
  const auto k4 = field(sys, advanced(z, k3, h));
  for (int i = 0; i < 2 * z.n; ++i) {
    const double di = (k1[static_cast<size_t>(i)] + 2.0 * k2[static_cast<size_t>(i)] +
                       2.0 * k3[static_cast<size_t>(i)] + k4[static_cast<size_t>(i)]) *
                      h / 6.0;
    if (i < z.n)
      z.q[static_cast<size_t>(i)] += di;
    else
      z.p[static_cast<size_t>(i - z.n)] += di;
  }
}

}  // namespace

std::string integrator_name(Integrator m) {
  switch (m) {
    case Integrator::stormer_verlet2:
      return "stormer-verlet-2";
    case Integrator::yoshida4:
      return "yoshida-4";
    case Integrator::rk4_reference:
      return "rk4-reference";
  }
  return "?";
}

Integrator integrator_from_name(const std::string& name) {
  if (name == "stormer-verlet-2") return Integrator::stormer_verlet2;
  if (name == "yoshida-4") return Integrator::yoshida4;
  if (name == "rk4-reference") return Integrator::rk4_reference;
  throw std::invalid_argument("unknown integrator: " + name);
}

Trajectory integrate(const HamiltonianSystem& sys, const PhaseState& z0, double dt, double T,
                     Integrator method) {
  if (!(dt > 0.0) || T < dt) throw std::invalid_argument("integrate needs dt > 0 and T >= dt");
  if (sys.margin(z0) < kGuardDistance)
    throw num::SingularityError("initial state inside the guard distance");
  const long steps = static_cast<long>(std::floor(T / dt));
  Trajectory tr;
  tr.system_label = sys.label();
  tr.method = method;
  tr.dt = dt;
  tr.times.reserve(static_cast<size_t>(steps + 1));
  tr.states.reserve(static_cast<size_t>(steps + 1));
  PhaseState z = z0;
  tr.times.push_back(0.0);
  tr.states.push_back(z);
  double energy = sys.hamiltonian()(z0);
  for (long s = 1; s <= steps; ++s) {
    PhaseState next = z;
    bool ok = true;
    try {
      switch (method) {
        case Integrator::stormer_verlet2:
          verlet_step(sys, next, dt);
          break;
        case Integrator::yoshida4:
          yoshida_step(sys, next, dt);
          break;
        case Integrator::rk4_reference: {
          // reject the step and retry with halved substeps near a guard
          int halvings = 0;
          for (;;) {
            try {
              PhaseState trial = z;
              const int nsub = 1 << halvings;
              for (int i = 0; i < nsub; ++i) rk4_step(sys, trial, dt / nsub);
              next = trial;
              break;
            } catch (const num::SingularityError&) {
              if (++halvings > 4) throw;
            }
          }
          break;
        }
      }
    } catch (const num::SingularityError&) {
      ok = false;
    } catch (const num::EvaluationError&) {
      ok = false;
    }
    // guard the endpoint and the chord midpoint, so slow approaches truncate
    // before the potential evaluation blows up
    PhaseState mid = next;
    for (int i = 0; i < next.n; ++i)
      mid.q[static_cast<size_t>(i)] =
          0.5 * (z.q[static_cast<size_t>(i)] + next.q[static_cast<size_t>(i)]);
    if (!ok || sys.margin(next) < kGuardDistance || sys.margin(mid) < kGuardDistance) {
      tr.status = RunStatus::truncated_singularity;
      return tr;
    }
    for (int i = 0; i < next.n; ++i)
      if (!std::isfinite(next.q[static_cast<size_t>(i)]) ||
          !std::isfinite(next.p[static_cast<size_t>(i)])) {
        tr.status = RunStatus::truncated_singularity;
        return tr;
      }
    // a fast crossing slips between grid points but leaves an energy jump
    // many orders above the method error
    try {
      const double e = sys.hamiltonian()(next);
      if (!std::isfinite(e) || std::abs(e - energy) > 1e-2 * (std::abs(energy) + 1.0)) {
        tr.status = RunStatus::truncated_singularity;
        return tr;
      }
      energy = e;
    } catch (const num::EvaluationError&) {
      tr.status = RunStatus::truncated_singularity;
      return tr;
    }
    z = next;
    tr.times.push_back(static_cast<double>(s) * dt);
    tr.states.push_back(z);
  }
  tr.status = RunStatus::completed;
  return tr;
}

DriftEntry drift_of(const Trajectory& tr, const phase::Observable& f) {
  if (tr.states.empty()) throw std::invalid_argument("empty trajectory");
  const double f0 = f(tr.states.front());
  double worst = 0.0;
  for (const auto& z : tr.states) worst = std::max(worst, std::abs(f(z) - f0));
  return {f.label(), worst / (std::abs(f0) + 1.0)};
}

std::vector<DriftEntry> drift_report(const Trajectory& tr, const IntegralSet& set) {
  std::vector<DriftEntry> out;
  out.reserve(set.members().size());
  for (const auto& f : set.members()) out.push_back(drift_of(tr, f));
  return out;
}

ClosureResult closure_probe(const HamiltonianSystem& sys, const PhaseState& z0, double t_max,
                            double eps, double dt, Integrator method) {
  ClosureResult res;
  const Trajectory tr = integrate(sys, z0, dt, t_max, method);
  res.status = tr.status;

  // escape monitor: the orbit must stay within a box around the start
  const double q0scale = std::max(1.0, num::norm(z0.q));
  for (const auto& z : tr.states)
    if (num::norm(z.q) > 100.0 * q0scale) {
      res.status = RunStatus::escaping;
      return res;
    }

  // box normalization per phase component, with a floor for frozen ones
  std::array<double, 6> box{};
  for (const auto& z : tr.states)
    for (int i = 0; i < z.n; ++i) {
      box[static_cast<size_t>(i)] =
          std::max(box[static_cast<size_t>(i)], std::abs(z.q[static_cast<size_t>(i)] - z0.q[static_cast<size_t>(i)]));
      box[static_cast<size_t>(3 + i)] = std::max(
          box[static_cast<size_t>(3 + i)], std::abs(z.p[static_cast<size_t>(i)] - z0.p[static_cast<size_t>(i)]));
    }
  for (auto& b : box) b = std::max(b, 1e-9);

  auto distance = [&](const PhaseState& z) {
    double s = 0.0;
    for (int i = 0; i < z.n; ++i) {
      s += num::sq((z.q[static_cast<size_t>(i)] - z0.q[static_cast<size_t>(i)]) / box[static_cast<size_t>(i)]);
      s += num::sq((z.p[static_cast<size_t>(i)] - z0.p[static_cast<size_t>(i)]) / box[static_cast<size_t>(3 + i)]);
    }
    return std::sqrt(s / (2.0 * z.n));
  };

  std::vector<double> d(tr.states.size());
  for (size_t i = 0; i < tr.states.size(); ++i) d[i] = distance(tr.states[i]);

  const size_t start = 10;  // ignore the trivial self-match at t = 0
  res.min_distance = std::numeric_limits<double>::infinity();
  for (size_t i = start + 1; i + 1 < d.size(); ++i) {
    if (!(d[i] <= d[i - 1] && d[i] <= d[i + 1])) continue;
    // vertex of the parabola through the squared distances
    const double y0 = d[i - 1] * d[i - 1], y1 = d[i] * d[i], y2 = d[i + 1] * d[i + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    double toff = 0.0, ymin = y1;
    if (denom > 0.0) {
      toff = 0.5 * (y0 - y2) / denom;
      ymin = y1 - 0.125 * num::sq(y0 - y2) / denom;
    }
    const double tstar = tr.times[i] + toff * tr.dt;
    const double dstar = std::sqrt(std::max(0.0, ymin));
    res.minima.emplace_back(tstar, dstar);
    res.min_distance = std::min(res.min_distance, dstar);
    if (!res.closed && dstar < eps) {
      res.closed = true;
      res.closed_at = tstar;
    }
  }
  if (res.minima.empty()) res.min_distance = d.empty() ? 0.0 : d.back();
  return res;
}

void write_csv(const Trajectory& tr, std::ostream& os) {
  const int n = tr.states.empty() ? 3 : tr.states.front().n;
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",q" << i;
  for (int i = 1; i <= n; ++i) os << ",p" << i;
  os << "\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (size_t s = 0; s < tr.states.size(); ++s) {
    put(tr.times[s]);
    for (int i = 0; i < n; ++i) {
      os << ",";
      put(tr.states[s].q[static_cast<size_t>(i)]);
    }
    for (int i = 0; i < n; ++i) {
      os << ",";
      put(tr.states[s].p[static_cast<size_t>(i)]);
    }
    os << "\n";
  }
}

}  // namespace superint::dynamics
