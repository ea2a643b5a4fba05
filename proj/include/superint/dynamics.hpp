#pragma once

#include <iosfwd>

#include "superint/integrals.hpp"

/// Trajectory integration, conservation drift measurement and the
/// closed-orbit probe.
namespace superint::dynamics {

using integrals::IntegralSet;
using phase::HamiltonianSystem;
using phase::PhaseState;

enum class Integrator { stormer_verlet2, yoshida4, rk4_reference };

std::string integrator_name(Integrator m);
Integrator integrator_from_name(const std::string& name);

enum class RunStatus { completed, truncated_singularity, escaping };

struct Trajectory {
  std::vector<double> times;       // uniform grid starting at 0
  std::vector<PhaseState> states;  // same length as times
  std::string system_label;
  Integrator method = Integrator::yoshida4;
  double dt = 0.0;
  RunStatus status = RunStatus::completed;
};

/// Fixed-step integration of floor(T/dt) steps. Symplectic methods require a
/// separable Hamiltonian (all systems here are). Approaching a guarded
/// denominator closer than 1e-4 truncates the trajectory with a status
/// instead of producing non-finite states; rk4 retries a rejected step with
/// halved substeps before truncating.
Trajectory integrate(const HamiltonianSystem& sys, const PhaseState& z0, double dt, double T,
                     Integrator method);

struct DriftEntry {
  std::string label;
  double max_relative_drift;  // max_t |F(z_t) - F(z_0)| / (|F(z_0)| + 1)
};

std::vector<DriftEntry> drift_report(const Trajectory& tr, const IntegralSet& set);
DriftEntry drift_of(const Trajectory& tr, const phase::Observable& f);

struct ClosureResult {
  bool closed = false;
  double closed_at = 0.0;      // first refined return time, when closed
  double min_distance = 0.0;   // smallest box-normalized return distance seen
  RunStatus status = RunStatus::completed;
  std::vector<std::pair<double, double>> minima;  // (t, distance) local minima
};

/// First return of the orbit to its initial state in the box-normalized
/// phase metric, with parabolic refinement between stored steps. Returns
/// before t = 10 dt are ignored. Unbounded orbits report status escaping.
ClosureResult closure_probe(const HamiltonianSystem& sys, const PhaseState& z0, double t_max,
                            double eps = 1e-3, double dt = 1e-3,
                            Integrator method = Integrator::yoshida4);

/// Header t,q1..qn,p1..pn with 17 significant digits per value.
void write_csv(const Trajectory& tr, std::ostream& os);

}  // namespace superint::dynamics
