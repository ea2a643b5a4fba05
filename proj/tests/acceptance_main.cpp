// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit code = number of failed
// criteria.

#include <chrono>
#include <cstdio>
#include <numbers>

#include "superint/dynamics.hpp"
#include "superint/runner.hpp"
#include "superint/verify.hpp"

using namespace superint;
using models::AngularProfile;
using verify::SampleOptions;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

AngularProfile random_fourier_profile(num::Rng& rng) {
  AngularProfile k;
  k.add_constant(rng.uniform(1.0, 2.0));
  for (int m = 1; m <= 3; ++m) k.add_fourier(m, rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2));
  return k;
}

void criterion_conservation() {
  const auto t0 = std::chrono::steady_clock::now();
  SampleOptions opt;
  double worst = 0.0;
  num::Rng rng(0x5EED);
  std::vector<AngularProfile> profiles = {models::calogero_profile(1, 1, 1)};
  for (int i = 0; i < 5; ++i) profiles.push_back(random_fourier_profile(rng));
  bool ok = true;
  for (size_t i = 0; i < profiles.size(); ++i) {
    opt.seed = 0x5EED + i;
    const auto rep = verify::conservation_suite(integrals::catalog_rotational(profiles[i]), opt,
                                                1e-9);
    for (const auto& c : rep.cases) {
      worst = std::max(worst, c.residual);
      ok = ok && c.pass;
    }
  }
  const double dt = seconds_since(t0);
  ok = ok && dt < 5.0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "conservation of the axial catalog, 6 profiles x 100 states, max residual %.2e "
                "(tol 1e-9), %.2f s (limit 5 s)",
                worst, dt);
  report(1, ok, buf);
}

void criterion_rank() {
  SampleOptions opt;
  opt.n_samples = 20;
  const auto set = integrals::catalog_rotational(models::calogero_profile(1, 1, 1));
  const auto rep = verify::independence_suite(set, opt, 1e-8, true);

  // the stated expectation: modal rank 5 for (H, F1..F4)
  int modal = -1;
  const std::string& note = rep.cases[0].note;
  if (auto pos = note.find("modal="); pos != std::string::npos)
    modal = std::atoi(note.c_str() + pos + 6);
  const bool rank5 = modal == 5;
  const bool control = rep.cases.size() > 1 && rep.cases[1].pass;

  char buf[240];
  std::snprintf(buf, sizeof buf,
                "modal Jacobian rank of (H,F1..F4) equals 5 at tol 1e-8: measured %d%s; "
                "dependence control rank(H,F2,F2^2)=2: %s",
                modal,
                rank5 ? ""
                      : " (the members obey F4^2 = 4[(2H-2F3)(F1-F2) - 2 F2 F3] identically, "
                        "so the classical generic rank is 4; see the decisions ledger)",
                control ? "pass" : "fail");
  report(2, rank5 && control, buf);
}

void criterion_linear_connection() {
  AngularProfile k;
  k.add_constant(1.3).add_fourier(1, 0.25, -0.2).add_fourier(3, 0.1, 0.05);
  k.add_inverse_square(0.4, 1.0, 0.6);
  SampleOptions opt;
  opt.n_samples = 1000;
  const auto rep = verify::linear_connection_suite(k, opt, 1e-12);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "linear connection residual at 1000 states, arbitrary profile: %.2e "
                "(tol 1e-12 of the largest term)",
                rep.cases[0].residual);
  report(3, rep.all_ok(), buf);
}

void criterion_involution() {
  SampleOptions opt;
  bool ok = true;
  double worst = 0.0;
  for (double a : {0.5, 1.3}) {
    auto set = integrals::catalog_rotational(models::calogero_profile(1, 1, 1));
    integrals::add_spheroidal_members(set, a);
    const auto rep = verify::involution_suite(set, opt, 1e-9);
    ok = ok && rep.all_ok();
    for (const auto& c : rep.cases)
      if (!c.negative_control) worst = std::max(worst, c.residual);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "all declared involution pairs over 100 states, spheroidal a in {0.5, 1.3}: "
                "max residual %.2e (tol 1e-9)",
                worst);
  report(4, ok, buf);
}

void criterion_equivalence() {
  SampleOptions opt;
  const auto rep = verify::equivalence_suite(1, 1, 1, opt);
  bool ok = rep.all_ok();
  // the coefficient table must be present for every audited equation
  for (const std::string eq : {"1.3", "2.9", "2.10", "2.19"}) {
    bool found = false;
    for (const auto& d : rep.discrepancies) found = found || d.equation == eq;
    ok = ok && found;
  }
  double worst = 0.0;
  for (const auto& c : rep.cases) worst = std::max(worst, c.residual / c.tolerance);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "frame-rotation equivalence: orthogonality 1e-15, radius/axial independence and "
                "profile match 1e-12 (worst residual %.2f of tol); coefficient table recorded",
                worst);
  report(5, ok, buf);
}

void criterion_killing() {
  AngularProfile k;
  k.add_constant(0.9).add_fourier(2, 0.2, -0.1).add_inverse_square(0.5, 1.0, 0.3);
  SampleOptions opt;
  opt.n_samples = 50;
  const auto rep = verify::killing_suite(k, opt, {0.3, 0.7, 2.0});
  double worst = 0.0;
  for (const auto& c : rep.cases)
    if (!c.negative_control) worst = std::max(worst, c.residual / c.tolerance);
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "Killing property and axial symmetry at 50 points (1e-10), translation span for "
                "t in {0.3,0.7,2.0} (1e-10), pencil consistency (1e-12); worst %.2f of tol",
                worst);
  report(6, rep.all_ok(), buf);
}

void criterion_minimal_families() {
  SampleOptions opt;
  bool ok = true;
  double worst = 0.0;
  auto absorb = [&](const verify::VerificationReport& rep) {
    ok = ok && rep.all_ok();
    for (const auto& c : rep.cases)
      if (!c.negative_control) worst = std::max(worst, c.residual);
  };
  AngularProfile h;
  h.add_constant(0.4).add_inverse_square(0.3, 1.0, 0.2).add_fourier(1, 0.1, -0.15);
  for (auto v : {models::MinimalVariant::v1, models::MinimalVariant::v2,
                 models::MinimalVariant::v3})
    absorb(verify::conservation_suite(integrals::catalog_minimal(v, 0.7, 0.4, h, 1.3), opt, 1e-9));
  absorb(verify::conservation_suite(
      integrals::catalog_minimal(models::MinimalVariant::v2, -1.0, 0.0,
                                 AngularProfile::constant(0.5), 1.3),
      opt, 1e-9));  // the ring-shaped special case
  absorb(verify::conservation_suite(
      integrals::catalog_coordinate_planes(0.37, 0.81, 0.49, {{1.0, 2}}), opt, 1e-9));
  absorb(verify::conservation_suite(integrals::catalog_layered({{0.5, 2}}, 1.1), opt, 1e-9));
  absorb(verify::involution_suite(integrals::catalog_layered({{0.5, 2}}, 1.1), opt, 1e-9));
  absorb(verify::conservation_suite(integrals::catalog_reduced_2d(0.0, 1, 1, 1), opt, 1e-9));
  absorb(verify::conservation_suite(integrals::catalog_reduced_2d(1.0, 1, 0.6, 0.3), opt, 1e-9));
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "minimal families, ring-shaped case, coordinate-plane family, layer triplets and "
                "the planar integral after the sign probe: max residual %.2e (tol 1e-9)",
                worst);
  report(7, ok, buf);
}

void criterion_dynamics() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  {  // drift of the axial catalog along a long orbit
    num::Rng rng(0xD1CE);
    const auto k = random_fourier_profile(rng);
    const auto set = integrals::catalog_rotational(k);
    const auto tr = dynamics::integrate(set.system(),
                                        phase::make_state({1.0, 0.3, 0.2}, {0.1, 0.4, 0.05}),
                                        1e-3, 50.0, dynamics::Integrator::yoshida4);
    ok = ok && tr.status == dynamics::RunStatus::completed;
    double worst = 0.0;
    for (const auto& e : dynamics::drift_report(tr, set))
      worst = std::max(worst, e.max_relative_drift);
    ok = ok && worst <= 1e-6;
    char buf[64];
    std::snprintf(buf, sizeof buf, "drift %.2e (tol 1e-6)", worst);
    detail += buf;
  }

  {  // step-halving factor on the oscillator
    const auto sys = models::spherical_separable({{0.5, 2}}, {}, {});
    const auto h = sys.hamiltonian();
    auto drift_at = [&](double dt) {
      const auto tr = dynamics::integrate(sys, phase::make_state({1, 0.2, -0.3}, {0.1, 0.5, 0.2}),
                                          dt, 10.0, dynamics::Integrator::yoshida4);
      return dynamics::drift_of(tr, h).max_relative_drift;
    };
    const double ratio = drift_at(2e-2) / drift_at(1e-2);
    ok = ok && ratio >= 8.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, ", halving factor %.1f (>= 8)", ratio);
    detail += buf;
  }

  {  // the oscillator closes at its period
    const auto sys = models::spherical_separable({{0.5, 2}}, {}, {});
    const auto r =
        dynamics::closure_probe(sys, phase::make_state({1, 0, 0}, {0, 0.6, 0}), 20.0, 1e-3, 1e-3);
    ok = ok && r.closed && std::abs(r.closed_at - 2 * kPi) <= 1e-4;
    char buf[64];
    std::snprintf(buf, sizeof buf, ", closure at %.6f (2pi +- 1e-4)", r.closed ? r.closed_at : -1.0);
    detail += buf;
  }

  const double dt = seconds_since(t0);
  ok = ok && dt < 60.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.1f s (limit 60 s)", dt);
  detail += buf;
  report(8, ok, "long-run integration: " + detail);
}

void criterion_determinism() {
  auto once = [](const std::string& dir) {
    auto cfg = runner::parse_config(runner::preset("calogero"));
    const auto out = runner::run(cfg, dir);
    return out.report.dump();
  };
  const std::string a = once("/tmp/superint_acceptance_run1");
  const std::string b = once("/tmp/superint_acceptance_run2");
  report(9, a == b, "two full verify runs with the same seed produce byte-identical reports");
}

}  // namespace

int main() {
  criterion_conservation();
  criterion_rank();
  criterion_linear_connection();
  criterion_involution();
  criterion_equivalence();
  criterion_killing();
  criterion_minimal_families();
  criterion_dynamics();
  criterion_determinism();
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
