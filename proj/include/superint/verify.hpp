#pragma once

#include <cstdint>

#include "superint/integrals.hpp"

#include "json.hpp"

/// Batch verification suites producing structured pass/fail reports.
/// Reports are reproducible: the same seed and options give byte-identical
/// JSON regardless of thread count.
namespace superint::verify {

using integrals::IntegralSet;
using models::AngularProfile;
using phase::PhaseState;

struct CaseResult {
  std::string label;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;  // residual <= tolerance
  int samples = 0;
  uint64_t seed = 0;
  bool negative_control = false;  // expected to fail
  std::string note;

  bool ok() const { return negative_control ? !pass : pass; }
};

struct Discrepancy {
  std::string equation;
  std::string term;
  double measured = 0.0;
  double printed = 0.0;
  double ratio = 0.0;
  std::string note;
};

struct VerificationReport {
  std::string suite;
  std::vector<CaseResult> cases;
  std::vector<Discrepancy> discrepancies;
  nlohmann::json extra;  // suite-specific payload such as bracket tables

  bool all_ok() const {
    for (const auto& c : cases)
      if (!c.ok()) return false;
    return true;
  }
  nlohmann::json to_json() const;
};

struct SampleOptions {
  int n_samples = 100;
  uint64_t seed = 0x5EED;
  double q_lo = -2.0, q_hi = 2.0;
  double p_lo = -1.0, p_hi = 1.0;
  double reject_margin = 1e-3;  // states with smaller guarded denominators are rejected
  int threads = 0;              // 0 = SUPERINT_THREADS or hardware default
};

/// Rejection sampler over the set's regular domain. Throws SamplingError when
/// more than 90% of the attempts land in guarded regions.
std::vector<PhaseState> draw_states(const IntegralSet& set, const SampleOptions& opt);

/// Max normalized |{H, F}| per member; pass at tol. Optionally includes the
/// never-conserved coordinate q1 as a negative control.
VerificationReport conservation_suite(const IntegralSet& set, const SampleOptions& opt,
                                      double tol = 1e-9, bool with_negative_control = false);

/// Modal numerical rank of the members' phase Jacobian; pass iff it matches
/// the set's expected rank. A dependent triple (H, F2, F2^2) is appended as a
/// detection check when requested.
VerificationReport independence_suite(const IntegralSet& set, const SampleOptions& opt,
                                      double rank_tol = 1e-8,
                                      bool with_dependence_check = false);

/// Max normalized bracket per declared pair plus the full bracket table.
VerificationReport involution_suite(const IntegralSet& set, const SampleOptions& opt,
                                    double tol = 1e-9);

/// Residual of the position-dependent linear identity among the rotational
/// members, relative to the largest term.
VerificationReport linear_connection_suite(const AngularProfile& k, const SampleOptions& opt,
                                           double tol = 1e-12);

/// Frame-rotation checks: orthogonality, radius and x3-independence of the
/// rotated chain potential, profile extraction, and the measured-vs-printed
/// coefficient table. Discrepancies are data, never assertion failures.
VerificationReport equivalence_suite(double g1, double g2, double g3, const SampleOptions& opt);

/// Killing-layer checks for the rotational catalog: the Killing property and
/// axial symmetry of every extracted tensor, translation invariance of their
/// span, and pencil consistency.
VerificationReport killing_suite(const AngularProfile& k, const SampleOptions& opt,
                                 std::vector<double> translations = {0.3, 0.7, 2.0});

/// Round-trip and orthogonality checks for the coordinate layer.
VerificationReport charts_suite(const SampleOptions& opt);

}  // namespace superint::verify
