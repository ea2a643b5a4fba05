#pragma once

#include <optional>

#include "superint/killing.hpp"
#include "superint/models.hpp"

/// First-integral catalogs and the algebraic identities among them.
namespace superint::integrals {

using models::AngularProfile;
using phase::HamiltonianSystem;
using phase::Observable;
using phase::PhaseState;

struct InvolutivePair {
  int i, j;
  std::string chart;
};

/// A system together with its labeled integrals. expected_rank is the generic
/// rank of the members' phase Jacobian; the negative-control pair, when set,
/// marks two members that are not in involution.
class IntegralSet {
 public:
  IntegralSet() = default;
  IntegralSet(std::string label, std::string equation_tag, HamiltonianSystem system,
              std::vector<Observable> members, std::vector<InvolutivePair> pairs,
              int expected_rank, phase::HamiltonianSystem::MarginFn extra_margin = {})
      : label_(std::move(label)),
        equation_tag_(std::move(equation_tag)),
        system_(std::move(system)),
        members_(std::move(members)),
        pairs_(std::move(pairs)),
        expected_rank_(expected_rank),
        extra_margin_(std::move(extra_margin)) {
    for (const auto& m : members_)
      if (m.dim() != system_.dim()) throw num::DimensionError("integral set member dimension");
  }

  const std::string& label() const { return label_; }
  const std::string& equation_tag() const { return equation_tag_; }
  const HamiltonianSystem& system() const { return system_; }
  const std::vector<Observable>& members() const { return members_; }
  const std::vector<InvolutivePair>& involutive_pairs() const { return pairs_; }
  int expected_rank() const { return expected_rank_; }

  /// Rank the source claims, when it differs from the measured one.
  std::optional<int> printed_rank() const { return printed_rank_; }
  void set_printed_rank(int r, std::string note) {
    printed_rank_ = r;
    printed_rank_note_ = std::move(note);
  }
  const std::string& printed_rank_note() const { return printed_rank_note_; }

  std::optional<std::pair<int, int>> noninvolutive_witness() const { return witness_; }
  void set_noninvolutive_witness(int i, int j) { witness_ = {{i, j}}; }

  void add_member(Observable o) { members_.push_back(std::move(o)); }
  void add_pair(InvolutivePair p) { pairs_.push_back(std::move(p)); }

  /// Smallest guarded denominator over the system and all members.
  double margin(const PhaseState& z) const {
    double m = system_.margin(z);
    if (extra_margin_) m = std::min(m, extra_margin_(z));
    return m;
  }

 private:
  std::string label_;
  std::string equation_tag_;
  HamiltonianSystem system_;
  std::vector<Observable> members_;
  std::vector<InvolutivePair> pairs_;
  int expected_rank_ = 0;
  std::optional<int> printed_rank_;
  std::string printed_rank_note_;
  phase::HamiltonianSystem::MarginFn extra_margin_;
  std::optional<std::pair<int, int>> witness_;
};

/// L1 = x2 p3 - x3 p2 and cyclic.
Observable angular_momentum(int axis);
std::array<double, 3> angular_momenta(const PhaseState& z);

/// Members (H, F1, F2, F3, F4) of the axial inverse-square family:
///   F1 = |L|^2 + 2 k(phi) r^2/rho^2
///   F2 = L3^2 + 2 k(phi)
///   F3 = p3^2/2
///   F4 = 2(L1 p2 - L2 p1) - 4 x3 k(phi)/rho^2
/// with pairs (F1,F2) spherical, (F2,F3) cylindrical, (F2,F4) parabolic.
/// The members obey F4^2 = 4[(2H-2F3)(F1-F2) - 2 F2 F3] identically, so the
/// generic gradient rank is 4; the source's rank-5 claim is kept as the
/// printed rank and reported as a discrepancy.
IntegralSet catalog_rotational(const AngularProfile& k);

/// Normalized residual of the quadratic relation above; identically zero for
/// every profile.
double rotational_dependence_residual(const IntegralSet& rotational, const PhaseState& z);

/// Appends F1 - 2 a^2 F3 (oblate) and F1 + 2 a^2 F3 (prolate) with their
/// pairs against F2.
void add_spheroidal_members(IntegralSet& set, double a);

struct LinearConnectionResult {
  double residual;    // f0 H + F1 - F2 + f3 F3 + f4 F4
  double term_scale;  // largest |term|
  std::array<double, 5> coefficients;  // (f0..f4) at the point
};

/// The position-dependent linear identity among (H, F1..F4):
/// f0 = 2 x3^2, f1 = 1, f2 = -1, f3 = -2 r^2, f4 = x3; identically zero.
LinearConnectionResult linear_connection_residual(const IntegralSet& rotational,
                                                  const PhaseState& z);
LinearConnectionResult linear_connection_residual(const PhaseState& z, const AngularProfile& k);

struct QuadraticDecomposition {
  killing::KillingTensor tensor;  // K^{ij}(q), polynomial of degree <= 2
  Observable scalar_part;         // U(q) = F(q, p=0)
};

/// Split F = K^{ij} p_i p_j + U(q). Throws NotQuadraticError when F is not
/// exactly quadratic in the momenta.
QuadraticDecomposition quadratic_part(const Observable& f);

/// Members (H, F1, F2, F3) for V = F(r) + c1/x1^2 + c2/x2^2 + c3/x3^2:
///   F1 = L1^2 + 2 c2 x3^2/x2^2 + 2 c3 x2^2/x3^2   and cyclic.
IntegralSet catalog_coordinate_planes(double c1, double c2, double c3,
                                      std::vector<models::RadialTerm> radial);

struct PolarIntegral {
  Observable f;
  int sign;  // resolved by the bracket probe
};

/// Second integral of the planar reduction: F = L3^2 + sign * W(phi) with
/// W the angular strength of the reduced potential. The sign is fixed by
/// probing {H, F} at 8 states; construction fails when neither sign works.
PolarIntegral reduced_polar_integral(double g1, double g2, double g3);

/// Catalog (H, F) for the planar reduction.
IntegralSet catalog_reduced_2d(double omega, double g1, double g2, double g3);

/// X1 = p1^2, X2 = L3^2, X3 = 2 L3 p1, X4 = L3^2 + a^2 (p1^2 - p2^2);
/// each (H, p3^2/2 + f(x3), Xi) is in involution for layer potentials.
std::vector<Observable> layered_triplets(double a);

/// Catalog for V = f(x3): members (H, F1, p1, p2, L3, X1..X4) with the
/// triplet pairs declared; generic rank of (H, F1, p1, p2, L3) is 4.
IntegralSet catalog_layered(const std::vector<models::AxialTerm>& f, double a);

/// Conserved sets for the minimally superintegrable families; each carries
/// (H, F2) plus the chart table's members for the variant.
IntegralSet catalog_minimal(models::MinimalVariant variant, double alpha, double beta,
                            const AngularProfile& h, double spheroidal_a = 1.3);

}  // namespace superint::integrals
