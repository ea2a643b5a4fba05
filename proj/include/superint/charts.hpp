#pragma once

#include <optional>
#include <string>

#include "superint/phase.hpp"

/// Coordinate layer: the Jacobi reduction of three collinear bodies, the
/// frame rotation that aligns the relative plane with the x3-axis, and the
/// five orthogonal charts sharing the azimuthal angle about x3.
namespace superint::charts {

using num::Mat3;
using num::Vec3;

class ChartDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class ChartKind {
  spherical,
  circular_cylindrical,
  rotational_parabolic,
  prolate_spheroidal,
  oblate_spheroidal,
};

std::string chart_name(ChartKind k);
std::optional<ChartKind> chart_from_name(const std::string& name);

/// Orthogonal rotational chart. The spheroidal kinds carry a focal parameter
/// a > 0; the azimuthal coordinate u[2] is the same angle in all five kinds.
class Chart {
 public:
  explicit Chart(ChartKind kind, double focal = 1.0);

  ChartKind kind() const { return kind_; }
  double focal() const { return focal_; }
  std::string name() const { return chart_name(kind_); }

  bool in_domain(const Vec3& u) const;

  /// Curvilinear to Cartesian. Throws ChartDomainError outside the open
  /// regular domain.
  Vec3 forward(const Vec3& u) const;

  /// Cartesian to curvilinear, azimuth normalized to [0, 2pi).
  Vec3 inverse(const Vec3& x) const;

  /// Jacobian of the forward map.
  Mat3 jacobian(const Vec3& u) const;

  phase::PointMap as_map() const;

 private:
  ChartKind kind_;
  double focal_;
};

struct JacobiCoords {
  double R;       // centre of mass
  double rho;     // (x1 - x2)/sqrt(2)
  double lambda;  // (x1 + x2 - 2 x3)/sqrt(6)
};

JacobiCoords jacobi_transform(const Vec3& x);
Vec3 jacobi_inverse(const JacobiCoords& j);

/// Rows (R, rho, lambda) as a linear map on positions.
Mat3 jacobi_matrix();

/// The orthogonal frame change x = M xt with det M = 1. Columns:
/// (2,-1,-1)/sqrt6, (0,sqrt3,-sqrt3)/sqrt6, (sqrt2,sqrt2,sqrt2)/sqrt6.
Mat3 rotation_matrix();
Vec3 rotation_tr(const Vec3& xt);
Vec3 rotation_tr_inverse(const Vec3& x);

/// Azimuth of a Cartesian point about the x3-axis, in [0, 2pi).
double azimuth(const Vec3& x);

}  // namespace superint::charts
