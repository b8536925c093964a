#pragma once

#include <pjb/linalg.hpp>

namespace pjb {

/// Default threshold for declaring two subspaces equal (principal-angle distance).
inline constexpr double subspace_tolerance = 1e-7;

/// A subspace of C^n held as an orthonormal column frame. k = 0 is the zero subspace.
class Subspace {
public:
  Subspace() = default;

  /// Zero subspace of C^n.
  explicit Subspace(Eigen::Index ambient_dim);

  /// Span of the given columns, orthonormalized with the scale-aware rank rule.
  static Subspace span(const Mat& vectors, double rank_tol = rank_tolerance);

  /// Adopt a frame that is already orthonormal (checked to 1e-10).
  static Subspace from_orthonormal(Mat frame, double rank_tol = rank_tolerance);

  static Subspace full(Eigen::Index ambient_dim);

  Eigen::Index ambient_dim() const noexcept { return frame_.rows(); }
  Eigen::Index dim() const noexcept { return frame_.cols(); }
  bool is_zero() const noexcept { return frame_.cols() == 0; }
  const Mat& frame() const noexcept { return frame_; }
  double rank_tol() const noexcept { return rank_tol_; }

  Mat projector() const { return frame_ * frame_.adjoint(); }
  Mat project(const Mat& x) const { return frame_ * (frame_.adjoint() * x); }

  /// ||P_this - P_other||_2.
  double distance(const Subspace& other) const { return subspace_distance(frame_, other.frame_); }

  /// ||(I - P_this) P_other||_2: 0 iff other is contained in this.
  double containment_gap(const Subspace& other) const { return excess(frame_, other.frame_); }

private:
  Mat frame_ = Mat(0, 0);
  double rank_tol_ = rank_tolerance;
};

/// Tensor product of subspaces, slots in the given order.
Subspace tensor(std::span<const Subspace> parts);

}  // namespace pjb
