#pragma once

// Dense complex linear algebra shared by every module: rank decisions,
// orthonormal frames, subspace distances and Kronecker slot arithmetic.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pjb {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

/// Relative rank threshold: sigma counts iff sigma > rank_tolerance * max(sigma_max, 1).
inline constexpr double rank_tolerance = 1e-9;

double rank_threshold(const RealVec& singular_values, double rel = rank_tolerance);

RealVec singular_values(const Mat& a);
int numerical_rank(const Mat& a, double rel = rank_tolerance);
double spectral_norm(const Mat& a);

/// Orthonormal basis of ran(a), columns ordered by decreasing singular value.
Mat orthonormal_range(const Mat& a, double rel = rank_tolerance);

/// Orthonormal basis of ker(a).
Mat null_space(const Mat& a, double rel = rank_tolerance);

/// Eigenvectors of a Hermitian matrix whose eigenvalues exceed `cut`.
Mat hermitian_range(const Mat& h, double cut);

/// ||(I - P_outer) inner||_2 for orthonormal frames: how far ran(inner) sticks out of ran(outer).
double excess(const Mat& outer, const Mat& inner);

/// ||P_1 - P_2||_2 for orthonormal frames (1 when the dimensions differ).
double subspace_distance(const Mat& f1, const Mat& f2);

Mat kron(const Mat& a, const Mat& b);
Mat kron_all(std::span<const Mat> factors);
Vec kron_vec(std::span<const Vec> factors);

std::int64_t product(std::span<const int> dims);

// Kronecker slot arithmetic. A column vector over slots (d_0, ..., d_{n-1}) is
// indexed with the last slot varying fastest, matching kron().

/// Apply `op` (d_slot x d_slot) to one tensor slot of every column of x.
Mat apply_on_slot(std::span<const int> dims, std::size_t slot, const Mat& op, const Mat& x);

/// Contract one slot of every column against u: (I ⊗ u^* ⊗ I) x. The slot disappears.
Mat contract_slot(std::span<const int> dims, std::size_t slot, const Vec& u, const Mat& x);

/// Reduced operator on one slot: sum over columns of the partial trace of x x^*.
Mat partial_gram(std::span<const int> dims, std::size_t slot, const Mat& x);

/// Reorder tensor slots: output slot k is input slot perm[k].
Mat permute_slots(std::span<const int> dims, std::span<const int> perm, const Mat& x);

/// Seeded complex Gaussian matrix (deterministic across platforms for a fixed seed).
Mat random_complex(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

}  // namespace pjb
