#pragma once

// Finite Blaschke products: the inner functions every other module is built on.
// Factor convention b_a(z) = (z - a) / (1 - conj(a) z), so b_0(z) = z.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace pjb {

using cplx = std::complex<double>;

/// Default conditioning guard on zero moduli; overridable per product.
inline constexpr double default_zero_guard = 0.95;

/// Largest degree for which all inner factorizations are enumerated.
inline constexpr int max_factorization_degree = 12;

/// Pairing tolerance when comparing zero multisets.
inline constexpr double zero_match_tolerance = 1e-9;

class BlaschkeProduct {
public:
  /// The constant inner function 1.
  BlaschkeProduct() = default;

  /// Throws pjb::error(precondition) unless |constant| = 1 and every |a| <= guard < 1.
  BlaschkeProduct(cplx constant, std::vector<cplx> zeros, double guard = default_zero_guard);

  static BlaschkeProduct factor(cplx a, double guard = default_zero_guard);
  static BlaschkeProduct monomial(int k);

  cplx constant() const noexcept { return constant_; }
  const std::vector<cplx>& zeros() const noexcept { return zeros_; }
  int degree() const noexcept { return static_cast<int>(zeros_.size()); }
  bool is_constant() const noexcept { return zeros_.empty(); }
  double guard() const noexcept { return guard_; }

  /// max |a_j| (0 for a constant).
  double max_zero_modulus() const noexcept;

  /// Value at z, |z| <= 1 + 1e-9. Throws PoleProximity near a pole 1/conj(a).
  cplx operator()(cplx z) const;

  /// Taylor coefficients c_0 .. c_{count-1} at the origin (exact recurrence, no quadrature).
  std::vector<cplx> taylor(int count) const;

  BlaschkeProduct with_constant(cplx c) const;

  /// Human-readable form, e.g. "z^2", "b(0.5)*z", "-1*b(0.5+0.25i)".
  std::string to_string() const;

private:
  cplx constant_{1.0, 0.0};
  std::vector<cplx> zeros_;
  double guard_ = default_zero_guard;
};

BlaschkeProduct multiply(const BlaschkeProduct& b1, const BlaschkeProduct& b2);
inline BlaschkeProduct operator*(const BlaschkeProduct& a, const BlaschkeProduct& b) { return multiply(a, b); }

/// theta = left * right with left.constant() == 1.
struct Factorization {
  BlaschkeProduct left;   // eta
  BlaschkeProduct right;  // phi
};

/// Every factorization theta = eta * phi, eta normalized to constant 1, phi carrying
/// theta's constant. Ordered lexicographically by the multiplicity vector of eta over
/// the sorted distinct zeros. Throws DegreeTooLarge above max_factorization_degree.
std::vector<Factorization> factorizations(const BlaschkeProduct& b);

/// Zero multisets agree under an optimal pairing with every pair within `tol`.
bool equal_up_to_unimodular(const BlaschkeProduct& b1, const BlaschkeProduct& b2,
                            double tol = zero_match_tolerance);

/// Distinct zeros (clustered within zero_match_tolerance), sorted by (re, im), with multiplicities.
struct ZeroCluster {
  cplx point;
  int multiplicity;
};
std::vector<ZeroCluster> distinct_zeros(const BlaschkeProduct& b);

/// Zeros sorted by (re, im) after snapping to a 1e-9 grid; canonical for printing and hashing.
std::vector<cplx> canonical_zeros(const std::vector<cplx>& zeros);

/// Seeded random product: `degree` zeros uniform in the disc of radius `max_modulus`.
BlaschkeProduct random_blaschke(int degree, double max_modulus, std::uint64_t seed);

/// Short form of a complex number with 6 significant digits, e.g. "0.5", "-0.3+0.2i".
std::string format_complex(cplx c);

/// Minimum-cost perfect matching (Hungarian method) on a square cost matrix.
/// Returns assignment[row] = column.
std::vector<int> optimal_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace pjb
