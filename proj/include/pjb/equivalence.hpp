#pragma once

// Unitary equivalence of doubly commuting submodules. Two of them are unitarily
// equivalent exactly when their model-space factors W_i agree; a Hardy generator never
// matters. The fingerprint records the factors as canonical zero multisets, and the
// intertwiner oracle checks the same question directly from the compressed tuples.

#include <optional>
#include <string>
#include <vector>

#include <pjb/mixed.hpp>

namespace pjb {

/// Output of a decomposition, tagged with its ambient.
struct Decomposition {
  std::vector<BlaschkeProduct> thetas;
  /// Number of Hardy variables (0 for a pure Jordan block).
  int hardy_vars = 0;
  std::optional<InnerGenerator> generator;
  /// One factorization per coordinate. phi = constant encodes a zero factor.
  std::vector<Factorization> factors;

  static Decomposition from_tensor(const JordanBlockProduct& jb, const std::vector<CoordinateFactor>& fs);
  static Decomposition from_factorizations(const JordanBlockProduct& jb, const std::vector<Factorization>& fs);
  static Decomposition from_mixed(const MixedSpace& msp, const MixedDecomposition& d);
};

struct Fingerprint {
  struct Coordinate {
    std::vector<cplx> eta_zeros;
    std::vector<cplx> phi_zeros;
  };
  std::vector<Coordinate> coords;
  bool hardy = false;
  /// Any zero factor makes the whole submodule {0}; all such fingerprints coincide.
  bool zero = false;

  /// Zero multisets compared under an optimal pairing within zero_match_tolerance.
  bool operator==(const Fingerprint& other) const;
  /// e.g. "[({0},{0}), ({},{0,0})] hardy"
  std::string to_string() const;
};

Fingerprint fingerprint(const Decomposition& d);

/// True iff the fingerprints agree. Throws AmbientMismatch unless both decompositions
/// live over the same theta list and Hardy arity.
bool are_unitarily_equivalent(const Decomposition& d1, const Decomposition& d2);

/// Direct finite-dimensional check: solve X R_i = R'_i X, X R_i^* = R'_i^* X for the
/// compressions of both submodules and test whether the polar part of a seeded generic
/// solution is a unitary intertwiner (three seeds). Unequal dimensions give false.
/// Throws precondition unless both are submodules of jb (no auxiliary slot).
bool intertwiner_oracle(const JordanBlockProduct& jb, const Subspace& m1, const Subspace& m2);

}  // namespace pjb
