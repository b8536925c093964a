#include <pjb/equivalence.hpp>

#include <pjb/errors.hpp>

namespace pjb {

namespace {

constexpr double intertwine_tolerance = 1e-8;
constexpr int oracle_seeds = 3;

bool same_multiset(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) return false;
  return equal_up_to_unimodular(BlaschkeProduct(1.0, a, 0.999), BlaschkeProduct(1.0, b, 0.999));
}

std::string multiset_string(const std::vector<cplx>& zs) {
  std::string out = "{";
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (i > 0) out += ",";
    out += format_complex(zs[i]);
  }
  return out + "}";
}

Mat vec_operator(const Mat& left, const Mat& right) {
  // vec(left X - X right) = (I ⊗ left - right^T ⊗ I) vec X, column-major vec.
  const Eigen::Index k = left.rows();
  const Mat id = Mat::Identity(k, k);
  return kron(id, left) - kron(right.transpose(), id);
}

double intertwining_residual(const Mat& u, const std::vector<Mat>& r1, const std::vector<Mat>& r2) {
  double worst = 0.0;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    worst = std::max(worst, (u * r1[i] - r2[i] * u).norm());
    worst = std::max(worst, (u * r1[i].adjoint() - r2[i].adjoint() * u).norm());
  }
  return worst;
}

}  // namespace

Decomposition Decomposition::from_tensor(const JordanBlockProduct& jb, const std::vector<CoordinateFactor>& fs) {
  std::vector<Factorization> plain;
  for (const auto& f : fs) plain.push_back(f.factorization);
  return from_factorizations(jb, plain);
}

Decomposition Decomposition::from_factorizations(const JordanBlockProduct& jb, const std::vector<Factorization>& fs) {
  if (static_cast<int>(fs.size()) != jb.coordinates()) throw error(errc::precondition, "one factor per coordinate");
  Decomposition d;
  for (const auto& f : jb.factors()) d.thetas.push_back(f.theta());
  d.factors = fs;
  return d;
}

Decomposition Decomposition::from_mixed(const MixedSpace& msp, const MixedDecomposition& md) {
  Decomposition d = from_tensor(msp.jordan(), md.factors);
  d.hardy_vars = msp.hardy().num_vars();
  d.generator = md.hardy.generator;
  return d;
}

bool Fingerprint::operator==(const Fingerprint& other) const {
  if (hardy != other.hardy || zero != other.zero || coords.size() != other.coords.size()) return false;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!same_multiset(coords[i].eta_zeros, other.coords[i].eta_zeros)) return false;
    if (!same_multiset(coords[i].phi_zeros, other.coords[i].phi_zeros)) return false;
  }
  return true;
}

std::string Fingerprint::to_string() const {
  std::string out = zero ? "zero" : "[";
  if (!zero) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (i > 0) out += ", ";
      out += "(" + multiset_string(coords[i].eta_zeros) + "," + multiset_string(coords[i].phi_zeros) + ")";
    }
    out += "]";
  }
  if (hardy) out += " hardy";
  return out;
}

Fingerprint fingerprint(const Decomposition& d) {
  Fingerprint fp;
  fp.hardy = d.hardy_vars > 0;
  for (const auto& f : d.factors) {
    if (f.right.is_constant()) {
      fp.zero = true;
      fp.coords.clear();
      return fp;
    }
    fp.coords.push_back({canonical_zeros(f.left.zeros()), canonical_zeros(f.right.zeros())});
  }
  return fp;
}

bool are_unitarily_equivalent(const Decomposition& d1, const Decomposition& d2) {
  bool same = d1.hardy_vars == d2.hardy_vars && d1.thetas.size() == d2.thetas.size();
  for (std::size_t i = 0; same && i < d1.thetas.size(); ++i) {
    same = equal_up_to_unimodular(d1.thetas[i], d2.thetas[i]);
  }
  if (!same) throw error(errc::ambient_mismatch, "decompositions live over different ambients");
  return fingerprint(d1) == fingerprint(d2);
}

bool intertwiner_oracle(const JordanBlockProduct& jb, const Subspace& m1, const Subspace& m2) {
  if (jb.aux_dim() != 0) throw error(errc::precondition, "the oracle works on Q_Theta without an auxiliary slot");
  if (!is_submodule(jb, m1).pass || !is_submodule(jb, m2).pass) {
    throw error(errc::precondition, "both subspaces must be submodules");
  }
  if (m1.dim() != m2.dim()) return false;
  if (m1.dim() == 0) return true;
  const auto r1 = compressions(jb, m1);
  const auto r2 = compressions(jb, m2);
  const Eigen::Index k = m1.dim();

  Mat system(2 * k * k * static_cast<Eigen::Index>(r1.size()), k * k);
  for (std::size_t i = 0; i < r1.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(2 * i) * k * k;
    system.middleRows(row, k * k) = vec_operator(r2[i], r1[i]);
    system.middleRows(row + k * k, k * k) = vec_operator(r2[i].adjoint(), r1[i].adjoint());
  }
  const Mat basis = null_space(system);
  if (basis.cols() == 0) return false;

  for (int seed = 0; seed < oracle_seeds; ++seed) {
    const Vec coeffs = random_complex(basis.cols(), 1, 1000 + static_cast<std::uint64_t>(seed)).col(0);
    const Vec x = basis * coeffs;
    const Mat xm = Eigen::Map<const Mat>(x.data(), k, k);
    Eigen::JacobiSVD<Mat> svd(xm, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Mat polar = svd.matrixU() * svd.matrixV().adjoint();
    if (intertwining_residual(polar, r1, r2) < intertwine_tolerance) return true;
  }
  return false;
}

}  // namespace pjb
