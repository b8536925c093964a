#include <pjb/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace pjb {

namespace {

struct Svd {
  RealVec sigma;
  Mat u;
  Mat v;
};

// Thin SVD for tall inputs; full V is only requested when a null space is needed.
Svd svd_of(const Mat& a, bool full_v) {
  Svd out;
  if (a.rows() == 0 || a.cols() == 0) {
    out.sigma = RealVec(0);
    out.u = Mat(a.rows(), 0);
    out.v = full_v ? Mat(Mat::Identity(a.cols(), a.cols())) : Mat(a.cols(), 0);
    return out;
  }
  const unsigned opts = full_v ? (Eigen::ComputeThinU | Eigen::ComputeFullV)
                               : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  // Eigen's divide-and-conquer SVD can return NaNs on complex inputs with clustered
  // singular values, so it is only tried on large inputs and checked.
  if (std::min(a.rows(), a.cols()) > 256) {
    Eigen::BDCSVD<Mat> svd(a, opts);
    const auto k = svd.singularValues().size();
    const bool finite = svd.info() == Eigen::Success && svd.singularValues().allFinite() &&
                        svd.matrixU().allFinite() && svd.matrixV().allFinite();
    if (finite && (a - svd.matrixU().leftCols(k) * svd.singularValues().asDiagonal() *
                           svd.matrixV().leftCols(k).adjoint())
                          .norm() <= 1e-13 * std::max(1.0, a.norm())) {
      out.sigma = svd.singularValues();
      out.u = svd.matrixU();
      out.v = svd.matrixV();
      return out;
    }
  }
  Eigen::JacobiSVD<Mat> svd(a, opts);
  out.sigma = svd.singularValues();
  out.u = svd.matrixU();
  out.v = svd.matrixV();
  return out;
}

}  // namespace

double rank_threshold(const RealVec& singular_values, double rel) {
  const double smax = singular_values.size() > 0 ? singular_values.maxCoeff() : 0.0;
  return rel * std::max(smax, 1.0);
}

RealVec singular_values(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) return RealVec(0);
  if (std::min(a.rows(), a.cols()) <= 256) return Eigen::JacobiSVD<Mat>(a).singularValues();
  return svd_of(a, false).sigma;
}

int numerical_rank(const Mat& a, double rel) {
  const RealVec s = singular_values(a);
  const double tau = rank_threshold(s, rel);
  return static_cast<int>((s.array() > tau).count());
}

double spectral_norm(const Mat& a) {
  const RealVec s = singular_values(a);
  return s.size() > 0 ? s(0) : 0.0;
}

Mat orthonormal_range(const Mat& a, double rel) {
  const Svd svd = svd_of(a, false);
  const double tau = rank_threshold(svd.sigma, rel);
  const auto r = static_cast<Eigen::Index>((svd.sigma.array() > tau).count());
  return svd.u.leftCols(r);
}

Mat null_space(const Mat& a, double rel) {
  const Svd svd = svd_of(a, true);
  const double tau = rank_threshold(svd.sigma, rel);
  const auto r = static_cast<Eigen::Index>((svd.sigma.array() > tau).count());
  return svd.v.rightCols(a.cols() - r);
}

Mat hermitian_range(const Mat& h, double cut) {
  if (h.rows() == 0) return Mat(0, 0);
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const RealVec& ev = es.eigenvalues();
  std::vector<Eigen::Index> keep;
  // eigenvalues are ascending; report descending so the dominant direction comes first
  for (Eigen::Index i = ev.size() - 1; i >= 0; --i) {
    if (ev(i) > cut) keep.push_back(i);
  }
  Mat out(h.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  return out;
}

double excess(const Mat& outer, const Mat& inner) {
  if (inner.cols() == 0) return 0.0;
  if (outer.cols() == 0) return spectral_norm(inner);
  const Mat residual = inner - outer * (outer.adjoint() * inner);
  return spectral_norm(residual);
}

double subspace_distance(const Mat& f1, const Mat& f2) {
  if (f1.cols() != f2.cols()) return 1.0;
  return std::max(excess(f1, f2), excess(f2, f1));
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Mat kron_all(std::span<const Mat> factors) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

Vec kron_vec(std::span<const Vec> factors) {
  Mat out = Mat::Ones(1, 1);
  for (const auto& f : factors) out = kron(out, Mat(f));
  return out.col(0);
}

std::int64_t product(std::span<const int> dims) {
  std::int64_t p = 1;
  for (int d : dims) p *= d;
  return p;
}

namespace {

struct SlotShape {
  Eigen::Index left;
  Eigen::Index n;
  Eigen::Index right;
};

SlotShape shape_of(std::span<const int> dims, std::size_t slot, Eigen::Index rows) {
  if (slot >= dims.size()) throw std::out_of_range("tensor slot out of range");
  SlotShape s{1, dims[slot], 1};
  for (std::size_t t = 0; t < slot; ++t) s.left *= dims[t];
  for (std::size_t t = slot + 1; t < dims.size(); ++t) s.right *= dims[t];
  if (s.left * s.n * s.right != rows) throw std::invalid_argument("vector length does not match tensor slots");
  return s;
}

}  // namespace

Mat apply_on_slot(std::span<const int> dims, std::size_t slot, const Mat& op, const Mat& x) {
  const SlotShape s = shape_of(dims, slot, x.rows());
  Mat out(x.rows(), x.cols());
  const Mat op_t = op.transpose();
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index l = 0; l < s.left; ++l) {
      // block(r, j) = x[l][j][r]
      Eigen::Map<const Mat> in(x.col(c).data() + l * s.n * s.right, s.right, s.n);
      Eigen::Map<Mat> res(out.col(c).data() + l * s.n * s.right, s.right, s.n);
      res.noalias() = in * op_t;
    }
  }
  return out;
}

Mat contract_slot(std::span<const int> dims, std::size_t slot, const Vec& u, const Mat& x) {
  const SlotShape s = shape_of(dims, slot, x.rows());
  Mat out(s.left * s.right, x.cols());
  const Vec uc = u.conjugate();
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index l = 0; l < s.left; ++l) {
      Eigen::Map<const Mat> in(x.col(c).data() + l * s.n * s.right, s.right, s.n);
      out.col(c).segment(l * s.right, s.right).noalias() = in * uc;
    }
  }
  return out;
}

Mat partial_gram(std::span<const int> dims, std::size_t slot, const Mat& x) {
  const SlotShape s = shape_of(dims, slot, x.rows());
  Mat out = Mat::Zero(s.n, s.n);
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index l = 0; l < s.left; ++l) {
      Eigen::Map<const Mat> in(x.col(c).data() + l * s.n * s.right, s.right, s.n);
      out.noalias() += in.transpose() * in.conjugate();
    }
  }
  return out;
}

Mat permute_slots(std::span<const int> dims, std::span<const int> perm, const Mat& x) {
  const std::size_t n = dims.size();
  if (perm.size() != n) throw std::invalid_argument("permutation size mismatch");
  std::vector<std::int64_t> in_stride(n, 1);
  for (std::size_t t = n; t-- > 1;) in_stride[t - 1] = in_stride[t] * dims[t];
  std::vector<int> out_dims(n);
  for (std::size_t k = 0; k < n; ++k) out_dims[k] = dims[static_cast<std::size_t>(perm[k])];
  Mat out(x.rows(), x.cols());
  std::vector<int> idx(n, 0);  // multi-index in output order
  for (Eigen::Index flat = 0; flat < x.rows(); ++flat) {
    std::int64_t src = 0;
    for (std::size_t k = 0; k < n; ++k) src += idx[k] * in_stride[static_cast<std::size_t>(perm[k])];
    out.row(flat) = x.row(static_cast<Eigen::Index>(src));
    for (std::size_t k = n; k-- > 0;) {
      if (++idx[k] < out_dims[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

Mat random_complex(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto uniform = [&gen] { return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53; };
  Mat out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double r = std::sqrt(-2.0 * std::log(uniform()));
      const double t = 2.0 * std::numbers::pi * uniform();
      out(i, j) = cplx(r * std::cos(t), r * std::sin(t)) / std::sqrt(2.0);
    }
  }
  return out;
}

}  // namespace pjb
