#include <pjb/subspace.hpp>

#include <pjb/errors.hpp>

namespace pjb {

Subspace::Subspace(Eigen::Index ambient_dim) : frame_(ambient_dim, 0) {}

Subspace Subspace::span(const Mat& vectors, double rank_tol) {
  Subspace s;
  s.rank_tol_ = rank_tol;
  s.frame_ = vectors.cols() == 0 ? Mat(vectors.rows(), 0) : orthonormal_range(vectors, rank_tol);
  return s;
}

Subspace Subspace::from_orthonormal(Mat frame, double rank_tol) {
  const Mat gram = frame.adjoint() * frame;
  if (frame.cols() > 0 && (gram - Mat::Identity(frame.cols(), frame.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw error(errc::precondition, "frame is not orthonormal");
  }
  Subspace s;
  s.frame_ = std::move(frame);
  s.rank_tol_ = rank_tol;
  return s;
}

Subspace Subspace::full(Eigen::Index ambient_dim) {
  return from_orthonormal(Mat::Identity(ambient_dim, ambient_dim));
}

Subspace tensor(std::span<const Subspace> parts) {
  std::vector<Mat> frames;
  frames.reserve(parts.size());
  for (const auto& p : parts) frames.push_back(p.frame());
  return Subspace::from_orthonormal(kron_all(frames));
}

}  // namespace pjb
