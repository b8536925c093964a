#include <doctest.h>

#include <pjb/errors.hpp>
#include <pjb/tensor.hpp>

using namespace pjb;

namespace {

const BlaschkeProduct one;
const BlaschkeProduct z1 = BlaschkeProduct::monomial(1);
const BlaschkeProduct z2 = BlaschkeProduct::monomial(2);

JordanBlockProduct z2_z2(int aux = 0) {
  return JordanBlockProduct({ModelSpace(z2), ModelSpace(z2)}, aux);
}

// Index of the monomial z^i ⊗ z^j in Q_{z^2} ⊗ Q_{z^2}.
int idx(int i, int j) { return 2 * i + j; }

Subspace coords(int n, std::initializer_list<std::initializer_list<int>> cols) {
  Mat f = Mat::Zero(n, static_cast<Eigen::Index>(cols.size()));
  int c = 0;
  for (const auto& col : cols) {
    for (int r : col) f(r, c) = 1.0;
    ++c;
  }
  return Subspace::span(f);
}

bool same(const Factorization& a, const Factorization& b) {
  return equal_up_to_unimodular(a.left, b.left) && equal_up_to_unimodular(a.right, b.right);
}

}  // namespace

TEST_CASE("Jordan block tuples commute") {
  const JordanBlockProduct jb = z2_z2();
  CHECK(jb.total_dim() == 4);
  Mat s = Mat::Zero(2, 2);
  s(1, 0) = 1.0;
  CHECK((jb.dense_op(0) - kron(s, Mat::Identity(2, 2))).norm() < 1e-12);
  CHECK((jb.dense_op(1) - kron(Mat::Identity(2, 2), s)).norm() < 1e-12);

  const JordanBlockProduct single({ModelSpace(BlaschkeProduct::factor(0.5))});
  CHECK(std::abs(single.dense_op(0)(0, 0) - 0.5) < 1e-12);

  const JordanBlockProduct triple({ModelSpace(z2), ModelSpace(BlaschkeProduct::factor(0.5)), ModelSpace(z1)});
  CHECK(triple.total_dim() == 2);
  CHECK(triple.commutator_residual() < 1e-10);
  CHECK_THROWS_AS(JordanBlockProduct({ModelSpace(BlaschkeProduct::monomial(8)), ModelSpace(BlaschkeProduct::monomial(8)),
                                      ModelSpace(BlaschkeProduct::monomial(8)), ModelSpace(BlaschkeProduct::monomial(9))}),
                  error);
}

TEST_CASE("submodule tests on Q_{z^2} x Q_{z^2}") {
  const JordanBlockProduct jb = z2_z2();
  CHECK(is_submodule(jb, tensor_submodule(jb, {{z1, z1}, {one, z2}})).pass);
  const Subspace non_tensor = coords(4, {{idx(1, 0), idx(0, 1)}, {idx(1, 1)}});
  CHECK(is_submodule(jb, non_tensor).pass);
  CHECK_FALSE(is_submodule(jb, coords(4, {{idx(0, 0)}})).pass);
}

TEST_CASE("doubly commuting detection") {
  const JordanBlockProduct jb = z2_z2();
  CHECK(is_doubly_commuting(jb, tensor_submodule(jb, {{z1, z1}, {one, z2}})).pass);
  CHECK(is_doubly_commuting(jb, Subspace::full(4)).pass);
  const ResidualReport bad = is_doubly_commuting(jb, coords(4, {{idx(1, 0), idx(0, 1)}, {idx(1, 1)}}));
  CHECK_FALSE(bad.pass);
  CHECK(bad.residual > 1e-2);
  CHECK_THROWS_AS(is_doubly_commuting(jb, coords(4, {{idx(0, 0)}})), error);
}

TEST_CASE("star Krylov closure") {
  const JordanBlockProduct jb = z2_z2();
  const Subspace zz = tensor_submodule(jb, {{z1, z1}, {z1, z1}});
  CHECK(star_krylov_closure(jb, Subspace::full(4), {0, 1}).dim() == 4);
  const Subspace closed = star_krylov_closure(jb, zz, {1});
  CHECK(closed.distance(tensor_submodule(jb, {{z1, z1}, {one, z2}})) < 1e-10);
  CHECK(reducing_residual(jb, closed, {1}) < 1e-10);
}

TEST_CASE("reducing subspaces split off the auxiliary slot") {
  const JordanBlockProduct jb = z2_z2(2);
  const Mat e1 = Mat::Identity(2, 2).col(0);
  const Subspace m = Subspace::from_orthonormal(kron(e1, Mat::Identity(4, 4)));
  CHECK(reducing_split(jb, m).distance(Subspace::span(e1)) < 1e-10);
  CHECK(reducing_split(jb, Subspace::full(8)).dim() == 2);

  const JordanBlockProduct jb3({ModelSpace(z2), ModelSpace(BlaschkeProduct::factor(0.5))}, 3);
  const Mat l = orthonormal_range(random_complex(3, 2, 4));
  const Subspace lm = Subspace::from_orthonormal(kron(l, Mat::Identity(2, 2)));
  CHECK(reducing_split(jb3, lm).distance(Subspace::from_orthonormal(l)) < 1e-8);

  CHECK_THROWS_AS(reducing_split(jb, tensor_submodule(z2_z2(), {{z1, z1}, {one, z2}})), error);
}

TEST_CASE("decomposition of doubly commuting submodules") {
  const JordanBlockProduct jb = z2_z2();
  const auto fs = decompose_doubly_commuting(jb, tensor_submodule(jb, {{z1, z1}, {one, z2}}));
  REQUIRE(fs.size() == 2);
  CHECK(same(fs[0].factorization, {z1, z1}));
  CHECK(same(fs[1].factorization, {one, z2}));
  CHECK(fs[0].w.dim() == 1);

  for (const auto& f : decompose_doubly_commuting(jb, Subspace::full(4))) CHECK(same(f.factorization, {one, z2}));
  CHECK_THROWS_AS(decompose_doubly_commuting(jb, coords(4, {{idx(1, 0), idx(0, 1)}, {idx(1, 1)}})), error);
}

TEST_CASE("round trip over factorization triples in every peel order") {
  const BlaschkeProduct t1(1.0, {0.3, -0.4});
  const BlaschkeProduct t2(1.0, {0.0, 0.5});
  const BlaschkeProduct t3 = BlaschkeProduct::factor(cplx(0.1, 0.6));
  const JordanBlockProduct jb({ModelSpace(t1), ModelSpace(t2), ModelSpace(t3)});
  for (const auto& f1 : factorizations(t1)) {
    for (const auto& f2 : factorizations(t2)) {
      for (const auto& f3 : factorizations(t3)) {
        if (f1.right.is_constant() || f2.right.is_constant() || f3.right.is_constant()) continue;
        const Subspace m = tensor_submodule(jb, {f1, f2, f3});
        for (const std::vector<int>& order : {std::vector<int>{}, std::vector<int>{2, 0, 1}}) {
          const auto out = decompose_doubly_commuting(jb, m, order);
          CHECK(same(out[0].factorization, f1));
          CHECK(same(out[1].factorization, f2));
          CHECK(same(out[2].factorization, f3));
        }
      }
    }
  }
}
