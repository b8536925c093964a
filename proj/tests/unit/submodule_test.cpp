#include <doctest.h>

#include <pjb/errors.hpp>
#include <pjb/submodule.hpp>

using namespace pjb;

namespace {

const BlaschkeProduct one;
const BlaschkeProduct z1 = BlaschkeProduct::monomial(1);
const BlaschkeProduct z2 = BlaschkeProduct::monomial(2);

Subspace monomials(int d, std::initializer_list<int> powers) {
  Mat f = Mat::Zero(d, static_cast<Eigen::Index>(powers.size()));
  int c = 0;
  for (int p : powers) f(p, c++) = 1.0;
  return Subspace::span(f);
}

bool same(const Factorization& a, const Factorization& b) {
  return equal_up_to_unimodular(a.left, b.left) && equal_up_to_unimodular(a.right, b.right);
}

}  // namespace

TEST_CASE("build the Nakazi submodules of Q_{z^2}") {
  const ModelSpace ms(z2);
  const Subspace w = build_submodule(ms, {z1, z1});
  CHECK(w.dim() == 1);
  CHECK(w.distance(monomials(2, {1})) < 1e-10);
  CHECK(build_submodule(ms, {one, z2}).dim() == 2);
  CHECK(build_submodule(ms, {z2, one}).is_zero());
  CHECK_THROWS_AS(build_submodule(ms, {z1, z2}), error);
}

TEST_CASE("classify recovers known submodules") {
  const ModelSpace ms(z2);
  CHECK(same(classify_submodule(ms, monomials(2, {1})), {z1, z1}));
  CHECK(same(classify_submodule(ms, Subspace::full(2)), {one, z2}));
  CHECK_THROWS_AS(classify_submodule(ms, monomials(2, {0})), error);
}

TEST_CASE("random round trip against brute-force matching") {
  const BlaschkeProduct theta = random_blaschke(5, 0.9, 21);
  const ModelSpace ms(theta);
  for (const auto& f : factorizations(theta)) {
    const Subspace w = build_submodule(ms, f);
    if (w.is_zero()) continue;
    CHECK(invariance_residual(compressed_shift(ms), w) < invariance_tolerance);
    CHECK(same(classify_submodule(ms, w), f));
    CHECK(same(classify_by_matching(ms, w), f));
  }
}

TEST_CASE("projected cyclic properties on every nonzero factorization") {
  const BlaschkeProduct theta = random_blaschke(4, 0.9, 2);
  const ModelSpace ms(theta);
  for (const auto& f : factorizations(theta)) {
    const Subspace w = build_submodule(ms, f);
    if (w.is_zero()) continue;
    const CyclicReport r = projected_cyclic_checks(ms, w);
    CHECK(r.nonzero_pass());
    CHECK(r.factor_pass());
    CHECK(r.alpha_pass());
    CHECK(r.krylov_pass());
  }
}

TEST_CASE("no two nonzero submodules are orthogonal") {
  const ModelSpace ms2(z2);
  CHECK(orthogonality_impossibility(ms2, monomials(2, {1}), Subspace::full(2)) == doctest::Approx(1.0));
  const ModelSpace ms3(BlaschkeProduct::monomial(3));
  CHECK(orthogonality_impossibility(ms3, monomials(3, {2}), monomials(3, {1, 2})) == doctest::Approx(1.0));

  const BlaschkeProduct theta = random_blaschke(5, 0.9, 31);
  const ModelSpace ms(theta);
  std::vector<Subspace> ws;
  for (const auto& f : factorizations(theta)) {
    Subspace w = build_submodule(ms, f);
    if (!w.is_zero()) ws.push_back(std::move(w));
  }
  for (std::size_t i = 0; i < ws.size(); ++i) {
    for (std::size_t j = i + 1; j < ws.size(); ++j) CHECK(orthogonality_impossibility(ms, ws[i], ws[j]) > 1e-6);
  }
}

TEST_CASE("star closure of a nonzero submodule is everything") {
  const ModelSpace ms2(z2);
  CHECK(star_closure_full(ms2, monomials(2, {1})).dim() == 2);
  CHECK(star_closure_full(ms2, Subspace::full(2)).dim() == 2);
  const BlaschkeProduct theta = random_blaschke(6, 0.9, 12);
  const ModelSpace ms(theta);
  const auto fs = factorizations(theta);
  const Subspace w = build_submodule(ms, fs[fs.size() - 2]);
  REQUIRE_FALSE(w.is_zero());
  CHECK(star_closure_full(ms, w).dim() == 6);
}
