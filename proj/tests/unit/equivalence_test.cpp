#include <doctest.h>

#include <pjb/equivalence.hpp>
#include <pjb/errors.hpp>

using namespace pjb;

namespace {

const BlaschkeProduct one;
const BlaschkeProduct z1 = BlaschkeProduct::monomial(1);
const BlaschkeProduct z2 = BlaschkeProduct::monomial(2);

}  // namespace

TEST_CASE("fingerprints encode factors as zero multisets") {
  const JordanBlockProduct jb({ModelSpace(z2), ModelSpace(z2)});
  const Fingerprint fp = fingerprint(Decomposition::from_factorizations(jb, {{z1, z1}, {one, z2}}));
  CHECK(fp.to_string() == "[({0},{0}), ({},{0,0})]");
  const Fingerprint full = fingerprint(Decomposition::from_factorizations(jb, {{one, z2}, {one, z2}}));
  for (const auto& c : full.coords) CHECK(c.eta_zeros.empty());

  const BlaschkeProduct t(1.0, {0.5, -0.25});
  const JordanBlockProduct jt({ModelSpace(t)});
  const Fingerprint a = fingerprint(Decomposition::from_factorizations(jt, {{BlaschkeProduct(1.0, {0.5}), BlaschkeProduct(1.0, {-0.25})}}));
  const Fingerprint b = fingerprint(
      Decomposition::from_factorizations(jt, {{BlaschkeProduct(1.0, {0.5}), BlaschkeProduct(-1.0, {-0.25})}}));
  CHECK(a == b);
  CHECK(a.to_string() == b.to_string());
}

TEST_CASE("mixed submodules compare by their model factors only") {
  const MixedSpace msp(TruncatedHardy(1, 8), JordanBlockProduct({ModelSpace(z2)}));
  auto decomp = [&](const BlaschkeProduct& phi, const Factorization& f) {
    return Decomposition::from_mixed(msp, decompose_mixed(msp, mixed_submodule(msp, InnerGenerator{{phi}}, {f})));
  };
  const auto zs = decomp(z1, {z1, z1});
  CHECK(are_unitarily_equivalent(zs, decomp(BlaschkeProduct::factor(0.5), {z1, z1})));
  CHECK_FALSE(are_unitarily_equivalent(decomp(z1, {one, z2}), zs));
  CHECK(are_unitarily_equivalent(zs, zs));

  const JordanBlockProduct other({ModelSpace(BlaschkeProduct::monomial(3))});
  CHECK_THROWS_AS(are_unitarily_equivalent(zs, Decomposition::from_factorizations(other, {{one, BlaschkeProduct::monomial(3)}})),
                  error);
}

TEST_CASE("intertwiner oracle") {
  const JordanBlockProduct jb({ModelSpace(z2), ModelSpace(z2)});
  const Subspace m = tensor_submodule(jb, {{z1, z1}, {one, z2}});
  CHECK(intertwiner_oracle(jb, m, m));
  CHECK_FALSE(intertwiner_oracle(jb, m, tensor_submodule(jb, {{one, z2}, {z1, z1}})));

  const BlaschkeProduct t1(1.0, {0.3, 0.3});
  const BlaschkeProduct t2(1.0, {-0.5});
  const JordanBlockProduct jr({ModelSpace(t1), ModelSpace(t2)});
  const Subspace a = tensor_submodule(jr, {{BlaschkeProduct(1.0, {0.3}), BlaschkeProduct(1.0, {0.3})}, {one, t2}});
  const Subspace b = tensor_submodule(jr, {{BlaschkeProduct(1.0, {0.3}), BlaschkeProduct(cplx(0, 1), {0.3})}, {one, t2.with_constant(-1.0)}});
  CHECK(intertwiner_oracle(jr, a, b));
  CHECK_THROWS_AS(intertwiner_oracle(JordanBlockProduct({ModelSpace(z2)}, 2), Subspace::full(4), Subspace::full(4)),
                  error);
}
