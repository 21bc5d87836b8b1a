#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dilkit/error.hpp"
#include "dilkit/rkhm.hpp"
#include "support.hpp"

using namespace dilkit;
using testing_support::error_kind_of;
using testing_support::random_matrix;

namespace {

ComplexMatrix scalar(Complex z) { return ComplexMatrix{{z}}; }

AKernel z2_kernel(Complex x) {
  return kernel_from_omega(builtin::cyclic_group(2),
                           make_afunction(builtin::cyclic_group(2), {scalar(1.0), scalar(x)}));
}

// K(s,t) = V_s* V_t for random V_s : C^n -> C^dim.
AKernel gram_kernel(std::size_t points, std::size_t n, std::size_t dim, std::mt19937_64& rng) {
  std::vector<ComplexMatrix> v;
  for (std::size_t s = 0; s < points; ++s) v.push_back(random_matrix(dim, n, rng));
  std::vector<ComplexMatrix> blocks;
  std::vector<std::string> base;
  for (std::size_t s = 0; s < points; ++s) {
    base.push_back("p" + std::to_string(s));
    for (std::size_t t = 0; t < points; ++t) blocks.push_back(adjoint_times(v[s], v[t]));
  }
  return AKernel::from_blocks(base, n, blocks);
}

ModuleElement random_element(std::size_t points, std::size_t n, std::mt19937_64& rng) {
  std::vector<ComplexMatrix> blocks;
  for (std::size_t s = 0; s < points; ++s) blocks.push_back(random_matrix(n, n, rng));
  return ModuleElement::from_blocks(blocks);
}

// Direct double sum c* G d = sum_{s,t} c_s* K(s,t) d_t.
ComplexMatrix double_sum(const AKernel& k, const ModuleElement& c, const ModuleElement& d) {
  ComplexMatrix out(k.n, k.n);
  for (std::size_t s = 0; s < k.size(); ++s)
    for (std::size_t t = 0; t < k.size(); ++t)
      out += adjoint_times(c.coefficient(s, k.n), k(s, t) * d.coefficient(t, k.n));
  return out;
}

}  // namespace

TEST_CASE("kernel_from_omega") {
  const auto trivial = builtin::cyclic_group(1);
  const AKernel k1 = kernel_from_omega(trivial, make_afunction(trivial, {scalar(1.0)}));
  CHECK(k1.size() == 1);
  CHECK(k1(0, 0) == scalar(1.0));

  const AKernel k2 = z2_kernel(0.3);
  CHECK(k2(0, 0) == scalar(1.0));
  CHECK(k2(0, 1) == scalar(0.3));
  CHECK(k2(1, 0) == scalar(0.3));
  CHECK(k2(1, 1) == scalar(1.0));

  const auto sigma = builtin::intersection_semigroup(1);
  const AKernel ks = kernel_from_omega(sigma, make_afunction(sigma, {scalar(0.0), scalar(1.0)}));
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) CHECK(ks(a, b) == scalar((a & b) ? 1.0 : 0.0));

  CHECK(error_kind_of([] { AKernel::from_blocks({"a", "b"}, 1, {scalar(1.0)}); }) ==
        ErrorKind::RaggedBlocks);
}

TEST_CASE("check_positive_definite") {
  const ComplexMatrix id = ComplexMatrix::identity(2);
  const ComplexMatrix zero(2, 2);
  const AKernel diag = AKernel::from_blocks({"a", "b", "c"}, 2,
                                            {id, zero, zero, zero, id, zero, zero, zero, id});
  CHECK(check_positive_definite(diag).positive_definite);

  for (double x : {0.0, 0.5, 1.0, -1.0}) CHECK(check_positive_definite(z2_kernel(x)).positive_definite);
  const PdVerdict bad = check_positive_definite(z2_kernel(2.0));
  CHECK_FALSE(bad.positive_definite);
  CHECK(bad.min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
  // The witness realizes the minimum: a* G a = -1 with a normalized.
  const ComplexMatrix g = testing_support::block_gram(z2_kernel(2.0));
  const ComplexMatrix form = adjoint_times(bad.witness.column, g * bad.witness.column);
  CHECK(form(0, 0).real() == doctest::Approx(-1.0).epsilon(1e-12));

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const AKernel k = gram_kernel(4, 2, 3, rng);
    const PdVerdict v = check_positive_definite(k);
    CHECK(v.positive_definite);
    CHECK(v.min_eigenvalue ==
          doctest::Approx(testing_support::oracle_min_eigenvalue(testing_support::block_gram(k)))
              .epsilon(1e-9)
              .scale(1.0));
  }

  const AKernel skew = AKernel::from_blocks({"s", "t"}, 1,
                                            {scalar(1.0), scalar({0, 1}), scalar({0, 1}), scalar(1.0)});
  CHECK(error_kind_of([&] { check_positive_definite(skew); }) == ErrorKind::NonHermitianKernel);
}

TEST_CASE("check_hermitian_symmetry") {
  std::mt19937_64 rng(8);
  CHECK(check_hermitian_symmetry(gram_kernel(3, 2, 2, rng)) <= 1e-12);
  const AKernel skew = AKernel::from_blocks({"s", "t"}, 1,
                                            {scalar(1.0), scalar({0, 1}), scalar({0, 1}), scalar(1.0)});
  CHECK(check_hermitian_symmetry(skew) == doctest::Approx(2.0));
  const ComplexMatrix h{{1.0, Complex(0, 2)}, {Complex(0, -2), 5.0}};
  const AKernel diag = AKernel::from_blocks({"a", "b"}, 2, {h, ComplexMatrix(2, 2), ComplexMatrix(2, 2), h});
  CHECK(check_hermitian_symmetry(diag) == 0.0);
}

TEST_CASE("build_module") {
  const AKernel one = AKernel::from_blocks({"p"}, 1, {scalar(1.0)});
  const ModuleSpace m1 = build_module(one);
  CHECK(m1.rank() == 1);
  CHECK(std::abs(std::abs(m1.reducer()(0, 0)) - 1.0) < 1e-14);

  CHECK(build_module(z2_kernel(1.0)).rank() == 1);
  CHECK(build_module(z2_kernel(0.0)).rank() == 2);

  try {
    build_module(z2_kernel(2.0));
    FAIL("expected NotPositiveDefinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
    CHECK(*e.certificate() == doctest::Approx(-1.0).epsilon(1e-12));
  }

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const AKernel k = gram_kernel(5, 2, 4, rng);  // rank at most 4 of 10
    const ModuleSpace m = build_module(k);
    CHECK(m.rank() == 4);
    const ComplexMatrix& r = m.reducer();
    const ComplexMatrix& rp = m.pseudo_inverse();
    CHECK(distance(r * rp, ComplexMatrix::identity(m.rank())) <= 1e-10);
    const ComplexMatrix proj = rp * r;
    CHECK(distance(proj * proj, proj) <= 1e-10);
    CHECK(distance(proj, proj.adjoint()) <= 1e-10);
    CHECK(distance(m.gram() * proj, m.gram()) <= 1e-9 * m.gram().frobenius_norm());
    const ModuleElement c = random_element(5, 2, rng);
    const ModuleElement d = random_element(5, 2, rng);
    const ComplexMatrix reduced = adjoint_times(m.coordinates(c), m.coordinates(d));
    CHECK(distance(reduced, inner_product(m, c, d)) <= 1e-9 * (1.0 + reduced.frobenius_norm()));
  }
}

TEST_CASE("inner_product") {
  const ModuleSpace m1 = build_module(AKernel::from_blocks({"p"}, 1, {scalar(1.0)}));
  const auto k0 = ModuleElement::section(1, 0, scalar(1.0));
  CHECK(distance(inner_product(m1, k0, k0), scalar(1.0)) <= 1e-14);

  std::mt19937_64 rng(2);
  const AKernel k = gram_kernel(3, 2, 3, rng);
  const ModuleSpace m = build_module(k);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t t = 0; t < 3; ++t) {
      const ComplexMatrix a = random_matrix(2, 2, rng), b = random_matrix(2, 2, rng);
      const ComplexMatrix got =
          inner_product(m, ModuleElement::section(3, s, a), ModuleElement::section(3, t, b));
      CHECK(distance(got, adjoint_times(a, k(s, t) * b)) <= 1e-10 * (1.0 + got.frobenius_norm()));
    }

  const ModuleSpace mz = build_module(z2_kernel(0.4));
  for (int trial = 0; trial < 10; ++trial) {
    const ModuleElement c = random_element(2, 1, rng), d = random_element(2, 1, rng);
    CHECK(distance(inner_product(mz, c, d), double_sum(mz.kernel(), c, d)) <= 1e-10);
  }

  // Module axioms: right linearity and hermitian symmetry.
  const ModuleElement c = random_element(3, 2, rng), d = random_element(3, 2, rng);
  const ComplexMatrix a = random_matrix(2, 2, rng);
  CHECK(distance(inner_product(m, c, ModuleElement{d.column * a}), inner_product(m, c, d) * a) <= 1e-9);
  CHECK(distance(inner_product(m, c, d), inner_product(m, d, c).adjoint()) <= 1e-9);
  CHECK(is_psd(inner_product(m, c, c), 1e-9).psd);

  CHECK(error_kind_of([&] { inner_product(m, c, ModuleElement::zero(2, 2)); }) == ErrorKind::BaseMismatch);
}

TEST_CASE("evaluate") {
  std::mt19937_64 rng(6);
  const AKernel k = gram_kernel(3, 2, 3, rng);
  const ModuleSpace m = build_module(k);
  for (std::size_t t = 0; t < 3; ++t) {
    const auto c = ModuleElement::section(3, t, ComplexMatrix::identity(2));
    for (std::size_t s = 0; s < 3; ++s) CHECK(distance(evaluate(m, c, s), k(t, s)) <= 1e-12);
  }
  CHECK(evaluate(m, ModuleElement::zero(3, 2), 1).frobenius_norm() == 0.0);

  // Convention: K_t b evaluates to b* K(t, s).
  const ComplexMatrix b = random_matrix(2, 2, rng);
  CHECK(distance(evaluate(m, ModuleElement::section(3, 2, b), 0), adjoint_times(b, k(2, 0))) <= 1e-12);

  const ModuleSpace mz = build_module(z2_kernel(0.7));
  for (int trial = 0; trial < 5; ++trial) {
    const ModuleElement c = random_element(2, 1, rng);
    for (std::size_t s = 0; s < 2; ++s) {
      Complex sum = 0.0;
      for (std::size_t t = 0; t < 2; ++t) sum += std::conj(c.column(t, 0)) * mz.kernel()(t, s)(0, 0);
      CHECK(std::abs(evaluate(mz, c, s)(0, 0) - sum) <= 1e-12);
    }
  }
  CHECK(error_kind_of([&] { evaluate(m, ModuleElement::zero(3, 2), 3); }) == ErrorKind::UnknownPoint);
}

TEST_CASE("membership") {
  std::mt19937_64 rng(10);
  const AKernel k = gram_kernel(4, 2, 3, rng);
  const ModuleSpace m = build_module(k);

  // A section is a member; representatives agree modulo the null space.
  const auto sec = ModuleElement::section(4, 1, ComplexMatrix::identity(2));
  const MembershipResult r = membership(m, evaluate_all(m, sec));
  CHECK(r.in_module);
  CHECK(distance(m.coordinates(r.representative), m.coordinates(sec)) <= 1e-9);

  const ModuleSpace mz = build_module(z2_kernel(0.0));
  const MembershipResult ones =
      membership(mz, AFunction{{"e", "g"}, 1, {scalar(1.0), scalar(1.0)}});
  CHECK(ones.in_module);
  CHECK(ones.residual <= 1e-14);
  CHECK(std::abs(ones.representative.column(0, 0) - 1.0) <= 1e-12);
  CHECK(std::abs(ones.representative.column(1, 0) - 1.0) <= 1e-12);

  // Every section vanishes at q, so no element can be nonzero there.
  const AKernel vanishing = AKernel::from_blocks({"p", "q"}, 1, {scalar(1.0), scalar(0.0), scalar(0.0), scalar(0.0)});
  const ModuleSpace mv = build_module(vanishing);
  const MembershipResult miss = membership(mv, AFunction{{"p", "q"}, 1, {scalar(0.0), scalar(1.0)}});
  CHECK_FALSE(miss.in_module);
  CHECK(miss.residual == doctest::Approx(1.0));

  // The norm is the Gram norm of any preimage.
  for (int trial = 0; trial < 5; ++trial) {
    const ModuleElement c = random_element(4, 2, rng);
    const MembershipResult back = membership(m, evaluate_all(m, c));
    CHECK(back.in_module);
    const double gram_norm = std::sqrt(op_norm(inner_product(m, c, c)));
    CHECK(back.norm == doctest::Approx(gram_norm).epsilon(1e-8));
  }
}

TEST_CASE("domination_test") {
  std::mt19937_64 rng(14);
  const AKernel k = gram_kernel(3, 2, 4, rng);
  const ModuleSpace m = build_module(k);
  const AFunction zero{k.base, 2, std::vector<ComplexMatrix>(3, ComplexMatrix(2, 2))};
  const DominationResult z = domination_test(m, zero);
  CHECK(z.finite);
  CHECK(z.lambda <= 1e-8);

  const ModuleSpace m1 = build_module(AKernel::from_blocks({"p"}, 1, {scalar(1.0)}));
  const DominationResult one = domination_test(m1, AFunction{{"p"}, 1, {scalar(1.0)}});
  CHECK(one.finite);
  CHECK(one.lambda == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(literal_domination(m1, AFunction{{"p"}, 1, {scalar(1.0)}}));
  CHECK_FALSE(literal_domination(m1, AFunction{{"p"}, 1, {scalar(2.0)}}));

  for (int trial = 0; trial < 5; ++trial) {
    const ModuleElement c = random_element(3, 2, rng);
    const AFunction f = evaluate_all(m, c);
    const DominationResult d = domination_test(m, f);
    const MembershipResult mem = membership(m, f);
    CHECK(d.finite);
    CHECK(d.lambda == doctest::Approx(mem.norm * mem.norm).epsilon(1e-7));
    // Independent check of the inequality at lambda(1 + 1e-6) through the oracle.
    ComplexMatrix stacked(6, 2);
    for (std::size_t s = 0; s < 3; ++s)
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) stacked(s * 2 + i, j) = std::conj(f(s)(j, i));
    const ComplexMatrix gap = d.lambda * (1 + 1e-6) * m.gram() - stacked * stacked.adjoint();
    CHECK(testing_support::oracle_min_eigenvalue(0.5 * (gap + gap.adjoint())) >= -1e-8 * gap.frobenius_norm());
  }

  const AKernel vanishing = AKernel::from_blocks({"p", "q"}, 1, {scalar(1.0), scalar(0.0), scalar(0.0), scalar(0.0)});
  const DominationResult inf = domination_test(build_module(vanishing), AFunction{{"p", "q"}, 1, {scalar(0.0), scalar(1.0)}});
  CHECK_FALSE(inf.finite);
}

TEST_CASE("kolmogorov_check and the module-as-kernel roundtrip") {
  std::mt19937_64 rng(16);
  const auto samples = sample_matrices(2, 4, 7);
  CHECK(samples.size() == 8);
  const ModuleSpace m = build_module(gram_kernel(4, 2, 3, rng));
  CHECK(kolmogorov_check(m, samples) <= 1e-10);
  const ComplexMatrix id[] = {ComplexMatrix::identity(2)};
  CHECK(kolmogorov_check(m, id) <= 1e-10);

  const ModuleSpace mz = build_module(z2_kernel(0.5));
  CHECK(kolmogorov_check(mz, sample_matrices(1, 5, 3)) <= 1e-10);

  std::vector<ModuleElement> family;
  for (std::size_t s = 0; s < 4; ++s) family.push_back(ModuleElement::section(4, s, ComplexMatrix::identity(2)));
  const AKernel again = module_as_kernel(m, family);
  CHECK(check_positive_definite(again).positive_definite);
  CHECK(build_module(again).rank() == m.rank());
}

TEST_CASE("Schwarz inequalities and quotient consistency") {
  std::mt19937_64 rng(18);
  const ModuleSpace m = build_module(gram_kernel(4, 2, 3, rng));
  for (int trial = 0; trial < 10; ++trial) {
    const ModuleElement c = random_element(4, 2, rng), d = random_element(4, 2, rng);
    const ComplexMatrix cd = inner_product(m, c, d);
    const ComplexMatrix cc = inner_product(m, c, c);
    const ComplexMatrix dd = inner_product(m, d, d);
    const double scale = 1.0 + op_norm(cc) * op_norm(dd);
    // <c,d>* <c,d> <= ||c||^2 <d,d>, inner product linear in the second slot.
    const ComplexMatrix gap = op_norm(cc) * dd - cd.adjoint() * cd;
    CHECK(testing_support::oracle_min_eigenvalue(0.5 * (gap + gap.adjoint())) >= -1e-9 * scale);
    CHECK(op_norm(cd) * op_norm(cd) <= op_norm(cc) * op_norm(dd) + 1e-9 * scale);
  }

  // Adding a null vector changes nothing.
  const ModuleSpace mz = build_module(z2_kernel(1.0));
  const ModuleElement null_vec = ModuleElement::from_blocks(std::vector{scalar(1.0), scalar(-1.0)});
  CHECK(distance(mz.gram() * null_vec.column, ComplexMatrix(2, 1)) <= 1e-14);
  for (int trial = 0; trial < 5; ++trial) {
    const ModuleElement c = random_element(2, 1, rng), d = random_element(2, 1, rng);
    const ModuleElement c2{c.column + null_vec.column};
    CHECK(distance(inner_product(mz, c, d), inner_product(mz, c2, d)) <= 1e-12);
    CHECK(distance(mz.coordinates(c), mz.coordinates(c2)) <= 1e-12);
  }
}

TEST_CASE("norm identity for invariant kernels") {
  std::mt19937_64 rng(20);
  const auto s = builtin::cyclic_group(4);
  const auto pi = testing_support::cyclic_representation(4, 3, rng);
  const AFunction omega = testing_support::synthesize(s, pi, random_matrix(3, 2, rng));
  const ModuleSpace m = build_module(kernel_from_omega(s, omega));
  for (int trial = 0; trial < 5; ++trial) {
    const ModuleElement c = random_element(4, 2, rng);
    ComplexMatrix sum(2, 2);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        sum += adjoint_times(c.coefficient(i, 2), omega(s.mul(s.star(i), j)) * c.coefficient(j, 2));
    const double lhs = std::pow(op_norm(m.coordinates(c)), 2);
    CHECK(lhs == doctest::Approx(op_norm(sum)).epsilon(1e-9));
  }
}
