#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dilkit/applications.hpp"
#include "dilkit/error.hpp"
#include "support.hpp"

using namespace dilkit;
using testing_support::error_kind_of;
using testing_support::random_matrix;

namespace {

ComplexMatrix scalar(Complex z) { return ComplexMatrix{{z}}; }

ComplexMatrix mat_power(const ComplexMatrix& t, std::size_t k) {
  ComplexMatrix out = ComplexMatrix::identity(t.rows());
  for (std::size_t i = 0; i < k; ++i) out = out * t;
  return out;
}

}  // namespace

TEST_CASE("cp_check") {
  const CPCheck id = cp_check(identity_channel(2));
  CHECK(id.completely_positive);
  CHECK(id.consistent());
  const ComplexMatrix choi = identity_channel(2).choi();
  CHECK(choi.rows() == 4);
  CHECK(numerical_rank(hermitian_eig(choi).values) == 1);

  const CPCheck tr = cp_check(transpose_map(2));
  CHECK_FALSE(tr.completely_positive);
  CHECK(tr.min_choi_eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(tr.consistent());
  const auto ev = testing_support::oracle_eigenvalues(transpose_map(2).choi());
  CHECK(ev.front() == doctest::Approx(-1.0));
  CHECK(ev.back() == doctest::Approx(1.0));

  // x -> tr(x) I / n.
  const CPCheck trace = cp_check(depolarizing_channel(2, 0.0));
  CHECK(trace.completely_positive);
  CHECK(trace.consistent());

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const CPMap map = testing_support::random_cp_map(2, 3, 2, rng);
    const CPCheck c = cp_check(map);
    CHECK(c.completely_positive);
    CHECK(c.consistent());
  }
  // Negative-weight mixtures are caught by both tests alike.
  for (double p : {-0.5, 1.5}) {
    const CPCheck c = cp_check(depolarizing_channel(2, p));
    CHECK(c.consistent());
  }
  CHECK(error_kind_of([] { CPMap::from_action(2, 2, {ComplexMatrix(2, 2)}); }) == ErrorKind::ShapeError);
}

TEST_CASE("CPMap apply follows linearity over matrix units") {
  std::mt19937_64 rng(2);
  const ComplexMatrix a = random_matrix(2, 3, rng);
  const ComplexMatrix ops[] = {a};
  const CPMap map = CPMap::from_kraus(ops);
  const ComplexMatrix x = random_matrix(2, 2, rng);
  CHECK(distance(map.apply(x), adjoint_times(a, x * a)) <= 1e-12);
}

TEST_CASE("stinespring") {
  std::mt19937_64 rng(3);
  const ComplexMatrix v0 = random_matrix(2, 2, rng);
  const ComplexMatrix single[] = {v0};
  const StinespringResult one = stinespring(CPMap::from_kraus(single));
  CHECK(one.choi_rank == 1);
  CHECK(one.kraus.size() == 1);
  CHECK(one.kraus_error <= 1e-9);
  CHECK(one.framework_error <= 1e-8);

  const StinespringResult id = stinespring(identity_channel(2));
  CHECK(id.choi_rank == 1);
  CHECK(id.rank_consistent());
  CHECK(id.module_rank == 2);

  const StinespringResult dep = stinespring(depolarizing_channel(2, 0.5));
  CHECK(dep.choi_rank == 4);
  CHECK(dep.kraus.size() == 4);
  CHECK(dep.rank_consistent());
  CHECK(dep.route_disagreement <= 1e-8);

  CHECK(error_kind_of([] { stinespring(transpose_map(2)); }) == ErrorKind::NotCP);

  double worst = 0.0;
  for (unsigned seed = 0; seed < 20; ++seed) {
    std::mt19937_64 r(seed);
    std::uniform_int_distribution<std::size_t> dim(1, 3);
    const std::size_t m = dim(r), n = dim(r), k = dim(r);
    const StinespringResult s = stinespring(testing_support::random_cp_map(m, n, k, r), kDefaultTol, seed);
    CHECK(s.rank_consistent());
    CHECK(s.kraus_error <= 1e-8);
    worst = std::max(worst, s.route_disagreement);
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("naimark") {
  const NaimarkResult trine = naimark(trine_povm());
  CHECK(trine.framework_dimension == 3);
  CHECK(trine.oracle_dimension == 3);
  CHECK(trine.projection_error <= 1e-9);
  CHECK(trine.multiplicativity_error <= 1e-9);
  CHECK(trine.additivity_error <= 1e-8);
  CHECK(trine.isometry_error <= 1e-9);
  CHECK(trine.reconstruction_error <= 1e-9);
  CHECK(trine.oracle_error <= 1e-9);

  // A projective measurement is already spectral.
  POVM pvm{2, {ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}, ComplexMatrix{{0.0, 0.0}, {0.0, 1.0}}}};
  const NaimarkResult p = naimark(pvm);
  CHECK(p.framework_dimension == 2);
  CHECK(p.projection_error <= 1e-9);

  const NaimarkResult coin = naimark(POVM{1, {scalar(0.3), scalar(0.7)}});
  CHECK(coin.framework_dimension == 2);
  CHECK(coin.oracle_dimension == 2);

  CHECK(error_kind_of([] { naimark(POVM{1, {scalar(0.3), scalar(0.3)}}); }) == ErrorKind::NotPOVM);
  CHECK(error_kind_of([] { naimark(POVM{1, {scalar(-0.3), scalar(1.3)}}); }) == ErrorKind::NotPOVM);
}

TEST_CASE("Sz.-Nagy unitary dilation of contractions") {
  const ComplexMatrix jordan{{0.0, 1.0}, {0.0, 0.0}};
  const ContractionResult j = szn_contraction(jordan, 8);
  CHECK(j.unitarity_error <= 1e-9);
  CHECK(j.compression_error <= 1e-9);
  CHECK(j.window.positive_definite);

  const ContractionResult zero = szn_contraction(scalar(0.0), 3);
  CHECK(zero.u.rows() == 7);
  for (std::size_t k = 1; k <= 3; ++k) CHECK(std::abs(mat_power(zero.u, k)(0, 0)) <= 1e-14);

  std::mt19937_64 rng(5);
  const ComplexMatrix u = testing_support::random_unitary(2, rng);
  const ContractionResult un = szn_contraction(u, 4);
  CHECK(un.compression_error <= 1e-9);
  CHECK(un.unitarity_error <= 1e-9);

  for (unsigned seed = 0; seed < 30; ++seed) {
    std::mt19937_64 r(seed);
    const ComplexMatrix t = testing_support::random_contraction(2 + seed % 2, r);
    const ContractionResult c = szn_contraction(t, 5);
    CHECK(c.window.positive_definite);
    CHECK(c.unitarity_error <= 1e-9);
    CHECK(c.compression_error <= 1e-9);
    // Cross-check the window kernel with the oracle.
    const ComplexMatrix g = testing_support::block_gram(toeplitz_window_kernel(t, 5));
    CHECK(testing_support::oracle_min_eigenvalue(g) >= -1e-9);
  }

  CHECK(error_kind_of([] { szn_contraction(scalar(1.5), 2); }) == ErrorKind::NotContraction);
}

TEST_CASE("hamburger") {
  std::vector<ComplexMatrix> point0(9, scalar(0.0));
  point0[0] = scalar(1.0);
  const MomentResult p0 = hamburger(MomentData{1, 1, 8, point0});
  CHECK(p0.hankel.psd);
  CHECK(p0.radii[0] <= 1e-6);

  const MomentResult p1 = hamburger(MomentData{1, 1, 8, std::vector<ComplexMatrix>(9, scalar(1.0))});
  CHECK(p1.hankel.psd);
  CHECK(p1.radii[0] == doctest::Approx(1.0).epsilon(1e-9));

  const double atoms[] = {-1.0, 1.0};
  const double weights[] = {0.5, 0.5};
  const MomentData sym = moments_of_atoms(atoms, weights, 8);
  CHECK(sym.values[2] == scalar(1.0));
  CHECK(sym.values[3] == scalar(0.0));
  const MomentResult ps = hamburger(sym);
  CHECK(ps.hankel.psd);
  CHECK(ps.radii[0] == doctest::Approx(1.0).epsilon(1e-9));

  // Radius estimates increase with N and never pass the support radius.
  const double a3[] = {-0.4, 0.5, 0.9};
  const double w3[] = {0.2, 0.3, 0.5};
  double previous = 0.0;
  for (std::size_t n : {2u, 4u, 8u, 12u}) {
    const MomentResult r = hamburger(moments_of_atoms(a3, w3, 2 * n));
    CHECK(r.hankel.psd);
    CHECK(r.radii[0] <= 0.9 + 1e-9);
    CHECK(r.radii[0] >= previous - 1e-12);
    previous = r.radii[0];
  }
  CHECK(previous == doctest::Approx(0.9).epsilon(1e-6));

  // Not a moment sequence: gamma_2 < gamma_1^2.
  std::vector<ComplexMatrix> bad{scalar(1.0), scalar(1.0), scalar(0.5)};
  CHECK_FALSE(hamburger(MomentData{1, 1, 2, bad}).hankel.psd);

  CHECK(error_kind_of([] { hamburger(MomentData{1, 1, 3, std::vector<ComplexMatrix>(4, scalar(1.0))}); }) ==
        ErrorKind::OddData);
  CHECK(error_kind_of([] { hamburger(MomentData{1, 1, 4, std::vector<ComplexMatrix>(5, scalar(1.0))}, kDefaultTol, 3); }) ==
        ErrorKind::WindowOverflow);
}

TEST_CASE("multi_hamburger") {
  const std::size_t cap = 4;
  const std::size_t side = cap + 1;
  // Moments of a finitely supported measure on the plane.
  const auto moments = [&](std::vector<std::array<double, 2>> pts, std::vector<double> w) {
    MomentData d{2, 1, cap, {}};
    for (std::size_t i = 0; i < side; ++i)
      for (std::size_t j = 0; j < side; ++j) {
        double v = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) v += w[k] * std::pow(pts[k][0], i) * std::pow(pts[k][1], j);
        d.values.push_back(scalar(v));
      }
    return d;
  };

  const MomentResult origin = multi_hamburger(moments({{0.0, 0.0}}, {1.0}));
  CHECK(origin.hankel.psd);
  CHECK(origin.radii.size() == 2);
  CHECK(origin.radii[0] <= 1e-6);
  CHECK(origin.radii[1] <= 1e-6);

  const MomentResult ones = multi_hamburger(moments({{1.0, 1.0}}, {1.0}));
  CHECK(ones.hankel.psd);
  CHECK(ones.radii[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ones.radii[1] == doctest::Approx(1.0).epsilon(1e-9));

  const MomentResult cross =
      multi_hamburger(moments({{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}, {0.25, 0.25, 0.25, 0.25}));
  CHECK(cross.hankel.psd);
  CHECK(cross.radii[0] <= 1.0 + 1e-9);
  CHECK(cross.radii[1] <= 1.0 + 1e-9);

  CHECK(error_kind_of([] { multi_hamburger(MomentData{2, 1, 3, std::vector<ComplexMatrix>(16, scalar(1.0))}); }) ==
        ErrorKind::OddData);
}

TEST_CASE("subnormality") {
  const ComplexMatrix jordan{{0.0, 1.0}, {0.0, 0.0}};
  const SubnormalityResult j = subnormality_kernel(jordan, 4);
  CHECK_FALSE(j.passes_all);
  REQUIRE(j.failing_window);
  CHECK(*j.failing_window <= 3);
  // Brute-force eigenvalue at the failing window agrees.
  const ComplexMatrix g = testing_support::block_gram(subnormality_window_kernel(jordan, *j.failing_window));
  CHECK(testing_support::oracle_min_eigenvalue(g) == doctest::Approx(j.min_eigenvalue).epsilon(1e-9));

  const double d[] = {0.3, -0.8};
  CHECK(subnormality_kernel(ComplexMatrix::diagonal(std::span<const double>(d)), 5).passes_all);
  CHECK(subnormality_kernel(ComplexMatrix(2, 2), 4).passes_all);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    // Normal: U D U* with complex D.
    const ComplexMatrix u = testing_support::random_unitary(2, rng);
    std::uniform_real_distribution<double> ang(0.0, 6.28);
    const std::vector<Complex> diag{std::polar(0.7, ang(rng)), std::polar(0.4, ang(rng))};
    const ComplexMatrix normal = u * ComplexMatrix::diagonal(std::span<const Complex>(diag)) * u.adjoint();
    CHECK(subnormality_kernel(normal, 4).passes_all);

    // Non-normal: upper triangular with a nonzero corner.
    ComplexMatrix t = random_matrix(2, 2, rng);
    t(1, 0) = 0.0;
    t = (0.9 / testing_support::oracle_op_norm(t)) * t;
    const SubnormalityResult r = subnormality_kernel(t, 4);
    CHECK_FALSE(r.passes_all);
    CHECK(*r.failing_window <= 4);
  }
}
