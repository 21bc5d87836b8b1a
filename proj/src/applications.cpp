#include "dilkit/applications.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dilkit/error.hpp"
#include "dilkit/kernels.hpp"

namespace dilkit {

namespace {

ComplexMatrix unit_matrix(std::size_t m, std::size_t i, std::size_t j) {
  ComplexMatrix e(m, m);
  e(i, j) = 1.0;
  return e;
}

ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix a(rows, cols);
  for (auto& z : a.data()) z = {gauss(rng), gauss(rng)};
  return a;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix matrix_power(const ComplexMatrix& t, std::size_t k) {
  ComplexMatrix out = ComplexMatrix::identity(t.rows());
  for (std::size_t i = 0; i < k; ++i) out = out * t;
  return out;
}

// T^k for k >= 0 and T*^|k| for k < 0.
ComplexMatrix signed_power(const ComplexMatrix& t, long k) {
  return k >= 0 ? matrix_power(t, static_cast<std::size_t>(k))
                : matrix_power(t.adjoint(), static_cast<std::size_t>(-k));
}

std::size_t ipow(std::size_t base, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

// Multi-indices of {0..w}^d in row-major order.
std::vector<std::vector<std::size_t>> grid_points(std::size_t d, std::size_t w) {
  std::vector<std::vector<std::size_t>> out;
  const std::size_t count = ipow(w + 1, d);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::vector<std::size_t> k(d);
    std::size_t rest = flat;
    for (std::size_t a = d; a-- > 0;) {
      k[a] = rest % (w + 1);
      rest /= w + 1;
    }
    out.push_back(std::move(k));
  }
  return out;
}

ComplexMatrix gram_of(const MomentData& data, const std::vector<std::vector<std::size_t>>& pts,
                      std::optional<std::size_t> shift_axis) {
  ComplexMatrix g;
  std::vector<ComplexMatrix> blocks(pts.size() * pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      std::vector<std::size_t> k(data.d);
      for (std::size_t a = 0; a < data.d; ++a) k[a] = pts[i][a] + pts[j][a];
      if (shift_axis) k[*shift_axis] += 2;
      blocks[i * pts.size() + j] = data.at(k);
    }
  kernels::assemble_blocks(
      pts.size(), data.n,
      [&](std::size_t i, std::size_t j) -> const ComplexMatrix& { return blocks[i * pts.size() + j]; },
      g);
  return g;
}

// sqrt of the largest generalized Rayleigh quotient of `shifted` against
// `base` on range(base).
double radius_estimate(const ComplexMatrix& base, const ComplexMatrix& shifted, double tol) {
  const HermitianEig eig = hermitian_eig(hermitian_part(base), tol * 10.0);
  const std::size_t rank = numerical_rank(eig.values, tol);
  if (rank == 0) return 0.0;
  const std::size_t dim = base.rows();
  ComplexMatrix q(dim, rank);
  for (std::size_t k = 0; k < rank; ++k) {
    const std::size_t col = dim - rank + k;
    const double inv_root = 1.0 / std::sqrt(eig.values[col]);
    for (std::size_t i = 0; i < dim; ++i) q(i, k) = eig.vectors(i, col) * inv_root;
  }
  const ComplexMatrix quotient = hermitian_part(adjoint_times(q, shifted * q));
  const double top = hermitian_eig(quotient, tol * 10.0).values.back();
  return std::sqrt(std::max(top, 0.0));
}

void check_moment_table(const MomentData& data, std::size_t w) {
  if (data.d == 0 || data.n == 0)
    throw Error(ErrorKind::OddData, "moment data needs d >= 1 and n >= 1");
  if (data.cap % 2 != 0)
    throw Error(ErrorKind::OddData, "degree cap " + std::to_string(data.cap) + " is odd");
  if (data.values.size() != ipow(data.cap + 1, data.d))
    throw Error(ErrorKind::OddData, "expected " + std::to_string(ipow(data.cap + 1, data.d)) +
                                        " moments, got " + std::to_string(data.values.size()));
  for (const auto& v : data.values)
    if (v.rows() != data.n || v.cols() != data.n)
      throw Error(ErrorKind::OddData, "moment values must be n x n");
  if (2 * w > data.cap)
    throw Error(ErrorKind::WindowOverflow,
                "window " + std::to_string(w) + " needs degree " + std::to_string(2 * w));
  if (w == 0) throw Error(ErrorKind::WindowOverflow, "window must be at least 1");
}

MomentResult moment_problem(const MomentData& data, double tol, std::optional<std::size_t> window) {
  const std::size_t w = window.value_or(data.cap / 2);
  check_moment_table(data, w);
  const auto pts = grid_points(data.d, w);
  MomentResult out;
  out.hankel = is_psd(hermitian_part(gram_of(data, pts, std::nullopt)), tol);

  // Axis a: points with k_a <= w - 1 so that k + l + 2 e_a stays in the table.
  for (std::size_t a = 0; a < data.d; ++a) {
    std::vector<std::vector<std::size_t>> inner;
    for (const auto& p : pts)
      if (p[a] + 1 <= w) inner.push_back(p);
    out.radii.push_back(radius_estimate(gram_of(data, inner, std::nullopt),
                                        gram_of(data, inner, a), tol));
  }
  return out;
}

}  // namespace

// ---- completely positive maps -------------------------------------------

CPMap CPMap::from_action(std::size_t m, std::size_t n, std::vector<ComplexMatrix> action) {
  if (action.size() != m * m)
    throw Error(ErrorKind::ShapeError, "action needs m^2 = " + std::to_string(m * m) + " entries");
  for (const auto& a : action)
    if (a.rows() != n || a.cols() != n)
      throw Error(ErrorKind::ShapeError, "action values must be n x n");
  return CPMap{m, n, std::move(action)};
}

CPMap CPMap::from_kraus(std::span<const ComplexMatrix> kraus) {
  if (kraus.empty()) throw Error(ErrorKind::ShapeError, "at least one Kraus operator required");
  const std::size_t m = kraus.front().rows();
  const std::size_t n = kraus.front().cols();
  std::vector<ComplexMatrix> action;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      ComplexMatrix v(n, n);
      for (const auto& a : kraus) {
        if (a.rows() != m || a.cols() != n)
          throw Error(ErrorKind::ShapeError, "Kraus operators must share one shape");
        v += adjoint_times(a, unit_matrix(m, i, j) * a);
      }
      action.push_back(std::move(v));
    }
  return CPMap{m, n, std::move(action)};
}

ComplexMatrix CPMap::choi() const {
  ComplexMatrix out(m * n, m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out.set_block(i * n, j * n, (*this)(i, j));
  return out;
}

ComplexMatrix CPMap::apply(const ComplexMatrix& x) const {
  if (x.rows() != m || x.cols() != m) throw Error(ErrorKind::ShapeMismatch, "input must be m x m");
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) out += x(i, j) * (*this)(i, j);
  return out;
}

CPMap identity_channel(std::size_t m) {
  std::vector<ComplexMatrix> action;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) action.push_back(unit_matrix(m, i, j));
  return CPMap{m, m, std::move(action)};
}

CPMap transpose_map(std::size_t m) {
  std::vector<ComplexMatrix> action;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) action.push_back(unit_matrix(m, j, i));
  return CPMap{m, m, std::move(action)};
}

CPMap depolarizing_channel(std::size_t m, double p) {
  std::vector<ComplexMatrix> action;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      ComplexMatrix v = p * unit_matrix(m, i, j);
      if (i == j) v += ((1.0 - p) / static_cast<double>(m)) * ComplexMatrix::identity(m);
      action.push_back(std::move(v));
    }
  return CPMap{m, m, std::move(action)};
}

AFunction matrix_unit_omega(const CPMap& map, const FiniteStarSemigroup& s) {
  if (s.size() != 1 + map.m * map.m)
    throw Error(ErrorKind::BaseMismatch, "semigroup is not the matrix-unit semigroup of M_m");
  std::vector<ComplexMatrix> values(s.size(), ComplexMatrix(map.n, map.n));
  for (std::size_t i = 0; i < map.m; ++i)
    for (std::size_t j = 0; j < map.m; ++j) values[builtin::matrix_unit(map.m, i, j)] = map(i, j);
  return make_afunction(s, std::move(values));
}

CPCheck cp_check(const CPMap& map, double tol) {
  CPCheck out;
  const ComplexMatrix choi = map.choi();
  out.hermitian = distance(choi, choi.adjoint()) <= tol * std::max(1.0, choi.frobenius_norm());
  const PsdVerdict v = is_psd(hermitian_part(choi), tol);
  out.min_choi_eigenvalue = v.min_eigenvalue;
  out.witness = v.witness;
  out.completely_positive = out.hermitian && v.psd;

  const auto s = builtin::matrix_unit_semigroup(map.m);
  try {
    const PdVerdict pd = check_positive_definite(kernel_from_omega(s, matrix_unit_omega(map, s)), tol);
    out.kernel_pd = pd.positive_definite;
    out.kernel_min_eigenvalue = pd.min_eigenvalue;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonHermitianKernel) throw;
    out.kernel_pd = false;
    out.kernel_min_eigenvalue = out.min_choi_eigenvalue;
  }
  return out;
}

bool StinespringResult::rank_consistent() const { return module_rank == input_dim * choi_rank; }

StinespringResult stinespring(const CPMap& map, double tol, unsigned seed, std::size_t trials) {
  const CPCheck cp = cp_check(map, tol);
  if (!cp.completely_positive)
    throw Error(ErrorKind::NotCP, "Choi min eigenvalue " + std::to_string(cp.min_choi_eigenvalue),
                cp.min_choi_eigenvalue);

  const auto s = builtin::matrix_unit_semigroup(map.m);
  const AFunction omega = matrix_unit_omega(map, s);
  StinespringResult out;
  DilationOptions options;
  options.tol = tol;
  options.route = DilationRoute::extension;
  options.seed = seed;
  out.framework = build_dilation(s, omega, options);
  out.module_rank = out.framework.module.rank();
  out.input_dim = map.m;

  // Kraus operators from the Choi eigendecomposition: A_k(i, p) = sqrt(l_k) conj(v_k(i n + p)).
  const HermitianEig eig = hermitian_eig(hermitian_part(map.choi()), tol * 10.0);
  out.choi_rank = numerical_rank(eig.values, tol);
  const std::size_t dim = map.m * map.n;
  for (std::size_t k = dim - out.choi_rank; k < dim; ++k) {
    const double root = std::sqrt(eig.values[k]);
    ComplexMatrix a(map.m, map.n);
    for (std::size_t i = 0; i < map.m; ++i)
      for (std::size_t p = 0; p < map.n; ++p)
        a(i, p) = root * std::conj(eig.vectors(i * map.n + p, k));
    out.kraus.push_back(std::move(a));
  }

  // V* Phi(e_ij) V, then compare on random inputs.
  const auto& tr = out.framework;
  std::vector<ComplexMatrix> realized;
  for (std::size_t i = 0; i < map.m; ++i)
    for (std::size_t j = 0; j < map.m; ++j)
      realized.push_back(
          tr.v_adjoint * (tr.phi[builtin::matrix_unit(map.m, i, j)].matrix * tr.v));
  std::mt19937_64 rng(seed);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const ComplexMatrix x = random_matrix(map.m, map.m, rng);
    const ComplexMatrix expected = map.apply(x);
    ComplexMatrix via_framework(map.n, map.n);
    for (std::size_t i = 0; i < map.m; ++i)
      for (std::size_t j = 0; j < map.m; ++j) via_framework += x(i, j) * realized[i * map.m + j];
    ComplexMatrix via_kraus(map.n, map.n);
    for (const auto& a : out.kraus) via_kraus += adjoint_times(a, x * a);
    out.framework_error = std::max(out.framework_error, distance(expected, via_framework));
    out.kraus_error = std::max(out.kraus_error, distance(expected, via_kraus));
    out.route_disagreement = std::max(out.route_disagreement, distance(via_framework, via_kraus));
  }
  return out;
}

// ---- POVMs ----------------------------------------------------------------

POVM trine_povm() {
  POVM p;
  p.d = 2;
  for (int x = 0; x < 3; ++x) {
    const double angle = 2.0 * std::numbers::pi * x / 3.0;
    const ComplexMatrix psi{{std::cos(angle)}, {std::sin(angle)}};
    p.effects.push_back((2.0 / 3.0) * (psi * psi.adjoint()));
  }
  return p;
}

AFunction povm_omega(const POVM& povm, const FiniteStarSemigroup& s) {
  const std::size_t m = povm.effects.size();
  if (s.size() != (std::size_t{1} << m))
    throw Error(ErrorKind::BaseMismatch, "semigroup is not the subset lattice of the outcomes");
  std::vector<ComplexMatrix> values;
  for (std::size_t mask = 0; mask < s.size(); ++mask) {
    ComplexMatrix v(povm.d, povm.d);
    for (std::size_t x = 0; x < m; ++x)
      if (mask & (std::size_t{1} << x)) v += povm.effects[x];
    values.push_back(std::move(v));
  }
  return make_afunction(s, std::move(values));
}

NaimarkResult naimark(const POVM& povm, double tol) {
  const std::size_t m = povm.effects.size();
  const std::size_t d = povm.d;
  if (m == 0 || m > 16) throw Error(ErrorKind::NotPOVM, "need 1 to 16 outcomes");
  ComplexMatrix total(d, d);
  std::vector<ComplexMatrix> roots;  // rank_x x d blocks with B* B = F_x
  for (std::size_t x = 0; x < m; ++x) {
    const ComplexMatrix& f = povm.effects[x];
    if (f.rows() != d || f.cols() != d) throw Error(ErrorKind::NotPOVM, "effects must be d x d");
    if (distance(f, f.adjoint()) > tol * std::max(1.0, f.frobenius_norm()))
      throw Error(ErrorKind::NotPOVM, "effect " + std::to_string(x) + " is not Hermitian");
    const HermitianEig eig = hermitian_eig(hermitian_part(f), tol * 10.0);
    const PsdVerdict v = is_psd(eig, tol);
    if (!v.psd)
      throw Error(ErrorKind::NotPOVM, "effect " + std::to_string(x) + " has negative eigenvalue",
                  v.min_eigenvalue);
    const std::size_t rank = numerical_rank(eig.values, tol);
    ComplexMatrix b(rank, d);
    for (std::size_t k = 0; k < rank; ++k) {
      const std::size_t col = d - rank + k;
      const double root = std::sqrt(eig.values[col]);
      for (std::size_t i = 0; i < d; ++i) b(k, i) = root * std::conj(eig.vectors(i, col));
    }
    roots.push_back(std::move(b));
    total += f;
  }
  const double completeness = distance(total, ComplexMatrix::identity(d));
  if (completeness > tol * std::max(1.0, static_cast<double>(d)))
    throw Error(ErrorKind::NotPOVM, "effects do not sum to the identity", completeness);

  const auto s = builtin::intersection_semigroup(m);
  const AFunction omega = povm_omega(povm, s);
  NaimarkResult out;
  DilationOptions options;
  options.tol = tol;
  out.framework = build_dilation(s, omega, options);
  const auto& tr = out.framework;
  out.framework_dimension = tr.module.rank();

  const std::size_t subsets = s.size();
  for (std::size_t a = 0; a < subsets; ++a) {
    const ComplexMatrix& p = tr.phi[a].matrix;
    out.projection_error =
        std::max(out.projection_error, distance(p * p, p) + distance(p, p.adjoint()));
    out.reconstruction_error =
        std::max(out.reconstruction_error, distance(omega(a), tr.v_adjoint * (p * tr.v)));
    for (std::size_t b = 0; b < subsets; ++b) {
      out.multiplicativity_error =
          std::max(out.multiplicativity_error, distance(tr.phi[a & b].matrix, p * tr.phi[b].matrix));
      if ((a & b) == 0)
        out.additivity_error = std::max(out.additivity_error,
                                        distance(tr.phi[a | b].matrix, p + tr.phi[b].matrix));
    }
  }
  out.isometry_error = distance(tr.v_adjoint * tr.v, ComplexMatrix::identity(d));

  // Block oracle: V_o stacks the roots, P_Delta keeps the blocks in Delta.
  const ComplexMatrix vo = vconcat(roots);
  out.oracle_dimension = vo.rows();
  for (std::size_t a = 0; a < subsets; ++a) {
    ComplexMatrix proj(vo.rows(), vo.rows());
    std::size_t offset = 0;
    for (std::size_t x = 0; x < m; ++x) {
      if (a & (std::size_t{1} << x))
        for (std::size_t k = 0; k < roots[x].rows(); ++k) proj(offset + k, offset + k) = 1.0;
      offset += roots[x].rows();
    }
    out.oracle_error = std::max(out.oracle_error, distance(omega(a), adjoint_times(vo, proj * vo)));
  }
  return out;
}

// ---- contractions ---------------------------------------------------------

AKernel toeplitz_window_kernel(const ComplexMatrix& t, std::size_t window) {
  const long w = static_cast<long>(window);
  std::vector<std::string> base;
  for (long i = -w; i <= w; ++i) base.push_back(std::to_string(i));
  std::vector<ComplexMatrix> powers;
  for (long k = -2 * w; k <= 2 * w; ++k) powers.push_back(signed_power(t, k));
  std::vector<ComplexMatrix> blocks;
  for (long i = -w; i <= w; ++i)
    for (long j = -w; j <= w; ++j) blocks.push_back(powers[static_cast<std::size_t>(j - i + 2 * w)]);
  return AKernel::from_blocks(std::move(base), t.rows(), std::move(blocks));
}

ContractionResult szn_contraction(const ComplexMatrix& t, std::size_t window, double tol) {
  if (!t.is_square()) throw Error(ErrorKind::NonSquare, "T must be square");
  const double norm = op_norm(t);
  if (norm > 1.0 + tol) throw Error(ErrorKind::NotContraction, "||T|| = " + std::to_string(norm), norm);
  if (window == 0) throw Error(ErrorKind::BadParams, "window must be at least 1");

  const std::size_t d = t.rows();
  const ComplexMatrix id = ComplexMatrix::identity(d);
  const ComplexMatrix dt = psd_sqrt(hermitian_part(id - adjoint_times(t, t)), tol);
  const ComplexMatrix dts = psd_sqrt(hermitian_part(id - t * t.adjoint()), tol);

  // Slots 0..2N; slot 0 is H. Column 0 = (T, D_T, 0...), slot j -> j+1 in
  // the middle, last column = (D_T*, -T*, 0...).
  const std::size_t slots = 2 * window + 1;
  ContractionResult out;
  out.u = ComplexMatrix(d * slots, d * slots);
  out.u.set_block(0, 0, t);
  out.u.set_block(d, 0, dt);
  for (std::size_t j = 1; j + 1 < slots; ++j) out.u.set_block((j + 1) * d, j * d, id);
  out.u.set_block(0, (slots - 1) * d, dts);
  out.u.set_block(d, (slots - 1) * d, -t.adjoint());

  const ComplexMatrix big_id = ComplexMatrix::identity(d * slots);
  out.unitarity_error = std::max(distance(adjoint_times(out.u, out.u), big_id),
                                 distance(out.u * out.u.adjoint(), big_id));

  ComplexMatrix up = big_id;
  for (std::size_t k = 0; k <= window; ++k) {
    const ComplexMatrix compressed = up.block(0, 0, d, d);
    const ComplexMatrix tk = matrix_power(t, k);
    out.compression_error = std::max(out.compression_error, distance(compressed, tk));
    out.compression_error =
        std::max(out.compression_error, distance(compressed.adjoint(), tk.adjoint()));
    up = up * out.u;
  }
  // Negative powers through U*.
  ComplexMatrix down = big_id;
  const ComplexMatrix ustar = out.u.adjoint();
  for (std::size_t k = 1; k <= window; ++k) {
    down = down * ustar;
    out.compression_error = std::max(
        out.compression_error, distance(down.block(0, 0, d, d), matrix_power(t.adjoint(), k)));
  }
  out.window = check_positive_definite(toeplitz_window_kernel(t, window), tol);
  return out;
}

// ---- moments --------------------------------------------------------------

const ComplexMatrix& MomentData::at(std::span<const std::size_t> k) const {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < d; ++a) {
    if (k[a] > cap) throw Error(ErrorKind::WindowOverflow, "moment index beyond the table");
    flat = flat * (cap + 1) + k[a];
  }
  return values[flat];
}

MomentData moments_of_atoms(std::span<const double> atoms, std::span<const double> weights,
                            std::size_t cap) {
  if (atoms.size() != weights.size())
    throw Error(ErrorKind::ShapeError, "one weight per atom required");
  MomentData data;
  data.cap = cap;
  for (std::size_t k = 0; k <= cap; ++k) {
    double g = 0.0;
    for (std::size_t j = 0; j < atoms.size(); ++j)
      g += weights[j] * std::pow(atoms[j], static_cast<double>(k));
    data.values.push_back(ComplexMatrix{{g}});
  }
  return data;
}

MomentResult hamburger(const MomentData& data, double tol, std::optional<std::size_t> window) {
  if (data.d != 1) throw Error(ErrorKind::OddData, "hamburger takes one-dimensional moments");
  return moment_problem(data, tol, window);
}

MomentResult multi_hamburger(const MomentData& data, double tol,
                             std::optional<std::size_t> window) {
  return moment_problem(data, tol, window);
}

// ---- subnormality ---------------------------------------------------------

AKernel subnormality_window_kernel(const ComplexMatrix& t, std::size_t w) {
  std::vector<std::array<std::size_t, 2>> pts;
  std::vector<std::string> base;
  for (std::size_t p = 0; p <= w; ++p)
    for (std::size_t q = 0; p + q <= w; ++q) {
      pts.push_back({p, q});
      base.push_back("(" + std::to_string(p) + "," + std::to_string(q) + ")");
    }
  std::vector<ComplexMatrix> pow_t;
  std::vector<ComplexMatrix> pow_ts;
  for (std::size_t k = 0; k <= 2 * w; ++k) {
    pow_t.push_back(matrix_power(t, k));
    pow_ts.push_back(matrix_power(t.adjoint(), k));
  }
  std::vector<ComplexMatrix> blocks;
  for (const auto& x : pts)
    for (const auto& y : pts) blocks.push_back(pow_ts[x[1] + y[0]] * pow_t[x[0] + y[1]]);
  return AKernel::from_blocks(std::move(base), t.rows(), std::move(blocks));
}

SubnormalityResult subnormality_kernel(const ComplexMatrix& t, std::size_t window, double tol) {
  if (!t.is_square()) throw Error(ErrorKind::NonSquare, "T must be square");
  SubnormalityResult out;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t w = 1; w <= window; ++w) {
    const PdVerdict pd = check_positive_definite(subnormality_window_kernel(t, w), tol);
    out.window_min_eigenvalues.push_back(pd.min_eigenvalue);
    if (!pd.positive_definite) {
      out.passes_all = false;
      out.failing_window = w;
      out.min_eigenvalue = pd.min_eigenvalue;
      return out;
    }
    out.min_eigenvalue = std::min(out.min_eigenvalue, pd.min_eigenvalue);
  }
  if (window == 0) out.min_eigenvalue = 0.0;
  return out;
}

}  // namespace dilkit
