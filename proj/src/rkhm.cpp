#include "dilkit/rkhm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dilkit/error.hpp"
#include "dilkit/kernels.hpp"

namespace dilkit {

namespace {

constexpr int kBisectionSteps = 60;

void require_base(const ModuleSpace& m, const ModuleElement& c) {
  if (c.column.rows() != m.points() * m.n() || c.column.cols() != m.n())
    throw Error(ErrorKind::BaseMismatch,
                "element has shape " + std::to_string(c.column.rows()) + "x" +
                    std::to_string(c.column.cols()));
}

void require_base(const ModuleSpace& m, const AFunction& f) {
  if (f.size() != m.points() || f.n != m.n())
    throw Error(ErrorKind::BaseMismatch, "function is not over the module's base");
}

// Column stack of F(s)*, so that F = evaluate(c) <=> G c = stacked.
ComplexMatrix stacked_adjoints(const AFunction& f) {
  std::vector<ComplexMatrix> parts;
  parts.reserve(f.size());
  for (const auto& v : f.values) parts.push_back(v.adjoint());
  return vconcat(parts);
}

double kernel_scale(const ComplexMatrix& gram) { return std::max(1.0, gram.frobenius_norm()); }

// Smallest x in [0, hi] with feasible(x), assuming monotone feasibility.
template <class Feasible>
double bisect_lowest(double hi, double rel_tol, Feasible feasible) {
  double lo = 0.0;
  if (feasible(lo)) return 0.0;
  for (int i = 0; i < kBisectionSteps && hi - lo > rel_tol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

AKernel AKernel::from_blocks(std::vector<std::string> base, std::size_t n,
                             std::vector<ComplexMatrix> blocks) {
  if (blocks.size() != base.size() * base.size())
    throw Error(ErrorKind::RaggedBlocks, "kernel needs one block per base pair");
  for (const auto& b : blocks)
    if (b.rows() != n || b.cols() != n)
      throw Error(ErrorKind::RaggedBlocks, "kernel blocks must be n x n");
  return AKernel{std::move(base), n, std::move(blocks)};
}

std::optional<std::size_t> AKernel::index_of(const std::string& label) const {
  const auto it = std::find(base.begin(), base.end(), label);
  if (it == base.end()) return std::nullopt;
  return static_cast<std::size_t>(it - base.begin());
}

ModuleElement ModuleElement::zero(std::size_t points, std::size_t n) {
  return {ComplexMatrix(points * n, n)};
}

ModuleElement ModuleElement::section(std::size_t points, std::size_t t, const ComplexMatrix& b) {
  ModuleElement e = zero(points, b.rows());
  e.column.set_block(t * b.rows(), 0, b);
  return e;
}

ModuleElement ModuleElement::from_blocks(std::span<const ComplexMatrix> blocks) {
  return {vconcat(blocks)};
}

ModuleSpace ModuleSpace::build(AKernel kernel, double tol) {
  const PdVerdict pd = check_positive_definite(kernel, tol);
  if (!pd.positive_definite)
    throw Error(ErrorKind::NotPositiveDefinite,
                "min Gram eigenvalue " + std::to_string(pd.min_eigenvalue), pd.min_eigenvalue);

  ModuleSpace m;
  m.tol_ = tol;
  const std::size_t points = kernel.size();
  kernels::assemble_blocks(
      points, kernel.n,
      [&](std::size_t i, std::size_t j) -> const ComplexMatrix& { return kernel(i, j); },
      m.gram_);
  m.kernel_ = std::move(kernel);
  m.eig_ = hermitian_eig(m.gram_, tol * 10.0);
  m.rank_ = numerical_rank(m.eig_.values, tol);

  const std::size_t dim = m.gram_.rows();
  const std::size_t first = dim - m.rank_;
  m.reducer_ = ComplexMatrix(m.rank_, dim);
  m.pinv_ = ComplexMatrix(dim, m.rank_);
  for (std::size_t k = 0; k < m.rank_; ++k) {
    const double lambda = m.eig_.values[first + k];
    const double root = std::sqrt(lambda);
    for (std::size_t i = 0; i < dim; ++i) {
      const Complex u = m.eig_.vectors(i, first + k);
      m.reducer_(k, i) = root * std::conj(u);
      m.pinv_(i, k) = u / root;
    }
  }
  return m;
}

ComplexMatrix ModuleSpace::coordinates(const ModuleElement& c) const {
  require_base(*this, c);
  return reducer_ * c.column;
}

ComplexMatrix ModuleSpace::section_coordinates(std::size_t s) const {
  if (s >= points()) throw Error(ErrorKind::UnknownPoint, "index " + std::to_string(s));
  return reducer_.block(0, s * n(), rank_, n());
}

AKernel kernel_from_omega(const FiniteStarSemigroup& s, const AFunction& omega) {
  if (omega.size() != s.size())
    throw Error(ErrorKind::BaseMismatch, "omega must be defined on every element");
  std::vector<ComplexMatrix> blocks;
  blocks.reserve(s.size() * s.size());
  for (Element a = 0; a < s.size(); ++a)
    for (Element b = 0; b < s.size(); ++b) blocks.push_back(omega(s.mul(s.star(a), b)));
  return AKernel::from_blocks(s.labels(), omega.n, std::move(blocks));
}

AFunction make_afunction(const FiniteStarSemigroup& s, std::vector<ComplexMatrix> values) {
  if (values.size() != s.size())
    throw Error(ErrorKind::BaseMismatch, "one value per semigroup element required");
  const std::size_t n = values.empty() ? 0 : values.front().rows();
  for (const auto& v : values)
    if (v.rows() != n || v.cols() != n) throw Error(ErrorKind::RaggedBlocks, "values must be n x n");
  return AFunction{s.labels(), n, std::move(values)};
}

double check_hermitian_symmetry(const AKernel& kernel) {
  double worst = 0.0;
  for (std::size_t s = 0; s < kernel.size(); ++s)
    for (std::size_t t = s; t < kernel.size(); ++t)
      worst = std::max(worst, op_norm(kernel(s, t) - kernel(t, s).adjoint()));
  return worst;
}

PdVerdict check_positive_definite(const AKernel& kernel, double tol) {
  ComplexMatrix gram;
  kernels::assemble_blocks(
      kernel.size(), kernel.n,
      [&](std::size_t i, std::size_t j) -> const ComplexMatrix& { return kernel(i, j); }, gram);
  const double deviation = check_hermitian_symmetry(kernel);
  if (deviation > tol * kernel_scale(gram))
    throw Error(ErrorKind::NonHermitianKernel, "deviation " + std::to_string(deviation),
                deviation);
  const PsdVerdict v = is_psd(hermitian_eig(gram, tol * 10.0), tol);
  PdVerdict out;
  out.positive_definite = v.psd;
  out.min_eigenvalue = v.min_eigenvalue;
  out.witness = ModuleElement{v.witness};
  return out;
}

ModuleSpace build_module(AKernel kernel, double tol) { return ModuleSpace::build(std::move(kernel), tol); }

ComplexMatrix inner_product(const ModuleSpace& m, const ModuleElement& c, const ModuleElement& d) {
  require_base(m, c);
  require_base(m, d);
  return adjoint_times(c.column, m.gram() * d.column);
}

ComplexMatrix evaluate(const ModuleSpace& m, const ModuleElement& c, std::size_t s) {
  require_base(m, c);
  if (s >= m.points()) throw Error(ErrorKind::UnknownPoint, "index " + std::to_string(s));
  const std::size_t n = m.n();
  return adjoint_times(c.column, m.gram().block(0, s * n, m.points() * n, n));
}

AFunction evaluate_all(const ModuleSpace& m, const ModuleElement& c) {
  require_base(m, c);
  const ComplexMatrix row = adjoint_times(c.column, m.gram());
  AFunction f{m.kernel().base, m.n(), {}};
  for (std::size_t s = 0; s < m.points(); ++s)
    f.values.push_back(row.block(0, s * m.n(), m.n(), m.n()));
  return f;
}

MembershipResult membership(const ModuleSpace& m, const AFunction& f, double tol) {
  require_base(m, f);
  const ComplexMatrix target = stacked_adjoints(f);
  const ComplexMatrix reduced = adjoint_times(m.pseudo_inverse(), target);  // R+* F
  MembershipResult out;
  out.representative = ModuleElement{m.pseudo_inverse() * reduced};
  out.residual = distance(m.gram() * out.representative.column, target);
  out.in_module = out.residual <= tol * (1.0 + target.frobenius_norm());
  out.norm = op_norm(reduced);
  return out;
}

DominationResult domination_test(const ModuleSpace& m, const AFunction& f, double tol) {
  require_base(m, f);
  const ComplexMatrix target = stacked_adjoints(f);
  const ComplexMatrix reduced = adjoint_times(m.pseudo_inverse(), target);
  DominationResult out;
  // Component of the stacked values outside range(G).
  out.range_residual = distance(m.reducer().adjoint() * reduced, target);
  if (out.range_residual > tol * (1.0 + target.frobenius_norm())) return out;
  out.finite = true;
  if (m.rank() == 0) return out;
  const ComplexMatrix outer = reduced * reduced.adjoint();
  const double hi = std::pow(reduced.frobenius_norm(), 2) + 1.0;
  const ComplexMatrix id = ComplexMatrix::identity(m.rank());
  out.lambda = bisect_lowest(hi, tol, [&](double lambda) {
    return is_psd(lambda * id - outer, tol).psd;
  });
  return out;
}

bool literal_domination(const ModuleSpace& m, const AFunction& f, double tol) {
  require_base(m, f);
  const ComplexMatrix target = stacked_adjoints(f);
  return is_psd(m.gram() - target * target.adjoint(), tol).psd;
}

double kolmogorov_check(const ModuleSpace& m, std::span<const ComplexMatrix> samples) {
  double worst = 0.0;
  for (std::size_t s = 0; s < m.points(); ++s) {
    const ComplexMatrix rs = m.section_coordinates(s);
    for (std::size_t t = 0; t < m.points(); ++t) {
      const ComplexMatrix rt = m.section_coordinates(t);
      const ComplexMatrix reduced_form = adjoint_times(rs, rt);
      const ComplexMatrix& k = m.kernel()(s, t);
      for (const auto& a : samples)
        for (const auto& b : samples)
          worst = std::max(worst, distance(adjoint_times(a, reduced_form * b),
                                           adjoint_times(a, k * b)));
    }
  }
  return worst;
}

AKernel module_as_kernel(const ModuleSpace& m, std::span<const ModuleElement> elements) {
  std::vector<std::string> base;
  std::vector<ComplexMatrix> coords;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    base.push_back("xi" + std::to_string(i));
    coords.push_back(m.coordinates(elements[i]));
  }
  std::vector<ComplexMatrix> blocks;
  for (const auto& x : coords)
    for (const auto& y : coords) blocks.push_back(adjoint_times(x, y));
  return AKernel::from_blocks(std::move(base), m.n(), std::move(blocks));
}

std::vector<ComplexMatrix> sample_matrices(std::size_t n, std::size_t extra, unsigned seed) {
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ComplexMatrix e(n, n);
      e(i, j) = 1.0;
      out.push_back(std::move(e));
    }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t k = 0; k < extra; ++k) {
    ComplexMatrix a(n, n);
    for (auto& z : a.data()) z = {gauss(rng), gauss(rng)};
    a *= 1.0 / a.frobenius_norm();
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace dilkit
