#include "dilkit/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "dilkit/error.hpp"
#include "dilkit/kernels.hpp"

namespace dilkit {

namespace {

constexpr int kBisectionSteps = 60;

ComplexMatrix stacked_adjoints(const AFunction& f) {
  std::vector<ComplexMatrix> parts;
  parts.reserve(f.size());
  for (const auto& v : f.values) parts.push_back(v.adjoint());
  return vconcat(parts);
}

double omega_scale(const AFunction& omega) {
  double s = 1.0;
  for (const auto& v : omega.values) s = std::max(s, v.frobenius_norm());
  return s;
}

void require_semigroup_base(const ModuleSpace& m, const FiniteStarSemigroup& s) {
  if (m.points() != s.size())
    throw Error(ErrorKind::BaseMismatch, "module base is not the semigroup's element set");
}

// R P_s: block column t of R moved from position t to s*t.
ComplexMatrix shifted_reducer(const ModuleSpace& m, const FiniteStarSemigroup& s, Element e) {
  const std::size_t n = m.n();
  ComplexMatrix out(m.rank(), m.points() * n);
  for (Element t = 0; t < s.size(); ++t)
    out.set_block(0, t * n, m.section_coordinates(s.mul(e, t)));
  return out;
}

// First N n columns of R+ J, i.e. the reducer of the larger module read on
// the elements of the smaller base.
ComplexMatrix embedding(const ModuleSpace& small, const ModuleSpace& big) {
  const ComplexMatrix rj = big.reducer().block(0, 0, big.rank(), small.points() * small.n());
  return rj * small.pseudo_inverse();
}

ComplexMatrix unit_column(std::size_t dim, std::size_t n, std::size_t j, const ComplexMatrix& q) {
  ComplexMatrix c(dim, n);
  double norm = 0.0;
  for (std::size_t i = 0; i < dim; ++i) norm += std::norm(q(i, j));
  norm = std::sqrt(norm);
  for (std::size_t i = 0; i < dim; ++i) c(i, 0) = norm > 0.0 ? q(i, j) / norm : Complex{};
  return c;
}

std::vector<TranslationOperator> checked_table(const ModuleSpace& m, const FiniteStarSemigroup& s,
                                               ErrorKind kind) {
  auto phi = translation_table(m, s);
  for (const auto& p : phi)
    if (!p.well_defined)
      throw Error(kind, "Phi(" + s.label(p.s) + ") leaks null elements", p.null_leak);
  return phi;
}

double reconstruction(const FiniteStarSemigroup& s, const AFunction& omega,
                      std::span<const TranslationOperator> phi, const ComplexMatrix& v) {
  double worst = 0.0;
  for (Element e = 0; e < s.size(); ++e)
    worst = std::max(worst, distance(omega(e), adjoint_times(v, phi[e].matrix * v)));
  return worst;
}

}  // namespace

TranslationOperator translation_operator(const ModuleSpace& m, const FiniteStarSemigroup& s,
                                         Element element) {
  require_semigroup_base(m, s);
  if (element >= s.size()) throw Error(ErrorKind::UnknownPoint, "index " + std::to_string(element));
  TranslationOperator out;
  out.s = element;
  const ComplexMatrix rp = shifted_reducer(m, s, element);
  out.matrix = rp * m.pseudo_inverse();
  out.adjoint_matrix = out.matrix.adjoint();

  // rp (I - R+ R): what the shift does to the null space of G. Compared on
  // the scale of the Gram form, where round-off sits at eps rather than
  // sqrt(eps).
  const ComplexMatrix leak = rp - out.matrix * m.reducer();
  const double total = std::pow(rp.frobenius_norm(), 2);
  const double leaked = std::pow(leak.frobenius_norm(), 2);
  out.null_leak = total > 0.0 ? leaked / total : 0.0;
  out.well_defined = out.null_leak <= m.tol();

  const std::size_t dim = m.points() * m.n();
  if (out.well_defined) {
    out.norm = op_norm(out.matrix);
    out.witness = ModuleElement::zero(m.points(), m.n());
  } else {
    std::size_t best = 0;
    double best_norm = -1.0;
    for (std::size_t j = 0; j < dim; ++j) {
      double col = 0.0;
      for (std::size_t i = 0; i < leak.rows(); ++i) col += std::norm(leak(i, j));
      if (col > best_norm) {
        best_norm = col;
        best = j;
      }
    }
    const ComplexMatrix q = ComplexMatrix::identity(dim) - m.pseudo_inverse() * m.reducer();
    out.witness = ModuleElement{unit_column(dim, m.n(), best, q)};
    out.norm = std::numeric_limits<double>::infinity();
  }
  return out;
}

std::vector<TranslationOperator> translation_table(const ModuleSpace& m,
                                                   const FiniteStarSemigroup& s, bool parallel) {
  require_semigroup_base(m, s);
  std::vector<TranslationOperator> out(s.size());
  kernels::for_each_index(s.size(), parallel,
                          [&](std::size_t e) { out[e] = translation_operator(m, s, e); });
  return out;
}

BoundednessReport boundedness_report(const ModuleSpace& m, const FiniteStarSemigroup& s,
                                     const AFunction& omega, const BoundednessOptions& options) {
  require_semigroup_base(m, s);
  const auto phi = checked_table(m, s, ErrorKind::IllDefinedTranslation);
  const std::size_t size = s.size();
  const std::size_t n = m.n();

  BoundednessReport rep;
  rep.c_a.resize(size);
  for (Element e = 0; e < size; ++e) rep.c_a[e] = phi[e].norm * phi[e].norm;

  // Condition (b) on samples: ratios ||a* w(t*s*st) a|| / ||a* w(t*t) a||.
  const auto samples = sample_matrices(n, options.sample_budget, options.seed);
  rep.samples = samples.size();
  const std::size_t ns = samples.size();
  std::vector<double> den(size * ns);
  for (Element t = 0; t < size; ++t)
    for (std::size_t a = 0; a < ns; ++a)
      den[t * ns + a] =
          op_norm(adjoint_times(samples[a], omega(s.mul(s.star(t), t)) * samples[a]));
  const double den_floor = 1e-6 * *std::max_element(den.begin(), den.end());

  std::vector<double> num(size * size * ns);
  kernels::for_each_index(size, true, [&](std::size_t e) {
    const Element ss = s.mul(s.star(e), e);
    for (Element t = 0; t < size; ++t) {
      const ComplexMatrix& w = omega(s.mul(s.mul(s.star(t), ss), t));
      for (std::size_t a = 0; a < ns; ++a)
        num[(e * size + t) * ns + a] = op_norm(adjoint_times(samples[a], w * samples[a]));
    }
  });

  rep.c_b.assign(size, 0.0);
  for (Element e = 0; e < size; ++e)
    for (Element t = 0; t < size; ++t)
      for (std::size_t a = 0; a < ns; ++a) {
        const double d = den[t * ns + a];
        if (d <= den_floor || d == 0.0) continue;
        rep.c_b[e] = std::max(rep.c_b[e], num[(e * size + t) * ns + a] / d);
      }

  for (Element a = 0; a < size; ++a)
    for (Element b = 0; b < size; ++b)
      if (rep.c_b[s.mul(a, b)] >
          rep.c_b[a] * rep.c_b[b] * (1.0 + options.submult_rel_tol) + options.submult_abs_tol)
        rep.submultiplicativity_violations.push_back({a, b});

  // Condition (c): d(t, a) = max_s ||a* w(t*s*st) a|| / c(s).
  rep.d_bound.assign(size, std::vector<double>(ns, 0.0));
  for (Element t = 0; t < size; ++t)
    for (std::size_t a = 0; a < ns; ++a)
      for (Element e = 0; e < size; ++e)
        if (rep.c_b[e] > 1e-12)
          rep.d_bound[t][a] =
              std::max(rep.d_bound[t][a], num[(e * size + t) * ns + a] / rep.c_b[e]);

  // Condition (d): m_k = ||C* [w(s_i* u_k s_j)] C|| with u_k = (s*s)^(2^k).
  const std::size_t dim = size * n;
  ComplexMatrix c(dim, n);
  {
    std::mt19937_64 rng(options.seed + 1);
    std::normal_distribution<double> gauss;
    for (auto& z : c.data()) z = {gauss(rng), gauss(rng)};
    c *= 1.0 / c.frobenius_norm();
  }
  const double m_base = op_norm(adjoint_times(c, m.gram() * c));
  rep.condition_d.resize(size);
  kernels::for_each_index(size, true, [&](std::size_t e) {
    ConditionDSequence& seq = rep.condition_d[e];
    std::vector<double> mk;
    Element u = s.mul(s.star(e), e);
    for (std::size_t k = 0; k <= options.n_max; ++k) {
      ComplexMatrix gu;
      kernels::serial::assemble_blocks(
          size, n,
          [&](std::size_t i, std::size_t j) -> const ComplexMatrix& {
            return omega(s.mul(s.mul(s.star(i), u), j));
          },
          gu);
      mk.push_back(op_norm(adjoint_times(c, gu * c)));
      const double ratio = m_base > 0.0 ? mk.back() / m_base : 0.0;
      seq.roots.push_back(std::pow(ratio, std::ldexp(1.0, -static_cast<int>(k))));
      u = s.mul(u, u);
    }
    const double floor = 1e-12 * std::max(m_base, 1e-300);
    for (std::size_t k = 1; k <= options.n_max; ++k)
      seq.limit_estimates.push_back(
          mk[k - 1] > floor
              ? std::pow(mk[k] / mk[k - 1], std::ldexp(1.0, -static_cast<int>(k - 1)))
              : 0.0);
    seq.limit = seq.limit_estimates.empty() ? seq.roots.front() : seq.limit_estimates.back();
    seq.stabilized = seq.limit_estimates.size() < 2 ||
                     std::abs(seq.limit_estimates.back() -
                              seq.limit_estimates[seq.limit_estimates.size() - 2]) <=
                         1e-6 * std::max(1.0, seq.limit);
    seq.prediction = phi[s.mul(s.star(e), e)].norm;  // sqrt(c_a(s*s))
  });
  return rep;
}

RepresentationReport representation_checks(const ModuleSpace& m, const FiniteStarSemigroup& s,
                                           std::span<const TranslationOperator> phi,
                                           const std::optional<ModuleElement>& omega_rep) {
  require_semigroup_base(m, s);
  const std::size_t size = s.size();
  RepresentationReport rep;
  for (Element a = 0; a < size; ++a) {
    rep.star = std::max(rep.star, distance(phi[s.star(a)].matrix, phi[a].adjoint_matrix));
    for (Element b = 0; b < size; ++b)
      rep.multiplicativity = std::max(
          rep.multiplicativity, distance(phi[s.mul(a, b)].matrix, phi[a].matrix * phi[b].matrix));
  }

  // y(a, a') = Phi(a) K_a' in reduced coordinates; the identity holds for all
  // coefficients once it holds blockwise.
  std::vector<ComplexMatrix> y(size * size);
  for (Element a = 0; a < size; ++a)
    for (Element a2 = 0; a2 < size; ++a2)
      y[a * size + a2] = phi[a].matrix * m.section_coordinates(a2);
  std::vector<double> worst(size * size, 0.0);
  kernels::for_each_index(size * size, true, [&](std::size_t p) {
    const Element a = p / size;
    const Element a2 = p % size;
    for (Element b = 0; b < size; ++b)
      for (Element b2 = 0; b2 < size; ++b2)
        worst[p] = std::max(worst[p],
                            distance(adjoint_times(y[p], y[b * size + b2]),
                                     m.kernel()(s.mul(a, a2), s.mul(b, b2))));
  });
  rep.correlation = *std::max_element(worst.begin(), worst.end());

  if (auto u = s.unit())
    rep.unit = distance(phi[*u].matrix, ComplexMatrix::identity(m.rank()));
  if (omega_rep) {
    const ComplexMatrix x = m.coordinates(*omega_rep);
    double w = 0.0;
    for (Element a = 0; a < size; ++a)
      w = std::max(w, distance(phi[a].matrix * x, m.section_coordinates(a)));
    rep.omega_translate = w;
  }
  return rep;
}

double omega_symmetry_deviation(const FiniteStarSemigroup& s, const AFunction& omega) {
  if (omega.size() != s.size())
    throw Error(ErrorKind::BaseMismatch, "omega must be defined on every element");
  double worst = 0.0;
  for (Element a = 0; a < s.size(); ++a)
    worst = std::max(worst, distance(omega(s.star(a)), omega(a).adjoint()));
  return worst;
}

ExtensionResult extension_property(const FiniteStarSemigroup& s, const AFunction& omega,
                                   double tol) {
  const double dev = omega_symmetry_deviation(s, omega);
  if (dev > tol * omega_scale(omega))
    throw Error(ErrorKind::NotHermitianOmega, "deviation " + std::to_string(dev), dev);
  const ModuleSpace m = build_module(kernel_from_omega(s, omega), tol);

  const ComplexMatrix wstar = stacked_adjoints(omega);  // W*
  const ComplexMatrix z = adjoint_times(m.pseudo_inverse(), wstar);
  ExtensionResult out;
  out.range_residual = distance(m.reducer().adjoint() * z, wstar);
  if (out.range_residual > tol * (1.0 + wstar.frobenius_norm())) return out;
  if (wstar.frobenius_norm() == 0.0 || m.rank() == 0) {
    out.admissible = true;
    out.c_max = std::numeric_limits<double>::infinity();
    return out;
  }

  const auto ww = hermitian_eig(adjoint_times(wstar, wstar), tol * 10.0);
  double sigma_min = 0.0;
  for (double v : ww.values)
    if (v > tol * ww.values.back()) {
      sigma_min = v;
      break;
    }
  double lo = 0.0;
  double hi = op_norm(m.gram()) / sigma_min + 1.0;
  const ComplexMatrix outer = z * z.adjoint();
  const ComplexMatrix id = ComplexMatrix::identity(m.rank());
  auto feasible = [&](double c) { return is_psd(id - c * outer, 0.0).psd; };
  for (int i = 0; i < kBisectionSteps && hi - lo > tol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  out.c_max = lo;
  out.admissible = lo > 0.0;
  return out;
}

ExtendedOmega extend_omega(const FiniteStarSemigroup& s, const AFunction& omega, double c,
                           ExtendMode mode, double tol) {
  if (!(c > 0.0)) throw Error(ErrorKind::BadParams, "extension constant must be positive");
  if (mode == ExtendMode::unitize && s.is_unital()) {
    ExtendedOmega out{s, omega, *s.unit(), {}};
    out.pd = check_positive_definite(kernel_from_omega(s, omega), tol);
    return out;
  }
  FiniteStarSemigroup plus = adjoin_unit(s);
  std::vector<ComplexMatrix> values = omega.values;
  values.push_back((1.0 / c) * ComplexMatrix::identity(omega.n));
  AFunction omega_plus = make_afunction(plus, std::move(values));
  const PdVerdict pd = check_positive_definite(kernel_from_omega(plus, omega_plus), tol);
  if (!pd.positive_definite)
    throw Error(ErrorKind::BadConstant,
                "extended kernel has min eigenvalue " + std::to_string(pd.min_eigenvalue),
                pd.min_eigenvalue);
  const Element unit = s.size();
  return ExtendedOmega{std::move(plus), std::move(omega_plus), unit, pd};
}

StarConditionResult star_condition(const ModuleSpace& m, const FiniteStarSemigroup& s,
                                   const AFunction& omega, double tol) {
  require_semigroup_base(m, s);
  StarConditionResult out;
  out.symmetry_deviation = omega_symmetry_deviation(s, omega);
  out.symmetric = out.symmetry_deviation <= tol * omega_scale(omega);
  out.membership = membership(m, omega, tol);
  if (auto u = s.unit()) {
    // omega = K_1 exactly.
    MembershipResult& mr = out.membership;
    mr.representative =
        ModuleElement::section(m.points(), *u, ComplexMatrix::identity(m.n()));
    const ComplexMatrix target = stacked_adjoints(omega);
    mr.residual = distance(m.gram() * mr.representative.column, target);
    mr.in_module = mr.residual <= tol * (1.0 + target.frobenius_norm());
    mr.norm = op_norm(m.coordinates(mr.representative));
  }
  out.holds = out.symmetric && out.membership.in_module;
  return out;
}

DilationTriple build_dilation(const FiniteStarSemigroup& s, const AFunction& omega,
                              const DilationOptions& options) {
  const double tol = options.tol;
  AKernel kernel = kernel_from_omega(s, omega);
  const PdVerdict pd = check_positive_definite(kernel, tol);
  if (!pd.positive_definite)
    throw Error(ErrorKind::NotPD, "min Gram eigenvalue " + std::to_string(pd.min_eigenvalue),
                pd.min_eigenvalue);

  DilationTriple out;
  out.module = build_module(std::move(kernel), tol);
  out.phi = checked_table(out.module, s, ErrorKind::Unbounded);

  DilationRoute route = options.route;
  std::optional<StarConditionResult> star;
  if (route != DilationRoute::extension) {
    star = star_condition(out.module, s, omega, tol);
    if (route == DilationRoute::automatic)
      route = star->holds ? DilationRoute::star : DilationRoute::extension;
    else if (!star->holds)
      throw Error(ErrorKind::NoStarCondition, "omega is not in its module",
                  star->membership.residual);
  }
  out.route = route;

  if (route == DilationRoute::star) {
    out.v = out.module.coordinates(star->membership.representative);
  } else {
    const ExtensionResult ext = extension_property(s, omega, tol);
    if (!ext.admissible)
      throw Error(ErrorKind::NoStarCondition, "no extension constant and omega not in E_omega",
                  ext.range_residual);
    const double c = std::isfinite(ext.c_max) ? 0.5 * ext.c_max : 1.0;
    out.extension_constant = c;
    const ExtendedOmega plus = extend_omega(s, omega, c, ExtendMode::unitize, tol);
    const ModuleSpace mp = build_module(kernel_from_omega(plus.semigroup, plus.omega), tol);
    const auto phi_plus = checked_table(mp, plus.semigroup, ErrorKind::Unbounded);
    const ComplexMatrix v_plus = mp.section_coordinates(plus.unit);
    out.unitized_error = reconstruction(s, omega, phi_plus, v_plus);
    out.v = adjoint_times(embedding(out.module, mp), v_plus);
  }
  out.v_adjoint = out.v.adjoint();
  out.reconstruction_error = reconstruction(s, omega, out.phi, out.v);

  const auto samples = sample_matrices(omega.n, options.sample_budget, options.seed);
  for (Element e = 0; e < s.size(); ++e) {
    const ComplexMatrix form = adjoint_times(out.v, out.phi[e].matrix * out.v);
    for (const auto& a : samples)
      for (const auto& b : samples)
        out.sampled_error = std::max(
            out.sampled_error, distance(adjoint_times(a, omega(e) * b), adjoint_times(a, form * b)));
  }

  // Minimal iff the Phi(s) V columns span all r reduced coordinates.
  const std::size_t r = out.module.rank();
  if (r == 0) {
    out.minimal = true;
  } else {
    std::vector<ComplexMatrix> cols;
    for (const auto& p : out.phi) cols.push_back(p.matrix * out.v);
    const ComplexMatrix span = hconcat(cols);
    const auto eig = hermitian_eig(span * span.adjoint(), tol * 10.0);
    out.minimal = numerical_rank(eig.values, tol) == r;
  }
  return out;
}

UnitizationLift unitization_lift(const FiniteStarSemigroup& s, const AFunction& omega, double c,
                                 double tol) {
  const ExtendedOmega plus = extend_omega(s, omega, c, ExtendMode::unitize, tol);
  const ModuleSpace m = build_module(kernel_from_omega(s, omega), tol);
  const ModuleSpace mp = build_module(kernel_from_omega(plus.semigroup, plus.omega), tol);
  UnitizationLift out;
  out.w = embedding(m, mp);
  out.isometry_error = distance(adjoint_times(out.w, out.w), ComplexMatrix::identity(m.rank()));
  const auto phi = translation_table(m, s);
  const auto phi_plus = translation_table(mp, plus.semigroup);
  for (Element e = 0; e < s.size(); ++e)
    out.intertwining_error = std::max(
        out.intertwining_error, distance(out.w * phi[e].matrix, phi_plus[e].matrix * out.w));
  return out;
}

ApproxUnitArrays approx_unit_arrays(const FiniteStarSemigroup& s, const AFunction& omega,
                                    double tol) {
  const ModuleSpace m = build_module(kernel_from_omega(s, omega), tol);
  const StarConditionResult star = star_condition(m, s, omega, tol);
  if (!star.holds)
    throw Error(ErrorKind::NoStarCondition, "omega is not in its module", star.membership.residual);

  const std::size_t n = omega.n;
  const ModuleElement& rep = star.membership.representative;
  double largest = 0.0;
  for (Element t = 0; t < s.size(); ++t)
    largest = std::max(largest, rep.coefficient(t, n).frobenius_norm());

  ApproxUnitArrays out;
  for (Element t = 0; t < s.size(); ++t) {
    ComplexMatrix a = rep.coefficient(t, n);
    if (a.frobenius_norm() <= 1e-14 * largest) continue;
    out.points.push_back(s.star(t));
    out.coefficients.push_back(std::move(a));
  }

  for (Element e = 0; e < s.size(); ++e) {
    ComplexMatrix left(n, n);
    ComplexMatrix right(n, n);
    for (std::size_t i = 0; i < out.points.size(); ++i) {
      left += adjoint_times(out.coefficients[i], omega(s.mul(out.points[i], e)));
      right += omega(s.mul(e, s.star(out.points[i]))) * out.coefficients[i];
    }
    out.left_residual = std::max(out.left_residual, distance(left, omega(e)));
    out.right_residual = std::max(out.right_residual, distance(right, omega(e)));
  }
  out.cauchy_value = ComplexMatrix(n, n);
  for (std::size_t i = 0; i < out.points.size(); ++i)
    for (std::size_t j = 0; j < out.points.size(); ++j)
      out.cauchy_value += adjoint_times(
          out.coefficients[i],
          omega(s.mul(out.points[i], s.star(out.points[j]))) * out.coefficients[j]);
  return out;
}

}  // namespace dilkit
