#include "dilkit/report.hpp"

#include <cmath>
#include <sstream>

#include "dilkit/dilation.hpp"

namespace dilkit {

using nlohmann::json;

namespace {

json num(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

json per_label(const FiniteStarSemigroup& s, const std::vector<double>& values) {
  json out = json::object();
  for (Element e = 0; e < s.size(); ++e) out[s.label(e)] = num(values[e]);
  return out;
}

json column_json(const ComplexMatrix& c) {
  json out = json::array();
  for (std::size_t i = 0; i < c.rows(); ++i) out.push_back(complex_to_json(c(i, 0)));
  return out;
}

double omega_scale(const AFunction& omega) {
  double s = 1.0;
  for (const auto& v : omega.values) s = std::max(s, v.frobenius_norm());
  return s;
}

[[noreturn]] void wrong_kind(const std::string& command, const Problem& p) {
  throw Error(ErrorKind::SchemaError,
              "command '" + command + "' does not accept kind '" + kind_name(p.kind) + "'");
}

void require(bool ok, const std::string& command, const Problem& p) {
  if (!ok) wrong_kind(command, p);
}

AKernel kernel_of(const std::string& command, const Problem& p) {
  if (p.kind == ProblemKind::kernel) return *p.kernel;
  if (p.kind == ProblemKind::invariant) {
    const auto s = p.semigroup->resolve();
    return kernel_from_omega(s, p.omega_on(s));
  }
  wrong_kind(command, p);
}

// Absolute acceptance level for identity residuals.
double residual_level(double tol, double scale) { return 10.0 * tol * scale; }

void validate_semigroup(const Problem& p, Report& r) {
  require(p.kind == ProblemKind::semigroup || p.kind == ProblemKind::invariant, r.command, p);
  const SemigroupTables t = p.semigroup->resolve_tables();
  const AxiomReport a = check_axioms(t);
  r.verdicts["associative"] = a.non_associative.empty();
  r.verdicts["involutive"] = a.non_involutive.empty();
  r.verdicts["anti_homomorphic"] = a.non_anti_homomorphic.empty();
  r.verdicts["valid"] = a.ok();
  r.certificates["size"] = t.labels.size();
  r.certificates["unit"] = a.unit ? json(t.labels[*a.unit]) : json(nullptr);
  if (!a.non_associative.empty()) {
    const auto& w = a.non_associative.front();
    r.certificates["non_associative_witness"] = {t.labels[w[0]], t.labels[w[1]], t.labels[w[2]]};
    r.certificates["non_associative_count"] = a.non_associative.size();
  }
  if (!a.non_involutive.empty()) r.certificates["non_involutive_witness"] = t.labels[a.non_involutive.front()];
  if (!a.non_anti_homomorphic.empty()) {
    const auto& w = a.non_anti_homomorphic.front();
    r.certificates["non_anti_homomorphic_witness"] = {t.labels[w[0]], t.labels[w[1]]};
  }
  if (a.ok()) r.certificates["inverse_semigroup"] = is_inverse_semigroup(FiniteStarSemigroup::validate(t));
  r.affirmative = a.ok();
}

void check_pd(const Problem& p, Report& r, const RunOptions& ro) {
  const AKernel k = kernel_of(r.command, p);
  r.certificates["hermitian_deviation"] = check_hermitian_symmetry(k);
  const PdVerdict v = check_positive_definite(k, p.options.tol);
  r.verdicts["positive_definite"] = v.positive_definite;
  r.certificates["min_eigenvalue"] = v.min_eigenvalue;
  if (ro.artifacts) r.artifacts["witness"] = column_json(v.witness.column);
  r.affirmative = v.positive_definite;
}

void build_rkhm(const Problem& p, Report& r, const RunOptions& ro) {
  AKernel k = kernel_of(r.command, p);
  const PdVerdict v = check_positive_definite(k, p.options.tol);
  r.verdicts["positive_definite"] = v.positive_definite;
  r.certificates["min_eigenvalue"] = v.min_eigenvalue;
  if (!v.positive_definite) return;
  const std::size_t n = k.n;
  const ModuleSpace m = build_module(std::move(k), p.options.tol);
  const auto samples = sample_matrices(n, p.options.sample_budget, p.options.seed);
  const double kolmogorov = kolmogorov_check(m, samples);
  r.certificates["rank"] = m.rank();
  r.certificates["gram_eigenvalues"] = m.eig().values;
  r.certificates["kolmogorov_residual"] = kolmogorov;
  r.verdicts["kolmogorov"] = kolmogorov <= residual_level(p.options.tol, std::max(1.0, m.gram().frobenius_norm()));
  if (ro.artifacts) r.artifacts["reducer"] = matrix_to_json(m.reducer());
  r.affirmative = r.verdicts["kolmogorov"].get<bool>();
}

DilationRoute route_of(const ProblemOptions& o) {
  if (o.route == "star") return DilationRoute::star;
  if (o.route == "extension") return DilationRoute::extension;
  return DilationRoute::automatic;
}

void dilate(const Problem& p, Report& r, const RunOptions& ro) {
  require(p.kind == ProblemKind::invariant, r.command, p);
  const auto s = p.semigroup->resolve();
  const AFunction omega = p.omega_on(s);
  DilationOptions opt;
  opt.tol = p.options.tol;
  opt.route = route_of(p.options);
  opt.sample_budget = p.options.sample_budget;
  opt.seed = p.options.seed;
  const DilationTriple t = build_dilation(s, omega, opt);
  const RepresentationReport rep = representation_checks(t.module, s, t.phi);
  const double level = residual_level(p.options.tol, omega_scale(omega));

  r.certificates["reconstruction_error"] = t.reconstruction_error;
  r.certificates["sampled_error"] = t.sampled_error;
  r.certificates["rank"] = t.module.rank();
  r.certificates["route"] = t.route == DilationRoute::star ? "star" : "extension";
  if (t.extension_constant) r.certificates["extension_constant"] = *t.extension_constant;
  if (t.unitized_error) r.certificates["unitized_error"] = *t.unitized_error;
  r.certificates["multiplicativity_residual"] = rep.multiplicativity;
  r.certificates["star_residual"] = rep.star;
  r.certificates["correlation_residual"] = rep.correlation;
  r.verdicts["reconstructs"] = t.reconstruction_error <= level && t.sampled_error <= level;
  r.verdicts["minimal"] = t.minimal;
  r.verdicts["star_representation"] = rep.multiplicativity <= level && rep.star <= level;
  if (ro.artifacts) {
    r.artifacts["V"] = matrix_to_json(t.v);
    json phi = json::object();
    for (Element e = 0; e < s.size(); ++e) phi[s.label(e)] = matrix_to_json(t.phi[e].matrix);
    r.artifacts["phi"] = std::move(phi);
  }
  r.affirmative = r.verdicts["reconstructs"].get<bool>() && r.verdicts["star_representation"].get<bool>();
}

void bounded(const Problem& p, Report& r, const RunOptions& ro) {
  require(p.kind == ProblemKind::invariant, r.command, p);
  const auto s = p.semigroup->resolve();
  const AFunction omega = p.omega_on(s);
  const ModuleSpace m = build_module(kernel_from_omega(s, omega), p.options.tol);
  BoundednessOptions opt;
  opt.n_max = p.options.n_max;
  opt.sample_budget = p.options.sample_budget;
  opt.seed = p.options.seed;
  opt.tol = p.options.tol;
  const BoundednessReport b = boundedness_report(m, s, omega, opt);

  r.certificates["c_a"] = per_label(s, b.c_a);
  r.certificates["c_b"] = per_label(s, b.c_b);
  r.certificates["samples"] = b.samples;
  json violations = json::array();
  for (const auto& v : b.submultiplicativity_violations) violations.push_back({s.label(v[0]), s.label(v[1])});
  r.certificates["submultiplicativity_violations"] = std::move(violations);
  json d = json::object();
  bool chain = b.submultiplicativity_violations.empty();
  bool d_ok = true;
  for (Element e = 0; e < s.size(); ++e) {
    const auto& seq = b.condition_d[e];
    json roots = json::array();
    for (double x : seq.roots) roots.push_back(num(x));
    d[s.label(e)] = {{"limit", num(seq.limit)},
                     {"prediction", num(seq.prediction)},
                     {"stabilized", seq.stabilized},
                     {"roots", std::move(roots)}};
    chain = chain && b.c_b[e] <= b.c_a[e] + 10.0 * p.options.tol * std::max(1.0, b.c_a[e]);
    d_ok = d_ok && seq.stabilized &&
           std::abs(seq.limit - seq.prediction) <= 0.05 * seq.prediction + 1e-8;
  }
  r.certificates["condition_d"] = std::move(d);
  if (ro.artifacts) r.artifacts["d_bound"] = b.d_bound;
  r.verdicts["bounded"] = true;  // every Phi(s) well defined, finite c_a
  r.verdicts["chain_consistent"] = chain;
  r.verdicts["condition_d_matches"] = d_ok;
  r.affirmative = chain;
}

void extend(const Problem& p, Report& r, const RunOptions& ro) {
  require(p.kind == ProblemKind::invariant, r.command, p);
  const auto s = p.semigroup->resolve();
  const AFunction omega = p.omega_on(s);
  const ExtensionResult e = extension_property(s, omega, p.options.tol);
  r.verdicts["extension_property"] = e.admissible;
  r.certificates["c_max"] = num(e.c_max);
  r.certificates["range_residual"] = e.range_residual;
  if (!e.admissible) return;
  const double c = p.options.extension_constant.value_or(std::isfinite(e.c_max) ? e.c_max : 1.0);
  r.certificates["c_used"] = c;
  const ExtendedOmega plus = extend_omega(s, omega, c, ExtendMode::unitize, p.options.tol);
  r.verdicts["extended_positive_definite"] = plus.pd.positive_definite;
  r.certificates["extended_min_eigenvalue"] = plus.pd.min_eigenvalue;
  r.certificates["unit"] = plus.semigroup.label(plus.unit);
  const UnitizationLift lift = unitization_lift(s, omega, c, p.options.tol);
  r.certificates["isometry_error"] = lift.isometry_error;
  r.certificates["intertwining_error"] = lift.intertwining_error;
  if (ro.artifacts) {
    json om = json::object();
    for (Element a = 0; a < plus.semigroup.size(); ++a)
      om[plus.semigroup.label(a)] = matrix_to_json(plus.omega(a));
    r.artifacts["omega_plus"] = std::move(om);
  }
  r.affirmative = plus.pd.positive_definite;
}

void stinespring_cmd(const Problem& p, Report& r, const RunOptions& ro) {
  require(p.kind == ProblemKind::cp_map, r.command, p);
  const CPCheck cp = cp_check(*p.cp_map, p.options.tol);
  r.verdicts["completely_positive"] = cp.completely_positive;
  r.verdicts["kernel_positive_definite"] = cp.kernel_pd;
  r.verdicts["equivalence_consistent"] = cp.consistent();
  r.certificates["min_choi_eigenvalue"] = cp.min_choi_eigenvalue;
  r.certificates["kernel_min_eigenvalue"] = cp.kernel_min_eigenvalue;
  if (!cp.completely_positive) {
    if (ro.artifacts) r.artifacts["choi_witness"] = column_json(cp.witness);
    return;
  }
  const StinespringResult st = stinespring(*p.cp_map, p.options.tol, p.options.seed);
  r.certificates["choi_rank"] = st.choi_rank;
  r.certificates["module_rank"] = st.module_rank;
  r.certificates["framework_error"] = st.framework_error;
  r.certificates["kraus_error"] = st.kraus_error;
  r.certificates["route_disagreement"] = st.route_disagreement;
  r.certificates["reconstruction_error"] = st.framework.reconstruction_error;
  r.verdicts["rank_consistent"] = st.rank_consistent();
  const double level = residual_level(p.options.tol, 1.0);
  r.verdicts["routes_agree"] = st.route_disagreement <= 100.0 * level;
  if (ro.artifacts) {
    json kraus = json::array();
    for (const auto& a : st.kraus) kraus.push_back(matrix_to_json(a));
    r.artifacts["kraus"] = std::move(kraus);
    r.artifacts["V"] = matrix_to_json(st.framework.v);
  }
  r.affirmative = cp.consistent() && st.rank_consistent() && r.verdicts["routes_agree"].get<bool>();
}

void naimark_cmd(const Problem& p, Report& r, const RunOptions& ro) {
  require(p.kind == ProblemKind::povm, r.command, p);
  const NaimarkResult nr = naimark(*p.povm, p.options.tol);
  const double level = residual_level(p.options.tol, 1.0);
  r.certificates["framework_dimension"] = nr.framework_dimension;
  r.certificates["oracle_dimension"] = nr.oracle_dimension;
  r.certificates["projection_error"] = nr.projection_error;
  r.certificates["multiplicativity_error"] = nr.multiplicativity_error;
  r.certificates["additivity_error"] = nr.additivity_error;
  r.certificates["isometry_error"] = nr.isometry_error;
  r.certificates["reconstruction_error"] = nr.reconstruction_error;
  r.certificates["oracle_error"] = nr.oracle_error;
  r.verdicts["spectral"] = nr.projection_error <= level && nr.multiplicativity_error <= level &&
                           nr.additivity_error <= level;
  r.verdicts["isometry"] = nr.isometry_error <= level;
  r.verdicts["reconstructs"] = nr.reconstruction_error <= level && nr.oracle_error <= level;
  r.verdicts["dimensions_agree"] = nr.framework_dimension == nr.oracle_dimension;
  if (ro.artifacts) r.artifacts["V"] = matrix_to_json(nr.framework.v);
  r.affirmative = r.verdicts["spectral"].get<bool>() && r.verdicts["isometry"].get<bool>() &&
                  r.verdicts["reconstructs"].get<bool>();
}

void contraction_cmd(const Problem& p, Report& r, const RunOptions& ro) {
  require(p.kind == ProblemKind::contraction, r.command, p);
  const ContractionResult c = szn_contraction(p.op->t, p.op->window, p.options.tol);
  const double level = residual_level(p.options.tol, 1.0);
  r.certificates["unitarity_error"] = c.unitarity_error;
  r.certificates["compression_error"] = c.compression_error;
  r.certificates["window_min_eigenvalue"] = c.window.min_eigenvalue;
  r.certificates["dimension"] = c.u.rows();
  r.verdicts["unitary"] = c.unitarity_error <= level;
  r.verdicts["compressions"] = c.compression_error <= level;
  r.verdicts["window_positive_definite"] = c.window.positive_definite;
  if (ro.artifacts) r.artifacts["U"] = matrix_to_json(c.u);
  r.affirmative = c.unitarity_error <= level && c.compression_error <= level && c.window.positive_definite;
}

void moments_cmd(const Problem& p, Report& r, const RunOptions&) {
  require(p.kind == ProblemKind::moments, r.command, p);
  const MomentResult m = p.moments->d == 1 ? hamburger(*p.moments, p.options.tol, p.moment_window)
                                           : multi_hamburger(*p.moments, p.options.tol, p.moment_window);
  r.verdicts["hankel_psd"] = m.hankel.psd;
  r.certificates["min_eigenvalue"] = m.hankel.min_eigenvalue;
  r.certificates["radii"] = m.radii;
  r.affirmative = m.hankel.psd;
}

void subnormal_cmd(const Problem& p, Report& r, const RunOptions&) {
  require(p.kind == ProblemKind::subnormality, r.command, p);
  const SubnormalityResult s = subnormality_kernel(p.op->t, p.op->window, p.options.tol);
  r.verdicts["passes_all"] = s.passes_all;
  r.certificates["failing_window"] = s.failing_window ? json(*s.failing_window) : json(nullptr);
  r.certificates["min_eigenvalue"] = s.min_eigenvalue;
  r.certificates["window_min_eigenvalues"] = s.window_min_eigenvalues;
  r.affirmative = s.passes_all;
}

void text_block(std::ostringstream& os, const char* title, const json& obj) {
  if (obj.empty()) return;
  os << title << ":\n";
  for (const auto& [key, value] : obj.items()) os << "  " << key << ": " << value.dump() << "\n";
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "validate-semigroup", "check-pd", "build-rkhm", "dilate",    "bounded",  "extend",
      "stinespring",        "naimark",  "contraction", "moments", "subnormal"};
  return names;
}

bool is_verdict_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPSD:
    case ErrorKind::NotAssociative:
    case ErrorKind::NotInvolutive:
    case ErrorKind::NotAntiHomomorphism:
    case ErrorKind::NonHermitianKernel:
    case ErrorKind::NotPositiveDefinite:
    case ErrorKind::IllDefined:
    case ErrorKind::IllDefinedTranslation:
    case ErrorKind::NotHermitianOmega:
    case ErrorKind::BadConstant:
    case ErrorKind::NotPD:
    case ErrorKind::Unbounded:
    case ErrorKind::NoStarCondition:
    case ErrorKind::NotCP:
    case ErrorKind::NotPOVM:
    case ErrorKind::NotContraction:
      return true;
    default:
      return false;
  }
}

Report run_command(const std::string& command, const Problem& problem, const RunOptions& options) {
  Report r;
  r.command = command;
  r.kind = kind_name(problem.kind);
  try {
    if (command == "validate-semigroup") validate_semigroup(problem, r);
    else if (command == "check-pd") check_pd(problem, r, options);
    else if (command == "build-rkhm") build_rkhm(problem, r, options);
    else if (command == "dilate") dilate(problem, r, options);
    else if (command == "bounded") bounded(problem, r, options);
    else if (command == "extend") extend(problem, r, options);
    else if (command == "stinespring") stinespring_cmd(problem, r, options);
    else if (command == "naimark") naimark_cmd(problem, r, options);
    else if (command == "contraction") contraction_cmd(problem, r, options);
    else if (command == "moments") moments_cmd(problem, r, options);
    else if (command == "subnormal") subnormal_cmd(problem, r, options);
    else throw Error(ErrorKind::BadParams, "unknown command '" + command + "'");
  } catch (const Error& e) {
    if (!is_verdict_error(e.kind())) throw;
    r.affirmative = false;
    r.error = std::string(error_name(e.kind()));
    r.certificates["message"] = e.what();
    if (e.certificate()) r.certificates["error_certificate"] = num(*e.certificate());
  }
  return r;
}

json Report::to_json() const {
  json doc = {{"schema_version", kSchemaVersion},
              {"command", command},
              {"kind", kind},
              {"affirmative", affirmative},
              {"verdicts", verdicts},
              {"certificates", certificates},
              {"artifacts", artifacts}};
  if (!error.empty()) doc["error"] = error;
  return doc;
}

std::string Report::to_json_text() const { return to_json().dump(2) + "\n"; }

std::string Report::to_text() const {
  std::ostringstream os;
  os << "command: " << command << "\n"
     << "kind: " << kind << "\n"
     << "result: " << (affirmative ? "affirmative" : "negative") << "\n";
  if (!error.empty()) os << "error: " << error << "\n";
  text_block(os, "verdicts", verdicts);
  text_block(os, "certificates", certificates);
  text_block(os, "artifacts", artifacts);
  return os.str();
}

json error_report(const std::string& command, const Error& e) {
  json doc = {{"schema_version", kSchemaVersion},
              {"command", command},
              {"error", std::string(error_name(e.kind()))},
              {"message", e.what()}};
  if (e.certificate()) doc["certificate"] = num(*e.certificate());
  return doc;
}

}  // namespace dilkit
