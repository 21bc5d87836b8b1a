#include "dilkit/problem.hpp"

#include <fstream>
#include <sstream>

#include "dilkit/error.hpp"

namespace dilkit {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::SchemaError, path + ": " + what);
}

[[noreturn]] void shape(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ShapeError, path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) schema(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema(path + "." + key, "missing field");
  return *it;
}

std::size_t as_size(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0) schema(path, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) schema(path, "expected a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) schema(path, "expected a string");
  return v.get<std::string>();
}

Complex as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  schema(path, "expected a number or [re, im]");
}

ComplexMatrix as_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) schema(path, "expected a nonempty array of rows");
  std::size_t cols = 0;
  std::vector<Complex> entries;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row_path = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) schema(row_path, "expected a row array");
    if (i == 0) cols = v[i].size();
    if (v[i].size() != cols || cols == 0)
      shape(row_path, "ragged matrix: row has " + std::to_string(v[i].size()) + " entries, expected " +
                          std::to_string(cols));
    for (std::size_t j = 0; j < cols; ++j)
      entries.push_back(as_complex(v[i][j], row_path + "[" + std::to_string(j) + "]"));
  }
  return ComplexMatrix(v.size(), cols, std::move(entries));
}

ComplexMatrix as_square(const json& v, const std::string& path, std::optional<std::size_t> n) {
  ComplexMatrix m = as_matrix(v, path);
  if (!m.is_square()) shape(path, "matrix must be square");
  if (n && m.rows() != *n) shape(path, "expected " + std::to_string(*n) + "x" + std::to_string(*n));
  return m;
}

std::vector<std::string> as_labels(const json& v, const std::string& path) {
  if (!v.is_array()) schema(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_string(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Element> as_indices(const json& v, const std::string& path) {
  if (!v.is_array()) schema(path, "expected an array of indices");
  std::vector<Element> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_size(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

SemigroupSpec parse_semigroup(const json& v, const std::string& path) {
  SemigroupSpec s;
  if (v.is_object() && v.contains("builtin")) {
    const json& b = v["builtin"];
    s.family = as_string(field(b, "family", path + ".builtin"), path + ".builtin.family");
    if (b.contains("param")) s.param = as_size(b["param"], path + ".builtin.param");
    return s;
  }
  s.tables.labels = as_labels(field(v, "labels", path), path + ".labels");
  s.tables.mult = as_indices(field(v, "mult", path), path + ".mult");
  s.tables.inv = as_indices(field(v, "inv", path), path + ".inv");
  const std::size_t n = s.tables.labels.size();
  if (s.tables.mult.size() != n * n) shape(path + ".mult", "expected " + std::to_string(n * n) + " entries");
  if (s.tables.inv.size() != n) shape(path + ".inv", "expected " + std::to_string(n) + " entries");
  return s;
}

AKernel parse_kernel(const json& v, const std::string& path) {
  const std::vector<std::string> base = as_labels(field(v, "base", path), path + ".base");
  const std::size_t n = as_size(field(v, "n", path), path + ".n");
  const json& blocks = field(v, "blocks", path);
  if (!blocks.is_object()) schema(path + ".blocks", "expected an object keyed by \"s|t\"");
  std::vector<ComplexMatrix> out;
  for (const auto& s : base)
    for (const auto& t : base) {
      const std::string key = s + "|" + t;
      const std::string bp = path + ".blocks[\"" + key + "\"]";
      if (!blocks.contains(key)) schema(bp, "missing block");
      out.push_back(as_square(blocks[key], bp, n));
    }
  if (blocks.size() != out.size()) schema(path + ".blocks", "blocks for labels outside the base");
  return AKernel::from_blocks(base, n, std::move(out));
}

ProblemOptions parse_options(const json& v) {
  ProblemOptions o;
  if (!v.is_object()) schema("options", "expected an object");
  if (v.contains("tol")) o.tol = as_double(v["tol"], "options.tol");
  if (v.contains("seed")) o.seed = static_cast<unsigned>(as_size(v["seed"], "options.seed"));
  if (v.contains("n_max")) o.n_max = as_size(v["n_max"], "options.n_max");
  if (v.contains("sample_budget")) o.sample_budget = as_size(v["sample_budget"], "options.sample_budget");
  if (v.contains("route")) {
    o.route = as_string(v["route"], "options.route");
    if (o.route != "automatic" && o.route != "star" && o.route != "extension")
      schema("options.route", "expected automatic, star or extension");
  }
  if (v.contains("extension_constant"))
    o.extension_constant = as_double(v["extension_constant"], "options.extension_constant");
  return o;
}

OperatorData parse_operator(const json& v, const std::string& path) {
  OperatorData op;
  op.t = as_square(field(v, "T", path), path + ".T", std::nullopt);
  op.window = as_size(field(v, "N", path), path + ".N");
  return op;
}

Problem from_json(const json& doc) {
  if (!doc.is_object()) schema("$", "expected an object");
  const std::size_t version = as_size(field(doc, "schema_version", "$"), "schema_version");
  if (version != kSchemaVersion) schema("schema_version", "unsupported version " + std::to_string(version));
  Problem p;
  const std::string kind = as_string(field(doc, "kind", "$"), "kind");
  const auto k = kind_from_name(kind);
  if (!k) schema("kind", "unknown kind '" + kind + "'");
  p.kind = *k;
  if (doc.contains("options")) p.options = parse_options(doc["options"]);

  switch (p.kind) {
    case ProblemKind::semigroup:
      p.semigroup = parse_semigroup(field(doc, "semigroup", "$"), "semigroup");
      break;
    case ProblemKind::kernel:
      p.kernel = parse_kernel(field(doc, "kernel", "$"), "kernel");
      break;
    case ProblemKind::invariant: {
      p.semigroup = parse_semigroup(field(doc, "semigroup", "$"), "semigroup");
      const json& om = field(doc, "omega", "$");
      if (!om.is_object() || om.empty()) schema("omega", "expected an object keyed by label");
      std::optional<std::size_t> n;
      for (const auto& [label, value] : om.items()) {
        ComplexMatrix m = as_square(value, "omega[\"" + label + "\"]", n);
        n = m.rows();
        p.omega.emplace(label, std::move(m));
      }
      break;
    }
    case ProblemKind::cp_map: {
      const json& c = field(doc, "cp_map", "$");
      const std::size_t m = as_size(field(c, "m", "cp_map"), "cp_map.m");
      const std::size_t n = as_size(field(c, "n", "cp_map"), "cp_map.n");
      const json& action = field(c, "action", "cp_map");
      if (!action.is_array() || action.size() != m) shape("cp_map.action", "expected m rows of matrices");
      std::vector<ComplexMatrix> values;
      for (std::size_t i = 0; i < m; ++i) {
        const std::string rp = "cp_map.action[" + std::to_string(i) + "]";
        if (!action[i].is_array() || action[i].size() != m) shape(rp, "expected m matrices");
        for (std::size_t j = 0; j < m; ++j)
          values.push_back(as_square(action[i][j], rp + "[" + std::to_string(j) + "]", n));
      }
      p.cp_map = CPMap::from_action(m, n, std::move(values));
      break;
    }
    case ProblemKind::povm: {
      const json& v = field(doc, "povm", "$");
      POVM povm;
      povm.d = as_size(field(v, "d", "povm"), "povm.d");
      const json& effects = field(v, "effects", "povm");
      if (!effects.is_array() || effects.empty()) schema("povm.effects", "expected a nonempty array");
      for (std::size_t x = 0; x < effects.size(); ++x)
        povm.effects.push_back(
            as_square(effects[x], "povm.effects[" + std::to_string(x) + "]", povm.d));
      p.povm = std::move(povm);
      break;
    }
    case ProblemKind::contraction:
      p.op = parse_operator(field(doc, "contraction", "$"), "contraction");
      break;
    case ProblemKind::subnormality:
      p.op = parse_operator(field(doc, "subnormality", "$"), "subnormality");
      break;
    case ProblemKind::moments: {
      const json& v = field(doc, "moments", "$");
      MomentData data;
      data.d = as_size(field(v, "d", "moments"), "moments.d");
      data.n = v.contains("n") ? as_size(v["n"], "moments.n") : 1;
      data.cap = as_size(field(v, "cap", "moments"), "moments.cap");
      const json& values = field(v, "values", "moments");
      if (!values.is_array()) schema("moments.values", "expected an array of matrices");
      for (std::size_t i = 0; i < values.size(); ++i)
        data.values.push_back(
            as_square(values[i], "moments.values[" + std::to_string(i) + "]", data.n));
      if (v.contains("N")) p.moment_window = as_size(v["N"], "moments.N");
      p.moments = std::move(data);
      break;
    }
  }
  return p;
}

json semigroup_to_json(const SemigroupSpec& s) {
  if (s.family) return {{"builtin", {{"family", *s.family}, {"param", s.param}}}};
  return {{"labels", s.tables.labels}, {"mult", s.tables.mult}, {"inv", s.tables.inv}};
}

json operator_to_json(const OperatorData& op) { return {{"T", matrix_to_json(op.t)}, {"N", op.window}}; }

bool same_kernel(const AKernel& a, const AKernel& b) {
  return a.base == b.base && a.n == b.n && a.blocks == b.blocks;
}

}  // namespace

std::string kind_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::semigroup: return "semigroup";
    case ProblemKind::kernel: return "kernel";
    case ProblemKind::invariant: return "invariant";
    case ProblemKind::cp_map: return "cp_map";
    case ProblemKind::povm: return "povm";
    case ProblemKind::contraction: return "contraction";
    case ProblemKind::moments: return "moments";
    case ProblemKind::subnormality: return "subnormality";
  }
  return "unknown";
}

std::optional<ProblemKind> kind_from_name(const std::string& name) {
  for (auto k : {ProblemKind::semigroup, ProblemKind::kernel, ProblemKind::invariant,
                 ProblemKind::cp_map, ProblemKind::povm, ProblemKind::contraction,
                 ProblemKind::moments, ProblemKind::subnormality})
    if (kind_name(k) == name) return k;
  return std::nullopt;
}

SemigroupTables SemigroupSpec::resolve_tables() const {
  if (family) return builtin_by_name(*family, param).tables();
  return tables;
}

FiniteStarSemigroup SemigroupSpec::resolve() const {
  if (family) return builtin_by_name(*family, param);
  return FiniteStarSemigroup::validate(tables);
}

AFunction Problem::omega_on(const FiniteStarSemigroup& s) const {
  std::vector<ComplexMatrix> values;
  for (const auto& label : s.labels()) {
    const auto it = omega.find(label);
    if (it == omega.end()) schema("omega[\"" + label + "\"]", "missing value for element");
    values.push_back(it->second);
  }
  if (omega.size() != s.size()) schema("omega", "values for labels outside the semigroup");
  return make_afunction(s, std::move(values));
}

bool operator==(const Problem& a, const Problem& b) {
  auto same_sg = [](const std::optional<SemigroupSpec>& x, const std::optional<SemigroupSpec>& y) {
    if (x.has_value() != y.has_value()) return false;
    if (!x) return true;
    return x->family == y->family && x->param == y->param && x->tables.labels == y->tables.labels &&
           x->tables.mult == y->tables.mult && x->tables.inv == y->tables.inv;
  };
  auto same_opt = [](const auto& x, const auto& y, auto eq) {
    if (x.has_value() != y.has_value()) return false;
    return !x || eq(*x, *y);
  };
  return a.kind == b.kind && a.options == b.options && same_sg(a.semigroup, b.semigroup) &&
         a.omega == b.omega && same_opt(a.kernel, b.kernel, same_kernel) &&
         same_opt(a.cp_map, b.cp_map,
                  [](const CPMap& x, const CPMap& y) {
                    return x.m == y.m && x.n == y.n && x.action == y.action;
                  }) &&
         same_opt(a.povm, b.povm,
                  [](const POVM& x, const POVM& y) { return x.d == y.d && x.effects == y.effects; }) &&
         same_opt(a.op, b.op,
                  [](const OperatorData& x, const OperatorData& y) {
                    return x.t == y.t && x.window == y.window;
                  }) &&
         same_opt(a.moments, b.moments,
                  [](const MomentData& x, const MomentData& y) {
                    return x.d == y.d && x.n == y.n && x.cap == y.cap && x.values == y.values;
                  }) &&
         a.moment_window == b.moment_window;
}

Problem parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  return from_json(doc);
}

Problem parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IOError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_text(buf.str());
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json problem_to_json(const Problem& p) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = kind_name(p.kind);
  json opts = {{"tol", p.options.tol},
               {"seed", p.options.seed},
               {"n_max", p.options.n_max},
               {"sample_budget", p.options.sample_budget},
               {"route", p.options.route}};
  if (p.options.extension_constant) opts["extension_constant"] = *p.options.extension_constant;
  doc["options"] = std::move(opts);
  if (p.semigroup) doc["semigroup"] = semigroup_to_json(*p.semigroup);
  if (!p.omega.empty()) {
    json om = json::object();
    for (const auto& [label, m] : p.omega) om[label] = matrix_to_json(m);
    doc["omega"] = std::move(om);
  }
  if (p.kernel) {
    json blocks = json::object();
    for (std::size_t s = 0; s < p.kernel->size(); ++s)
      for (std::size_t t = 0; t < p.kernel->size(); ++t)
        blocks[p.kernel->base[s] + "|" + p.kernel->base[t]] = matrix_to_json((*p.kernel)(s, t));
    doc["kernel"] = {{"base", p.kernel->base}, {"n", p.kernel->n}, {"blocks", std::move(blocks)}};
  }
  if (p.cp_map) {
    json action = json::array();
    for (std::size_t i = 0; i < p.cp_map->m; ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < p.cp_map->m; ++j) row.push_back(matrix_to_json((*p.cp_map)(i, j)));
      action.push_back(std::move(row));
    }
    doc["cp_map"] = {{"m", p.cp_map->m}, {"n", p.cp_map->n}, {"action", std::move(action)}};
  }
  if (p.povm) {
    json effects = json::array();
    for (const auto& f : p.povm->effects) effects.push_back(matrix_to_json(f));
    doc["povm"] = {{"d", p.povm->d}, {"effects", std::move(effects)}};
  }
  if (p.op) doc[kind_name(p.kind)] = operator_to_json(*p.op);
  if (p.moments) {
    json values = json::array();
    for (const auto& v : p.moments->values) values.push_back(matrix_to_json(v));
    json m = {{"d", p.moments->d}, {"n", p.moments->n}, {"cap", p.moments->cap}, {"values", std::move(values)}};
    if (p.moment_window) m["N"] = *p.moment_window;
    doc["moments"] = std::move(m);
  }
  return doc;
}

std::string serialize_problem(const Problem& p) { return problem_to_json(p).dump(2) + "\n"; }

}  // namespace dilkit
