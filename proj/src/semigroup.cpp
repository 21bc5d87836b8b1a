#include "dilkit/semigroup.hpp"

#include <algorithm>

#include "dilkit/error.hpp"

namespace dilkit {

namespace {

std::string triple_text(const SemigroupTables& t, const std::array<Element, 3>& w) {
  return "(" + t.labels[w[0]] + ", " + t.labels[w[1]] + ", " + t.labels[w[2]] + ")";
}

std::optional<Element> detect_unit(const SemigroupTables& t) {
  const std::size_t n = t.labels.size();
  for (Element u = 0; u < n; ++u) {
    bool two_sided = true;
    for (Element a = 0; a < n && two_sided; ++a)
      two_sided = t.mult[u * n + a] == a && t.mult[a * n + u] == a;
    if (two_sided && t.inv[u] == u) return u;
  }
  return std::nullopt;
}

}  // namespace

AxiomReport check_axioms(const SemigroupTables& t) {
  const std::size_t n = t.labels.size();
  if (n == 0) throw Error(ErrorKind::BadTable, "empty element set");
  if (t.mult.size() != n * n)
    throw Error(ErrorKind::BadTable, "mult table needs " + std::to_string(n * n) + " entries");
  if (t.inv.size() != n)
    throw Error(ErrorKind::BadTable, "inv table needs " + std::to_string(n) + " entries");
  if (std::any_of(t.mult.begin(), t.mult.end(), [n](Element e) { return e >= n; }) ||
      std::any_of(t.inv.begin(), t.inv.end(), [n](Element e) { return e >= n; }))
    throw Error(ErrorKind::BadTable, "table entry out of range");

  AxiomReport report;
  auto mul = [&](Element a, Element b) { return t.mult[a * n + b]; };
  for (Element a = 0; a < n; ++a)
    for (Element b = 0; b < n; ++b) {
      for (Element c = 0; c < n; ++c)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) report.non_associative.push_back({a, b, c});
      if (t.inv[mul(a, b)] != mul(t.inv[b], t.inv[a]))
        report.non_anti_homomorphic.push_back({a, b});
    }
  for (Element a = 0; a < n; ++a)
    if (t.inv[t.inv[a]] != a) report.non_involutive.push_back(a);
  report.unit = detect_unit(t);
  return report;
}

FiniteStarSemigroup FiniteStarSemigroup::validate(SemigroupTables tables) {
  const AxiomReport report = check_axioms(tables);
  if (!report.non_associative.empty())
    throw Error(ErrorKind::NotAssociative,
                "witness " + triple_text(tables, report.non_associative.front()));
  if (!report.non_involutive.empty())
    throw Error(ErrorKind::NotInvolutive,
                "inv(inv(" + tables.labels[report.non_involutive.front()] + ")) differs");
  if (!report.non_anti_homomorphic.empty()) {
    const auto& w = report.non_anti_homomorphic.front();
    throw Error(ErrorKind::NotAntiHomomorphism,
                "witness (" + tables.labels[w[0]] + ", " + tables.labels[w[1]] + ")");
  }
  return FiniteStarSemigroup(std::move(tables), report.unit);
}

std::optional<Element> FiniteStarSemigroup::find(const std::string& label) const {
  const auto it = std::find(tables_.labels.begin(), tables_.labels.end(), label);
  if (it == tables_.labels.end()) return std::nullopt;
  return static_cast<Element>(it - tables_.labels.begin());
}

Element FiniteStarSemigroup::power(Element s, std::size_t k) const {
  if (k == 0) throw Error(ErrorKind::BadParams, "power needs k >= 1");
  Element acc = s;
  for (std::size_t i = 1; i < k; ++i) acc = mul(acc, s);
  return acc;
}

namespace builtin {

FiniteStarSemigroup cyclic_group(std::size_t k) {
  if (k < 1) throw Error(ErrorKind::BadParams, "cyclic_group needs k >= 1");
  SemigroupTables t;
  for (std::size_t i = 0; i < k; ++i)
    t.labels.push_back(i == 0 ? "e" : i == 1 ? "g" : "g^" + std::to_string(i));
  t.mult.resize(k * k);
  t.inv.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) t.mult[i * k + j] = (i + j) % k;
    t.inv[i] = (k - i) % k;
  }
  return FiniteStarSemigroup::validate(std::move(t));
}

FiniteStarSemigroup intersection_semigroup(std::size_t m) {
  if (m < 1 || m > 16) throw Error(ErrorKind::BadParams, "intersection_semigroup needs 1 <= m <= 16");
  const std::size_t n = std::size_t{1} << m;
  SemigroupTables t;
  for (std::size_t mask = 0; mask < n; ++mask) {
    std::string label = "{";
    bool first = true;
    for (std::size_t i = 0; i < m; ++i)
      if (mask & (std::size_t{1} << i)) {
        label += (first ? "" : ",") + std::to_string(i + 1);
        first = false;
      }
    t.labels.push_back(label + "}");
  }
  t.mult.resize(n * n);
  t.inv.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) t.mult[a * n + b] = a & b;
    t.inv[a] = a;
  }
  return FiniteStarSemigroup::validate(std::move(t));
}

FiniteStarSemigroup matrix_unit_semigroup(std::size_t m) {
  if (m < 1) throw Error(ErrorKind::BadParams, "matrix_unit_semigroup needs m >= 1");
  const std::size_t n = 1 + m * m;
  SemigroupTables t;
  t.labels.push_back("0");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      t.labels.push_back("e" + std::to_string(i + 1) + std::to_string(j + 1));
  t.mult.assign(n * n, 0);
  t.inv.resize(n);
  t.inv[0] = 0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const Element eij = matrix_unit(m, i, j);
      t.inv[eij] = matrix_unit(m, j, i);
      for (std::size_t l = 0; l < m; ++l) t.mult[eij * n + matrix_unit(m, j, l)] = matrix_unit(m, i, l);
    }
  return FiniteStarSemigroup::validate(std::move(t));
}

FiniteStarSemigroup null_semigroup() {
  return FiniteStarSemigroup::validate({{"z", "a"}, {0, 0, 0, 0}, {0, 1}});
}

}  // namespace builtin

FiniteStarSemigroup builtin_by_name(const std::string& family, std::size_t param) {
  if (family == "cyclic_group") return builtin::cyclic_group(param);
  if (family == "intersection_semigroup") return builtin::intersection_semigroup(param);
  if (family == "matrix_unit_semigroup") return builtin::matrix_unit_semigroup(param);
  if (family == "null_semigroup") return builtin::null_semigroup();
  throw Error(ErrorKind::BadParams, "unknown family '" + family + "'");
}

FiniteStarSemigroup adjoin_unit(const FiniteStarSemigroup& s) {
  const std::size_t n = s.size();
  const std::size_t m = n + 1;
  SemigroupTables t;
  t.labels = s.labels();
  std::string fresh = "1";
  while (s.find(fresh)) fresh += "'";
  t.labels.push_back(fresh);
  t.mult.resize(m * m);
  t.inv.resize(m);
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) t.mult[a * m + b] = s.mul(a, b);
    t.mult[a * m + n] = a;
    t.mult[n * m + a] = a;
    t.inv[a] = s.star(a);
  }
  t.mult[n * m + n] = n;
  t.inv[n] = n;
  return FiniteStarSemigroup::validate(std::move(t));
}

FiniteStarSemigroup unitize(const FiniteStarSemigroup& s) {
  return s.is_unital() ? s : adjoin_unit(s);
}

bool is_inverse_semigroup(const FiniteStarSemigroup& s) {
  const std::size_t n = s.size();
  for (Element a = 0; a < n; ++a) {
    const Element as = s.star(a);
    if (s.mul(s.mul(a, as), a) != a || s.mul(s.mul(as, a), as) != as) return false;
    for (Element x = 0; x < n; ++x)
      if (x != as && s.mul(s.mul(a, x), a) == a && s.mul(s.mul(x, a), x) == x) return false;
  }
  return true;
}

}  // namespace dilkit
