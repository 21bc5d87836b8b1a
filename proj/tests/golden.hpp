#pragma once

// Golden-file harness for the dilkit executable: runs each case twice,
// requires byte-identical output, the expected exit code, and agreement with
// the stored report up to a numeric tolerance.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace golden {

struct Case {
  std::string name;
  std::string command;
  std::string fixture;
  int expected_exit = 0;
};

struct RunResult {
  int exit_code = -1;
  std::string out;
};

/// Manifest lines: name command fixture expected_exit. '#' starts a comment.
inline std::vector<Case> load_cases(const std::string& manifest) {
  std::ifstream in(manifest);
  std::vector<Case> cases;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Case c;
    if (ls >> c.name >> c.command >> c.fixture >> c.expected_exit) cases.push_back(c);
  }
  return cases;
}

inline RunResult run(const std::string& binary, const std::string& dir, const std::string& args) {
  const std::string cmd = "cd '" + dir + "' && '" + binary + "' " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline RunResult run_case(const std::string& binary, const std::string& fixtures, const Case& c) {
  return run(binary, fixtures, c.command + " " + c.fixture + " --format json");
}

/// Structural equality with numbers compared to |a - b| <= tol * max(1, |a|, |b|).
inline void compare(const nlohmann::json& a, const nlohmann::json& b, double tol, const std::string& path,
                    std::vector<std::string>& diffs) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    if (std::abs(x - y) > tol * std::max({1.0, std::abs(x), std::abs(y)}))
      diffs.push_back(path + ": " + a.dump() + " vs " + b.dump());
    return;
  }
  if (a.type() != b.type()) {
    diffs.push_back(path + ": type mismatch");
    return;
  }
  if (a.is_object()) {
    for (const auto& [k, v] : a.items()) {
      if (!b.contains(k)) diffs.push_back(path + "." + k + ": missing");
      else compare(v, b[k], tol, path + "." + k, diffs);
    }
    for (const auto& [k, v] : b.items())
      if (!a.contains(k)) diffs.push_back(path + "." + k + ": unexpected");
    return;
  }
  if (a.is_array()) {
    if (a.size() != b.size()) {
      diffs.push_back(path + ": length " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
      return;
    }
    for (std::size_t i = 0; i < a.size(); ++i) compare(a[i], b[i], tol, path + "[" + std::to_string(i) + "]", diffs);
    return;
  }
  if (a != b) diffs.push_back(path + ": " + a.dump() + " vs " + b.dump());
}

struct CaseOutcome {
  bool ok = true;
  std::vector<std::string> problems;
};

inline CaseOutcome check_case(const std::string& binary, const std::string& fixtures,
                              const std::string& golden_dir, const Case& c, double tol = 1e-9) {
  CaseOutcome o;
  const RunResult first = run_case(binary, fixtures, c);
  const RunResult second = run_case(binary, fixtures, c);
  if (first.out != second.out) o.problems.push_back("output differs between runs");
  if (first.exit_code != c.expected_exit)
    o.problems.push_back("exit " + std::to_string(first.exit_code) + ", expected " +
                         std::to_string(c.expected_exit));
  std::ifstream g(golden_dir + "/" + c.name + ".json");
  if (!g) {
    o.problems.push_back("missing golden file");
  } else {
    try {
      const nlohmann::json expected = nlohmann::json::parse(g);
      const nlohmann::json actual = nlohmann::json::parse(first.out);
      compare(expected, actual, tol, "$", o.problems);
    } catch (const nlohmann::json::exception& e) {
      o.problems.push_back(std::string("bad JSON: ") + e.what());
    }
  }
  o.ok = o.problems.empty();
  return o;
}

}  // namespace golden
