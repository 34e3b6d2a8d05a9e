#pragma once

// Built-in example manifolds with independently derived properties.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "qstat/geometry.hpp"

namespace qstat {

struct ExpectedFlags {
  bool torsion_free = false;
  bool metric_parallel = false;
  bool quasi_statistical = false;
  bool flat = false;

  friend bool operator==(const ExpectedFlags&, const ExpectedFlags&) = default;
};

struct CatalogEntry {
  std::string name;
  ManifoldSpec spec;
  ExpectedFlags expected;
  std::string provenance;
};

class UnknownCatalogEntry : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"euclidean2",      "line-weighted", "torsion-hessian",
                                                 "non-statistical", "symplectic2",   "hyperbolic"};
  return names;
}

namespace detail {

inline CatalogEntry make_entry(const std::string& name) {
  using S = Symmetry;
  const std::vector<Interval> square = {{-1, 1}, {-1, 1}};
  if (name == "euclidean2") {
    return {name,
            ManifoldSpec::from_strings(name, {"x1", "x2"}, {{"1", "0"}, {"0", "1"}}, S::symmetric, {}, square),
            {true, true, true, true},
            "constant identity metric, zero connection"};
  }
  if (name == "line-weighted") {
    return {name,
            ManifoldSpec::from_strings(name, {"x1"}, {{"2"}}, S::symmetric, {{{0, 0, 0}, "1"}}, {{-1, 1}}),
            {true, false, true, true},
            "n=1, h=2, Gamma=1: (nabla h)_111 = -4, d^nabla h vanishes by antisymmetry"};
  }
  if (name == "torsion-hessian") {
    return {name,
            ManifoldSpec::from_strings(name, {"x1", "x2"}, {{"1", "0"}, {"0", "1"}}, S::symmetric,
                                       {{{0, 0, 1}, "1"}}, square),
            {false, false, true, true},
            "h = identity, Gamma^1_12 = 1: torsion T^1_12 = 1 cancels the nabla h terms in d^nabla h"};
  }
  if (name == "non-statistical") {
    return {name,
            ManifoldSpec::from_strings(name, {"x1", "x2"}, {{"1", "0"}, {"0", "1+x1^2"}}, S::symmetric, {},
                                       square),
            {true, false, false, true},
            "h = diag(1, 1+x1^2), Gamma = 0: d^nabla h(d1, d2, d2) = 2 x1"};
  }
  if (name == "symplectic2") {
    return {name,
            ManifoldSpec::from_strings(name, {"x1", "x2"}, {{"0", "1"}, {"-1", "0"}}, S::skew, {}, square),
            {true, true, true, true},
            "constant skew form, zero connection"};
  }
  if (name == "hyperbolic") {
    return {name,
            ManifoldSpec::from_strings(name, {"x1", "x2"}, {{"1/x2^2", "0"}, {"0", "1/x2^2"}}, S::symmetric,
                                       {{{0, 0, 1}, "-1/x2"},
                                        {{0, 1, 0}, "-1/x2"},
                                        {{1, 0, 0}, "1/x2"},
                                        {{1, 1, 1}, "-1/x2"}},
                                       {{-1, 1}, {1, 2}}),
            {true, true, true, false},
            "upper half-plane Levi-Civita connection, R^2_121 = 1/x2^2"};
  }
  throw UnknownCatalogEntry("unknown catalog entry '" + name + "'");
}

}  // namespace detail

inline ExpectedFlags flags_of(const Classification& c) {
  return {c.torsion_free, c.metric_parallel, c.quasi_statistical, c.flat};
}

// Returns the entry after re-deriving its flags; a mismatch is a logic error.
inline CatalogEntry builtin(const std::string& name) {
  CatalogEntry entry = detail::make_entry(name);
  const auto points = sample_points(entry.spec.domain, 20, 42);
  validate(entry.spec, points);
  const ExpectedFlags got = flags_of(classify(entry.spec, points, kExactTol));
  if (!(got == entry.expected)) throw std::logic_error("catalog entry '" + name + "' does not reproduce its flags");
  return entry;
}

}  // namespace qstat
