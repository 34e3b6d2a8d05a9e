#pragma once

// JSON manifests: a manifold in local coordinates plus run options.
//
//   {"label": "...", "dimension": 2, "coordinates": ["x1", "x2"],
//    "metric": [["1", "0"], ["0", "1+x1^2"]], "symmetry": "symmetric",
//    "connection": {"1,1,2": "1"},          // Gamma^k_ij keyed "k,i,j", 1-based
//    "domain": [[-1, 1], [-1, 1]],
//    "samples": 50, "seed": 42, "tolerance": 1e-9, "fiber_domain": [-1, 1]}

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qstat/geometry.hpp"

namespace qstat {

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOptions {
  std::size_t samples = 50;
  std::uint64_t seed = 42;
  double tolerance = kExactTol;
  Interval fiber{-1.0, 1.0};
};

struct Manifest {
  ManifoldSpec spec;
  RunOptions options;
};

namespace detail {

inline Interval read_interval(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ManifestError(where + ": expected [lo, hi]");
  Interval iv{j[0].get<double>(), j[1].get<double>()};
  if (!(iv.lo < iv.hi)) throw ManifestError(where + ": empty interval");
  return iv;
}

inline GammaKey read_gamma_key(const std::string& key, std::size_t n) {
  GammaKey out{};
  std::stringstream ss(key);
  std::string part;
  std::size_t count = 0;
  while (std::getline(ss, part, ',')) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(part, &pos);
    } catch (const std::exception&) {
      throw ManifestError("connection key \"" + key + "\": not an integer triple");
    }
    if (pos != part.size() || count >= 3) throw ManifestError("connection key \"" + key + "\": expected \"k,i,j\"");
    if (v < 1 || static_cast<std::size_t>(v) > n)
      throw ManifestError("connection key \"" + key + "\": index out of range 1.." + std::to_string(n));
    out[count++] = static_cast<std::size_t>(v - 1);
  }
  if (count != 3) throw ManifestError("connection key \"" + key + "\": expected \"k,i,j\"");
  return out;
}

}  // namespace detail

// Builds and validates the ManifoldSpec; validation samples `options.samples` base points.
inline Manifest parse_manifest(const nlohmann::json& j, const std::string& fallback_label = "manifest") {
  if (!j.is_object()) throw ManifestError("manifest must be a JSON object");
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ManifestError(std::string("missing field \"") + key + "\"");
    return j.at(key);
  };
  Manifest m;
  try {
    const auto coords = require("coordinates").get<std::vector<std::string>>();
    const std::size_t n = coords.size();
    if (j.contains("dimension") && j.at("dimension").get<std::size_t>() != n)
      throw ManifestError("dimension does not match the number of coordinates");
    const auto metric = require("metric").get<std::vector<std::vector<std::string>>>();
    if (metric.size() != n) throw ManifestError("metric must have " + std::to_string(n) + " rows");
    for (std::size_t r = 0; r < metric.size(); ++r)
      if (metric[r].size() != n) throw ManifestError("metric row " + std::to_string(r + 1) + " is not of length " + std::to_string(n));
    Symmetry sym = Symmetry::symmetric;
    try {
      sym = symmetry_from_string(j.value("symmetry", std::string("symmetric")));
    } catch (const std::invalid_argument& e) {
      throw ManifestError(e.what());
    }
    std::map<GammaKey, std::string> gamma;
    if (j.contains("connection")) {
      if (!j.at("connection").is_object()) throw ManifestError("connection must be an object of \"k,i,j\": expression");
      for (const auto& [key, val] : j.at("connection").items()) gamma[detail::read_gamma_key(key, n)] = val.get<std::string>();
    }
    std::vector<Interval> domain;
    if (j.contains("domain")) {
      const auto& d = j.at("domain");
      if (!d.is_array() || d.size() != n) throw ManifestError("domain must list one interval per coordinate");
      for (std::size_t i = 0; i < n; ++i) domain.push_back(detail::read_interval(d[i], "domain[" + std::to_string(i) + "]"));
    }
    m.options.samples = j.value("samples", m.options.samples);
    m.options.seed = j.value("seed", m.options.seed);
    m.options.tolerance = j.value("tolerance", m.options.tolerance);
    if (j.contains("fiber_domain")) m.options.fiber = detail::read_interval(j.at("fiber_domain"), "fiber_domain");
    if (m.options.samples == 0) throw ManifestError("samples must be positive");
    m.spec = ManifoldSpec::from_strings(j.value("label", fallback_label), coords, metric, sym, gamma, domain);
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("malformed manifest: ") + e.what());
  } catch (const ParseError& e) {
    throw ManifestError(std::string("expression error: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ManifestError(e.what());
  }
  validate(m.spec, sample_points(m.spec.domain, m.options.samples, m.options.seed));
  return m;
}

inline Manifest parse_manifest_text(const std::string& text, const std::string& fallback_label = "manifest") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ManifestError(std::string("JSON parse error at byte ") + std::to_string(e.byte) + ": " + e.what());
  }
  return parse_manifest(j, fallback_label);
}

inline Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest_text(ss.str(), path);
}

inline nlohmann::ordered_json export_manifest(const ManifoldSpec& spec, const RunOptions& opt = {}) {
  nlohmann::ordered_json j;
  const std::size_t n = spec.dim();
  j["label"] = spec.label;
  j["dimension"] = n;
  j["coordinates"] = spec.coords;
  auto metric = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < n; ++i) {
    auto row = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < n; ++k) row.push_back(spec.h(i, k).to_string());
    metric.push_back(std::move(row));
  }
  j["metric"] = std::move(metric);
  j["symmetry"] = to_string(spec.symmetry);
  nlohmann::ordered_json conn = nlohmann::ordered_json::object();
  for (const auto& [key, e] : spec.gamma)
    conn[std::to_string(key[0] + 1) + "," + std::to_string(key[1] + 1) + "," + std::to_string(key[2] + 1)] = e.to_string();
  j["connection"] = std::move(conn);
  auto dom = nlohmann::ordered_json::array();
  for (const auto& iv : spec.domain) dom.push_back({iv.lo, iv.hi});
  j["domain"] = std::move(dom);
  j["samples"] = opt.samples;
  j["seed"] = opt.seed;
  j["tolerance"] = opt.tolerance;
  j["fiber_domain"] = {opt.fiber.lo, opt.fiber.hi};
  return j;
}

}  // namespace qstat
