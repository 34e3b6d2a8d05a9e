#pragma once

// Charts, frames and the connection calculus of a (0,2)-tensor h and an
// affine connection. Everything is written against a frame {e_a} of vector
// fields on an m-dimensional chart: coefficients are
//   nabla_{e_a} e_b = Gamma^c_{ab} e_c,   [e_a, e_b] = c^c_{ab} e_c,
// and a coordinate frame is the special case c = 0. Index conventions:
//   T^c_{ab}   = Gamma^c_{ab} - Gamma^c_{ba} - c^c_{ab}
//   R(e_a, e_b) e_c = R^l_{abc} e_l
// All indices in this API are zero-based.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qstat/expr.hpp"
#include "qstat/jet.hpp"
#include "qstat/linalg.hpp"

namespace qstat {

inline constexpr double kNonDegenerateDet = 1e-9;
inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kExactTol = 1e-9;
inline constexpr double kFiniteDifferenceTol = 1e-6;

enum class Symmetry { symmetric, skew, general };

inline const char* to_string(Symmetry s) {
  switch (s) {
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::skew: return "skew";
    case Symmetry::general: return "general";
  }
  return "?";
}

inline Symmetry symmetry_from_string(const std::string& s) {
  if (s == "symmetric") return Symmetry::symmetric;
  if (s == "skew") return Symmetry::skew;
  if (s == "general") return Symmetry::general;
  throw std::invalid_argument("unknown symmetry class '" + s + "'");
}

class DegenerateMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SymmetryViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

using Point = std::vector<double>;
using GammaKey = std::array<std::size_t, 3>;  // {k, i, j} for Gamma^k_{ij}

struct ManifoldSpec {
  std::string label;
  std::vector<std::string> coords;
  std::vector<Expr> metric;  // row-major h_{ij}
  Symmetry symmetry = Symmetry::symmetric;
  std::map<GammaKey, Expr> gamma;  // absent entries are zero
  std::vector<Interval> domain;

  std::size_t dim() const { return coords.size(); }

  const Expr& h(std::size_t i, std::size_t j) const { return metric.at(i * dim() + j); }

  static ManifoldSpec from_strings(std::string label, std::vector<std::string> coords,
                                   const std::vector<std::vector<std::string>>& metric, Symmetry symmetry,
                                   const std::map<GammaKey, std::string>& gamma, std::vector<Interval> domain) {
    ManifoldSpec s;
    s.label = std::move(label);
    s.coords = std::move(coords);
    s.symmetry = symmetry;
    s.domain = std::move(domain);
    const std::size_t n = s.coords.size();
    if (n == 0) throw std::invalid_argument("manifold needs at least one coordinate");
    if (metric.size() != n) throw std::invalid_argument("metric must have one row per coordinate");
    for (const auto& row : metric) {
      if (row.size() != n) throw std::invalid_argument("metric must be square");
      for (const auto& entry : row) s.metric.push_back(Expr::parse(entry, s.coords));
    }
    for (const auto& [key, text] : gamma) {
      for (std::size_t idx : key)
        if (idx >= n) throw std::invalid_argument("connection index out of range");
      s.gamma.emplace(key, Expr::parse(text, s.coords));
    }
    if (s.domain.empty()) s.domain.assign(n, Interval{});
    if (s.domain.size() != n) throw std::invalid_argument("domain must have one interval per coordinate");
    return s;
  }
};

inline std::vector<Jet> coordinate_jets(std::span<const double> point) {
  std::vector<Jet> v;
  v.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) v.push_back(Jet::variable(point[i], point.size(), i));
  return v;
}

// Uniform samples from a box with a fixed seed.
inline std::vector<Point> sample_points(std::span<const Interval> box, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Point p;
    for (const auto& iv : box) p.push_back(std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng));
    pts.push_back(std::move(p));
  }
  return pts;
}

// Frame-component jets of a multi-component field at a point.
using JetFunction = std::function<std::vector<Jet>(std::span<const double>)>;

inline JetFunction jets_of(std::vector<Expr> exprs) {
  return [exprs = std::move(exprs)](std::span<const double> p) {
    const auto vars = coordinate_jets(p);
    std::vector<Jet> out;
    out.reserve(exprs.size());
    for (const auto& e : exprs) out.push_back(e.eval_jets(vars));
    return out;
  };
}

// ---------------------------------------------------------------------------
// Base quantities of a spec as jets.

struct BaseJets {
  std::size_t n = 0;
  Matrix<Jet> h;
  Matrix<Jet> h_inv;
  std::vector<Jet> gamma;  // gamma[(k*n + i)*n + j] = Gamma^k_{ij}

  const Jet& G(std::size_t k, std::size_t i, std::size_t j) const { return gamma[(k * n + i) * n + j]; }
};

// Evaluates h, h^{-1} and Gamma through caller-supplied coordinate jets, so the
// same spec can be differentiated along a larger (lifted) chart.
inline BaseJets evaluate_base(const ManifoldSpec& spec, std::span<const Jet> vars, bool need_inverse = true) {
  const std::size_t n = spec.dim();
  BaseJets b;
  b.n = n;
  b.h = Matrix<Jet>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b.h(i, j) = spec.h(i, j).eval_jets(vars);
  b.gamma.assign(n * n * n, Jet(0.0));
  for (const auto& [key, e] : spec.gamma) b.gamma[(key[0] * n + key[1]) * n + key[2]] = e.eval_jets(vars);
  if (need_inverse) {
    const double det = determinant(b.h.values());
    if (std::fabs(det) < kNonDegenerateDet) {
      throw DegenerateMetric("metric is degenerate (|det h| = " + std::to_string(std::fabs(det)) + ")");
    }
    b.h_inv = inverse(b.h);
  }
  return b;
}

inline BaseJets evaluate_base(const ManifoldSpec& spec, std::span<const double> point, bool need_inverse = true) {
  if (point.size() != spec.dim()) throw std::invalid_argument("point dimension does not match the manifold");
  return evaluate_base(spec, coordinate_jets(point), need_inverse);
}

inline Matrix<double> metric_at(const ManifoldSpec& spec, std::span<const double> point) {
  const std::size_t n = spec.dim();
  Matrix<double> h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = spec.h(i, j).eval(point);
  return h;
}

// Checks the declared symmetry class and non-degeneracy at the given points.
inline void validate(const ManifoldSpec& spec, std::span<const Point> points) {
  const std::size_t n = spec.dim();
  if (spec.metric.size() != n * n) throw std::invalid_argument("metric must be square");
  if (spec.symmetry == Symmetry::skew && n % 2 != 0) {
    throw SymmetryViolation("a non-degenerate skew metric needs even dimension");
  }
  for (const auto& p : points) {
    const Matrix<double> h = metric_at(spec, p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double sym = spec.symmetry == Symmetry::symmetric ? h(i, j) - h(j, i)
                           : spec.symmetry == Symmetry::skew    ? h(i, j) + h(j, i)
                                                                : 0.0;
        if (std::fabs(sym) > kSymmetryTol) {
          throw SymmetryViolation("metric entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                  ") violate the declared " + to_string(spec.symmetry) + " class");
        }
      }
    const double det = determinant(h);
    if (std::fabs(det) < kNonDegenerateDet) throw DegenerateMetric("metric is degenerate at a sampled point");
  }
}

// ---------------------------------------------------------------------------
// Musical isomorphisms: flat(X)_j = X^i h_{ij}, sharp is its inverse.

inline std::vector<double> musical_flat(const ManifoldSpec& spec, std::span<const double> X,
                                        std::span<const double> point) {
  const Matrix<double> h = metric_at(spec, point);
  if (std::fabs(determinant(h)) < kNonDegenerateDet) throw DegenerateMetric("metric is degenerate");
  const std::size_t n = spec.dim();
  std::vector<double> a(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a[j] += X[i] * h(i, j);
  return a;
}

inline std::vector<double> musical_sharp(const ManifoldSpec& spec, std::span<const double> alpha,
                                         std::span<const double> point) {
  const Matrix<double> h = metric_at(spec, point);
  if (std::fabs(determinant(h)) < kNonDegenerateDet) throw DegenerateMetric("metric is degenerate");
  // X^i h_{ij} = alpha_j  <=>  h^T X = alpha
  return solve(h.transposed(), std::vector<double>(alpha.begin(), alpha.end()));
}

// ---------------------------------------------------------------------------
// Frames and framed connections.

class FrameField {
 public:
  FrameField() = default;
  // components[a*m + mu] is the mu-th coordinate component of e_a.
  FrameField(std::vector<Expr> components, bool is_coordinate)
      : m_(static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(components.size()))))),
        components_(std::move(components)),
        is_coordinate_(is_coordinate) {
    if (m_ * m_ != components_.size()) throw std::invalid_argument("frame must have m*m components");
  }

  static FrameField coordinate(const std::vector<std::string>& coords) {
    const std::size_t m = coords.size();
    std::vector<Expr> c;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t mu = 0; mu < m; ++mu) c.emplace_back(a == mu ? 1.0 : 0.0, coords);
    return FrameField(std::move(c), true);
  }

  std::size_t dim() const { return m_; }
  bool is_coordinate() const { return is_coordinate_; }
  const Expr& component(std::size_t a, std::size_t mu) const { return components_.at(a * m_ + mu); }

  Matrix<Jet> evaluate(std::span<const Jet> vars) const {
    Matrix<Jet> E(m_, m_);
    for (std::size_t a = 0; a < m_; ++a)
      for (std::size_t mu = 0; mu < m_; ++mu) E(a, mu) = components_[a * m_ + mu].eval_jets(vars);
    return E;
  }

  Matrix<double> matrix(std::span<const double> point) const { return evaluate(coordinate_jets(point)).values(); }

 private:
  std::size_t m_ = 0;
  std::vector<Expr> components_;
  bool is_coordinate_ = false;
};

// Pointwise data of a connection in a frame.
struct ConnectionJets {
  std::size_t m = 0;
  bool holonomic = true;
  Matrix<Jet> frame;      // frame(a, mu)
  Matrix<Jet> frame_inv;  // coordinate -> frame components: w^c = v^mu frame_inv(mu, c)
  std::vector<Jet> gamma;

  const Jet& G(std::size_t c, std::size_t a, std::size_t b) const { return gamma[(c * m + a) * m + b]; }
};

class FramedConnection {
 public:
  FramedConnection() = default;
  // coefficients(p)[(c*m + a)*m + b] = Gamma^c_{ab} in the frame.
  FramedConnection(FrameField frame, JetFunction coefficients)
      : frame_(std::move(frame)), coefficients_(std::move(coefficients)) {}

  static FramedConnection from_spec(const ManifoldSpec& spec) {
    const std::size_t n = spec.dim();
    std::vector<Expr> coeffs(n * n * n, Expr(0.0, spec.coords));
    for (const auto& [key, e] : spec.gamma) coeffs[(key[0] * n + key[1]) * n + key[2]] = e;
    return FramedConnection(FrameField::coordinate(spec.coords), jets_of(std::move(coeffs)));
  }

  const FrameField& frame() const { return frame_; }
  std::size_t dim() const { return frame_.dim(); }

  ConnectionJets evaluate(std::span<const double> point) const {
    ConnectionJets cj;
    cj.m = frame_.dim();
    if (point.size() != cj.m) throw std::invalid_argument("point dimension does not match the chart");
    cj.holonomic = frame_.is_coordinate();
    const auto vars = coordinate_jets(point);
    cj.frame = frame_.evaluate(vars);
    if (std::fabs(determinant(cj.frame.values())) < kNonDegenerateDet) {
      throw SingularMatrix("frame matrix is singular");
    }
    cj.frame_inv = inverse(cj.frame);
    cj.gamma = coefficients_(point);
    if (cj.gamma.size() != cj.m * cj.m * cj.m) throw std::logic_error("connection has wrong number of coefficients");
    return cj;
  }

 private:
  FrameField frame_;
  JetFunction coefficients_;
};

// A (0,2)-tensor given by its frame components g(e_a, e_b).
struct BilinearField {
  std::size_t m = 0;
  JetFunction components;  // row-major m*m

  static BilinearField from_spec(const ManifoldSpec& spec) { return {spec.dim(), jets_of(spec.metric)}; }
};

// ---------------------------------------------------------------------------
// Evaluated tensors.

enum class Valence { v02, v03, v11, v12, v13 };

struct TensorValue {
  Valence valence = Valence::v02;
  std::size_t dim = 0;
  std::vector<double> data;

  static std::size_t rank_of(Valence v) {
    switch (v) {
      case Valence::v02: return 2;
      case Valence::v03: return 3;
      case Valence::v11: return 2;
      case Valence::v12: return 3;
      case Valence::v13: return 4;
    }
    return 0;
  }

  TensorValue() = default;
  TensorValue(Valence v, std::size_t n) : valence(v), dim(n) {
    std::size_t size = 1;
    for (std::size_t r = 0; r < rank_of(v); ++r) size *= n;
    data.assign(size, 0.0);
  }

  // First index is the contravariant one where present.
  double& at(std::initializer_list<std::size_t> idx) { return data[offset(idx)]; }
  double at(std::initializer_list<std::size_t> idx) const { return data[offset(idx)]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data) m = std::max(m, std::fabs(v));
    return m;
  }

 private:
  std::size_t offset(std::initializer_list<std::size_t> idx) const {
    if (idx.size() != rank_of(valence)) throw std::invalid_argument("TensorValue: wrong number of indices");
    std::size_t o = 0;
    for (std::size_t i : idx) {
      if (i >= dim) throw std::out_of_range("TensorValue: index out of range");
      o = o * dim + i;
    }
    return o;
  }
};

// ---------------------------------------------------------------------------
// Frame calculus on jets.

namespace frame_calc {

// e_a(f) with one derivative order consumed.
inline Jet along(const ConnectionJets& cj, std::size_t a, const Jet& f) {
  Jet r(0.0);
  for (std::size_t mu = 0; mu < cj.m; ++mu) r = r + cj.frame(a, mu) * f.partial(mu);
  return r;
}

// c^c_{ab} stored at [(c*m + a)*m + b].
inline std::vector<Jet> structure_functions(const ConnectionJets& cj) {
  const std::size_t m = cj.m;
  std::vector<Jet> c(m * m * m, Jet(0.0));
  if (cj.holonomic) return c;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      std::vector<Jet> v(m, Jet(0.0));
      for (std::size_t mu = 0; mu < m; ++mu) v[mu] = along(cj, a, cj.frame(b, mu)) - along(cj, b, cj.frame(a, mu));
      for (std::size_t k = 0; k < m; ++k) {
        Jet w(0.0);
        for (std::size_t mu = 0; mu < m; ++mu) w = w + v[mu] * cj.frame_inv(mu, k);
        c[(k * m + a) * m + b] = w;
      }
    }
  return c;
}

inline TensorValue torsion(const ConnectionJets& cj) {
  const std::size_t m = cj.m;
  const auto c = structure_functions(cj);
  TensorValue t(Valence::v12, m);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        t.at({k, a, b}) = cj.G(k, a, b).value() - cj.G(k, b, a).value() - c[(k * m + a) * m + b].value();
  return t;
}

inline TensorValue curvature(const ConnectionJets& cj) {
  const std::size_t m = cj.m;
  const auto c = structure_functions(cj);
  TensorValue r(Valence::v13, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t cc = 0; cc < m; ++cc)
        for (std::size_t f = 0; f < m; ++f) {
          double v = along(cj, a, cj.G(f, b, cc)).value() - along(cj, b, cj.G(f, a, cc)).value();
          for (std::size_t d = 0; d < m; ++d) {
            v += cj.G(d, b, cc).value() * cj.G(f, a, d).value() - cj.G(d, a, cc).value() * cj.G(f, b, d).value() -
                 c[(d * m + a) * m + b].value() * cj.G(f, d, cc).value();
          }
          r.at({f, a, b, cc}) = v;
        }
  return r;
}

// (nabla_{e_a} g)(e_b, e_c) at [(a*m + b)*m + c].
inline TensorValue covariant_derivative(const ConnectionJets& cj, std::span<const Jet> g) {
  const std::size_t m = cj.m;
  TensorValue t(Valence::v03, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) {
        double v = along(cj, a, g[b * m + c]).value();
        for (std::size_t d = 0; d < m; ++d)
          v -= cj.G(d, a, b).value() * g[d * m + c].value() + cj.G(d, a, c).value() * g[b * m + d].value();
        t.at({a, b, c}) = v;
      }
  return t;
}

// (d^nabla g)(e_a, e_b, e_c) = (nabla_a g)(b,c) - (nabla_b g)(a,c) + g(T(a,b), c).
inline TensorValue d_nabla(const ConnectionJets& cj, std::span<const Jet> g) {
  const std::size_t m = cj.m;
  const TensorValue ng = covariant_derivative(cj, g);
  const TensorValue t = torsion(cj);
  TensorValue d(Valence::v03, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) {
        double v = ng.at({a, b, c}) - ng.at({b, a, c});
        for (std::size_t k = 0; k < m; ++k) v += t.at({k, a, b}) * g[k * m + c].value();
        d.at({a, b, c}) = v;
      }
  return d;
}

}  // namespace frame_calc

// ---------------------------------------------------------------------------
// Public operations.

inline double covariant_derivative_02(const ManifoldSpec& spec, std::size_t i, std::size_t j, std::size_t k,
                                      std::span<const double> point) {
  const auto cj = FramedConnection::from_spec(spec).evaluate(point);
  const auto g = BilinearField::from_spec(spec).components(point);
  return frame_calc::covariant_derivative(cj, g).at({i, j, k});
}

inline std::vector<double> torsion(const FramedConnection& conn, std::size_t a, std::size_t b,
                                   std::span<const double> point) {
  const TensorValue t = frame_calc::torsion(conn.evaluate(point));
  std::vector<double> out(conn.dim());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = t.at({k, a, b});
  return out;
}

inline std::vector<double> torsion(const ManifoldSpec& spec, std::size_t a, std::size_t b,
                                   std::span<const double> point) {
  return torsion(FramedConnection::from_spec(spec), a, b, point);
}

inline std::vector<double> curvature(const FramedConnection& conn, std::size_t a, std::size_t b, std::size_t c,
                                     std::span<const double> point) {
  const TensorValue r = frame_calc::curvature(conn.evaluate(point));
  std::vector<double> out(conn.dim());
  for (std::size_t l = 0; l < out.size(); ++l) out[l] = r.at({l, a, b, c});
  return out;
}

inline std::vector<double> curvature(const ManifoldSpec& spec, std::size_t a, std::size_t b, std::size_t c,
                                     std::span<const double> point) {
  return curvature(FramedConnection::from_spec(spec), a, b, c, point);
}

inline double d_nabla(const FramedConnection& conn, const BilinearField& g, std::size_t a, std::size_t b,
                      std::size_t c, std::span<const double> point) {
  return frame_calc::d_nabla(conn.evaluate(point), g.components(point)).at({a, b, c});
}

inline double d_nabla_h(const ManifoldSpec& spec, std::size_t a, std::size_t b, std::size_t c,
                        std::span<const double> point) {
  return d_nabla(FramedConnection::from_spec(spec), BilinearField::from_spec(spec), a, b, c, point);
}

// Components of [e_a, e_b] in the frame basis.
inline std::vector<double> frame_bracket(const FrameField& frame, std::size_t a, std::size_t b,
                                         std::span<const double> point) {
  const std::size_t m = frame.dim();
  const FramedConnection flat(FrameField(frame), [m](std::span<const double>) {
    return std::vector<Jet>(m * m * m, Jet(0.0));
  });
  ConnectionJets cj = flat.evaluate(point);
  cj.holonomic = false;
  const auto c = frame_calc::structure_functions(cj);
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = c[(k * m + a) * m + b].value();
  return out;
}

// ---------------------------------------------------------------------------
// Classification.

struct Classification {
  bool torsion_free = false;
  bool metric_parallel = false;
  bool quasi_statistical = false;
  bool flat = false;
  double max_torsion = 0.0;
  double max_nabla_h = 0.0;
  double max_d_nabla_h = 0.0;
  double max_curvature = 0.0;

  bool hessian() const { return quasi_statistical && flat; }
};

inline Classification classify(const FramedConnection& conn, const BilinearField& g, std::span<const Point> samples,
                               double tol) {
  if (samples.empty()) throw std::invalid_argument("classify needs at least one sample");
  Classification c;
  for (const auto& p : samples) {
    const auto cj = conn.evaluate(p);
    const auto gj = g.components(p);
    c.max_torsion = std::max(c.max_torsion, frame_calc::torsion(cj).max_abs());
    c.max_nabla_h = std::max(c.max_nabla_h, frame_calc::covariant_derivative(cj, gj).max_abs());
    c.max_d_nabla_h = std::max(c.max_d_nabla_h, frame_calc::d_nabla(cj, gj).max_abs());
    c.max_curvature = std::max(c.max_curvature, frame_calc::curvature(cj).max_abs());
  }
  c.torsion_free = c.max_torsion <= tol;
  c.metric_parallel = c.max_nabla_h <= tol;
  c.quasi_statistical = c.max_d_nabla_h <= tol;
  c.flat = c.max_curvature <= tol;
  return c;
}

inline Classification classify(const ManifoldSpec& spec, std::span<const Point> samples, double tol) {
  return classify(FramedConnection::from_spec(spec), BilinearField::from_spec(spec), samples, tol);
}

}  // namespace qstat
