#pragma once

// Cotangent and tangent bundles as explicit 2n-dimensional charts.
//
// Lifted coordinates are the base names followed by "y_<name>". Frames are
// ordered (H_1..H_n, V_1..V_n) with V_j = d/dy_j and
//   cotangent: H_i = d/dx_i + y_k Gamma^k_il d/dy_l
//   tangent:   H_i = d/dx_i - y^k Gamma^l_ik d/dy_l
// Lifted metrics and connections are frame components over this chart. They
// are JetFunctions rather than expressions because several entries involve
// derivatives of h^{-1}.

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qstat/expr.hpp"
#include "qstat/genbundle.hpp"
#include "qstat/geometry.hpp"

namespace qstat {

enum class Bundle { cotangent, tangent };

inline const char* to_string(Bundle b) { return b == Bundle::cotangent ? "cotangent" : "tangent"; }

inline Bundle bundle_from_string(const std::string& s) {
  if (s == "cotangent") return Bundle::cotangent;
  if (s == "tangent") return Bundle::tangent;
  throw std::invalid_argument("unknown bundle '" + s + "'");
}

class LiftedChart {
 public:
  static LiftedChart build(const ManifoldSpec& spec, Bundle bundle, Interval fiber = {}) {
    LiftedChart c;
    c.base_ = spec;
    c.bundle_ = bundle;
    c.fiber_ = fiber;
    const std::size_t n = spec.dim();
    c.coords_ = spec.coords;
    for (const auto& x : spec.coords) c.coords_.push_back("y_" + x);

    std::map<std::string, Expr> images;
    for (std::size_t i = 0; i < n; ++i) images.emplace(spec.coords[i], Expr::variable(i, c.coords_));
    auto gamma = [&](std::size_t k, std::size_t i, std::size_t j) -> std::optional<Expr> {
      auto it = spec.gamma.find({k, i, j});
      if (it == spec.gamma.end()) return std::nullopt;
      return it->second.substitute(images, c.coords_);
    };

    const std::size_t m = 2 * n;
    std::vector<Expr> comp(m * m, Expr(0.0, c.coords_));
    for (std::size_t a = 0; a < m; ++a) comp[a * m + a] = Expr(1.0, c.coords_);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        std::optional<Expr> sum;
        for (std::size_t k = 0; k < n; ++k) {
          auto g = bundle == Bundle::cotangent ? gamma(k, i, l) : gamma(l, i, k);
          if (!g) continue;
          Expr term = exprs::mul(Expr::variable(n + k, c.coords_), *g);
          if (bundle == Bundle::tangent) term = exprs::neg(term);
          sum = sum ? exprs::add(*sum, term) : term;
        }
        if (sum) comp[i * m + n + l] = *sum;
      }
    c.frame_ = FrameField(std::move(comp), false);
    return c;
  }

  const ManifoldSpec& base() const { return base_; }
  Bundle bundle() const { return bundle_; }
  const std::vector<std::string>& coords() const { return coords_; }
  const FrameField& frame() const { return frame_; }
  Interval fiber() const { return fiber_; }
  std::size_t n() const { return base_.dim(); }
  std::size_t dim() const { return 2 * n(); }

  // Base data through the first n lifted coordinate jets.
  BaseJets base_jets(std::span<const Jet> vars, bool need_inverse = true) const {
    return evaluate_base(base_, vars.first(n()), need_inverse);
  }

  std::vector<Point> samples(std::size_t count, std::uint64_t seed) const {
    std::vector<Interval> box = base_.domain;
    box.resize(n());
    box.insert(box.end(), n(), fiber_);
    auto pts = sample_points(box, count, seed);
    // terms linear in y vanish at y = 0, so make one sample far from the zero section
    if (!pts.empty()) {
      for (std::size_t i = n(); i < dim(); ++i) {
        double& y = pts[0][i];
        const double big = 0.5 + 0.5 * std::fabs(y);
        for (double cand : {y >= 0 ? big : -big, y >= 0 ? -big : big}) {
          if (cand >= fiber_.lo && cand <= fiber_.hi) {
            y = cand;
            break;
          }
        }
      }
    }
    return pts;
  }

  std::span<const double> base_point(std::span<const double> p) const { return p.first(n()); }
  std::span<const double> fiber_point(std::span<const double> p) const { return p.subspan(n(), n()); }

 private:
  ManifoldSpec base_;
  Bundle bundle_ = Bundle::cotangent;
  Interval fiber_;
  std::vector<std::string> coords_;
  FrameField frame_;
};

inline LiftedChart build_lifted_chart(const ManifoldSpec& spec, Bundle bundle, Interval fiber = {}) {
  return LiftedChart::build(spec, bundle, fiber);
}

// ---------------------------------------------------------------------------
// Bundle morphisms TM + T*M -> T(T*M) and T(TM), in lifted frame components.

enum class Morphism { phi, psi };

inline std::vector<double> morphism_apply(Morphism tag, const ManifoldSpec& spec, const GenValue& s,
                                          std::span<const double> base_point) {
  std::vector<double> out = s.X;
  if (tag == Morphism::phi) {
    out.insert(out.end(), s.alpha.begin(), s.alpha.end());
  } else {
    const auto v = musical_sharp(spec, s.alpha, base_point);
    out.insert(out.end(), v.begin(), v.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lifted metrics.

enum class LiftedMetricKind { pw_plus, pw_minus, sasaki_cotangent, sasaki_tangent, horizontal };

inline const char* to_string(LiftedMetricKind k) {
  switch (k) {
    case LiftedMetricKind::pw_plus: return "pw_plus";
    case LiftedMetricKind::pw_minus: return "pw_minus";
    case LiftedMetricKind::sasaki_cotangent: return "sasaki_cotangent";
    case LiftedMetricKind::sasaki_tangent: return "sasaki_tangent";
    case LiftedMetricKind::horizontal: return "horizontal";
  }
  return "?";
}

inline Bundle bundle_of(LiftedMetricKind k) {
  return k == LiftedMetricKind::sasaki_tangent || k == LiftedMetricKind::horizontal ? Bundle::tangent
                                                                                    : Bundle::cotangent;
}

inline Morphism morphism_of(Bundle b) { return b == Bundle::cotangent ? Morphism::phi : Morphism::psi; }

// The Patterson-Walker variant paired with h by the quasi-statistical theorems.
inline LiftedMetricKind natural_pw(const ManifoldSpec& spec) {
  return spec.symmetry == Symmetry::skew ? LiftedMetricKind::pw_minus : LiftedMetricKind::pw_plus;
}

// Frame components G[a][b] = g(e_a, e_b):
//   pw_+-:            G[H_i][V_j] = +-delta_ij, G[V_j][H_i] = delta_ij
//   sasaki_cotangent: G[H_i][H_j] = h_ij, G[V_a][V_b] = (h^{-1})_{ba}
//   sasaki_tangent:   G[H_i][H_j] = G[V_i][V_j] = h_ij
//   horizontal:       G[H_a][V_b] = G[V_a][H_b] = h_ab
inline BilinearField build_lifted_metric(LiftedMetricKind kind, const ManifoldSpec& spec) {
  const std::size_t n = spec.dim();
  const std::size_t m = 2 * n;
  auto f = [kind, spec, n, m](std::span<const double> p) {
    const auto vars = coordinate_jets(p);
    const bool inv = kind == LiftedMetricKind::sasaki_cotangent;
    const BaseJets b = evaluate_base(spec, std::span<const Jet>(vars).first(n), inv);
    std::vector<Jet> G(m * m, Jet(0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t HH = i * m + j, HV = i * m + n + j, VH = (n + i) * m + j, VV = (n + i) * m + n + j;
        switch (kind) {
          case LiftedMetricKind::pw_plus:
          case LiftedMetricKind::pw_minus:
            if (i == j) {
              G[HV] = Jet(kind == LiftedMetricKind::pw_plus ? 1.0 : -1.0);
              G[VH] = Jet(1.0);
            }
            break;
          case LiftedMetricKind::sasaki_cotangent:
            G[HH] = b.h(i, j);
            G[VV] = b.h_inv(j, i);
            break;
          case LiftedMetricKind::sasaki_tangent:
            G[HH] = b.h(i, j);
            G[VV] = b.h(i, j);
            break;
          case LiftedMetricKind::horizontal:
            G[HV] = b.h(i, j);
            G[VH] = b.h(i, j);
            break;
        }
      }
    return G;
  };
  return {m, f};
}

// g(M s, M t) with M the morphism of the metric's bundle.
inline double pullback_to_genbundle(LiftedMetricKind kind, const ManifoldSpec& spec, const GenValue& s,
                                    const GenValue& t, std::span<const double> base_point) {
  const Morphism M = morphism_of(bundle_of(kind));
  const auto a = morphism_apply(M, spec, s, base_point);
  const auto b = morphism_apply(M, spec, t, base_point);
  Point p(base_point.begin(), base_point.end());
  p.resize(2 * spec.dim(), 0.0);
  const auto G = build_lifted_metric(kind, spec).components(p);
  const std::size_t m = a.size();
  double r = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) r += a[i] * G[i * m + j].value() * b[j];
  return r;
}

// ---------------------------------------------------------------------------
// Lifted connections.

// C^{jr}_i = (d_i h^{-1}_{jk} + h^{-1}_{jl} Gamma^k_il) h_kr, the coefficient of V_r in nabla_{H_i} V_j.
inline Jet tilde_vertical_coefficient(const BaseJets& b, std::size_t i, std::size_t j, std::size_t r) {
  Jet c(0.0);
  for (std::size_t k = 0; k < b.n; ++k) {
    Jet w = b.h_inv(j, k).partial(i);
    for (std::size_t l = 0; l < b.n; ++l) w = w + b.h_inv(j, l) * b.G(k, i, l);
    c = c + w * b.h(k, r);
  }
  return c;
}

// Pull-back of the hat connection to T*M.
inline FramedConnection build_tilde_connection(const ManifoldSpec& spec) {
  const LiftedChart chart = build_lifted_chart(spec, Bundle::cotangent);
  const std::size_t n = spec.dim(), m = 2 * n;
  auto f = [spec, n, m](std::span<const double> p) {
    const auto vars = coordinate_jets(p);
    const BaseJets b = evaluate_base(spec, std::span<const Jet>(vars).first(n), true);
    std::vector<Jet> out(m * m * m, Jet(0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          out[(k * m + i) * m + j] = b.G(k, i, j);
          out[((n + k) * m + i) * m + n + j] = tilde_vertical_coefficient(b, i, j, k);
        }
    return out;
  };
  return FramedConnection(chart.frame(), f);
}

// The corresponding connection on TM.
inline FramedConnection build_tilde_tilde_connection(const ManifoldSpec& spec) {
  const LiftedChart chart = build_lifted_chart(spec, Bundle::tangent);
  const std::size_t n = spec.dim(), m = 2 * n;
  auto f = [spec, n, m](std::span<const double> p) {
    const auto vars = coordinate_jets(p);
    const BaseJets b = evaluate_base(spec, std::span<const Jet>(vars).first(n), false);
    std::vector<Jet> out(m * m * m, Jet(0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          out[(k * m + i) * m + j] = b.G(k, i, j);
          out[((n + k) * m + i) * m + n + j] = b.G(k, i, j);
        }
    return out;
  };
  return FramedConnection(chart.frame(), f);
}

inline FramedConnection build_lifted_connection(const ManifoldSpec& spec, Bundle bundle) {
  return bundle == Bundle::cotangent ? build_tilde_connection(spec) : build_tilde_tilde_connection(spec);
}

// ---------------------------------------------------------------------------
// Closed-form torsion, curvature and d of the lifted structures, written in
// terms of base quantities at the projected point and the fiber coordinates.

struct BaseData {
  std::size_t n = 0;
  Matrix<double> h, h_inv;
  std::vector<double> gamma;  // Gamma^k_ij at (k*n + i)*n + j
  TensorValue R, d, nabla_h;
  std::vector<double> C;  // C^{jr}_i at (i*n + j)*n + r (cotangent only)

  double G(std::size_t k, std::size_t i, std::size_t j) const { return gamma[(k * n + i) * n + j]; }
  double Cv(std::size_t i, std::size_t j, std::size_t r) const { return C[(i * n + j) * n + r]; }

  BaseData(const ManifoldSpec& spec, std::span<const double> x)
      : n(spec.dim()), R(Valence::v13, n), d(Valence::v03, n), nabla_h(Valence::v03, n) {
    const auto vars = coordinate_jets(x);
    const BaseJets b = evaluate_base(spec, vars, true);
    h = Matrix<double>(n, n);
    h_inv = Matrix<double>(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        h(i, j) = b.h(i, j).value();
        h_inv(i, j) = b.h_inv(i, j).value();
      }
    for (const auto& g : b.gamma) gamma.push_back(g.value());
    C.assign(n * n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < n; ++r) C[(i * n + j) * n + r] = tilde_vertical_coefficient(b, i, j, r).value();
    const auto cj = FramedConnection::from_spec(spec).evaluate(x);
    const auto gj = BilinearField::from_spec(spec).components(x);
    R = frame_calc::curvature(cj);
    d = frame_calc::d_nabla(cj, gj);
    nabla_h = frame_calc::covariant_derivative(cj, gj);
  }
};

// Frame components {k, a, b} of T(e_a, e_b).
inline TensorValue display_torsion(const LiftedChart& chart, std::span<const double> p) {
  const std::size_t n = chart.n(), m = 2 * n;
  const BaseData B(chart.base(), chart.base_point(p));
  const auto y = chart.fiber_point(p);
  TensorValue T(Valence::v12, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        T.at({k, i, j}) = B.G(k, i, j) - B.G(k, j, i);
        double vert = 0.0;
        for (std::size_t l = 0; l < n; ++l)
          vert += chart.bundle() == Bundle::cotangent ? -y[l] * B.R.at({l, i, j, k}) : y[l] * B.R.at({k, i, j, l});
        T.at({n + k, i, j}) = vert;
      }
  if (chart.bundle() == Bundle::cotangent) {
    // T(V_i, H_j) = -(C^{ir}_j + Gamma^i_jr) V_r
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t r = 0; r < n; ++r) {
          const double v = -(B.Cv(j, i, r) + B.G(i, j, r));
          T.at({n + r, n + i, j}) = v;
          T.at({n + r, j, n + i}) = -v;
        }
  }
  return T;
}

// Frame components {f, a, b, c} of R(e_a, e_b) e_c.
inline TensorValue display_curvature(const LiftedChart& chart, std::span<const double> p) {
  const std::size_t n = chart.n(), m = 2 * n;
  const BaseData B(chart.base(), chart.base_point(p));
  TensorValue R(Valence::v13, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          R.at({l, i, j, k}) = B.R.at({l, i, j, k});
          if (chart.bundle() == Bundle::tangent) {
            R.at({n + l, i, j, n + k}) = B.R.at({l, i, j, k});
          } else {
            // h^{-1}_{kr} R^l_ijr h_ls V_s, here with s = l
            double v = 0.0;
            for (std::size_t r = 0; r < n; ++r)
              for (std::size_t q = 0; q < n; ++q) v += B.h_inv(k, r) * B.R.at({q, i, j, r}) * B.h(q, l);
            R.at({n + l, i, j, n + k}) = v;
          }
        }
  return R;
}

// Frame components {a, b, c} of d^D g for the lifted metric paired with the
// bundle's lifted connection. For the Patterson-Walker metrics only the variant
// selected by natural_pw(spec) has a display.
inline TensorValue display_d(LiftedMetricKind kind, const LiftedChart& chart, std::span<const double> p) {
  const std::size_t n = chart.n(), m = 2 * n;
  const BaseData B(chart.base(), chart.base_point(p));
  const auto y = chart.fiber_point(p);
  TensorValue D(Valence::v03, m);
  auto set_anti = [&](std::size_t a, std::size_t b, std::size_t c, double v) {
    D.at({a, b, c}) = v;
    D.at({b, a, c}) = -v;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        double yR = 0.0;  // cotangent: y_l R^l_ij. ; tangent: y^l R^._ijl
        switch (kind) {
          case LiftedMetricKind::sasaki_cotangent:
            D.at({i, j, k}) = B.d.at({i, j, k});
            for (std::size_t l = 0; l < n; ++l)
              for (std::size_t r = 0; r < n; ++r) yR -= y[l] * B.R.at({l, i, j, r}) * B.h_inv(k, r);
            D.at({i, j, n + k}) = yR;
            break;
          case LiftedMetricKind::pw_plus:
          case LiftedMetricKind::pw_minus: {
            for (std::size_t l = 0; l < n; ++l) yR -= y[l] * B.R.at({l, i, j, k});
            D.at({i, j, k}) = yR;
            double v = 0.0;
            for (std::size_t l = 0; l < n; ++l) v += B.h_inv(k, l) * B.d.at({i, j, l});
            D.at({i, j, n + k}) = v;
            break;
          }
          case LiftedMetricKind::sasaki_tangent:
            D.at({i, j, k}) = B.d.at({i, j, k});
            for (std::size_t l = 0; l < n; ++l)
              for (std::size_t r = 0; r < n; ++r) yR += y[l] * B.R.at({r, i, j, l}) * B.h(r, k);
            D.at({i, j, n + k}) = yR;
            set_anti(i, n + j, n + k, B.nabla_h.at({i, j, k}));
            break;
          case LiftedMetricKind::horizontal:
            for (std::size_t l = 0; l < n; ++l)
              for (std::size_t r = 0; r < n; ++r) yR += y[l] * B.R.at({r, i, j, l}) * B.h(r, k);
            D.at({i, j, k}) = yR;
            D.at({i, j, n + k}) = B.d.at({i, j, k});
            set_anti(i, n + j, k, B.nabla_h.at({i, j, k}));
            break;
        }
      }
  return D;
}

}  // namespace qstat
