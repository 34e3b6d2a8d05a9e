#pragma once

// Almost complex and almost product structures on T*M and TM obtained by
// conjugating J_c (= J_-) and J_p (= J_+) with the bundle morphisms, and the
// Norden / Para-Norden checks for them.

#include <cmath>
#include <span>
#include <vector>

#include "qstat/genbundle.hpp"
#include "qstat/lifts.hpp"

namespace qstat {

// A (1,1)-tensor on a lifted chart in frame components: J(e_a) = M[a][b] e_b,
// stored row-major as m*m jets.
struct EndoField {
  LiftedChart chart;
  int square_sign = -1;
  JetFunction matrix;

  std::size_t dim() const { return chart.dim(); }

  Matrix<double> at(std::span<const double> p) const {
    const auto M = matrix(p);
    Matrix<double> out(dim(), dim());
    for (std::size_t a = 0; a < dim(); ++a)
      for (std::size_t b = 0; b < dim(); ++b) out(a, b) = M[a * dim() + b].value();
    return out;
  }
};

inline int square_sign_of(JKind which) { return which == JKind::c ? -1 : 1; }

// J~(H_i) = h_ik V_k, J~(V_j) = -+ h^{jk} H_k on the cotangent chart.
inline EndoField build_jtilde(const ManifoldSpec& spec, JKind which) {
  const std::size_t n = spec.dim(), m = 2 * n;
  const double s = which == JKind::c ? -1.0 : 1.0;
  auto f = [spec, n, m, s](std::span<const double> p) {
    const auto vars = coordinate_jets(p);
    const BaseJets b = evaluate_base(spec, std::span<const Jet>(vars).first(n), true);
    std::vector<Jet> M(m * m, Jet(0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        M[i * m + n + k] = b.h(i, k);
        M[(n + i) * m + k] = s * b.h_inv(i, k);
      }
    return M;
  };
  return {build_lifted_chart(spec, Bundle::cotangent), square_sign_of(which), f};
}

// J-bar(X^H) = X^V, J-bar(X^V) = -+ X^H on the tangent chart.
inline EndoField build_jbar(const ManifoldSpec& spec, JKind which) {
  const std::size_t n = spec.dim(), m = 2 * n;
  const double s = which == JKind::c ? -1.0 : 1.0;
  auto f = [n, m, s](std::span<const double>) {
    std::vector<Jet> M(m * m, Jet(0.0));
    for (std::size_t i = 0; i < n; ++i) {
      M[i * m + n + i] = Jet(1.0);
      M[(n + i) * m + i] = Jet(s);
    }
    return M;
  };
  return {build_lifted_chart(spec, Bundle::tangent), square_sign_of(which), f};
}

// M o J o M^{-1} on frame elements, computed from the generalized structure and
// the morphism of the bundle; an independent route to the block forms above.
inline Matrix<double> conjugated_matrix(const ManifoldSpec& spec, Bundle bundle, JKind which,
                                        std::span<const double> base_point) {
  const std::size_t n = spec.dim(), m = 2 * n;
  const Matrix<double> h = metric_at(spec, base_point);
  Matrix<double> out(m, m);
  const auto coords = spec.coords;
  for (std::size_t a = 0; a < m; ++a) {
    GenValue pre{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    if (a < n) {
      pre.X[a] = 1.0;
    } else if (bundle == Bundle::cotangent) {
      pre.alpha[a - n] = 1.0;
    } else {
      for (std::size_t k = 0; k < n; ++k) pre.alpha[k] = h(a - n, k);  // Psi^{-1}(V_j) = flat(d_j)
    }
    const GenValue img = j_apply(which, spec, GeneralizedSection::constant(coords, pre), base_point);
    const auto row = morphism_apply(morphism_of(bundle), spec, img, base_point);
    for (std::size_t b = 0; b < m; ++b) out(a, b) = row[b];
  }
  return out;
}

// Classical Nijenhuis tensor of J on the frame pair (e_a, e_b), computed with
// coordinate Lie brackets on the lifted chart and returned in frame components.
inline std::vector<double> nijenhuis_endo(const EndoField& J, std::size_t a, std::size_t b,
                                          std::span<const double> p) {
  const std::size_t m = J.dim();
  const auto vars = coordinate_jets(p);
  const Matrix<Jet> E = J.chart.frame().evaluate(vars);
  const Matrix<Jet> Ei = inverse(E);
  const auto M = J.matrix(p);
  // K(mu, nu): coordinate components of J(d_mu)
  Matrix<Jet> K(m, m);
  for (std::size_t mu = 0; mu < m; ++mu)
    for (std::size_t nu = 0; nu < m; ++nu) {
      Jet v(0.0);
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t d = 0; d < m; ++d) v = v + Ei(mu, c) * M[c * m + d] * E(d, nu);
      K(mu, nu) = v;
    }
  using Vec = std::vector<Jet>;
  auto apply = [&](const Vec& U) {
    Vec r(m, Jet(0.0));
    for (std::size_t nu = 0; nu < m; ++nu)
      for (std::size_t mu = 0; mu < m; ++mu) r[nu] = r[nu] + U[mu] * K(mu, nu);
    return r;
  };
  auto bracket = [&](const Vec& U, const Vec& W) {
    Vec r(m, Jet(0.0));
    for (std::size_t nu = 0; nu < m; ++nu)
      for (std::size_t mu = 0; mu < m; ++mu) r[nu] = r[nu] + U[mu] * W[nu].partial(mu) - W[mu] * U[nu].partial(mu);
    return r;
  };
  Vec A(m), B(m);
  for (std::size_t mu = 0; mu < m; ++mu) {
    A[mu] = E(a, mu);
    B[mu] = E(b, mu);
  }
  const Vec JA = apply(A), JB = apply(B);
  const Vec t1 = bracket(JA, JB), t2 = apply(bracket(JA, B)), t3 = apply(bracket(A, JB)),
            t4 = apply(apply(bracket(A, B)));
  std::vector<double> out(m, 0.0);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t nu = 0; nu < m; ++nu)
      out[c] += (t1[nu] - t2[nu] - t3[nu] + t4[nu]).value() * Ei(nu, c).value();
  return out;
}

// Expected N of J~ on cotangent frame elements: the generalized Nijenhuis
// tensor carried over by Phi, plus the part coming from the vertical bracket
// [H_i, H_j] = y_k R^k_ijl V_l that the nabla-bracket does not see.
inline std::vector<double> display_nijenhuis_jtilde(const ManifoldSpec& spec, JKind which, std::size_t a,
                                                    std::size_t b, std::span<const double> p) {
  const std::size_t n = spec.dim(), m = 2 * n;
  const auto x = p.first(n);
  const auto y = p.subspan(n, n);
  const Matrix<double> M = conjugated_matrix(spec, Bundle::cotangent, which, x);
  const BaseData B(spec, x);
  auto J = [&](const std::vector<double>& v) {
    std::vector<double> r(m, 0.0);
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t d = 0; d < m; ++d) r[d] += v[c] * M(c, d);
    return r;
  };
  auto delta = [&](const std::vector<double>& u, const std::vector<double>& w) {
    std::vector<double> r(m, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l) r[n + l] += u[i] * w[j] * y[k] * B.R.at({k, i, j, l});
    return r;
  };
  std::vector<double> ea(m, 0.0), eb(m, 0.0);
  ea[a] = 1.0;
  eb[b] = 1.0;
  const auto basis = GeneralizedSection::coordinate_basis(spec.coords);
  const GenValue ng = nijenhuis_generalized(which, spec, basis[a], basis[b], x);
  std::vector<double> out = morphism_apply(Morphism::phi, spec, ng, x);
  const auto Ja = J(ea), Jb = J(eb);
  const auto d1 = delta(Ja, Jb), d2 = J(delta(Ja, eb)), d3 = J(delta(ea, Jb)), d4 = J(J(delta(ea, eb)));
  for (std::size_t c = 0; c < m; ++c) out[c] += d1[c] - d2[c] - d3[c] + d4[c];
  return out;
}

struct NordenResult {
  double square_residual = 0.0;   // |J^2 - sign Id|
  double trace_residual = 0.0;    // |tr J|, product type only
  double symmetric_residual = 0.0;  // |g(JA,B) - g(A,JB)|
  double antisymmetric_residual = 0.0;  // |g(JA,B) + g(A,JB)|
  double nijenhuis = 0.0;
  bool square_ok = false, rank_ok = false, h_symmetric = false, h_antisymmetric = false, integrable = false;
};

inline NordenResult norden_check(const EndoField& J, const BilinearField& g, std::span<const Point> samples,
                                 double tol) {
  const std::size_t m = J.dim();
  NordenResult r;
  for (const auto& p : samples) {
    const Matrix<double> M = J.at(p);
    const Matrix<double> M2 = M * M;
    double tr = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      tr += M(a, a);
      for (std::size_t b = 0; b < m; ++b)
        r.square_residual = std::max(r.square_residual, std::fabs(M2(a, b) - (a == b ? J.square_sign : 0.0)));
    }
    if (J.square_sign > 0) r.trace_residual = std::max(r.trace_residual, std::fabs(tr));
    const auto G = g.components(p);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
          lhs += M(a, c) * G[c * m + b].value();
          rhs += M(b, c) * G[a * m + c].value();
        }
        r.symmetric_residual = std::max(r.symmetric_residual, std::fabs(lhs - rhs));
        r.antisymmetric_residual = std::max(r.antisymmetric_residual, std::fabs(lhs + rhs));
      }
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        for (double v : nijenhuis_endo(J, a, b, p)) r.nijenhuis = std::max(r.nijenhuis, std::fabs(v));
  }
  r.square_ok = r.square_residual <= tol;
  r.rank_ok = J.square_sign < 0 || (r.square_ok && r.trace_residual <= tol);
  r.h_symmetric = r.symmetric_residual <= tol;
  r.h_antisymmetric = r.antisymmetric_residual <= tol;
  r.integrable = r.nijenhuis <= tol;
  return r;
}

}  // namespace qstat
