#pragma once

// Verification suites behind the CLI commands. Each check reports a max residual
// against a tolerance. Identity checks (two routes to the same object) are
// always run, with fixed tolerances. Vanishing checks use the run tolerance and
// are only emitted when their hypotheses hold on the base, except the
// generalized integrability and d^hat(hat h) checks, which are the
// quasi-statistical test itself.

#include <random>
#include <string>
#include <vector>

#include "qstat/genbundle.hpp"
#include "qstat/lifts.hpp"
#include "qstat/manifest.hpp"
#include "qstat/norden.hpp"
#include "qstat/report.hpp"

namespace qstat {

namespace tol {
inline constexpr double theorem = 1e-9;
inline constexpr double dual = 1e-10;
inline constexpr double leibniz = 1e-9;
inline constexpr double curvature = 1e-8;
inline constexpr double parallel = 1e-10;
inline constexpr double check_identity = 1e-10;
inline constexpr double coincide = 1e-12;
inline constexpr double lift_display = 1e-8;
inline constexpr double lift_d_display = 1e-9;
inline constexpr double pullback = 1e-10;
inline constexpr double endo = 1e-10;
inline constexpr double conjugation = 1e-12;
inline constexpr double antisymmetry = 1e-12;
}  // namespace tol

// |got - want| relative to max(1, |want|)
inline double rel_diff(double got, double want) { return std::fabs(got - want) / std::max(1.0, std::fabs(want)); }

inline double rel_diff(const GenValue& got, const GenValue& want) {
  return (got - want).max_abs() / std::max(1.0, want.max_abs());
}

inline double max_diff(const TensorValue& a, const TensorValue& b) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) r = std::max(r, std::fabs(a.data[i] - b.data[i]));
  return r;
}

// Coordinate basis sections plus the same sections scaled by 1 + x_k / 2, so
// that identities involving derivatives of the sections are exercised too.
inline std::vector<GeneralizedSection> suite_sections(const ManifoldSpec& spec) {
  const std::size_t n = spec.dim();
  auto out = GeneralizedSection::coordinate_basis(spec.coords);
  for (std::size_t a = 0; a < 2 * n; ++a) {
    std::vector<std::string> X(n, "0"), alpha(n, "0");
    const std::string f = "1+0.5*" + spec.coords[a % n];
    (a < n ? X[a] : alpha[a - n]) = f;
    out.push_back(GeneralizedSection::parse(spec.coords, X, alpha));
  }
  return out;
}

struct Hypotheses {
  Classification base;
  bool flat_qs() const { return base.flat && base.quasi_statistical; }
  bool flat_qs_parallel() const { return flat_qs() && base.metric_parallel; }
  bool flat_torsion_free() const { return base.flat && base.torsion_free; }
};

inline Hypotheses hypotheses(const ManifoldSpec& spec, const RunOptions& opt) {
  return {classify(spec, sample_points(spec.domain, opt.samples, opt.seed), kExactTol)};
}

inline void fill_flags(VerificationReport& r, const Classification& c) {
  r.flags["torsion_free"] = c.torsion_free;
  r.flags["metric_parallel"] = c.metric_parallel;
  r.flags["quasi_statistical"] = c.quasi_statistical;
  r.flags["flat"] = c.flat;
  r.flags["hessian"] = c.hessian();
}

// ---------------------------------------------------------------------------

inline void classify_suite(VerificationReport& r, const ManifoldSpec& spec, const RunOptions& opt) {
  const auto pts = sample_points(spec.domain, opt.samples, opt.seed);
  const auto conn = FramedConnection::from_spec(spec);
  const auto g = BilinearField::from_spec(spec);
  const std::size_t n = spec.dim();
  double d_anti = 0.0, r_anti = 0.0;
  for (const auto& p : pts) {
    const auto cj = conn.evaluate(p);
    const TensorValue d = frame_calc::d_nabla(cj, g.components(p));
    const TensorValue R = frame_calc::curvature(cj);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          d_anti = std::max(d_anti, std::fabs(d.at({a, b, c}) + d.at({b, a, c})));
          for (std::size_t f = 0; f < n; ++f) r_anti = std::max(r_anti, std::fabs(R.at({f, a, b, c}) + R.at({f, b, a, c})));
        }
  }
  r.add("classify.d_nabla_h.antisymmetric", "d^nabla h(X,Y,Z) = -d^nabla h(Y,X,Z)", d_anti, tol::antisymmetry);
  r.add("classify.curvature.antisymmetric", "R(X,Y) = -R(Y,X)", r_anti, tol::antisymmetry);
}

// Oracle for N_J on arbitrary values. On vectors N_J(X, Y) = +- sharp(d^nabla h(X, Y, .));
// the rest follows from N(JA, B) = -J N(A, B) and (0, a) = J(sharp a, 0).
inline GenValue expected_nijenhuis(JKind k, const ManifoldSpec& spec, const GenValue& A, const GenValue& B,
                                   std::span<const double> p) {
  const std::size_t n = spec.dim();
  const Matrix<double> h = metric_at(spec, p);
  const auto conn = FramedConnection::from_spec(spec).evaluate(p);
  const TensorValue d = frame_calc::d_nabla(conn, BilinearField::from_spec(spec).components(p));
  const double eps = k == JKind::c ? -1.0 : 1.0;
  auto sharp = [&](const std::vector<double>& a) { return solve(h.transposed(), a); };
  auto N0 = [&](const std::vector<double>& U, const std::vector<double>& V) {
    std::vector<double> w(n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) w[c] += U[a] * V[b] * d.at({a, b, c});
    GenValue out{sharp(w), std::vector<double>(n, 0.0)};
    for (auto& x : out.X) x *= nijenhuis_sign(k);
    return out;
  };
  // J(X, a) = (eps sharp a, flat X)
  auto J = [&](const GenValue& v) {
    GenValue out{sharp(v.alpha), std::vector<double>(n, 0.0)};
    for (auto& x : out.X) x *= eps;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) out.alpha[j] += v.X[i] * h(i, j);
    return out;
  };
  auto axpy = [](GenValue& acc, double s, const GenValue& v) {
    for (std::size_t i = 0; i < acc.X.size(); ++i) {
      acc.X[i] += s * v.X[i];
      acc.alpha[i] += s * v.alpha[i];
    }
  };
  const auto As = sharp(A.alpha), Bs = sharp(B.alpha);
  GenValue out = N0(A.X, B.X);
  axpy(out, -1.0, J(N0(As, B.X)));
  axpy(out, -1.0, J(N0(A.X, Bs)));
  axpy(out, eps, N0(As, Bs));
  return out;
}

inline void generalized_suite(VerificationReport& r, const ManifoldSpec& spec, const RunOptions& opt,
                              const Hypotheses& hyp) {
  using K = GenConnectionKind;
  const std::size_t n = spec.dim();
  const auto pts = sample_points(spec.domain, opt.samples, opt.seed);
  const auto fam = suite_sections(spec);
  const std::size_t nb = 2 * n;  // the first nb sections are the constant basis
  const PairingKind nat = natural_pairing(spec);

  double nij[2] = {0, 0}, nij_formula = 0, d_hat = 0, d_hat_id = 0, d_check_h = 0, dual_cf = 0, leib = 0,
         dual_T = 0, curv[3] = {0, 0, 0}, par = 0, check_id = 0, self_dual = 0, coincide = 0;
  for (const auto& p : pts) {
    const GenPoint g(spec, p);
    std::vector<GenJets> s;
    for (const auto& f : fam) s.push_back(g.eval(f));
    const Matrix<double> h = metric_at(spec, p);
    const auto conn = FramedConnection::from_spec(spec).evaluate(p);
    const TensorValue dbase = frame_calc::d_nabla(conn, BilinearField::from_spec(spec).components(p));
    const TensorValue Tb = frame_calc::torsion(conn);
    auto dh = [&](const std::vector<double>& X, const std::vector<double>& Y, const std::vector<double>& W) {
      double v = 0.0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c) v += X[a] * Y[b] * W[c] * dbase.at({a, b, c});
      return v;
    };

    for (std::size_t i = 0; i < nb; ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        for (JKind k : {JKind::c, JKind::p}) {
          const GenValue N = g.nijenhuis(k, s[i], s[j]).value();
          nij[k == JKind::c ? 0 : 1] = std::max(nij[k == JKind::c ? 0 : 1], N.max_abs());
          const GenValue want = expected_nijenhuis(k, spec, s[i].value(), s[j].value(), p);
          nij_formula = std::max(nij_formula, rel_diff(N, want));
        }
        if (hyp.base.quasi_statistical) dual_T = std::max(dual_T, g.torsion(K::hat_dual, s[i], s[j]).value().max_abs());
        for (std::size_t c = 0; c < nb; ++c) {
          const double dhat = g.d(K::hat, nat, s[i], s[j], s[c]).value();
          d_hat = std::max(d_hat, std::fabs(dhat));
        }
      }

    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = 0; j < fam.size(); ++j) {
        const GenValue A = s[i].value(), B = s[j].value();
        const GenValue closed = g.connection(K::hat_dual, s[i], s[j]).value();
        for (PairingKind pk : {nat, PairingKind::check_h})
          dual_cf = std::max(dual_cf, rel_diff(g.dual_implicit(pk, K::hat, s[i], s[j]), closed));
        self_dual = std::max(self_dual, rel_diff(g.dual_implicit(nat, K::check, s[i], s[j]),
                                                 g.connection(K::check, s[i], s[j]).value()));
        if (hyp.base.metric_parallel) {
          const GenValue c = g.connection(K::check, s[i], s[j]).value();
          coincide = std::max(coincide, rel_diff(g.connection(K::hat, s[i], s[j]).value(), c));
          coincide = std::max(coincide, rel_diff(closed, c));
        }
        for (JKind k : {JKind::c, JKind::p})
          for (K kind : {K::hat, K::hat_dual}) par = std::max(par, g.j_derivative(k, kind, s[i], s[j]).value().max_abs());
        if (i >= nb) continue;
        for (std::size_t c = 0; c < fam.size(); ++c) {
          const GenValue C = s[c].value();
          for (PairingKind pk : {nat, PairingKind::check_h}) {
            const double lhs = g.direction(s[i].X, g.pairing(pk, s[j], s[c])).value();
            const double rhs = (g.pairing(pk, g.connection(K::hat, s[i], s[j]), s[c]) +
                                g.pairing(pk, s[j], g.connection(K::hat_dual, s[i], s[c])))
                                   .value();
            leib = std::max(leib, rel_diff(lhs, rhs));
          }
          const K kinds[3] = {K::hat, K::hat_dual, K::check};
          // one non-constant argument at a time keeps the double derivatives affordable
          if (j < nb || c < nb)
            for (int q = 0; q < 3; ++q)
              curv[q] = std::max(curv[q], rel_diff(g.curvature(kinds[q], s[i], s[j], s[c]).value(),
                                                   closed_form_curvature(kinds[q], spec, A, B, C, p)));
          // the d identities are tensorial; the basis is enough
          if (j >= nb || c >= nb) continue;
          const auto W = solve(h.transposed(), C.alpha);
          d_hat_id = std::max(d_hat_id, rel_diff(g.d(K::hat, nat, s[i], s[j], s[c]).value(), -0.5 * dh(A.X, B.X, W)));
          d_check_h = std::max(d_check_h, rel_diff(g.d(K::hat, PairingKind::check_h, s[i], s[j], s[c]).value(),
                                                   dh(A.X, B.X, C.X)));
          // d^check(hat h)(s, t, Z+gamma) = -+ 1/2 gamma(T(X, Y)), minus for the indefinite pairing
          double gT = 0.0;
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
              for (std::size_t k = 0; k < n; ++k) gT += C.alpha[k] * A.X[a] * B.X[b] * Tb.at({k, a, b});
          for (PairingKind pk : {PairingKind::indefinite, PairingKind::symplectic}) {
            const double want = (pk == PairingKind::indefinite ? -0.5 : 0.5) * gT;
            check_id = std::max(check_id, rel_diff(g.d(K::check, pk, s[i], s[j], s[c]).value(), want));
          }
        }
      }
  }

  const double t = opt.tolerance;
  r.add("generalized.nijenhuis.J_c.vanishes", "J_c integrable iff quasi-statistical", nij[0], t);
  r.add("generalized.nijenhuis.J_p.vanishes", "J_p integrable iff quasi-statistical", nij[1], t);
  r.add("generalized.nijenhuis.formula", "N_J(X,Y) = +-h^{-1}(d^nabla h(X,Y,.))", nij_formula, tol::theorem);
  r.add("generalized.d_hat_h.vanishes", "(E, hat h, hat nabla) quasi-statistical iff (M, h, nabla) is", d_hat, t);
  r.add("generalized.d_hat_h.identity", "d^hat(hat h)(X+a, Y+b, Z+c) = -1/2 d^nabla h(X, Y, h^{-1}c)", d_hat_id,
        tol::theorem);
  r.add("generalized.d_hat_check_h.identity", "d^hat(check h) = d^nabla h", d_check_h, tol::theorem);
  r.add("generalized.dual.closed_form", "hat nabla* closed form equals the implicit dual", dual_cf, tol::dual);
  r.add("generalized.dual.leibniz", "s<t,u> = <D_s t, u> + <t, D*_s u>", leib, tol::leibniz);
  if (hyp.base.quasi_statistical)
    r.add("generalized.dual.torsion_free", "hat nabla* torsion-free on quasi-statistical bases", dual_T, t);
  r.add("generalized.curvature.hat.closed_form", "R^hat = R^nabla conjugated by flat/sharp", curv[0], tol::curvature);
  r.add("generalized.curvature.hat_dual.closed_form", "R^hat* = dual action of R^nabla", curv[1], tol::curvature);
  r.add("generalized.curvature.check.closed_form", "R^check = R^nabla on vectors and covectors", curv[2],
        tol::curvature);
  r.add("generalized.parallel.J", "hat nabla J_-+ = 0 and hat nabla* J_-+ = 0", par, tol::parallel);
  r.add("generalized.check.d_identity", "d^check(hat h)(s,t,Z+c) = -+1/2 c(T(X,Y))", check_id, tol::check_identity);
  r.add("generalized.check.self_dual", "check nabla* = check nabla", self_dual, tol::check_identity);
  if (hyp.base.metric_parallel)
    r.add("generalized.coincide", "hat nabla = check nabla = hat nabla* when nabla h = 0", coincide, tol::coincide);
}

// Expected pull-back of a lifted metric to TM + T*M, in terms of the base pairings.
inline double expected_pullback(LiftedMetricKind k, const ManifoldSpec& spec, const GenValue& a, const GenValue& b,
                                std::span<const double> x) {
  const auto A = GeneralizedSection::constant(spec.coords, a), B = GeneralizedSection::constant(spec.coords, b);
  auto pr = [&](PairingKind pk) { return pairing(pk, spec, A, B, x); };
  switch (k) {
    case LiftedMetricKind::pw_plus:
      return -2 * pr(PairingKind::indefinite);
    case LiftedMetricKind::pw_minus:
      return -2 * pr(PairingKind::symplectic);
    case LiftedMetricKind::horizontal:
      return -2 * pr(natural_pairing(spec));
    case LiftedMetricKind::sasaki_cotangent:
    case LiftedMetricKind::sasaki_tangent:
      return pr(PairingKind::check_h);
  }
  return 0.0;
}

inline std::vector<LiftedMetricKind> metrics_of(Bundle b) {
  using L = LiftedMetricKind;
  if (b == Bundle::cotangent) return {L::pw_plus, L::pw_minus, L::sasaki_cotangent};
  return {L::sasaki_tangent, L::horizontal};
}

inline void lifted_invariant_suite(VerificationReport& r, const ManifoldSpec& spec, Bundle bundle,
                                   const RunOptions& opt, const Hypotheses& hyp) {
  using L = LiftedMetricKind;
  const std::string pre = std::string("lift.") + to_string(bundle) + ".";
  const auto chart = build_lifted_chart(spec, bundle, opt.fiber);
  const auto conn = build_lifted_connection(spec, bundle);
  const auto pts = chart.samples(opt.samples, opt.seed);
  const std::size_t n = spec.dim();

  double T_disp = 0, R_disp = 0, R_max = 0;
  std::map<L, double> d_disp, d_max, pull;
  std::map<L, BilinearField> metrics;
  for (L k : metrics_of(bundle)) metrics.emplace(k, build_lifted_metric(k, spec));
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& p : pts) {
    const auto cj = conn.evaluate(p);
    const TensorValue R = frame_calc::curvature(cj);
    T_disp = std::max(T_disp, max_diff(frame_calc::torsion(cj), display_torsion(chart, p)));
    R_disp = std::max(R_disp, max_diff(R, display_curvature(chart, p)));
    R_max = std::max(R_max, R.max_abs());
    const auto x = chart.base_point(p);
    GenValue a{std::vector<double>(n), std::vector<double>(n)}, b = a;
    for (auto* v : {&a.X, &a.alpha, &b.X, &b.alpha})
      for (auto& c : *v) c = u(rng);
    for (auto& [k, g] : metrics) {
      const TensorValue D = frame_calc::d_nabla(cj, g.components(p));
      d_max[k] = std::max(d_max[k], D.max_abs());
      if (k != L::pw_plus && k != L::pw_minus) {
        d_disp[k] = std::max(d_disp[k], max_diff(D, display_d(k, chart, p)));
      } else if (k == natural_pw(spec)) {
        d_disp[k] = std::max(d_disp[k], max_diff(D, display_d(k, chart, p)));
      }
      const double want = expected_pullback(k, spec, a, b, x);
      pull[k] = std::max(pull[k], rel_diff(pullback_to_genbundle(k, spec, a, b, x), want));
    }
  }
  const double t = opt.tolerance;
  r.add(pre + "torsion.display", "lifted torsion matches the frame display", T_disp, tol::lift_display);
  r.add(pre + "curvature.display", "lifted curvature matches the frame display", R_disp, tol::lift_display);
  if (hyp.base.flat) r.add(pre + "curvature.vanishes", "lifted connection flat iff base flat", R_max, t);
  for (auto& [k, g] : metrics) {
    const std::string name = pre + to_string(k) + ".";
    r.add(name + "pullback", "pull-back of the lifted metric to TM + T*M", pull[k], tol::pullback);
    if (d_disp.count(k)) r.add(name + "d.display", "d^nabla of the lifted metric matches its display", d_disp[k],
                               tol::lift_d_display);
    const bool natural = (k != L::pw_plus && k != L::pw_minus) || k == natural_pw(spec);
    if (!natural) continue;
    const bool gate = bundle == Bundle::cotangent ? hyp.flat_qs() : hyp.flat_qs_parallel();
    if (gate)
      r.add(name + "d.vanishes",
            bundle == Bundle::cotangent ? "flat quasi-statistical base lifts to a quasi-statistical manifold"
                                        : "tangent lift quasi-statistical for flat base with nabla h = 0",
            d_max[k], t);
  }
}

inline void norden_suite(VerificationReport& r, const ManifoldSpec& spec, Bundle bundle, const RunOptions& opt,
                         const Hypotheses& hyp) {
  const bool cot = bundle == Bundle::cotangent;
  const std::string pre = cot ? "norden.jtilde." : "norden.jbar.";
  const auto g = build_lifted_metric(cot ? LiftedMetricKind::pw_plus : LiftedMetricKind::horizontal, spec);
  const std::size_t n = spec.dim(), m = 2 * n;
  for (JKind k : {JKind::c, JKind::p}) {
    const EndoField J = cot ? build_jtilde(spec, k) : build_jbar(spec, k);
    const LiftedChart chart = build_lifted_chart(spec, bundle, opt.fiber);
    EndoField Jc{chart, J.square_sign, J.matrix};
    const auto pts = chart.samples(opt.samples, opt.seed);
    const NordenResult res = norden_check(Jc, g, pts, opt.tolerance);
    double conj = 0, disp = 0, nform = 0;
    const double sign = k == JKind::c ? -1.0 : 1.0;
    for (const auto& p : pts) {
      const auto x = chart.base_point(p);
      const auto M = Jc.at(p);
      const auto C = conjugated_matrix(spec, bundle, k, x);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) conj = std::max(conj, std::fabs(M(a, b) - C(a, b)));
      if (cot) {
        const auto G = g.components(p);
        const auto h = metric_at(spec, x);
        const auto hinv = inverse(h);
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = 0; b < m; ++b) {
            double gJ = 0.0;
            for (std::size_t c = 0; c < m; ++c) gJ += M(a, c) * G[c * m + b].value();
            const double want = a < n && b < n     ? h(a, b)
                                : a >= n && b >= n ? sign * hinv(a - n, b - n)
                                                   : 0.0;
            disp = std::max(disp, std::fabs(gJ - want));
          }
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = a + 1; b < m; ++b) {
            const auto got = nijenhuis_endo(Jc, a, b, p);
            const auto want = display_nijenhuis_jtilde(spec, k, a, b, p);
            for (std::size_t c = 0; c < m; ++c) nform = std::max(nform, rel_diff(got[c], want[c]));
          }
      }
    }
    const std::string name = pre + to_string(k) + ".";
    r.add(name + "square", k == JKind::c ? "J^2 = -Id" : "J^2 = Id", res.square_residual, tol::endo);
    if (k == JKind::p) r.add(name + "trace", "tr J = 0: eigenbundles of equal rank", res.trace_residual, tol::endo);
    r.add(name + "conjugation", cot ? "J~ = Phi o J o Phi^{-1}" : "J- = Psi o J o Psi^{-1}", conj, tol::conjugation);
    if (cot) {
      r.add(name + "pw_display", "h~(J X^H, Y^H) = h(X,Y), h~(J dy_i, dy_j) = -+h^{ij}", disp, tol::endo);
      r.add(name + "nijenhuis.formula", "N_J~ = Phi(N_J) plus the curvature term of [X^H, Y^H]", nform, tol::theorem);
    }
    if (spec.symmetry == Symmetry::skew && cot)
      r.add(name + "h_antisymmetric", "skew h: Hermitian type pattern g(JA,B) = -g(A,JB)", res.antisymmetric_residual,
            tol::endo);
    else if (spec.symmetry == Symmetry::symmetric || !cot)
      r.add(name + "h_symmetric", "J is h-symmetric (Norden / Para-Norden)", res.symmetric_residual, tol::endo);
    const bool gate = cot ? hyp.flat_qs() : hyp.flat_torsion_free();
    if (gate)
      r.add(name + "integrable", cot ? "J~ integrable on flat quasi-statistical bases"
                                     : "J- integrable iff nabla flat and torsion-free",
            res.nijenhuis, opt.tolerance);
  }
}

enum class Command { classify, generalized, lift, norden, all };

inline Command command_from_string(const std::string& s) {
  if (s == "classify") return Command::classify;
  if (s == "generalized") return Command::generalized;
  if (s == "lift") return Command::lift;
  if (s == "norden") return Command::norden;
  if (s == "all") return Command::all;
  throw std::invalid_argument("unknown command '" + s + "'");
}

// bundle == nullopt means both bundles for lift and norden.
inline VerificationReport run(Command cmd, const ManifoldSpec& spec, const RunOptions& opt,
                              std::optional<Bundle> bundle = std::nullopt) {
  VerificationReport r;
  r.spec_label = spec.label;
  r.seed = opt.seed;
  r.samples = opt.samples;
  const Hypotheses hyp = hypotheses(spec, opt);
  fill_flags(r, hyp.base);
  std::vector<Bundle> bundles;
  if (bundle)
    bundles = {*bundle};
  else
    bundles = {Bundle::cotangent, Bundle::tangent};
  if (cmd == Command::classify || cmd == Command::all) classify_suite(r, spec, opt);
  if (cmd == Command::generalized || cmd == Command::all) generalized_suite(r, spec, opt, hyp);
  if (cmd == Command::lift || cmd == Command::all)
    for (Bundle b : bundles) lifted_invariant_suite(r, spec, b, opt, hyp);
  if (cmd == Command::norden || cmd == Command::all)
    for (Bundle b : bundles) norden_suite(r, spec, b, opt, hyp);
  r.sort_checks();
  return r;
}

}  // namespace qstat
