#include <gtest/gtest.h>

#include "qstat/catalog.hpp"
#include "qstat/genbundle.hpp"
#include "test_support.hpp"

namespace qstat {
namespace {

using P = std::vector<double>;
using K = GenConnectionKind;

const ManifoldSpec& entry(const std::string& name) {
  static std::map<std::string, ManifoldSpec> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, builtin(name).spec).first;
  return it->second;
}

GeneralizedSection sec(const ManifoldSpec& s, std::vector<std::string> X, std::vector<std::string> a) {
  return GeneralizedSection::parse(s.coords, X, a);
}

class RandomSections {
 public:
  RandomSections(const ManifoldSpec& s, std::uint64_t seed) : gen_(s.coords, seed), n_(s.dim()) {}
  GeneralizedSection next() {
    std::vector<Expr> x, a;
    for (std::size_t i = 0; i < n_; ++i) x.push_back(gen_.next());
    for (std::size_t i = 0; i < n_; ++i) a.push_back(gen_.next());
    return {x, a};
  }

 private:
  testing::PolynomialGenerator gen_;
  std::size_t n_;
};

void expect_near(const GenValue& got, const GenValue& want, double tol) {
  ASSERT_EQ(got.X.size(), want.X.size());
  EXPECT_LE((got - want).max_abs(), tol);
}

GenValue gv(P X, P a) { return {std::move(X), std::move(a)}; }

// ---------------------------------------------------------------------------

TEST(Pairing, LineExamples) {
  const auto& s = entry("line-weighted");
  const auto a = sec(s, {"2"}, {"3"});
  const auto b = sec(s, {"1"}, {"5"});
  EXPECT_DOUBLE_EQ(pairing(PairingKind::indefinite, s, a, b, P{0.1}), -6.5);
  EXPECT_DOUBLE_EQ(pairing(PairingKind::symplectic, s, a, b, P{0.1}), 3.5);
  EXPECT_DOUBLE_EQ(pairing(PairingKind::check_h, s, a, b, P{0.1}), 11.5);
}

TEST(Pairing, CheckNeedsNonDegenerateMetric) {
  const auto deg = ManifoldSpec::from_strings("d", {"x1"}, {{"x1"}}, Symmetry::symmetric, {}, {});
  const auto a = sec(deg, {"1"}, {"1"});
  EXPECT_NO_THROW(pairing(PairingKind::indefinite, deg, a, a, P{0.0}));
  EXPECT_THROW(pairing(PairingKind::check_h, deg, a, a, P{0.0}), DegenerateMetric);
}

TEST(JApply, LineExamples) {
  const auto& s = entry("line-weighted");
  expect_near(j_apply(JKind::c, s, sec(s, {"2"}, {"3"}), P{0.0}), gv({-1.5}, {4.0}), 1e-15);
  expect_near(j_apply(JKind::p, s, sec(s, {"1"}, {"5"}), P{0.0}), gv({2.5}, {2.0}), 1e-15);
}

TEST(JApply, SquaresToMinusAndPlusIdentity) {
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    RandomSections rs(s, 31);
    for (const auto& p : sample_points(s.domain, 20, 2)) {
      const GenPoint g(s, p);
      const GenJets v = g.eval(rs.next());
      expect_near(g.apply_j(JKind::c, g.apply_j(JKind::c, v)).value(), (-1.0 * v).value(), 1e-12);
      expect_near(g.apply_j(JKind::p, g.apply_j(JKind::p, v)).value(), v.value(), 1e-12);
    }
  }
}

// Remark sign table: symmetric h gives (-, +, +, -); skew h flips all four.
TEST(Pairing, SignTableUnderJ) {
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    const double flip = s.symmetry == Symmetry::skew ? -1.0 : 1.0;
    RandomSections rs(s, 5);
    const auto pts = sample_points(s.domain, 100, 6);
    for (const auto& p : pts) {
      const GenPoint g(s, p);
      const GenJets a = g.eval(rs.next()), b = g.eval(rs.next());
      const auto ca = g.apply_j(JKind::c, a), cb = g.apply_j(JKind::c, b);
      const auto pa = g.apply_j(JKind::p, a), pb = g.apply_j(JKind::p, b);
      const double ind = g.pairing(PairingKind::indefinite, a, b).value();
      const double sym = g.pairing(PairingKind::symplectic, a, b).value();
      const double tol = 1e-10 * std::max(1.0, std::fabs(ind) + std::fabs(sym));
      EXPECT_NEAR(g.pairing(PairingKind::indefinite, ca, cb).value(), -flip * ind, tol) << name;
      EXPECT_NEAR(g.pairing(PairingKind::symplectic, ca, cb).value(), flip * sym, tol) << name;
      EXPECT_NEAR(g.pairing(PairingKind::indefinite, pa, pb).value(), flip * ind, tol) << name;
      EXPECT_NEAR(g.pairing(PairingKind::symplectic, pa, pb).value(), -flip * sym, tol) << name;
    }
  }
}

TEST(Pairing, LemmaIdentitiesForSymmetricMetrics) {
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    if (s.symmetry != Symmetry::symmetric) continue;
    RandomSections rs(s, 8);
    for (const auto& p : sample_points(s.domain, 30, 9)) {
      const GenPoint g(s, p);
      const GenJets a = g.eval(rs.next()), b = g.eval(rs.next());
      const double sym = g.pairing(PairingKind::symplectic, a, b).value();
      const double ind = g.pairing(PairingKind::indefinite, a, b).value();
      EXPECT_NEAR(g.pairing(PairingKind::check_h, g.apply_j(JKind::c, a), b).value(), 2 * sym, 1e-10);
      // expanded form alpha(Y) + beta(X), i.e. -2<s,t>
      EXPECT_NEAR(g.pairing(PairingKind::check_h, a, g.apply_j(JKind::p, b)).value(), -2 * ind, 1e-10);
    }
  }
}

TEST(Bracket, Examples) {
  const auto& e1 = entry("euclidean2");
  expect_near(nabla_bracket(e1, sec(e1, {"1", "0"}, {"0", "0"}), sec(e1, {"0", "0"}, {"0", "x1"}), P{0.3, 0.4}),
              gv({0, 0}, {0, 1}), 1e-15);
  expect_near(nabla_bracket(e1, sec(e1, {"1", "2"}, {"3", "0"}), sec(e1, {"0", "-1"}, {"4", "5"}), P{0.3, 0.4}),
              gv({0, 0}, {0, 0}), 0.0);
  const auto& e2 = entry("line-weighted");
  expect_near(nabla_bracket(e2, sec(e2, {"1"}, {"0"}), sec(e2, {"0"}, {"1"}), P{0.2}), gv({0}, {-1}), 1e-15);
}

TEST(Nijenhuis, VanishesOnEuclideanAndTorsionHessian) {
  for (const char* name : {"euclidean2", "torsion-hessian"}) {
    const auto& s = entry(name);
    RandomSections rs(s, 12);
    for (const auto& p : sample_points(s.domain, 10, 4))
      for (JKind k : {JKind::c, JKind::p}) {
        EXPECT_LE(nijenhuis_generalized(k, s, rs.next(), rs.next(), p).max_abs(), 1e-9) << name;
        EXPECT_LE(nijenhuis_generalized(k, s, sec(s, {"1", "0"}, {"0", "0"}), sec(s, {"0", "1"}, {"0", "0"}), p)
                      .max_abs(),
                  1e-12);
      }
  }
}

TEST(Nijenhuis, NonStatisticalAtDesignatedPoint) {
  const auto& s = entry("non-statistical");
  const auto d1 = sec(s, {"1", "0"}, {"0", "0"});
  const auto d2 = sec(s, {"0", "1"}, {"0", "0"});
  expect_near(nijenhuis_generalized(JKind::c, s, d1, d2, P{1.0, 0.0}), gv({0, 1}, {0, 0}), 1e-12);
  expect_near(nijenhuis_generalized(JKind::p, s, d1, d2, P{1.0, 0.0}), gv({0, -1}, {0, 0}), 1e-12);
}

// N_J(d_i, d_j) = sign(J) * h^{-1}(d^nabla h(d_i, d_j, .)) with the frozen sign table.
TEST(Nijenhuis, MatchesSharpOfDNablaH) {
  EXPECT_EQ(nijenhuis_sign(JKind::c), 1.0);
  EXPECT_EQ(nijenhuis_sign(JKind::p), -1.0);
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    const std::size_t n = s.dim();
    const auto basis = GeneralizedSection::coordinate_basis(s.coords);
    for (const auto& p : sample_points(s.domain, 10, 13)) {
      const Matrix<double> h = metric_at(s, p);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          std::vector<double> w(n, 0.0);
          for (std::size_t c = 0; c < n; ++c) w[c] = d_nabla_h(s, i, j, c, p);
          const auto v = solve(h.transposed(), w);
          for (JKind k : {JKind::c, JKind::p}) {
            GenValue want{v, std::vector<double>(n, 0.0)};
            for (auto& x : want.X) x *= nijenhuis_sign(k);
            expect_near(nijenhuis_generalized(k, s, basis[i], basis[j], p), want, 1e-9);
          }
        }
    }
  }
}

TEST(Nijenhuis, VanishesExactlyWhenQuasiStatistical) {
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    const auto pts = sample_points(s.domain, 20, 42);
    const auto basis = GeneralizedSection::coordinate_basis(s.coords);
    double worst_n = 0.0;
    for (const auto& p : pts)
      for (const auto& a : basis)
        for (const auto& b : basis)
          for (JKind k : {JKind::c, JKind::p})
            worst_n = std::max(worst_n, nijenhuis_generalized(k, s, a, b, p).max_abs());
    const auto c = classify(s, pts, kExactTol);
    EXPECT_EQ(worst_n <= kExactTol, c.quasi_statistical) << name;
  }
}

TEST(Connection, Examples) {
  const auto& e2 = entry("line-weighted");
  expect_near(gen_connection(K::hat, e2, sec(e2, {"1"}, {"0"}), sec(e2, {"1"}, {"1"}), P{0.4}), gv({1}, {1}), 1e-15);
  expect_near(gen_connection(K::hat_dual, e2, sec(e2, {"1"}, {"0"}), sec(e2, {"1"}, {"0"}), P{0.4}), gv({-1}, {0}),
              1e-15);
  const auto& e1 = entry("euclidean2");
  expect_near(gen_connection(K::check, e1, sec(e1, {"1", "2"}, {"3", "4"}), sec(e1, {"5", "6"}, {"7", "8"}),
                             P{0.1, 0.2}),
              gv({0, 0}, {0, 0}), 0.0);
}

TEST(Connection, CoincideWhenMetricIsParallel) {
  for (const char* name : {"euclidean2", "symplectic2", "hyperbolic"}) {
    const auto& s = entry(name);
    RandomSections rs(s, 14);
    for (const auto& p : sample_points(s.domain, 20, 15)) {
      const auto a = rs.next(), b = rs.next();
      const auto hat = gen_connection(K::hat, s, a, b, p);
      expect_near(gen_connection(K::check, s, a, b, p), hat, 1e-12);
      expect_near(gen_connection(K::hat_dual, s, a, b, p), hat, 1e-12);
    }
  }
}

TEST(Dual, ImplicitSolveExamples) {
  const auto& e2 = entry("line-weighted");
  RandomSections r2(e2, 16);
  for (const auto& p : sample_points(e2.domain, 10, 17)) {
    const auto a = r2.next(), b = r2.next();
    expect_near(gen_dual_implicit(e2, PairingKind::indefinite, K::hat, a, b, p), gen_connection(K::hat_dual, e2, a, b, p),
                1e-10);
  }
  const auto& e1 = entry("euclidean2");
  const auto& e6 = entry("hyperbolic");
  RandomSections r1(e1, 18), r6(e6, 19);
  for (const auto& p : sample_points(e1.domain, 10, 20)) {
    const auto a = r1.next(), b = r1.next();
    expect_near(gen_dual_implicit(e1, PairingKind::indefinite, K::check, a, b, p), gen_connection(K::check, e1, a, b, p),
                1e-10);
  }
  for (const auto& p : sample_points(e6.domain, 10, 21)) {
    const auto a = r6.next(), b = r6.next();
    expect_near(gen_dual_implicit(e6, PairingKind::check_h, K::check, a, b, p), gen_connection(K::check, e6, a, b, p),
                1e-10);
  }
}

// The hat-dual closed form is the dual of hat for the natural pairing and for check-h.
TEST(Dual, ClosedFormMatchesImplicitOnAllEntries) {
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    RandomSections rs(s, 22);
    for (const auto& p : sample_points(s.domain, 10, 23)) {
      const auto a = rs.next(), b = rs.next();
      const auto closed = gen_connection(K::hat_dual, s, a, b, p);
      const double scale = std::max(1.0, closed.max_abs());
      for (PairingKind pk : {natural_pairing(s), PairingKind::check_h})
        EXPECT_LE((gen_dual_implicit(s, pk, K::hat, a, b, p) - closed).max_abs(), 1e-10 * scale) << name;
      // check is self-dual for the metric-free pairings
      EXPECT_LE((gen_dual_implicit(s, natural_pairing(s), K::check, a, b, p) - gen_connection(K::check, s, a, b, p))
                    .max_abs(),
                1e-10 * scale);
    }
  }
}

TEST(Dual, LeibnizIdentity) {
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    RandomSections rs(s, 24);
    for (const auto& p : sample_points(s.domain, 20, 25)) {
      const GenPoint g(s, p);
      const GenJets a = g.eval(rs.next()), b = g.eval(rs.next()), c = g.eval(rs.next());
      for (PairingKind pk : {natural_pairing(s), PairingKind::check_h}) {
        const double lhs = g.direction(a.X, g.pairing(pk, b, c)).value();
        const double rhs = (g.pairing(pk, g.connection(K::hat, a, b), c) + g.pairing(pk, b, g.connection(K::hat_dual, a, c)))
                               .value();
        EXPECT_LE(std::fabs(lhs - rhs), 1e-9 * std::max(1.0, std::fabs(lhs))) << name;
      }
    }
  }
}

TEST(Dual, SingularGramIsReported) {
  const auto& s = entry("line-weighted");
  const GenPoint g(s, P{0.0});
  const GenJets a = g.eval(sec(s, {"1"}, {"0"}));
  // check-h cannot be formed where h is degenerate
  const auto deg = ManifoldSpec::from_strings("d", {"x1"}, {{"x1"}}, Symmetry::symmetric, {}, {});
  const GenPoint gd(deg, P{0.0}, false);
  EXPECT_THROW(gd.dual_implicit(PairingKind::check_h, K::check, a, a), std::logic_error);
  EXPECT_NO_THROW(g.dual_implicit(PairingKind::symplectic, K::check, a, a));
}

TEST(Torsion, Examples) {
  const auto& e2 = entry("line-weighted");
  expect_near(gen_torsion(K::hat, e2, sec(e2, {"1"}, {"0"}), sec(e2, {"0"}, {"1"}), P{0.5}), gv({0}, {2}), 1e-15);
  const auto& e1 = entry("euclidean2");
  expect_near(gen_torsion(K::check, e1, sec(e1, {"1", "0"}, {"0", "0"}), sec(e1, {"0", "1"}, {"0", "0"}), P{0.5, 0.5}),
              gv({0, 0}, {0, 0}), 0.0);
}

TEST(Torsion, DualVanishesOnQuasiStatisticalEntries) {
  for (const char* name : {"euclidean2", "line-weighted", "torsion-hessian", "symplectic2"}) {
    const auto& s = entry(name);
    const auto basis = GeneralizedSection::coordinate_basis(s.coords);
    RandomSections rs(s, 26);
    for (const auto& p : sample_points(s.domain, 20, 27)) {
      for (const auto& a : basis)
        for (const auto& b : basis) EXPECT_LE(gen_torsion(K::hat_dual, s, a, b, p).max_abs(), 1e-9) << name;
      EXPECT_LE(gen_torsion(K::hat_dual, s, rs.next(), rs.next(), p).max_abs(), 1e-9) << name;
    }
  }
  const auto& e4 = entry("non-statistical");
  EXPECT_GT(gen_torsion(K::hat_dual, e4, sec(e4, {"1", "0"}, {"0", "0"}), sec(e4, {"0", "1"}, {"0", "0"}), P{1.0, 0.0})
                .max_abs(),
            0.5);
}

TEST(DGeneralized, Examples) {
  const auto& e3 = entry("torsion-hessian");
  const auto b3 = GeneralizedSection::coordinate_basis(e3.coords);
  for (const auto& p : sample_points(e3.domain, 10, 28))
    for (const auto& a : b3)
      for (const auto& b : b3)
        for (const auto& c : b3) EXPECT_LE(std::fabs(gen_d(K::hat, PairingKind::indefinite, e3, a, b, c, p)), 1e-12);

  const auto& e4 = entry("non-statistical");
  EXPECT_NEAR(gen_d(K::hat, PairingKind::indefinite, e4, sec(e4, {"1", "0"}, {"0", "0"}), sec(e4, {"0", "1"}, {"0", "0"}),
                    sec(e4, {"0", "0"}, {"0", "1"}), P{1.0, 0.0}),
              -0.5, 1e-12);
  RandomSections rs(e4, 29);
  for (const auto& p : sample_points(e4.domain, 10, 30))
    EXPECT_LE(std::fabs(gen_d(K::check, PairingKind::indefinite, e4, rs.next(), rs.next(), rs.next(), p)), 1e-10);
}

// d^hat(hat h)(s, t, Z+gamma) = -1/2 d^nabla h(X, Y, h^{-1} gamma) and d^hat(check h) = d^nabla h.
TEST(DGeneralized, TheoremIdentities) {
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    RandomSections rs(s, 32);
    for (const auto& p : sample_points(s.domain, 20, 33)) {
      const auto a = rs.next(), b = rs.next(), c = rs.next();
      const GenPoint g(s, p);
      const GenJets aj = g.eval(a), bj = g.eval(b), cj = g.eval(c);
      GenJets av = aj, bv = bj;
      for (auto& x : av.alpha) x = Jet(0.0);
      for (auto& x : bv.alpha) x = Jet(0.0);
      const GenValue A = aj.value(), B = bj.value(), C = cj.value();
      const auto W = solve(metric_at(s, p).transposed(), C.alpha);
      const double want = -0.5 * d_nabla_h_on(s, A.X, B.X, W, p);
      const double got = g.d(K::hat, natural_pairing(s), av, bv, cj).value();
      EXPECT_LE(std::fabs(got - want), 1e-9 * std::max(1.0, std::fabs(want))) << name;
      const double dh = d_nabla_h_on(s, A.X, B.X, C.X, p);
      const double check = g.d(K::hat, PairingKind::check_h, aj, bj, cj).value();
      EXPECT_LE(std::fabs(check - dh), 1e-9 * std::max(1.0, std::fabs(dh))) << name;
    }
  }
}

// d^check(hat h)(s, t, Z+gamma) = -+1/2 gamma(T(X,Y)), minus for the indefinite pairing.
TEST(DGeneralized, CheckIdentity) {
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    RandomSections rs(s, 34);
    for (const auto& p : sample_points(s.domain, 20, 35)) {
      const GenPoint g(s, p);
      const GenJets a = g.eval(rs.next()), b = g.eval(rs.next()), c = g.eval(rs.next());
      const GenValue A = a.value(), B = b.value(), C = c.value();
      double gT = 0.0;
      for (std::size_t i = 0; i < s.dim(); ++i)
        for (std::size_t j = 0; j < s.dim(); ++j) {
          const auto t = torsion(s, i, j, p);
          for (std::size_t k = 0; k < s.dim(); ++k) gT += C.alpha[k] * A.X[i] * B.X[j] * t[k];
        }
      for (PairingKind pk : {PairingKind::indefinite, PairingKind::symplectic}) {
        const double want = (pk == PairingKind::indefinite ? -0.5 : 0.5) * gT;
        EXPECT_LE(std::fabs(g.d(K::check, pk, a, b, c).value() - want), 1e-10 * std::max(1.0, std::fabs(want))) << name;
      }
    }
  }
}

TEST(Curvature, Examples) {
  for (const char* name : {"euclidean2", "torsion-hessian"}) {
    const auto& s = entry(name);
    RandomSections rs(s, 36);
    for (const auto& p : sample_points(s.domain, 10, 37))
      for (K k : {K::hat, K::hat_dual, K::check})
        EXPECT_LE(gen_curvature(k, s, rs.next(), rs.next(), rs.next(), p).max_abs(), 1e-9) << name;
  }
  const auto& e6 = entry("hyperbolic");
  expect_near(gen_curvature(K::hat, e6, sec(e6, {"1", "0"}, {"0", "0"}), sec(e6, {"0", "1"}, {"0", "0"}),
                            sec(e6, {"1", "0"}, {"0", "0"}), P{0.0, 1.0}),
              gv({0, 1}, {0, 0}), 1e-12);
}

TEST(Curvature, GenericMatchesClosedForms) {
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    RandomSections rs(s, 38);
    for (const auto& p : sample_points(s.domain, 10, 39)) {
      const auto a = rs.next(), b = rs.next(), c = rs.next();
      const GenPoint g(s, p);
      const GenJets aj = g.eval(a), bj = g.eval(b), cj = g.eval(c);
      for (K k : {K::hat, K::hat_dual, K::check}) {
        const GenValue got = g.curvature(k, aj, bj, cj).value();
        const GenValue want = closed_form_curvature(k, s, aj.value(), bj.value(), cj.value(), p);
        EXPECT_LE((got - want).max_abs(), 1e-8 * std::max(1.0, want.max_abs())) << name << " " << to_string(k);
      }
    }
  }
}

TEST(Parallel, Examples) {
  const auto& e2 = entry("line-weighted");
  EXPECT_LE(parallel_check(JKind::c, K::hat, e2, sample_points(e2.domain, 20, 1)), 1e-10);
  const auto& e6 = entry("hyperbolic");
  EXPECT_LE(parallel_check(JKind::p, K::hat_dual, e6, sample_points(e6.domain, 20, 1)), 1e-10);
  const auto& e4 = entry("non-statistical");
  EXPECT_GT(parallel_check(JKind::c, K::check, e4, std::vector<Point>{{1.0, 0.0}}), 1e-3);
}

TEST(Parallel, BothStructuresOnAllEntries) {
  for (const auto& name : builtin_names()) {
    const auto& s = entry(name);
    const auto pts = sample_points(s.domain, 20, 40);
    for (JKind j : {JKind::c, JKind::p})
      for (K k : {K::hat, K::hat_dual}) EXPECT_LE(parallel_check(j, k, s, pts), 1e-10) << name;
  }
}

}  // namespace
}  // namespace qstat
