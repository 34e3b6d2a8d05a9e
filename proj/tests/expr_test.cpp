#include <gtest/gtest.h>

#include <thread>

#include "qstat/expr.hpp"
#include "test_support.hpp"

namespace qstat {
namespace {

const std::vector<std::string> kXY = {"x1", "x2"};

TEST(ExprParse, ZeroLiteral) {
  const Expr e = parse("0", {"x1"});
  const auto* lit = std::get_if<ast::Literal>(&e.root()->data);
  ASSERT_NE(lit, nullptr);
  EXPECT_EQ(lit->value, 0.0);
}

TEST(ExprParse, PrecedenceOfAddAndPower) {
  const Expr e = parse("1+x1^2", kXY);
  const auto* add = std::get_if<ast::Binary>(&e.root()->data);
  ASSERT_NE(add, nullptr);
  EXPECT_EQ(add->op, BinaryOp::add);
  ASSERT_NE(std::get_if<ast::Literal>(&add->lhs->data), nullptr);
  const auto* pw = std::get_if<ast::Power>(&add->rhs->data);
  ASSERT_NE(pw, nullptr);
  EXPECT_EQ(pw->exponent, 2.0);
  const auto* var = std::get_if<ast::Variable>(&pw->base->data);
  ASSERT_NE(var, nullptr);
  EXPECT_EQ(var->index, 0u);
}

TEST(ExprParse, UndeclaredVariable) {
  try {
    parse("1/x2^2", {"x1"});
    FAIL() << "expected UnknownIdentifier";
  } catch (const UnknownIdentifier& e) {
    EXPECT_EQ(e.name(), "x2");
    EXPECT_EQ(e.offset(), 2u);
  }
}

TEST(ExprParse, UnaryMinusBindsLooserThanPower) {
  EXPECT_DOUBLE_EQ(parse("-x1^2", kXY).eval(std::vector<double>{3.0, 0.0}), -9.0);
  EXPECT_DOUBLE_EQ(parse("2^3^2", kXY).eval(std::vector<double>{0.0, 0.0}), 512.0);
  EXPECT_DOUBLE_EQ(parse("x1^-1", kXY).eval(std::vector<double>{4.0, 0.0}), 0.25);
  EXPECT_DOUBLE_EQ(parse("2*pi - e", kXY).eval(std::vector<double>{0.0, 0.0}), 2 * std::numbers::pi - std::numbers::e);
}

TEST(ExprParse, SyntaxErrorsCarryOffsets) {
  try {
    parse("1+*x1", kXY);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2u);
  }
  EXPECT_THROW(parse("(x1", kXY), ParseError);
  EXPECT_THROW(parse("x1 x2", kXY), ParseError);
  EXPECT_THROW(parse("", kXY), ParseError);
  EXPECT_THROW(parse("x1^x2", kXY), ParseError);
  EXPECT_THROW(parse("foo(x1)", kXY), UnknownIdentifier);
  EXPECT_THROW(parse("x1", {"x1", "x1"}), std::invalid_argument);
  EXPECT_THROW(parse("1", {}), std::invalid_argument);
}

TEST(ExprJet, PolynomialExample) {
  const Jet j = parse("1+x1^2", kXY).eval_jet2(std::vector<double>{1.0, 0.0});
  EXPECT_EQ(j.value(), 2.0);
  EXPECT_EQ(j.grad(0), 2.0);
  EXPECT_EQ(j.grad(1), 0.0);
  EXPECT_EQ(j.hess(0, 0), 2.0);
  EXPECT_EQ(j.hess(0, 1), 0.0);
  EXPECT_EQ(j.hess(1, 1), 0.0);
}

TEST(ExprJet, LinearFunction) {
  const Jet j = parse("x1", kXY).eval_jet2(std::vector<double>{0.3, -0.7});
  EXPECT_EQ(j.value(), 0.3);
  EXPECT_EQ(j.grad(0), 1.0);
  EXPECT_EQ(j.grad(1), 0.0);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(j.hess(a, b), 0.0);
}

TEST(ExprJet, InverseSquare) {
  const Jet j = parse("1/x2^2", kXY).eval_jet2(std::vector<double>{0.0, 1.0});
  EXPECT_DOUBLE_EQ(j.value(), 1.0);
  EXPECT_DOUBLE_EQ(j.grad(0), 0.0);
  EXPECT_DOUBLE_EQ(j.grad(1), -2.0);
  EXPECT_DOUBLE_EQ(j.hess(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(j.hess(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(j.hess(1, 1), 6.0);
}

TEST(ExprJet, DomainErrorsNameTheNode) {
  try {
    parse("x1 + 1/x2", kXY).eval_jet2(std::vector<double>{1.0, 0.0});
    FAIL();
  } catch (const EvalDomainError& e) {
    EXPECT_EQ(e.node(), "(1/x2)");
  }
  EXPECT_THROW(parse("log(x1)", kXY).eval_jet2(std::vector<double>{-1.0, 0.0}), EvalDomainError);
  EXPECT_THROW(parse("x1^0.5", kXY).eval_jet2(std::vector<double>{-1.0, 0.0}), EvalDomainError);
  EXPECT_NO_THROW(parse("x1^3", kXY).eval_jet2(std::vector<double>{-1.0, 0.0}));
  EXPECT_THROW(parse("x1", kXY).eval_jet2(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(ExprJet, HessianIsExactlySymmetric) {
  testing::ExprGenerator gen({"a", "b", "c"}, 7);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Expr e = parse(gen.next(), {"a", "b", "c"});
    const Jet j = e.eval_jet2(std::vector<double>{u(rng), u(rng), u(rng)});
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) EXPECT_EQ(j.hess(a, b), j.hess(b, a));
  }
}

TEST(ExprJet, MatchesCentralDifferences) {
  const std::vector<std::string> coords = {"x1", "x2", "x3"};
  testing::ExprGenerator gen(coords, 2024);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Expr e = parse(gen.next(), coords);
    const std::vector<double> x = {u(rng), u(rng), u(rng)};
    const Jet j = e.eval_jet2(x);
    const auto fd = testing::central_differences([&](std::span<const double> p) { return e.eval(p); }, x, 1e-4);
    for (std::size_t a = 0; a < 3; ++a) {
      worst = std::max(worst, testing::relative_error(j.grad(a), fd.grad[a]));
      for (std::size_t b = 0; b < 3; ++b)
        worst = std::max(worst, testing::relative_error(j.hess(a, b), fd.hess[a * 3 + b]));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(ExprSubstitute, IdentityIntoLargerChart) {
  const Expr e = parse("x1^2", {"x1"});
  const std::vector<std::string> lifted = {"x1", "y1"};
  const Expr s = e.substitute({{"x1", parse("x1", lifted)}}, lifted);
  EXPECT_EQ(s.arity(), 2u);
  const Jet j = s.eval_jet2(std::vector<double>{3.0, 5.0});
  EXPECT_EQ(j.value(), 9.0);
  EXPECT_EQ(j.grad(0), 6.0);
  EXPECT_EQ(j.grad(1), 0.0);
}

TEST(ExprSubstitute, Renaming) {
  const std::vector<std::string> lifted = {"x1", "y1"};
  const Expr s = parse("x1+1", {"x1"}).substitute({{"x1", parse("y1", lifted)}}, lifted);
  EXPECT_EQ(s.to_string(), "(y1+1)");
}

TEST(ExprSubstitute, Composition) {
  const std::vector<std::string> lifted = {"x1", "y1"};
  const Expr s = parse("x1^2", {"x1"}).substitute({{"x1", parse("x1+y1", lifted)}}, lifted);
  EXPECT_EQ(s.eval(std::vector<double>{1.0, 2.0}), 9.0);
}

TEST(ExprSubstitute, MissingMapping) {
  const std::vector<std::string> lifted = {"u"};
  EXPECT_THROW(parse("x1+x2", kXY).substitute({{"x1", parse("u", lifted)}}, lifted), std::invalid_argument);
}

TEST(ExprSubstitute, AgreesWithChainRule) {
  const std::vector<std::string> base = {"x1", "x2"};
  const std::vector<std::string> outer = {"s", "t"};
  testing::ExprGenerator gen(base, 5);
  testing::ExprGenerator inner_gen(outer, 6);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Expr f = parse(gen.next(3), base);
    const Expr g1 = parse(inner_gen.next(2), outer);
    const Expr g2 = parse(inner_gen.next(2), outer);
    const Expr composed = f.substitute({{"x1", g1}, {"x2", g2}}, outer);
    const std::vector<double> p = {u(rng), u(rng)};
    const auto vars = coordinate_jets(p);
    const std::vector<Jet> inner = {g1.eval_jets(vars), g2.eval_jets(vars)};
    const Jet chain = f.eval_jets(inner);
    const Jet direct = composed.eval_jet2(p);
    EXPECT_LE(std::fabs(chain.value() - direct.value()), 1e-12);
    for (std::size_t a = 0; a < 2; ++a) {
      EXPECT_LE(std::fabs(chain.grad(a) - direct.grad(a)), 1e-12);
      for (std::size_t b = 0; b < 2; ++b) EXPECT_LE(std::fabs(chain.hess(a, b) - direct.hess(a, b)), 1e-11);
    }
  }
}

TEST(ExprPrint, RoundTripPreservesEvaluation) {
  const std::vector<std::string> coords = {"x1", "x2"};
  testing::ExprGenerator gen(coords, 11);
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const Expr e = parse(gen.next(), coords);
    const Expr again = parse(e.to_string(), coords);
    const std::vector<double> p = {u(rng), u(rng)};
    EXPECT_LE(std::fabs(e.eval(p) - again.eval(p)), 1e-15) << e.to_string();
  }
}

TEST(ExprConcurrency, SharedAstEvaluatesFromManyThreads) {
  const Expr e = parse("sin(x1)*exp(x2) + log(1+x1^2)", kXY);
  const double want = e.eval(std::vector<double>{0.25, 0.5});
  std::vector<std::thread> threads;
  std::vector<double> got(8, 0.0);
  for (std::size_t t = 0; t < got.size(); ++t)
    threads.emplace_back([&, t] {
      for (int k = 0; k < 200; ++k) got[t] = e.eval_jet2(std::vector<double>{0.25, 0.5}).value();
    });
  for (auto& th : threads) th.join();
  for (double g : got) EXPECT_EQ(g, want);
}

TEST(JetOrder, PartialConsumesAnOrder) {
  const Jet j = parse("x1^3*x2", kXY).eval_jet2(std::vector<double>{2.0, 3.0});
  const Jet d = j.partial(0);  // 3 x1^2 x2
  EXPECT_EQ(d.order(), 1);
  EXPECT_EQ(d.value(), 36.0);
  EXPECT_EQ(d.grad(0), 36.0);  // 6 x1 x2
  EXPECT_EQ(d.grad(1), 12.0);
  EXPECT_THROW(d.hess(0, 0), std::logic_error);
  EXPECT_THROW(d.partial(0).partial(0), std::logic_error);
}

}  // namespace
}  // namespace qstat
