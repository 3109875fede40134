#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mixedconv/echo.hpp"
#include "mixedconv/error.hpp"
#include "mixedconv/norms.hpp"
#include "mixedconv/random.hpp"

using namespace mixedconv;

namespace {

GeneratedFunction shear_instance(double c, double alpha = 1.0) {
  GeneratorParams gp;
  gp.basis = OrderedBasis::standard(2);
  gp.axes = {AxisSpec::line(96, -6.0, 6.0), AxisSpec::periodic(16, 2)};
  gp.alpha = {alpha, 1.0};
  gp.center = {0.0, 0.0};
  gp.shear = {{0.0, 0.0}, {c, 0.0}};
  gp.trig = {TrigTerm{{0, 2}, 0.3, 0.1}};
  gp.offset = 1.0;
  return generate(c == 0.0 ? GeneratorKind::GaussianLine : GeneratorKind::ShearEcho, gp);
}

}  // namespace

TEST(EchoSpec, SupportMustPrecede) {
  auto basis = OrderedBasis::standard(2);
  // v_1 may not use e_2: M_1 only contains earlier Line axes.
  EXPECT_THROW(EchoSpec(basis, {true, false}, {{0.0, 1.0}, {0.0, 0.0}}), InvalidArgument);
  // v_2 on e_1 with e_1 a Line axis is fine.
  EXPECT_NO_THROW(EchoSpec(basis, {false, true}, {{0.0, 0.0}, {1.0, 0.0}}));
  // A non-E0 axis carries no echo vector.
  EXPECT_THROW(EchoSpec(basis, {false, false}, {{0.0, 0.0}, {1.0, 0.0}}), InvalidArgument);
}

TEST(EchoSpec, LineShiftFoldsPeriodicSteps) {
  EchoSpec spec(OrderedBasis::standard(3), {false, true, true},
                {{}, {0.5, 0.0, 0.0}, {0.25, 0.0, 0.0}});
  auto s = spec.line_shift({1, 2, -4});
  EXPECT_DOUBLE_EQ(s[0], 1.0 + 2 * 0.5 - 4 * 0.25);
  EXPECT_EQ(s[1], 0.0);
  EXPECT_EQ(s[2], 0.0);
  EXPECT_FALSE(spec.is_periodic_class());
  EXPECT_EQ(spec.M(1), std::vector<int>{0});
}

TEST(VerifyEcho, PeriodicFunctionPasses) {
  auto fn = [](std::span<const double> x) {
    return 2.0 + std::cos(2.0 * std::numbers::pi * x[0]);
  };
  auto spec = EchoSpec::periodic(OrderedBasis::standard(1), {true});
  // One stored period wraps onto itself: residual exactly zero.
  auto single = sample(OrderedBasis::standard(1), {AxisSpec::periodic(12)}, fn);
  auto check = verify_echo(single, spec, 0.0);
  EXPECT_TRUE(check.pass);
  EXPECT_EQ(check.worst_residual, 0.0);
  // Three stored periods compare independently sampled values.
  auto stored = sample(OrderedBasis::standard(1), {AxisSpec::periodic(12, 3)}, fn);
  check = verify_echo(stored, spec, 1e-12);
  EXPECT_TRUE(check.pass);
  EXPECT_LE(check.worst_residual, 1e-14);
  EXPECT_EQ(check.compared, 24u);
}

TEST(VerifyEcho, ShearGeneratorPasses) {
  for (double c : {0.25, 0.5, 1.0, -0.75}) {
    auto g = shear_instance(c);
    auto check = verify_echo(g.f, g.spec, 1e-9);
    EXPECT_TRUE(check.pass) << "c=" << c << " residual " << check.worst_residual;
  }
}

TEST(VerifyEcho, ShearWithWholeStepHasZeroResidual) {
  auto g = shear_instance(1.0);
  auto check = verify_echo(g.f, g.spec, 1e-9);
  EXPECT_TRUE(check.pass);
  EXPECT_EQ(check.worst_residual, 0.0);
}

TEST(VerifyEcho, LinearFunctionFails) {
  auto basis = OrderedBasis::standard(2);
  auto f = sample(basis, {AxisSpec::line(16, -4.0, 4.0), AxisSpec::periodic(4, 2)},
                  [](std::span<const double> x) { return x[0] + 10.0 * x[1]; });
  EchoSpec spec(basis, {false, true}, {{}, {1.0, 0.0}});
  auto check = verify_echo(f, spec, 1e-9);
  EXPECT_FALSE(check.pass);
  EXPECT_GT(check.worst_residual, 0.0);
  EXPECT_EQ(check.worst_axis, 1);
}

TEST(VerifyEcho, NoPeriodicAxesIsVacuous) {
  auto f = sample(OrderedBasis::standard(2), {AxisSpec::line(4, 0.0, 1.0), AxisSpec::line(4, 0.0, 1.0)},
                  [](std::span<const double> x) { return x[0] * x[1]; });
  auto check = verify_echo(f, EchoSpec::periodic(OrderedBasis::standard(2), {false, false}), 0.0);
  EXPECT_TRUE(check.pass);
  EXPECT_EQ(check.compared, 0u);
}

TEST(Generate, PeriodicTrigIsPositiveAndPeriodic) {
  GeneratorParams gp;
  gp.basis = OrderedBasis::standard(1);
  gp.axes = {AxisSpec::periodic(32, 2)};
  gp.trig = {TrigTerm{{1}, 1.0, 0.0}};
  gp.offset = 2.0;
  auto g = generate(GeneratorKind::PeriodicTrig, gp);
  double lo = 1e300;
  for (double v : g.f.samples()) lo = std::min(lo, v);
  EXPECT_GE(lo, 1.0);
  EXPECT_TRUE(verify_echo(g.f, g.spec, 1e-9).pass);
}

TEST(Generate, GaussianTailIsNegligible) {
  GeneratorParams gp;
  gp.basis = OrderedBasis::standard(1);
  gp.axes = {AxisSpec::line(240, -6.0, 6.0)};
  gp.alpha = {1.0};
  gp.center = {0.0};
  gp.offset = 1.0;
  auto g = generate(GeneratorKind::GaussianLine, gp);
  // Mass outside [-6, 6] of e^{-pi x^2} (total mass 1) is erfc(6 sqrt(pi)).
  double tail = std::erfc(6.0 * std::sqrt(std::numbers::pi));
  double mass = mixed_norm(g.f, ExponentVector({1.0}));
  EXPECT_LT(tail, 1e-6 * mass);
  EXPECT_NEAR(mass, 1.0, 1e-6);
  EXPECT_LT(g.decay_radius, 6.0);
}

TEST(Generate, InvalidParameters) {
  GeneratorParams gp;
  gp.basis = OrderedBasis::standard(2);
  gp.axes = {AxisSpec::line(16, -4.0, 4.0), AxisSpec::periodic(4)};
  gp.trig = {TrigTerm{{0, 1}, 0.9, 0.0}};
  gp.offset = 1.0;  // floor 0.5 needs offset >= 1.4
  EXPECT_THROW(generate(GeneratorKind::GaussianLine, gp), InvalidArgument);
  gp.offset = 2.0;
  gp.shear = {{0.0, 0.0}, {0.3, 0.0}};  // not a multiple of h = 0.5
  EXPECT_THROW(generate(GeneratorKind::ShearEcho, gp), InvalidArgument);
  gp.shear = {{0.0, 0.0}, {0.5, 0.0}};
  EXPECT_THROW(generate(GeneratorKind::GaussianLine, gp), InvalidArgument);
  EXPECT_THROW(generate(GeneratorKind::PeriodicTrig, gp), InvalidArgument);
  EXPECT_NO_THROW(generate(GeneratorKind::ShearEcho, gp));
}

TEST(EchoShift, NormIsInvariantUnderPeriodShifts) {
  // |f(. - n e_k)| has the same norm over one period as |f| for every n.
  Rng rng(59);
  for (double c : {0.0, 0.25, 0.5}) {
    auto g = shear_instance(c, 1.5);
    auto p = ExponentVector({rng.uniform(0.3, 3.0), rng.uniform(0.3, 3.0)});
    double base = mixed_norm(g.f, p);
    // The second stored period is f(. + e_2); read it through a periodic
    // shift of one step (which rotates the stored periods).
    auto moved = shift(g.f, 1, 1);
    double second = mixed_norm(moved, p);
    EXPECT_NEAR(second, base, 1e-9 * base) << "c=" << c;
  }
}
