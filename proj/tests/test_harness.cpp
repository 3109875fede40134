#include <gtest/gtest.h>

#include <cmath>

#include "mixedconv/error.hpp"
#include "mixedconv/harness.hpp"
#include "oracle.hpp"
#include "trace_oracle.hpp"

using namespace mixedconv;

namespace {

TheoremInstance hand_instance() {
  auto basis = OrderedBasis::standard(1);
  auto f = sample(basis, {AxisSpec::periodic(32)}, [](std::span<const double>) { return 1.0; });
  LatticeSequence a{Lattice(basis)};
  a.set({0}, 1.0);
  a.set({1}, 1.0);
  return {EchoSpec::periodic(basis, {true}), Weight(), Weight(), ExponentVector({2.0}),
          ExponentVector({1.0}), a, f};
}

InstanceParams line_periodic_shear() {
  InstanceParams params;
  params.dim = 2;
  params.periodic = {false, true};
  params.generator = GeneratorKind::ShearEcho;
  params.alpha = {0.9, 1.0};
  params.center = {0.0625, 0.0};
  params.shear = {{0.0, 0.0}, {0.25, 0.0}};
  params.trig = {TrigTerm{{0, 1}, 0.3, 0.4}};
  params.offset = 1.0;
  params.a = {{{0, 0}, 0.7}, {{1, -1}, 0.4}, {{-1, 2}, 0.25}};
  params.p = ExponentVector({1.5, 0.5});
  params.r = ExponentVector({1.0, 0.5});
  return params;
}

}  // namespace

TEST(Theorem, HandInstanceRatioOne) {
  auto rec = verify_theorem_instance(hand_instance());
  EXPECT_TRUE(rec.rejection.empty()) << rec.rejection;
  EXPECT_NEAR(rec.lhs, 2.0, 1e-12);
  EXPECT_NEAR(rec.rhs, 2.0, 1e-12);
  EXPECT_NEAR(rec.ratio, 1.0, 1e-9);
  EXPECT_EQ(rec.admissible_constant, 1.0);
  EXPECT_TRUE(rec.pass);
}

TEST(Theorem, DeltaGivesRatioOne) {
  Rng rng(61);
  for (int trial = 0; trial < 12; ++trial) {
    auto params = draw_instance(rng, 1 + trial % 3, false);
    params.a = {{LatticeIndex(params.dim, 0), 1.0}};
    auto rec = verify_theorem_instance(build_instance(params, 32));
    ASSERT_TRUE(rec.rejection.empty()) << rec.rejection;
    EXPECT_NEAR(rec.ratio, 1.0, 1e-12) << "trial " << trial;
  }
}

TEST(Theorem, LhsMatchesBruteForce) {
  auto params = line_periodic_shear();
  auto inst = build_instance(params, 32);
  auto rec = verify_theorem_instance(inst);
  ASSERT_TRUE(rec.rejection.empty()) << rec.rejection;
  // Rebuild |a * f| from the closed form on the convolution region.
  auto region = convolution_region(inst.a, inst.f, inst.echo);
  auto f = oracle::closed_form(params);
  oracle::Sequence a;
  for (const auto& [j, v] : params.a) a[j] = v;
  std::vector<int> extents{region[0].cells, region[1].cells};
  std::vector<double> dense;
  for (int i = 0; i < extents[0]; ++i)
    for (int j = 0; j < extents[1]; ++j)
      dense.push_back(oracle::convolve_at(a, f, {region[0].midpoint(i), region[1].midpoint(j)}));
  double lhs = oracle::iterated_norm(dense, extents, {region[0].width(), region[1].width()},
                                     {1.5, 0.5});
  EXPECT_TRUE(oracle::near_rel(rec.lhs, lhs, 1e-10));
  EXPECT_LE(rec.lhs, rec.rhs * 1.05);
}

TEST(Theorem, Rejections) {
  auto inst = hand_instance();
  inst.r = ExponentVector({2.0});
  auto rec = verify_theorem_instance(inst);
  EXPECT_FALSE(rec.pass);
  EXPECT_NE(rec.rejection.find("exponent pair"), std::string::npos);

  inst = hand_instance();
  std::vector<double> s(inst.f.samples().begin(), inst.f.samples().end());
  s[3] = -0.5;
  inst.f = GridFunction(inst.f.basis(), inst.f.axes(), s);
  rec = verify_theorem_instance(inst);
  EXPECT_NE(rec.rejection.find("nonnegative"), std::string::npos);

  auto params = line_periodic_shear();
  params.omega = "exp:0.25";
  rec = verify_theorem_instance(build_instance(params, 32));
  EXPECT_NE(rec.rejection.find("periodic echo class"), std::string::npos);

  params.shear = {{0.0, 0.0}, {0.0, 0.0}};
  params.generator = GeneratorKind::GaussianLine;
  params.omega_line_only = false;
  rec = verify_theorem_instance(build_instance(params, 32));
  EXPECT_NE(rec.rejection.find("E0-compatible"), std::string::npos);
}

TEST(Theorem, WeightedConstantBoundsReduction) {
  Rng rng(67);
  for (int trial = 0; trial < 10; ++trial) {
    auto params = draw_instance(rng, 1 + trial % 2, true);
    auto inst = build_instance(params, 32);
    auto rec = verify_theorem_instance(inst);
    ASSERT_TRUE(rec.rejection.empty()) << rec.rejection;
    EXPECT_TRUE(rec.pass);
    EXPECT_NEAR(rec.admissible_constant, rec.moderate_constant * rec.midpoint_constant, 1e-15);
    double dom = reduction_domination_ratio(inst);
    EXPECT_LE(dom, rec.moderate_constant * (1.0 + 1e-12)) << "trial " << trial;
  }
}

TEST(Theorem, RefinementKeepsPassingInstancesPassing) {
  Rng rng(71);
  for (int trial = 0; trial < 8; ++trial) {
    auto params = draw_instance(rng, 1 + trial % 2, false);
    auto rec = verify_theorem_instance(build_instance(params, 32));
    rec.params = params;
    rec.resolution = 32;
    ASSERT_TRUE(rec.pass);
    refine_record(rec, 0.05);
    ASSERT_TRUE(rec.refinement.has_value());
    EXPECT_EQ(rec.refinement->resolution, 64);
    EXPECT_TRUE(rec.refinement->lhs <= rec.refinement->rhs * (1 + rec.quad_margin));
  }
}

TEST(Trace, StageZeroIsEqualityForNonnegativePeriodicData) {
  auto params = InstanceParams{};
  params.dim = 2;
  params.periodic = {true, true};
  params.generator = GeneratorKind::PeriodicTrig;
  params.trig = {TrigTerm{{1, -1}, 0.5, 0.2}};
  params.offset = 1.2;
  params.a = {{{0, 0}, 0.5}, {{1, 2}, 0.3}};
  params.p = ExponentVector({2.0, 0.5});
  params.r = ExponentVector({1.0, 0.5});
  auto inst = build_instance(params, 16);
  auto rep = induction_trace(inst.p, inst.r, inst.a, inst.f, inst.echo);
  ASSERT_TRUE(rep.rejection.empty()) << rep.rejection;
  ASSERT_EQ(rep.stages.size(), 3u);
  const auto& s0 = rep.stages[0];
  for (std::size_t i = 0; i < s0.g.size(); ++i) EXPECT_NEAR(s0.g[i], s0.rhs[i], 1e-13);
  EXPECT_TRUE(rep.pass);
}

TEST(Trace, OneDimensionalMinkowskiStep) {
  InstanceParams params;
  params.dim = 1;
  params.periodic = {false};
  params.alpha = {1.0};
  params.center = {0.0};
  params.a = {{{0}, 0.6}, {{1}, 0.8}};
  params.p = ExponentVector({2.0});
  params.r = ExponentVector({1.0});
  auto inst = build_instance(params, 64);
  auto rep = induction_trace(inst.p, inst.r, inst.a, inst.f, inst.echo);
  ASSERT_TRUE(rep.pass);
  ASSERT_EQ(rep.stages.size(), 2u);
  // Stage 1: ||a * f||_2 <= (|a(0)| + |a(1)|) ||f||_2, computed directly.
  const auto& region = rep.region[0];
  double lhs = 0.0, fnorm = 0.0;
  for (int i = 0; i < region.cells; ++i) {
    double x = region.midpoint(i);
    double v = 0.6 * std::exp(-std::numbers::pi * x * x) +
               0.8 * std::exp(-std::numbers::pi * (x - 1.0) * (x - 1.0));
    lhs += region.width() * v * v;
  }
  const auto& window = inst.f.axis(0);
  for (int i = 0; i < window.cells; ++i) {
    double x = window.midpoint(i);
    fnorm += window.width() * std::exp(-2.0 * std::numbers::pi * x * x);
  }
  EXPECT_NEAR(rep.stages[1].g[0], std::sqrt(lhs), 1e-12);
  EXPECT_NEAR(rep.stages[1].rhs[0], 1.4 * std::sqrt(fnorm), 1e-12);
}

TEST(Trace, ShearInstanceMatchesOracle) {
  auto params = line_periodic_shear();
  for (int n : {32, 64}) {
    auto inst = build_instance(params, n);
    auto rep = induction_trace(inst.p, inst.r, inst.a, inst.f, inst.echo);
    ASSERT_TRUE(rep.rejection.empty()) << rep.rejection;
    EXPECT_TRUE(rep.pass) << "n=" << n;
    EXPECT_TRUE(rep.embedding_pass);
    Rng rng(73);
    auto cmp = oracle::compare_trace(oracle::trace_problem(params, inst, rep), rep, rng, 10);
    EXPECT_EQ(cmp.points, 30);
    EXPECT_LT(cmp.worst_relative, 1e-9) << cmp.where;
  }
}

TEST(Trace, Rejections) {
  auto params = line_periodic_shear();
  auto inst = build_instance(params, 32);
  auto rep = induction_trace(inst.p, ExponentVector({1.0, 1.0}), inst.a, inst.f, inst.echo);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.rejection.empty());
  params.shear = {{0.0, 0.0}, {0.0, 0.0}};
  params.generator = GeneratorKind::GaussianLine;
  params.basis = {1.0, 0.1, 0.0, 1.0};
  inst = build_instance(params, 32);
  rep = induction_trace(inst.p, inst.r, inst.a, inst.f, inst.echo);
  EXPECT_NE(rep.rejection.find("standard basis"), std::string::npos);
}

TEST(Sharpness, RatioIsSquareRootOfN) {
  for (auto [n, expected] : {std::pair{4, 2.0}, {16, 4.0}, {64, 8.0}}) {
    auto res = sharpness_counterexample(n);
    EXPECT_NEAR(res.ratio, expected, 0.01 * expected);
    EXPECT_NEAR(res.lhs, n, 1e-9 * n);
    EXPECT_NEAR(res.expected, expected, 1e-12);
  }
  double growth = sharpness_counterexample(64).ratio / sharpness_counterexample(16).ratio;
  EXPECT_NEAR(growth, 2.0, 0.04);
}

TEST(Sharpness, AdmissiblePairIsRefused) {
  EXPECT_THROW(sharpness_counterexample(4, ExponentVector({kInf}), ExponentVector({1.0})),
               InvalidArgument);
  EXPECT_THROW(sharpness_counterexample(4, ExponentVector({2.0, 2.0}), ExponentVector({2.0, 2.0})),
               InvalidArgument);
}

TEST(Young, HandExamples) {
  // a = b = (1, 1): a * b = (1, 2, 1).
  oracle::Sequence a{{{0}, 1.0}, {{1}, 1.0}};
  auto c = oracle::convolve(a, a);
  EXPECT_EQ(oracle::lp(c, kInf), 2.0);
  EXPECT_EQ(oracle::lp(a, 1.0) * oracle::lp(a, kInf), 2.0);
  Lattice z1(OrderedBasis::standard(1));
  LatticeSequence la(z1);
  la.set({0}, 1.0);
  la.set({1}, 1.0);
  auto lc = discrete_convolve(la, la);
  EXPECT_EQ(discrete_mixed_norm(lc, ExponentVector({kInf})), 2.0);
  auto delta = LatticeSequence::delta(z1, {0});
  EXPECT_EQ(discrete_mixed_norm(discrete_convolve(delta, delta), ExponentVector({0.3})), 1.0);
}

TEST(Young, RandomTrialsHaveNoViolations) {
  auto rep = young_check(500, 1);
  EXPECT_EQ(rep.trials, 500);
  EXPECT_EQ(rep.violations_young, 0);
  EXPECT_EQ(rep.violations_quasi, 0);
  EXPECT_LE(rep.max_slack_young, 1e-9);
  EXPECT_TRUE(rep.pass);
}

TEST(Suite, DeterministicAndReproducible) {
  SuiteOptions opt;
  opt.seed = 1;
  opt.count = 3;
  opt.resolution = 16;
  auto a = random_suite(opt);
  auto b = random_suite(opt);
  ASSERT_EQ(a.records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.records[i].lhs, b.records[i].lhs);
    EXPECT_EQ(a.records[i].rhs, b.records[i].rhs);
    EXPECT_EQ(a.records[i].seed, derive_seed(1, i));
  }
  auto again = run_trial(opt, 2);
  EXPECT_EQ(again.lhs, a.records[2].lhs);
  EXPECT_EQ(a.summary.count, 3);
  EXPECT_EQ(a.summary.passed, 3);
  opt.seed = 2;
  EXPECT_NE(random_suite(opt).records[0].lhs, a.records[0].lhs);
}

TEST(Suite, DrawsAreAdmissible) {
  Rng rng(79);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 3;
    auto params = draw_instance(rng, d, trial % 2 == 1);
    EXPECT_TRUE(validate_exponent_pair(params.p, params.r));
    EXPECT_EQ(static_cast<int>(params.periodic.size()), d);
    EXPECT_FALSE(params.a.empty());
    bool signed_ok = true;
    for (double e : params.p.entries()) signed_ok = signed_ok && e >= 1.0;
    for (const auto& [j, v] : params.a) {
      EXPECT_GE(std::abs(v), 0.1);
      if (!signed_ok) {
        EXPECT_GT(v, 0.0);
      }
    }
  }
}
