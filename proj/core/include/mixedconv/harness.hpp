#pragma once

// End-to-end checks of the weighted mixed-norm convolution estimate
//
//   || a *_[E] f ||_{L^p_(omega)} <= C || a ||_{l^r_(v)} || f ||_{L^p_(omega)}
//
// on sampled instances, the stage-by-stage induction behind it, the
// discrete Young inequalities, and a family showing growth outside the
// admissible exponent region.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mixedconv/convolution.hpp"
#include "mixedconv/echo.hpp"
#include "mixedconv/norms.hpp"
#include "mixedconv/random.hpp"
#include "mixedconv/weights.hpp"

namespace mixedconv {

/// Everything a single estimate needs, already sampled.
struct TheoremInstance {
  EchoSpec echo;
  Weight omega;
  Weight v;
  ExponentVector p;
  ExponentVector r;
  LatticeSequence a;
  GridFunction f;
};

/// Resolution-independent description of an instance; the unit a report
/// records and a config file names.
struct InstanceParams {
  int dim = 1;
  /// Row-major T_E; empty means the standard basis.
  std::vector<double> basis;
  std::vector<bool> periodic;
  GeneratorKind generator = GeneratorKind::GaussianLine;
  std::vector<double> alpha;
  std::vector<double> center;
  std::vector<std::vector<double>> shear;
  std::vector<TrigTerm> trig;
  double offset = 1.0;
  std::vector<std::pair<LatticeIndex, double>> a;
  ExponentVector p;
  ExponentVector r;
  /// Weight specs in Weight::parse syntax.
  std::string omega = "constant";
  std::string v = "constant";
  /// When set, omega only sees the Line coordinates (E0-compatible).
  bool omega_line_only = true;
  /// Line axes sample [-half_width, half_width].
  double half_width = 4.0;
  /// Stored periods on Periodic axes (2 lets echo relations be checked on
  /// stored data; only the first enters norms and convolutions).
  int periods = 2;
};

OrderedBasis make_basis(const InstanceParams& params);
Weight make_omega(const InstanceParams& params);

/// Samples the instance with `resolution` cells per Line axis and per
/// period on Periodic axes.
TheoremInstance build_instance(const InstanceParams& params, int resolution);

/// Draws a random admissible instance of dimension `dim`.
///
/// Unweighted draws use the standard basis. Weighted draws use a
/// near-identity basis, the periodic echo class, omega restricted to the
/// Line coordinates and v from {exp:0.25, poly:1}. Coefficients of a may
/// be negative only when every p_k >= 1.
InstanceParams draw_instance(Rng& rng, int dim, bool weighted);

struct Refinement {
  int resolution = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  /// |lhs' - lhs| / lhs and likewise for rhs (0 when both vanish).
  double lhs_change = 0.0;
  double rhs_change = 0.0;
  bool pass = false;
};

struct VerificationRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  InstanceParams params;
  int resolution = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  /// C = moderate_constant * midpoint_constant; 1 for unweighted instances.
  double admissible_constant = 1.0;
  /// max omega(x) / (omega(x - T j) v(T j)) over output midpoints x and
  /// support points j.
  double moderate_constant = 1.0;
  /// max v(T j) / v(T (j + 1/2)) over the support: the discrete norm of a
  /// samples v at cell midpoints.
  double midpoint_constant = 1.0;
  double quad_margin = 0.05;
  /// lhs / rhs, 0 for degenerate instances.
  double ratio = 0.0;
  bool pass = false;
  /// Non-empty when a precondition failed; the estimate was not evaluated.
  std::string rejection;
  std::optional<Refinement> refinement;
};

/// Re-evaluates rec.params at twice rec.resolution and stores the result
/// in rec.refinement (pass: both sides move by less than `tolerance` and
/// the estimate still holds).
void refine_record(VerificationRecord& rec, double tolerance = 0.01);

struct Estimate {
  double lhs = 0.0;
  double rhs = 0.0;
  double moderate_constant = 1.0;
  double midpoint_constant = 1.0;
};

/// Both sides and the admissible constant, without precondition checks.
/// lhs is the norm of a *_[E] f over the convolution region; rhs uses the
/// norm of f over the whole stored window (first period).
Estimate evaluate_estimate(const TheoremInstance& inst);

/// Checks the preconditions and returns the empty string or a diagnostic.
std::string check_preconditions(const TheoremInstance& inst);

/// Evaluates one instance. Precondition failures come back as a record with
/// `rejection` set and pass = false; coverage and alignment errors
/// propagate.
VerificationRecord verify_theorem_instance(const TheoremInstance& inst,
                                           double quad_margin = 0.05);

/// max over the convolution region of |(a * f) omega| / (a_v * f_omega)
/// with a_v(j) = |a(j)| v(T j) and f_omega = |f| omega. Bounded by the
/// moderate constant.
double reduction_domination_ratio(const TheoremInstance& inst);

struct TraceStage {
  int k = 0;
  /// p_{0,k} (1 for k = 0).
  double exponent = 1.0;
  /// Remaining axes k+1..d over the convolution region.
  Shape shape;
  /// g_k and the right-hand side of the stage-k claim, row-major in shape.
  std::vector<double> g;
  std::vector<double> rhs;
  double max_ratio = 0.0;
  bool pass = false;
};

struct TraceReport {
  std::vector<TraceStage> stages;
  /// Region where a * f was evaluated.
  std::vector<AxisSpec> region;
  /// ||a||_{l^{p_0}} <= ||a||_{l^r}.
  double embedding_lhs = 0.0;
  double embedding_rhs = 0.0;
  bool embedding_pass = false;
  double quad_margin = 0.05;
  bool pass = false;
  std::string rejection;
};

/// Stage-by-stage trace of the induction (standard basis, unit weights).
///
/// g_k(z) is the iterated norm of |a * f| over the first k axes of the
/// region; f_k likewise for |f| over the stored window, a_k the iterated
/// l^{p_{0,1}}, ..., l^{p_{0,k}} norm of |a|. Stage k claims
///
///   g_k(z) <= ( sum_m f_k(z - phi_k(m))^q a_k(m)^q )^{1/q},  q = p_{0,k},
///
/// where m runs over the remaining lattice indices, phi_k(m) is zero on
/// Periodic axes and m_l + sum_{j > l periodic} c_{j,l} m_j on a Line axis
/// l, and f_k vanishes outside the window.
TraceReport induction_trace(const ExponentVector& p, const ExponentVector& r,
                            const LatticeSequence& a, const GridFunction& f,
                            const EchoSpec& echo, double quad_margin = 0.05);

struct SharpnessResult {
  int N = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  /// N^{1 - 1/r}, the closed form for the family.
  double expected = 0.0;
};

/// d = 1 Periodic, f = 1, a = 1 on {0, ..., N-1}. The pair (p, r) must be
/// one-dimensional and outside the admissible region (InvalidArgument
/// otherwise). The default pair is p = (inf), r = (2).
SharpnessResult sharpness_counterexample(
    int N, const ExponentVector& p = ExponentVector({kInf}),
    const ExponentVector& r = ExponentVector({2.0}), int resolution = 16);

struct YoungReport {
  int trials = 0;
  /// ||a*b||_{p0} <= ||a||_{p1} ||b||_{p2}, 1/p1 + 1/p2 = 1 + 1/p0.
  int violations_young = 0;
  double max_slack_young = 0.0;
  /// ||a*b||_p <= ||a||_p ||b||_r for r <= min(1, p).
  int violations_quasi = 0;
  double max_slack_quasi = 0.0;
  double tolerance = 1e-9;
  bool pass = false;
};

/// Random finite sequences on Z^d (d in {1, 2}) and exponent draws. Slack
/// is lhs - rhs; a violation is slack > tolerance.
YoungReport young_check(int trials, std::uint64_t seed,
                        double tolerance = 1e-9);

struct SuiteOptions {
  std::uint64_t seed = 1;
  int count = 200;
  std::vector<int> dims{1, 2, 3};
  bool weighted = false;
  int resolution = 64;
  double quad_margin = 0.05;
  /// Re-evaluate at twice the resolution and require both sides to move by
  /// less than refine_tolerance.
  bool refine = false;
  double refine_tolerance = 0.01;
};

struct SuiteSummary {
  int count = 0;
  int passed = 0;
  int rejected = 0;
  double max_ratio = 0.0;
  double max_lhs_change = 0.0;
  double max_rhs_change = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::vector<VerificationRecord> records;
  SuiteSummary summary;
};

/// Deterministic in options.seed; trial i uses derive_seed(seed, i).
SuiteResult random_suite(const SuiteOptions& options);

/// One suite trial (exposed so a single record can be reproduced).
VerificationRecord run_trial(const SuiteOptions& options, std::size_t index);

}  // namespace mixedconv
