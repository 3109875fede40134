#include "mixedconv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "mixedconv/error.hpp"

namespace mixedconv {
namespace {

const std::vector<double> kExponentPool{0.25, 0.5, 1.0, 1.5, 2.0, 4.0, kInf};
const std::vector<std::string> kWeightPool{"exp:0.25", "poly:1"};

bool is_weighted(const TheoremInstance& inst) {
  return !inst.omega.is_constant() || !inst.v.is_constant();
}

// Iterated-norm input built from |g| over the first period.
NormArray norm_array(const GridFunction& g) {
  NormArray out;
  std::vector<int> extents;
  for (const auto& ax : g.axes()) {
    extents.push_back(ax.cells);
    out.widths.push_back(ax.width());
  }
  out.shape = Shape(extents);
  out.values.resize(out.shape.size());
  for (std::size_t flat = 0; flat < out.values.size(); ++flat)
    out.values[flat] = std::abs(g.at(out.shape.unravel(flat)));
  return out;
}

Vector lattice_point(const OrderedBasis& basis, const LatticeIndex& j,
                     double offset = 0.0) {
  Vector c(basis.dim());
  for (int k = 0; k < basis.dim(); ++k) c[k] = static_cast<double>(j[k]) + offset;
  return basis.to_physical(c);
}

double relative_change(double before, double after) {
  if (before == 0.0) return after == 0.0 ? 0.0 : kInf;
  return std::abs(after - before) / std::abs(before);
}

}  // namespace

OrderedBasis make_basis(const InstanceParams& params) {
  if (params.basis.empty()) return OrderedBasis::standard(params.dim);
  if (params.basis.size() != static_cast<std::size_t>(params.dim * params.dim)) {
    throw InvalidArgument("basis must list dim*dim entries");
  }
  return OrderedBasis::from_row_major(params.dim, params.basis);
}

Weight make_omega(const InstanceParams& params) {
  Weight base = Weight::parse(params.omega);
  if (!params.omega_line_only || base.is_constant()) return base;
  std::vector<bool> keep(params.dim);
  for (int k = 0; k < params.dim; ++k) keep[k] = !params.periodic[k];
  return restrict_to_axes(base, make_basis(params), std::move(keep));
}

TheoremInstance build_instance(const InstanceParams& params, int resolution) {
  const int d = params.dim;
  if (d < 1) throw InvalidArgument("instance dimension must be positive");
  if (params.periodic.size() != static_cast<std::size_t>(d)) {
    throw InvalidArgument("instance needs one periodic flag per axis");
  }
  if (resolution < 1) throw InvalidArgument("resolution must be positive");
  if (!(params.half_width > 0.0)) {
    throw InvalidArgument("half_width must be positive");
  }
  auto basis = make_basis(params);

  GeneratorParams gp;
  gp.basis = basis;
  for (int k = 0; k < d; ++k) {
    gp.axes.push_back(params.periodic[k]
                          ? AxisSpec::periodic(resolution, params.periods)
                          : AxisSpec::line(resolution, -params.half_width,
                                           params.half_width));
  }
  gp.alpha = params.alpha;
  gp.center = params.center;
  gp.shear = params.shear;
  gp.trig = params.trig;
  gp.offset = params.offset;
  double amp = 0.0;
  for (const auto& t : params.trig) amp += std::abs(t.amplitude);
  gp.floor = std::min(0.5, params.offset - amp);
  auto generated = generate(params.generator, gp);

  LatticeSequence a{Lattice(basis)};
  for (const auto& [j, value] : params.a) {
    if (j.size() != static_cast<std::size_t>(d)) {
      throw InvalidArgument("sequence index has wrong length");
    }
    a.set(j, value);
  }
  if (params.p.size() != d || params.r.size() != d) {
    throw InvalidArgument("exponent vectors must have one entry per axis");
  }
  return TheoremInstance{std::move(generated.spec),
                         make_omega(params),
                         Weight::parse(params.v),
                         params.p,
                         params.r,
                         std::move(a),
                         std::move(generated.f)};
}

InstanceParams draw_instance(Rng& rng, int dim, bool weighted) {
  if (dim < 1) throw InvalidArgument("draw_instance: dim must be positive");
  InstanceParams params;
  params.dim = dim;
  params.periodic.resize(dim);
  bool any_line = false;
  bool any_periodic = false;
  for (int k = 0; k < dim; ++k) {
    params.periodic[k] = rng.bernoulli(0.5);
    any_line = any_line || !params.periodic[k];
    any_periodic = any_periodic || params.periodic[k];
  }

  if (weighted) {
    // Near-identity basis, kept well away from degeneracy.
    for (;;) {
      params.basis.assign(static_cast<std::size_t>(dim * dim), 0.0);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
          params.basis[static_cast<std::size_t>(i * dim + j)] =
              (i == j ? 1.0 : 0.0) + rng.uniform(-0.2, 0.2);
      if (std::abs(make_basis(params).determinant()) > 0.3) break;
    }
    params.omega = rng.pick(kWeightPool);
    params.v = rng.pick(kWeightPool);
    params.omega_line_only = true;
  }

  params.alpha.assign(dim, 1.0);
  params.center.assign(dim, 0.0);
  for (int k = 0; k < dim; ++k) {
    if (params.periodic[k]) continue;
    params.alpha[k] = rng.uniform(0.5, 1.0);
    // Odd multiples of 1/16: peaks sit on midpoints of the 64-cell grid.
    params.center[k] = static_cast<double>(2 * rng.integer(-4, 3) + 1) / 16.0;
  }

  params.generator = any_line ? GeneratorKind::GaussianLine
                              : GeneratorKind::PeriodicTrig;
  params.shear.assign(dim, std::vector<double>(dim, 0.0));
  if (!weighted && any_line && any_periodic && rng.bernoulli(0.5)) {
    std::vector<double> load(dim, 0.0);
    for (int k = 0; k < dim; ++k) {
      if (!params.periodic[k]) continue;
      for (int l = 0; l < k; ++l) {
        if (params.periodic[l] || load[l] >= 0.5 || !rng.bernoulli(0.7)) continue;
        double c = rng.bernoulli(0.5) ? 0.25 : -0.25;
        params.shear[k][l] = c;
        load[l] += std::abs(c);
        params.generator = GeneratorKind::ShearEcho;
      }
    }
  }

  double amp = 0.0;
  if (any_periodic) {
    const int terms = static_cast<int>(rng.integer(1, 2));
    for (int t = 0; t < terms; ++t) {
      TrigTerm term;
      term.freq.assign(dim, 0);
      for (int k = 0; k < dim; ++k)
        if (params.periodic[k]) term.freq[k] = static_cast<int>(rng.integer(-2, 2));
      term.amplitude = rng.uniform(0.0, 0.5);
      term.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      amp += term.amplitude;
      params.trig.push_back(std::move(term));
    }
  }
  params.offset = amp + 0.5 + rng.uniform(0.0, 1.0);

  std::vector<double> p(dim);
  for (auto& e : p) e = rng.pick(kExponentPool);
  params.p = ExponentVector(p);
  auto p0 = running_min_exponent(params.p);
  std::vector<double> r(dim);
  for (int k = 0; k < dim; ++k) {
    double factor = rng.bernoulli(0.5) ? 1.0 : rng.uniform(0.25, 1.0);
    r[k] = p0[k] * factor;
  }
  params.r = ExponentVector(r);

  // Negative coefficients only when every p_k >= 1: for p < 1 a sign
  // change of a * f puts a cusp into |a * f|^p and the midpoint rule
  // converges too slowly for a 1% refinement check.
  bool signed_values = true;
  for (double e : params.p.entries()) signed_values = signed_values && e >= 1.0;
  std::map<LatticeIndex, double> a;
  std::int64_t available = 1;
  for (int k = 0; k < dim; ++k) available *= params.periodic[k] ? 5 : 3;
  const int support =
      static_cast<int>(std::min<std::int64_t>(rng.integer(1, 4), available));
  while (static_cast<int>(a.size()) < support) {
    LatticeIndex j(dim);
    for (int k = 0; k < dim; ++k) {
      std::int64_t reach = params.periodic[k] ? 2 : 1;
      j[k] = rng.integer(-reach, reach);
    }
    double value = rng.uniform(0.1, 1.0);
    if (signed_values && rng.bernoulli(0.25)) value = -value;
    a.emplace(std::move(j), value);
  }
  params.a.assign(a.begin(), a.end());
  return params;
}

Estimate evaluate_estimate(const TheoremInstance& inst) {
  Estimate est;
  auto conv = semi_discrete_convolve(inst.a, inst.f, inst.echo);
  est.lhs = mixed_norm(conv, inst.p, inst.omega);
  est.rhs = discrete_mixed_norm(inst.a, inst.r, inst.v) *
            mixed_norm(inst.f, inst.p, inst.omega);
  if (!is_weighted(inst) || inst.a.empty()) return est;

  const auto& basis = inst.f.basis();
  const int d = inst.f.dim();

  // omega only sees the Line coordinates, so one value per periodic axis
  // is enough for the moderateness constant.
  std::vector<int> extents;
  for (const auto& ax : conv.axes()) extents.push_back(ax.is_periodic() ? 1 : ax.cells);
  Shape reduced(extents);
  std::vector<std::pair<Vector, double>> shifts;  // (coordinates j, v(T j))
  for (const auto& [j, value] : inst.a.support()) {
    Vector c(d);
    for (int k = 0; k < d; ++k) c[k] = static_cast<double>(j[k]);
    shifts.emplace_back(c, inst.v(basis.to_physical(c)));
  }
  double c1 = 0.0;
  for (std::size_t flat = 0; flat < reduced.size(); ++flat) {
    auto idx = reduced.unravel(flat);
    auto mid = conv.midpoint(idx);
    Vector x = Eigen::Map<const Vector>(mid.data(), d);
    double wx = inst.omega(basis.to_physical(x));
    for (const auto& [c, vj] : shifts) {
      double q = wx / (inst.omega(basis.to_physical(Vector(x - c))) * vj);
      if (!std::isfinite(q)) {
        throw NumericError("moderateness ratio is not finite");
      }
      c1 = std::max(c1, q);
    }
  }
  double c2 = 0.0;
  for (const auto& [j, value] : inst.a.support()) {
    double q = inst.v(lattice_point(basis, j)) / inst.v(lattice_point(basis, j, 0.5));
    c2 = std::max(c2, q);
  }
  est.moderate_constant = c1;
  est.midpoint_constant = c2;
  return est;
}

std::string check_preconditions(const TheoremInstance& inst) {
  const int d = inst.f.dim();
  if (inst.a.dim() != d || inst.echo.dim() != d || inst.p.size() != d ||
      inst.r.size() != d) {
    return "dimension mismatch between a, f, echo spec and exponents";
  }
  try {
    inst.echo.check_axes(inst.f.axes());
  } catch (const Error& e) {
    return std::string("axis kinds do not match the echo spec: ") + e.what();
  }
  if (!validate_exponent_pair(inst.p, inst.r)) {
    return "exponent pair violates r_k <= min(1, p_1, ..., p_k): p = (" +
           inst.p.to_string() + "), r = (" + inst.r.to_string() + ")";
  }
  double fmin = kInf;
  for (double s : inst.f.samples()) fmin = std::min(fmin, s);
  if (fmin < 0.0) {
    std::ostringstream msg;
    msg << "f must be nonnegative (min sample " << fmin << ")";
    return msg.str();
  }
  try {
    auto check = verify_echo(inst.f, inst.echo, 1e-9);
    if (!check.pass) {
      std::ostringstream msg;
      msg << "f is not echo-periodic: residual " << check.worst_residual
          << " on axis " << check.worst_axis + 1;
      return msg.str();
    }
  } catch (const Error& e) {
    return std::string("echo verification failed: ") + e.what();
  }
  if (is_weighted(inst) && !inst.echo.is_periodic_class()) {
    return "weighted instances need the periodic echo class (f omega is not "
           "echo-periodic under shear)";
  }

  double reach = 1.0;
  Box coords;
  for (const auto& ax : inst.f.axes()) {
    double lo = ax.is_periodic() ? 0.0 : ax.lo;
    double hi = ax.is_periodic() ? 1.0 : ax.hi;
    coords.lo.push_back(lo);
    coords.hi.push_back(hi);
    reach = std::max({reach, std::abs(lo), std::abs(hi)});
  }
  const auto& basis = inst.f.basis();
  if (!inst.omega.is_constant()) {
    auto compat = check_E0_compatibility(inst.omega, basis,
                                         inst.echo.periodic_axes(), coords,
                                         1e-12, 9);
    if (!compat.ok) {
      std::ostringstream msg;
      msg << "omega is not E0-compatible (relative residual "
          << compat.worst_residual << ")";
      return msg.str();
    }
  }
  if (!inst.v.is_constant() && !inst.a.empty()) {
    std::vector<Vector> shifts;
    for (const auto& [j, value] : inst.a.support())
      shifts.push_back(lattice_point(basis, j));
    double scale = basis.matrix().cwiseAbs().maxCoeff();
    auto sub = check_submultiplicative(inst.v, Box::cube(d, reach * scale),
                                       shifts, 1e-9, 9);
    if (!sub.ok) return "v is not submultiplicative (" + sub.failure + ")";
  }
  return {};
}

VerificationRecord verify_theorem_instance(const TheoremInstance& inst,
                                           double quad_margin) {
  VerificationRecord rec;
  rec.quad_margin = quad_margin;
  rec.resolution = inst.f.dim() > 0 ? inst.f.axis(0).cells : 0;
  rec.rejection = check_preconditions(inst);
  if (!rec.rejection.empty()) return rec;

  auto est = evaluate_estimate(inst);
  rec.lhs = est.lhs;
  rec.rhs = est.rhs;
  rec.moderate_constant = est.moderate_constant;
  rec.midpoint_constant = est.midpoint_constant;
  rec.admissible_constant = est.moderate_constant * est.midpoint_constant;
  if (rec.lhs == 0.0) {
    rec.ratio = 0.0;
  } else {
    rec.ratio = rec.rhs > 0.0 ? rec.lhs / rec.rhs : kInf;
  }
  rec.pass = rec.lhs <= rec.admissible_constant * rec.rhs * (1.0 + quad_margin);
  return rec;
}

double reduction_domination_ratio(const TheoremInstance& inst) {
  const auto& basis = inst.f.basis();
  LatticeSequence av(inst.a.lattice());
  for (const auto& [j, value] : inst.a.support())
    av.set(j, std::abs(value) * inst.v(lattice_point(basis, j)));

  std::vector<double> fw(inst.f.size());
  for (std::size_t flat = 0; flat < fw.size(); ++flat) {
    auto idx = inst.f.shape().unravel(flat);
    auto mid = inst.f.midpoint(idx);
    fw[flat] = std::abs(inst.f[flat]) *
               inst.omega(basis.to_physical(std::span<const double>(mid)));
  }
  GridFunction f_omega(basis, inst.f.axes(), std::move(fw));

  auto conv = semi_discrete_convolve(inst.a, inst.f, inst.echo);
  auto dominated = semi_discrete_convolve(av, f_omega, inst.echo);
  double worst = 0.0;
  for (std::size_t flat = 0; flat < conv.size(); ++flat) {
    auto idx = conv.shape().unravel(flat);
    auto mid = conv.midpoint(idx);
    double lhs = std::abs(conv[flat]) *
                 inst.omega(basis.to_physical(std::span<const double>(mid)));
    if (lhs == 0.0) continue;
    double rhs = dominated[flat];
    worst = std::max(worst, rhs > 0.0 ? lhs / rhs : kInf);
  }
  return worst;
}

TraceReport induction_trace(const ExponentVector& p, const ExponentVector& r,
                            const LatticeSequence& a, const GridFunction& f,
                            const EchoSpec& echo, double quad_margin) {
  TraceReport report;
  report.quad_margin = quad_margin;
  const int d = f.dim();
  if (a.dim() != d || echo.dim() != d || p.size() != d || r.size() != d) {
    report.rejection = "dimension mismatch";
    return report;
  }
  if (!f.basis().is_standard()) {
    report.rejection = "the induction trace needs the standard basis";
    return report;
  }
  if (!validate_exponent_pair(p, r)) {
    report.rejection = "exponent pair outside the admissible region";
    return report;
  }
  for (double s : f.samples()) {
    if (s < 0.0) {
      report.rejection = "f must be nonnegative";
      return report;
    }
  }
  try {
    echo.check_axes(f.axes());
    if (!verify_echo(f, echo, 1e-9).pass) {
      report.rejection = "f is not echo-periodic for the given spec";
      return report;
    }
  } catch (const Error& e) {
    report.rejection = std::string("unsupported echo data: ") + e.what();
    return report;
  }

  auto conv = semi_discrete_convolve(a, f, echo);
  report.region = conv.axes();
  auto p0 = running_min_exponent(p);

  // Offsets of the region inside the stored window, per Line axis.
  std::vector<std::int64_t> start(d, 0);
  for (int l = 0; l < d; ++l) {
    if (f.axis(l).is_periodic()) continue;
    start[l] = *f.axis(l).cells_for(report.region[l].lo - f.axis(l).lo);
  }

  NormArray G = norm_array(conv);
  NormArray F = norm_array(f);

  // Dense |a| on its bounding box, unit cells.
  LatticeIndex lo(d, 0), hi(d, 0);
  if (!a.empty()) {
    lo = hi = a.support().begin()->first;
    for (const auto& [j, value] : a.support())
      for (int k = 0; k < d; ++k) {
        lo[k] = std::min(lo[k], j[k]);
        hi[k] = std::max(hi[k], j[k]);
      }
  }
  NormArray A;
  {
    std::vector<int> extents;
    for (int k = 0; k < d; ++k) extents.push_back(static_cast<int>(hi[k] - lo[k] + 1));
    A.shape = Shape(extents);
    A.widths.assign(d, 1.0);
    A.values.assign(A.shape.size(), 0.0);
    std::vector<int> idx(d);
    for (const auto& [j, value] : a.support()) {
      for (int k = 0; k < d; ++k) idx[k] = static_cast<int>(j[k] - lo[k]);
      A.values[A.shape.flat(idx)] = std::abs(value);
    }
  }

  bool all = true;
  for (int k = 0; k <= d; ++k) {
    if (k > 0) {
      double pk = p[k - 1];
      double qk = p0[k - 1];
      G = reduce_leading_axes(std::move(G), std::span<const double>(&pk, 1), 1);
      F = reduce_leading_axes(std::move(F), std::span<const double>(&pk, 1), 1);
      A = reduce_leading_axes(std::move(A), std::span<const double>(&qk, 1), 1);
    }
    TraceStage stage;
    stage.k = k;
    stage.exponent = k == 0 ? 1.0 : p0[k - 1];
    stage.shape = G.shape;
    stage.g = G.values;
    const double q = stage.exponent;
    const int rest = d - k;

    // Per remaining lattice index m: a_k(m) and the cell shift phi_k(m).
    struct Term {
      double weight;
      std::vector<std::int64_t> shift;
    };
    std::vector<Term> terms;
    for (std::size_t flat = 0; flat < A.values.size(); ++flat) {
      if (A.values[flat] == 0.0) continue;
      auto idx = A.shape.unravel(flat);
      std::vector<std::int64_t> m(rest);
      for (int i = 0; i < rest; ++i) m[i] = lo[k + i] + idx[i];
      Term term{std::pow(A.values[flat], q), std::vector<std::int64_t>(rest, 0)};
      for (int i = 0; i < rest; ++i) {
        const int l = k + i;
        if (f.axis(l).is_periodic()) continue;
        double phi = static_cast<double>(m[i]);
        for (int j = l + 1; j < d; ++j)
          if (echo.in_E0(j)) phi += echo.echo_vector(j)[l] * static_cast<double>(m[j - k]);
        auto cells = f.axis(l).cells_for(phi);
        if (!cells) throw AlignmentError("induction_trace: shift not on the grid");
        term.shift[i] = *cells;
      }
      terms.push_back(std::move(term));
    }

    stage.rhs.assign(stage.g.size(), 0.0);
    std::vector<int> src(rest);
    for (std::size_t flat = 0; flat < stage.g.size(); ++flat) {
      auto z = G.shape.unravel(flat);
      double sum = 0.0;
      for (const auto& term : terms) {
        bool inside = true;
        for (int i = 0; i < rest; ++i) {
          const int l = k + i;
          std::int64_t s = z[i] + start[l] - term.shift[i];
          if (s < 0 || s >= f.axis(l).cells) {
            inside = false;
            break;
          }
          src[i] = static_cast<int>(s);
        }
        if (!inside) continue;
        sum += std::pow(F.values[F.shape.flat(src)], q) * term.weight;
      }
      stage.rhs[flat] = std::pow(sum, 1.0 / q);
    }

    stage.pass = true;
    for (std::size_t i = 0; i < stage.g.size(); ++i) {
      double g = stage.g[i];
      double rhs = stage.rhs[i];
      if (g == 0.0) continue;
      double ratio = rhs > 0.0 ? g / rhs : kInf;
      stage.max_ratio = std::max(stage.max_ratio, ratio);
      if (g > rhs * (1.0 + quad_margin)) stage.pass = false;
    }
    all = all && stage.pass;
    report.stages.push_back(std::move(stage));
  }

  report.embedding_lhs = discrete_mixed_norm(a, p0);
  report.embedding_rhs = discrete_mixed_norm(a, r);
  report.embedding_pass =
      report.embedding_lhs <= report.embedding_rhs * (1.0 + 1e-12);
  report.pass = all && report.embedding_pass;
  return report;
}

SharpnessResult sharpness_counterexample(int N, const ExponentVector& p,
                                         const ExponentVector& r,
                                         int resolution) {
  if (N < 1) throw InvalidArgument("sharpness: N must be positive");
  if (p.size() != 1 || r.size() != 1) {
    throw InvalidArgument("sharpness: the family is one-dimensional");
  }
  if (validate_exponent_pair(p, r)) {
    throw InvalidArgument(
        "sharpness: (p, r) is admissible; the family needs r > min(1, p)");
  }
  auto basis = OrderedBasis::standard(1);
  auto f = sample(basis, {AxisSpec::periodic(resolution)},
                  [](std::span<const double>) { return 1.0; });
  LatticeSequence a{Lattice(basis)};
  for (int n = 0; n < N; ++n) a.set({n}, 1.0);
  auto echo = EchoSpec::periodic(basis, {true});
  auto conv = semi_discrete_convolve(a, f, echo);

  SharpnessResult out;
  out.N = N;
  out.lhs = mixed_norm(conv, p);
  out.rhs = discrete_mixed_norm(a, r) * mixed_norm(f, p);
  out.ratio = out.lhs / out.rhs;
  out.expected = std::pow(static_cast<double>(N), 1.0 - 1.0 / r[0]);
  return out;
}

namespace {

LatticeSequence random_sequence(Rng& rng, int d) {
  LatticeSequence a{Lattice(OrderedBasis::standard(d))};
  const int n = static_cast<int>(rng.integer(1, 6));
  for (int i = 0; i < n; ++i) {
    LatticeIndex j(d);
    for (auto& c : j) c = rng.integer(-3, 3);
    double value = rng.uniform(0.05, 1.0);
    if (rng.bernoulli(0.5)) value = -value;
    a.set(j, value);
  }
  return a;
}

// Reciprocal exponent in [0, 1]; endpoints drawn with positive probability.
double draw_reciprocal(Rng& rng, double lo) {
  double u = rng.uniform();
  if (u < 0.15) return lo;
  if (u < 0.3) return 1.0;
  return rng.uniform(lo, 1.0);
}

double from_reciprocal(double u) { return u <= 0.0 ? kInf : 1.0 / u; }

}  // namespace

YoungReport young_check(int trials, std::uint64_t seed, double tolerance) {
  YoungReport report;
  report.trials = trials;
  report.tolerance = tolerance;
  report.max_slack_young = -kInf;
  report.max_slack_quasi = -kInf;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const int d = static_cast<int>(rng.integer(1, 2));
    auto a = random_sequence(rng, d);
    auto b = random_sequence(rng, d);
    auto ab = discrete_convolve(a, b);

    double u1 = draw_reciprocal(rng, 0.0);
    double u2 = draw_reciprocal(rng, 1.0 - u1);
    double u0 = std::max(0.0, u1 + u2 - 1.0);
    auto p0 = ExponentVector::uniform(d, from_reciprocal(u0));
    auto p1 = ExponentVector::uniform(d, from_reciprocal(u1));
    auto p2 = ExponentVector::uniform(d, from_reciprocal(u2));
    double slack = discrete_mixed_norm(ab, p0) -
                   discrete_mixed_norm(a, p1) * discrete_mixed_norm(b, p2);
    report.max_slack_young = std::max(report.max_slack_young, slack);
    if (slack > tolerance) ++report.violations_young;

    double p = rng.bernoulli(0.5) ? rng.pick(kExponentPool)
                                  : rng.uniform(0.1, 5.0);
    double r = std::min(1.0, p) * (rng.bernoulli(0.3) ? 1.0 : rng.uniform(0.2, 1.0));
    auto pv = ExponentVector::uniform(d, p);
    auto rv = ExponentVector::uniform(d, r);
    slack = discrete_mixed_norm(ab, pv) -
            discrete_mixed_norm(a, pv) * discrete_mixed_norm(b, rv);
    report.max_slack_quasi = std::max(report.max_slack_quasi, slack);
    if (slack > tolerance) ++report.violations_quasi;
  }
  report.pass = report.violations_young == 0 && report.violations_quasi == 0;
  return report;
}

void refine_record(VerificationRecord& rec, double tolerance) {
  const int resolution = 2 * rec.resolution;
  auto fine = build_instance(rec.params, resolution);
  auto est = evaluate_estimate(fine);
  Refinement ref;
  ref.resolution = resolution;
  ref.lhs = est.lhs;
  ref.rhs = est.rhs;
  ref.lhs_change = relative_change(rec.lhs, est.lhs);
  ref.rhs_change = relative_change(rec.rhs, est.rhs);
  const double c = est.moderate_constant * est.midpoint_constant;
  ref.pass = ref.lhs_change < tolerance && ref.rhs_change < tolerance &&
             est.lhs <= c * est.rhs * (1.0 + rec.quad_margin);
  rec.refinement = ref;
}

VerificationRecord run_trial(const SuiteOptions& options, std::size_t index) {
  if (options.dims.empty()) throw InvalidArgument("suite: no dimensions given");
  const std::uint64_t seed = derive_seed(options.seed, index);
  Rng rng(seed);
  const int d = rng.pick(options.dims);
  auto params = draw_instance(rng, d, options.weighted);

  VerificationRecord rec;
  try {
    auto inst = build_instance(params, options.resolution);
    rec = verify_theorem_instance(inst, options.quad_margin);
    rec.params = params;
    rec.resolution = options.resolution;
    if (options.refine && rec.rejection.empty()) {
      refine_record(rec, options.refine_tolerance);
    }
  } catch (const Error& e) {
    rec = VerificationRecord{};
    rec.quad_margin = options.quad_margin;
    rec.rejection = std::string("error: ") + e.what();
  }
  rec.index = index;
  rec.seed = seed;
  rec.params = std::move(params);
  rec.resolution = options.resolution;
  return rec;
}

SuiteResult random_suite(const SuiteOptions& options) {
  if (options.count < 1) throw InvalidArgument("suite: count must be >= 1");
  SuiteResult result;
  auto& s = result.summary;
  s.count = options.count;
  bool refinement_ok = true;
  for (int i = 0; i < options.count; ++i) {
    auto rec = run_trial(options, static_cast<std::size_t>(i));
    if (!rec.rejection.empty()) {
      ++s.rejected;
    } else {
      if (rec.pass) ++s.passed;
      s.max_ratio = std::max(s.max_ratio, rec.ratio);
    }
    if (rec.refinement) {
      s.max_lhs_change = std::max(s.max_lhs_change, rec.refinement->lhs_change);
      s.max_rhs_change = std::max(s.max_rhs_change, rec.refinement->rhs_change);
      refinement_ok = refinement_ok && rec.refinement->pass;
    }
    result.records.push_back(std::move(rec));
  }
  s.pass = s.passed == s.count && refinement_ok;
  return result;
}

}  // namespace mixedconv
