#pragma once

// Bridges library instances to the brute-force trace oracle: reads the
// closed-form description from InstanceParams and recomputes stage values
// at random points.

#include <string>

#include "mixedconv/harness.hpp"
#include "oracle.hpp"

namespace oracle {

inline Generator closed_form(const mixedconv::InstanceParams& params) {
  Generator g;
  g.periodic = params.periodic;
  g.alpha = params.alpha;
  g.center = params.center;
  g.alpha.resize(params.dim, 1.0);
  g.center.resize(params.dim, 0.0);
  g.shear = params.shear;
  if (g.shear.empty()) g.shear.assign(params.dim, std::vector<double>(params.dim, 0.0));
  for (const auto& t : params.trig) g.trig.push_back({t.freq, t.amplitude, t.phase});
  g.offset = params.offset;
  return g;
}

inline Axis plain(const mixedconv::AxisSpec& ax) {
  return Axis{ax.is_periodic(), ax.cells, ax.lo, ax.is_periodic() ? ax.lo + 1.0 : ax.hi};
}

inline TraceProblem trace_problem(const mixedconv::InstanceParams& params,
                                  const mixedconv::TheoremInstance& inst,
                                  const mixedconv::TraceReport& report) {
  TraceProblem P;
  P.f = closed_form(params);
  for (const auto& [j, v] : params.a) P.a[j] = v;
  for (const auto& ax : inst.f.axes()) P.window.push_back(plain(ax));
  for (const auto& ax : report.region) P.region.push_back(plain(ax));
  P.p.assign(inst.p.entries().begin(), inst.p.entries().end());
  double run = 1.0;
  for (double e : P.p) {
    run = std::min(run, e);
    P.p0.push_back(run);
  }
  P.shear = P.f.shear;
  return P;
}

struct TraceComparison {
  int points = 0;
  double worst_relative = 0.0;
  std::string where;
};

/// Compares `points` random cells of every stage against trace_point.
template <class Rng>
TraceComparison compare_trace(const TraceProblem& P, const mixedconv::TraceReport& report,
                              Rng& rng, int points) {
  TraceComparison out;
  for (const auto& stage : report.stages) {
    const int k = stage.k;
    const std::size_t cells = stage.g.size();
    for (int t = 0; t < points; ++t) {
      std::size_t flat = static_cast<std::size_t>(
          rng.integer(0, static_cast<std::int64_t>(cells) - 1));
      auto idx = stage.shape.unravel(flat);
      std::vector<double> z;
      for (std::size_t i = 0; i < idx.size(); ++i) z.push_back(P.region[k + i].midpoint(idx[i]));
      auto [g, rhs] = trace_point(P, k, z);
      auto rel = [](double a, double b) {
        double scale = std::max(std::abs(a), std::abs(b));
        return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
      };
      double worst = std::max(rel(stage.g[flat], g), rel(stage.rhs[flat], rhs));
      ++out.points;
      if (worst > out.worst_relative) {
        out.worst_relative = worst;
        out.where = "stage " + std::to_string(k) + " cell " + std::to_string(flat);
      }
    }
  }
  return out;
}

}  // namespace oracle
