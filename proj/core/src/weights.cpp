#include "mixedconv/weights.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mixedconv/error.hpp"

namespace mixedconv {
namespace {

std::string format_param(const char* prefix, double value) {
  std::ostringstream out;
  out << prefix << value;
  return out.str();
}

std::string describe(const Vector& x) {
  std::ostringstream out;
  out << "(";
  for (int i = 0; i < x.size(); ++i) out << (i ? "," : "") << x[i];
  out << ")";
  return out.str();
}

double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("cannot parse " + what + " from '" + text + "'");
  }
  return value;
}

}  // namespace

Weight::Weight() : Weight(WeightFamily::Constant, 0.0, "constant", nullptr) {}

Weight::Weight(WeightFamily family, double param, std::string name, Map fn)
    : family_(family),
      param_(param),
      name_(std::move(name)),
      fn_(fn ? std::make_shared<const Map>(std::move(fn)) : nullptr) {}

Weight Weight::constant() { return Weight(); }

Weight Weight::exponential(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw InvalidArgument("exponential weight needs finite r >= 0");
  }
  return Weight(WeightFamily::Exponential, r, format_param("exp:", r),
                [r](const Vector& x) { return std::exp(r * x.norm()); });
}

Weight Weight::polynomial(double s) {
  if (!std::isfinite(s)) {
    throw InvalidArgument("polynomial weight needs a finite exponent");
  }
  return Weight(WeightFamily::Polynomial, s, format_param("poly:", s),
                [s](const Vector& x) { return std::pow(1.0 + x.norm(), s); });
}

Weight Weight::user(Map fn, std::string name) {
  if (!fn) throw InvalidArgument("user weight needs a callable");
  return Weight(WeightFamily::User, 0.0, std::move(name), std::move(fn));
}

Weight Weight::parse(const std::string& text) {
  if (text == "constant" || text == "1") return constant();
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    std::string head = text.substr(0, colon);
    std::string tail = text.substr(colon + 1);
    if (head == "exp") return exponential(parse_double(tail, "exp rate"));
    if (head == "poly") return polynomial(parse_double(tail, "poly exponent"));
  }
  throw InvalidArgument("unknown weight '" + text +
                        "' (expected constant | exp:r | poly:s)");
}

double Weight::operator()(const Vector& x) const {
  if (!fn_) return 1.0;
  double value = (*fn_)(x);
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw PositivityError("weight " + name_ + " is not positive and finite at " +
                          describe(x));
  }
  return value;
}

Weight make_weight(WeightFamily family, double param) {
  switch (family) {
    case WeightFamily::Constant:
      return Weight::constant();
    case WeightFamily::Exponential:
      return Weight::exponential(param);
    case WeightFamily::Polynomial:
      return Weight::polynomial(param);
    case WeightFamily::User:
      break;
  }
  throw InvalidArgument("make_weight: user weights need Weight::user");
}

Weight restrict_to_axes(const Weight& base, const OrderedBasis& basis,
                        std::vector<bool> keep) {
  if (keep.size() != static_cast<std::size_t>(basis.dim())) {
    throw DimensionError("restrict_to_axes: mask has wrong length");
  }
  if (base.is_constant()) return base;
  std::string name = base.name() + "|line";
  return Weight::user(
      [base, basis, keep = std::move(keep)](const Vector& x) {
        Vector c = basis.to_coordinates(x);
        for (int k = 0; k < c.size(); ++k)
          if (!keep[k]) c[k] = 0.0;
        return base(basis.to_physical(c));
      },
      std::move(name));
}

Box Box::cube(int dim, double half_width) {
  return Box{std::vector<double>(dim, -half_width),
             std::vector<double>(dim, half_width)};
}

std::vector<Vector> sample_box(const Box& box, int per_axis) {
  const int d = box.dim();
  if (d == 0 || box.hi.size() != box.lo.size()) {
    throw DimensionError("sample_box: malformed box");
  }
  if (per_axis < 1) throw InvalidArgument("sample_box: per_axis < 1");
  for (int k = 0; k < d; ++k) {
    if (!(box.hi[k] >= box.lo[k])) {
      throw InvalidArgument("sample_box: empty region");
    }
  }
  std::vector<Vector> points;
  std::vector<int> idx(d, 0);
  while (true) {
    Vector x(d);
    for (int k = 0; k < d; ++k) {
      x[k] = per_axis == 1
                 ? 0.5 * (box.lo[k] + box.hi[k])
                 : box.lo[k] + (box.hi[k] - box.lo[k]) * idx[k] /
                                   static_cast<double>(per_axis - 1);
    }
    points.push_back(std::move(x));
    int k = d - 1;
    while (k >= 0 && idx[k] == per_axis - 1) idx[k--] = 0;
    if (k < 0) break;
    ++idx[k];
  }
  return points;
}

namespace {

void consider(ModerationCertificate& cert, const Weight& omega,
              const Weight& v, const Vector& x, const Vector& y) {
  double ratio = omega(x + y) / (omega(x) * v(y));
  if (!std::isfinite(ratio)) {
    throw NumericError("moderateness ratio is not finite at x=" + describe(x) +
                       ", y=" + describe(y));
  }
  if (cert.pairs == 0 || ratio > cert.constant) {
    cert.constant = ratio;
    cert.worst_x = x;
    cert.worst_y = y;
  }
  ++cert.pairs;
}

}  // namespace

ModerationCertificate certify_moderate(const Weight& omega, const Weight& v,
                                       std::span<const Vector> points,
                                       std::span<const Vector> shifts) {
  if (points.empty() || shifts.empty()) {
    throw InvalidArgument("certify_moderate: empty region or shift set");
  }
  ModerationCertificate cert;
  for (const auto& x : points)
    for (const auto& y : shifts) consider(cert, omega, v, x, y);
  return cert;
}

ModerationCertificate certify_moderate_pairs(
    const Weight& omega, const Weight& v,
    std::span<const std::pair<Vector, Vector>> pairs) {
  if (pairs.empty()) {
    throw InvalidArgument("certify_moderate_pairs: no pairs");
  }
  ModerationCertificate cert;
  for (const auto& [x, y] : pairs) consider(cert, omega, v, x, y);
  return cert;
}

double moderate_constant(const Weight& omega, const Weight& v,
                         const Box& region, std::span<const Vector> shifts,
                         int per_axis) {
  auto points = sample_box(region, per_axis);
  return certify_moderate(omega, v, points, shifts).constant;
}

SubmultiplicativeCheck check_submultiplicative(const Weight& v,
                                               const Box& region,
                                               std::span<const Vector> shifts,
                                               double tol, int per_axis) {
  SubmultiplicativeCheck out;
  auto points = sample_box(region, per_axis);

  // Evenness: worst relative gap (v(x) - v(-x)) / v(-x); ties go to the
  // point closest to the origin.
  double worst = 0.0;
  for (const auto& x : points) {
    double a = v(x);
    double b = v(-x);
    double gap = (a - b) / b;
    bool better = gap > worst ||
                  (gap == worst && gap > 0.0 && x.norm() < out.witness_x.norm());
    if (better) {
      worst = gap;
      out.witness_x = x;
    }
  }
  if (worst > 1e-10) {
    out.ok = false;
    out.failure = "even";
    out.witness_y = -out.witness_x;
    return out;
  }
  out.witness_x = Vector();

  auto cert = certify_moderate(v, v, points, shifts);
  out.constant = cert.constant;
  if (cert.constant > 1.0 + tol) {
    out.ok = false;
    out.failure = "moderate";
    out.witness_x = cert.worst_x;
    out.witness_y = cert.worst_y;
  }
  return out;
}

CompatibilityCheck check_E0_compatibility(const Weight& omega,
                                          const OrderedBasis& basis,
                                          const std::vector<bool>& periodic,
                                          const Box& coordinate_region,
                                          double tol, int per_axis) {
  const int d = basis.dim();
  if (periodic.size() != static_cast<std::size_t>(d) ||
      coordinate_region.dim() != d) {
    throw DimensionError("check_E0_compatibility: dimension mismatch");
  }
  CompatibilityCheck out;
  for (const auto& c : sample_box(coordinate_region, per_axis)) {
    Vector c0 = c;
    for (int k = 0; k < d; ++k)
      if (periodic[k]) c0[k] = 0.0;
    double full = omega(basis.to_physical(c));
    double reduced = omega(basis.to_physical(c0));
    double residual = std::abs(full - reduced) / std::max(full, reduced);
    if (residual > out.worst_residual) {
      out.worst_residual = residual;
      out.witness = c;
    }
  }
  out.ok = out.worst_residual <= tol;
  return out;
}

}  // namespace mixedconv
