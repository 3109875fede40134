#include "mixedconv/gridfn.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mixedconv/error.hpp"

namespace mixedconv {
namespace {

bool finite(double v) { return std::isfinite(v); }
bool finite(std::complex<double> v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

std::string index_string(std::span<const int> idx) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < idx.size(); ++i) out << (i ? "," : "") << idx[i];
  out << "]";
  return out.str();
}

template <class T, class Fn>
BasicGridFunction<T> sample_impl(const OrderedBasis& basis,
                                 std::vector<AxisSpec> axes, const Fn& fn) {
  if (axes.size() != static_cast<std::size_t>(basis.dim())) {
    throw DimensionError("sample: need one axis per basis vector");
  }
  for (const auto& ax : axes) ax.validate();
  std::vector<int> extents;
  for (const auto& ax : axes) extents.push_back(ax.size());
  Shape shape(extents);
  std::vector<T> values(shape.size());
  std::vector<double> coords(axes.size());
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    auto idx = shape.unravel(flat);
    for (std::size_t k = 0; k < axes.size(); ++k)
      coords[k] = axes[k].midpoint(idx[k]);
    T v = fn(std::span<const double>(coords));
    if (!finite(v)) {
      throw SamplingError("sampled function is not finite at cell " +
                          index_string(idx));
    }
    values[flat] = v;
  }
  return BasicGridFunction<T>(basis, std::move(axes), std::move(values));
}

void write_value(std::ostream& out, double v) { out << v << '\n'; }
void write_value(std::ostream& out, std::complex<double> v) {
  out << v.real() << ',' << v.imag() << '\n';
}

struct GridHeader {
  OrderedBasis basis = OrderedBasis::standard(1);
  std::vector<AxisSpec> axes;
  std::string type;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  return parts;
}

GridHeader read_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# mixedconv grid", 0) != 0) {
    throw InvalidArgument("read_grid: missing '# mixedconv grid' header");
  }
  GridHeader header;
  int dim = 0;
  while (std::getline(in, line)) {
    auto parts = split_csv(line);
    if (parts.empty()) continue;
    const auto& key = parts[0];
    if (key == "dim") {
      dim = std::stoi(parts.at(1));
    } else if (key == "basis") {
      std::vector<double> values;
      for (std::size_t i = 1; i < parts.size(); ++i)
        values.push_back(std::stod(parts[i]));
      header.basis = OrderedBasis::from_row_major(dim, values);
    } else if (key == "axis") {
      if (parts.at(1) == "periodic") {
        header.axes.push_back(AxisSpec::periodic(std::stoi(parts.at(2)),
                                                 std::stoi(parts.at(3))));
      } else if (parts.at(1) == "line") {
        header.axes.push_back(AxisSpec::line(std::stoi(parts.at(2)),
                                             std::stod(parts.at(3)),
                                             std::stod(parts.at(4))));
      } else {
        throw InvalidArgument("read_grid: unknown axis kind " + parts[1]);
      }
    } else if (key == "type") {
      header.type = parts.at(1);
      break;
    } else {
      throw InvalidArgument("read_grid: unexpected header line '" + line + "'");
    }
  }
  if (static_cast<int>(header.axes.size()) != dim || header.type.empty()) {
    throw InvalidArgument("read_grid: incomplete header");
  }
  return header;
}

}  // namespace

AxisSpec AxisSpec::periodic(int cells, int periods) {
  AxisSpec ax;
  ax.kind = AxisKind::Periodic;
  ax.cells = cells;
  ax.lo = 0.0;
  ax.hi = 1.0;
  ax.periods = periods;
  ax.validate();
  return ax;
}

AxisSpec AxisSpec::line(int cells, double lo, double hi) {
  AxisSpec ax;
  ax.kind = AxisKind::Line;
  ax.cells = cells;
  ax.lo = lo;
  ax.hi = hi;
  ax.validate();
  return ax;
}

void AxisSpec::validate() const {
  if (cells <= 0) throw InvalidArgument("axis must have at least one cell");
  if (is_periodic()) {
    if (lo != 0.0 || hi != 1.0) {
      throw InvalidArgument("periodic axes have period [0,1]");
    }
    if (periods <= 0) throw InvalidArgument("periodic axis needs periods >= 1");
  } else if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw InvalidArgument("line axis needs finite hi > lo");
  }
}

std::optional<std::int64_t> AxisSpec::cells_for(double displacement) const {
  double n = displacement / width();
  double r = std::round(n);
  if (std::abs(n - r) > 1e-9 * std::max(1.0, std::abs(n))) return std::nullopt;
  return static_cast<std::int64_t>(r);
}

Shape::Shape(std::vector<int> ext) : extents(std::move(ext)) {
  strides.assign(extents.size(), 1);
  for (int k = static_cast<int>(extents.size()) - 2; k >= 0; --k)
    strides[k] = strides[k + 1] * static_cast<std::size_t>(extents[k + 1]);
}

std::size_t Shape::size() const {
  std::size_t n = 1;
  for (int e : extents) n *= static_cast<std::size_t>(e);
  return n;
}

std::size_t Shape::flat(std::span<const int> idx) const {
  std::size_t f = 0;
  for (std::size_t k = 0; k < extents.size(); ++k)
    f += strides[k] * static_cast<std::size_t>(idx[k]);
  return f;
}

std::vector<int> Shape::unravel(std::size_t flat) const {
  std::vector<int> idx(extents.size());
  for (std::size_t k = 0; k < extents.size(); ++k) {
    idx[k] = static_cast<int>(flat / strides[k]);
    flat %= strides[k];
  }
  return idx;
}

template <class T>
BasicGridFunction<T>::BasicGridFunction(OrderedBasis basis,
                                        std::vector<AxisSpec> axes,
                                        std::vector<T> samples)
    : basis_(std::move(basis)), axes_(std::move(axes)), samples_(std::move(samples)) {
  if (axes_.size() != static_cast<std::size_t>(basis_.dim())) {
    throw DimensionError("grid needs one axis per basis vector");
  }
  std::vector<int> extents;
  for (const auto& ax : axes_) {
    ax.validate();
    extents.push_back(ax.size());
  }
  shape_ = Shape(std::move(extents));
  if (shape_.size() != samples_.size()) {
    throw DimensionError("sample count does not match axis extents");
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!finite(samples_[i])) {
      throw SamplingError("non-finite sample at cell " +
                          index_string(shape_.unravel(i)));
    }
  }
}

template <class T>
std::vector<double> BasicGridFunction<T>::midpoint(
    std::span<const int> idx) const {
  std::vector<double> c(axes_.size());
  for (std::size_t k = 0; k < axes_.size(); ++k)
    c[k] = axes_[k].midpoint(idx[k]);
  return c;
}

template <class T>
double BasicGridFunction<T>::max_abs() const {
  double m = 0.0;
  for (const auto& v : samples_) m = std::max(m, std::abs(v));
  return m;
}

template class BasicGridFunction<double>;
template class BasicGridFunction<std::complex<double>>;

GridFunction sample(const OrderedBasis& basis, std::vector<AxisSpec> axes,
                    const RealCoordinateMap& fn) {
  return sample_impl<double>(basis, std::move(axes), fn);
}

ComplexGridFunction sample_complex(const OrderedBasis& basis,
                                   std::vector<AxisSpec> axes,
                                   const ComplexCoordinateMap& fn) {
  return sample_impl<std::complex<double>>(basis, std::move(axes), fn);
}

namespace {

// Copies f into a grid whose axis `k` is replaced by `out_axis`; output
// index i on that axis reads source index map(i).
template <class Map>
GridFunction remap_axis(const GridFunction& f, int k, AxisSpec out_axis,
                        const Map& map) {
  auto axes = f.axes();
  axes[k] = out_axis;
  std::vector<int> extents;
  for (const auto& ax : axes) extents.push_back(ax.size());
  Shape out_shape(extents);
  std::vector<double> values(out_shape.size());
  for (std::size_t flat = 0; flat < values.size(); ++flat) {
    auto idx = out_shape.unravel(flat);
    idx[k] = map(idx[k]);
    values[flat] = f.at(idx);
  }
  return GridFunction(f.basis(), std::move(axes), std::move(values));
}

}  // namespace

GridFunction shift(const GridFunction& f, int axis, std::int64_t steps) {
  if (axis < 0 || axis >= f.dim()) throw DimensionError("shift: bad axis");
  const auto& ax = f.axis(axis);
  if (ax.is_periodic()) {
    const std::int64_t n = ax.size();
    const std::int64_t offset = ((steps * ax.cells) % n + n) % n;
    return remap_axis(f, axis, ax, [&](int i) {
      return static_cast<int>((i - offset + n) % n);
    });
  }
  auto cells = ax.cells_for(static_cast<double>(steps));
  if (!cells) {
    throw AlignmentError("shift: cell width does not divide the shift");
  }
  const std::int64_t c = *cells;
  if (std::abs(c) >= ax.cells) {
    throw CoverageError("shift: displaced window does not overlap the grid");
  }
  double roi_lo = c >= 0 ? ax.lo + c * ax.width() : ax.lo;
  double roi_hi = c >= 0 ? ax.hi : ax.hi + c * ax.width();
  return shift(f, axis, steps, roi_lo, roi_hi);
}

GridFunction shift(const GridFunction& f, int axis, std::int64_t steps,
                   double roi_lo, double roi_hi) {
  if (axis < 0 || axis >= f.dim()) throw DimensionError("shift: bad axis");
  const auto& ax = f.axis(axis);
  if (ax.is_periodic()) {
    throw InvalidArgument("shift: regions of interest apply to line axes");
  }
  auto c = ax.cells_for(static_cast<double>(steps));
  auto start = ax.cells_for(roi_lo - ax.lo);
  auto stop = ax.cells_for(roi_hi - ax.lo);
  if (!c || !start || !stop || *stop <= *start) {
    throw AlignmentError("shift: region of interest is not aligned with the grid");
  }
  const std::int64_t src_lo = *start - *c;
  const std::int64_t src_hi = *stop - *c;
  if (src_lo < 0 || src_hi > ax.cells) {
    std::ostringstream msg;
    msg << "shift: source range [" << ax.lo + src_lo * ax.width() << ", "
        << ax.lo + src_hi * ax.width() << "] leaves the sampled window ["
        << ax.lo << ", " << ax.hi << "]";
    throw CoverageError(msg.str());
  }
  auto out_axis = AxisSpec::line(static_cast<int>(*stop - *start),
                                 ax.lo + *start * ax.width(),
                                 ax.lo + *stop * ax.width());
  return remap_axis(f, axis, out_axis,
                    [&](int i) { return static_cast<int>(i + src_lo); });
}

template <class T>
BasicGridFunction<T> fundamental_period(const BasicGridFunction<T>& f) {
  bool trivial = true;
  for (const auto& ax : f.axes())
    if (ax.is_periodic() && ax.periods != 1) trivial = false;
  if (trivial) return f;
  auto axes = f.axes();
  for (auto& ax : axes)
    if (ax.is_periodic()) ax.periods = 1;
  std::vector<int> extents;
  for (const auto& ax : axes) extents.push_back(ax.size());
  Shape out(extents);
  std::vector<T> values(out.size());
  for (std::size_t flat = 0; flat < values.size(); ++flat)
    values[flat] = f.at(out.unravel(flat));
  return BasicGridFunction<T>(f.basis(), std::move(axes), std::move(values));
}

template GridFunction fundamental_period(const GridFunction&);
template ComplexGridFunction fundamental_period(const ComplexGridFunction&);

template <class T>
void write_grid(std::ostream& out, const BasicGridFunction<T>& f) {
  auto flags = out.flags();
  auto precision = out.precision();
  out << std::setprecision(17);
  out << "# mixedconv grid v1\n";
  out << "dim," << f.dim() << '\n';
  out << "basis";
  const auto& m = f.basis().matrix();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out << ',' << m(i, j);
  out << '\n';
  for (const auto& ax : f.axes()) {
    if (ax.is_periodic()) {
      out << "axis,periodic," << ax.cells << ',' << ax.periods << '\n';
    } else {
      out << "axis,line," << ax.cells << ',' << ax.lo << ',' << ax.hi << '\n';
    }
  }
  out << "type," << (std::is_same_v<T, double> ? "real" : "complex") << '\n';
  for (const auto& v : f.samples()) write_value(out, v);
  out.flags(flags);
  out.precision(precision);
}

template void write_grid(std::ostream&, const GridFunction&);
template void write_grid(std::ostream&, const ComplexGridFunction&);

GridFunction read_grid(std::istream& in) {
  auto header = read_header(in);
  if (header.type != "real") throw InvalidArgument("read_grid: not a real grid");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) values.push_back(std::stod(line));
  }
  return GridFunction(header.basis, header.axes, std::move(values));
}

ComplexGridFunction read_complex_grid(std::istream& in) {
  auto header = read_header(in);
  if (header.type != "complex") {
    throw InvalidArgument("read_complex_grid: not a complex grid");
  }
  std::vector<std::complex<double>> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto parts = split_csv(line);
    values.emplace_back(std::stod(parts.at(0)), std::stod(parts.at(1)));
  }
  return ComplexGridFunction(header.basis, header.axes, std::move(values));
}

}  // namespace mixedconv
