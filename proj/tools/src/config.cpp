#include "mixedconv_tools/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "mixedconv/error.hpp"

namespace mixedconv::tools {
namespace {

enum class Type {
  Int,
  PosInt,
  UInt,
  Number,
  PosNumber,
  NonNegNumber,
  Bool,
  String,
  PosIntList,
  NumberList,
  NumberMatrix,
  BoolList,
  Exponents,
  TrigList,
};

struct Field {
  const char* key;
  Type type;
};

const std::map<std::string, std::vector<Field>>& schema() {
  static const std::map<std::string, std::vector<Field>> table{
      {"basis", {{"dim", Type::PosInt}, {"matrix", Type::NumberList}}},
      {"axes",
       {{"periodic", Type::BoolList},
        {"half_width", Type::PosNumber},
        {"periods", Type::PosInt},
        {"resolution", Type::PosInt}}},
      {"weights",
       {{"omega", Type::String}, {"v", Type::String}, {"omega_line_only", Type::Bool}}},
      {"exponents", {{"p", Type::Exponents}, {"r", Type::Exponents}}},
      {"generator",
       {{"kind", Type::String},
        {"alpha", Type::NumberList},
        {"center", Type::NumberList},
        {"shear", Type::NumberMatrix},
        {"trig", Type::TrigList},
        {"offset", Type::PosNumber}}},
      {"harness",
       {{"seed", Type::UInt},
        {"count", Type::PosInt},
        {"dims", Type::PosIntList},
        {"weighted", Type::Bool},
        {"margin", Type::NonNegNumber},
        {"resolution", Type::PosInt},
        {"refine", Type::Bool},
        {"N", Type::PosIntList},
        {"trials", Type::PosInt},
        {"out", Type::String},
        {"plots", Type::Bool}}},
      {"stft",
       {{"points", Type::PosInt},
        {"refine_points", Type::PosInt},
        {"rho", Type::PosNumber},
        {"tol", Type::PosNumber}}},
      {"window_change",
       {{"half_width", Type::PosNumber},
        {"cells", Type::PosInt},
        {"x_step_cells", Type::PosInt},
        {"xi_step", Type::PosNumber},
        {"radius", Type::PosInt},
        {"max_change", Type::PosNumber},
        {"f_center", Type::Number},
        {"f_frequency", Type::Number}}},
  };
  return table;
}

// Line of the first occurrence of "key" in the raw text (0 if absent).
int locate(const std::string& text, const std::string& key) {
  auto at = text.find('"' + key + '"');
  if (at == std::string::npos) return 0;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + at, '\n'));
}

[[noreturn]] void fail(const std::string& text, const std::string& field,
                       const std::string& key, const std::string& what) {
  std::ostringstream where;
  int line = locate(text, key);
  if (line > 0) where << "line " << line << ", ";
  where << "field " << field;
  throw ConfigError(where.str(), what);
}

bool is_int(const json& v) { return v.is_number_integer(); }

bool is_exponent_entry(const json& v) {
  return (v.is_number() && v.get<double>() > 0.0) ||
         (v.is_string() && v.get<std::string>() == "inf");
}

std::string describe(Type t) {
  switch (t) {
    case Type::Int: return "an integer";
    case Type::PosInt: return "a positive integer";
    case Type::UInt: return "a nonnegative integer";
    case Type::Number: return "a number";
    case Type::PosNumber: return "a positive number";
    case Type::NonNegNumber: return "a nonnegative number";
    case Type::Bool: return "true or false";
    case Type::String: return "a string";
    case Type::PosIntList: return "a nonempty list of positive integers";
    case Type::NumberList: return "a list of numbers";
    case Type::NumberMatrix: return "a list of lists of numbers";
    case Type::BoolList: return "a list of booleans";
    case Type::Exponents: return "a comma list such as \"2,inf\" or a list of positive numbers and \"inf\"";
    case Type::TrigList: return "a list of {freq, amplitude, phase} objects";
  }
  return "a value";
}

bool matches(const json& v, Type t) {
  switch (t) {
    case Type::Int: return is_int(v);
    case Type::PosInt: return is_int(v) && v.get<std::int64_t>() > 0;
    case Type::UInt: return v.is_number_unsigned() || (is_int(v) && v.get<std::int64_t>() >= 0);
    case Type::Number: return v.is_number();
    case Type::PosNumber: return v.is_number() && v.get<double>() > 0.0;
    case Type::NonNegNumber: return v.is_number() && v.get<double>() >= 0.0;
    case Type::Bool: return v.is_boolean();
    case Type::String: return v.is_string();
    case Type::PosIntList:
      if (!v.is_array() || v.empty()) return false;
      for (const auto& e : v)
        if (!matches(e, Type::PosInt)) return false;
      return true;
    case Type::NumberList:
      if (!v.is_array()) return false;
      for (const auto& e : v)
        if (!e.is_number()) return false;
      return true;
    case Type::NumberMatrix:
      if (!v.is_array()) return false;
      for (const auto& row : v)
        if (!matches(row, Type::NumberList)) return false;
      return true;
    case Type::BoolList:
      if (!v.is_array()) return false;
      for (const auto& e : v)
        if (!e.is_boolean()) return false;
      return true;
    case Type::Exponents:
      if (v.is_string()) return true;  // parsed on use
      if (!v.is_array() || v.empty()) return false;
      for (const auto& e : v)
        if (!is_exponent_entry(e)) return false;
      return true;
    case Type::TrigList:
      if (!v.is_array()) return false;
      for (const auto& e : v) {
        if (!e.is_object()) return false;
        for (const auto& [k, x] : e.items()) {
          if (k == "freq") {
            if (!x.is_array()) return false;
            for (const auto& f : x)
              if (!is_int(f)) return false;
          } else if (k == "amplitude" || k == "phase") {
            if (!x.is_number()) return false;
          } else {
            return false;
          }
        }
        if (!e.contains("freq")) return false;
      }
      return true;
  }
  return false;
}

void validate(const Config& cfg) {
  if (!cfg.root.is_object()) {
    throw ConfigError("line 1", "the config must be a JSON object");
  }
  for (const auto& [name, value] : cfg.root.items()) {
    if (name == "sequence") {
      if (!value.is_array()) fail(cfg.text, "sequence", name, "expected a list");
      for (std::size_t i = 0; i < value.size(); ++i) {
        const auto& e = value[i];
        std::string field = "sequence[" + std::to_string(i) + "]";
        if (!e.is_object() || !e.contains("index") || !e.contains("value")) {
          fail(cfg.text, field, "index", "expected {\"index\": [...], \"value\": x}");
        }
        for (const auto& [k, x] : e.items()) {
          if (k == "index") {
            if (!x.is_array()) fail(cfg.text, field + ".index", "index", "expected a list of integers");
            for (const auto& c : x)
              if (!is_int(c)) fail(cfg.text, field + ".index", "index", "expected a list of integers");
          } else if (k == "value") {
            if (!x.is_number()) fail(cfg.text, field + ".value", "value", "expected a number");
          } else {
            fail(cfg.text, field + "." + k, k, "unknown field");
          }
        }
      }
      continue;
    }
    auto it = schema().find(name);
    if (it == schema().end()) fail(cfg.text, name, name, "unknown section");
    if (!value.is_object()) fail(cfg.text, name, name, "expected an object");
    for (const auto& [key, item] : value.items()) {
      const Field* spec = nullptr;
      for (const auto& f : it->second)
        if (key == f.key) spec = &f;
      std::string field = name + "." + key;
      if (!spec) fail(cfg.text, field, key, "unknown field");
      if (!matches(item, spec->type)) {
        fail(cfg.text, field, key, "expected " + describe(spec->type));
      }
    }
  }
}

template <class T>
T get_or(const json& section, const char* key, T fallback) {
  return section.contains(key) ? section.at(key).get<T>() : fallback;
}

}  // namespace

const json& Config::section(const std::string& name) const {
  static const json empty = json::object();
  auto it = root.find(name);
  return it == root.end() ? empty : *it;
}

Config parse_config(const std::string& text, const std::string& path) {
  Config cfg;
  cfg.path = path;
  cfg.text = text;
  try {
    cfg.root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    auto begin = text.begin();
    int line = 1 + static_cast<int>(std::count(begin, begin + static_cast<std::ptrdiff_t>(byte ? byte - 1 : 0), '\n'));
    throw ConfigError("line " + std::to_string(line), std::string("malformed JSON: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

RunSettings settings_from_config(const Config& config) {
  RunSettings s;
  const auto& h = config.section("harness");
  s.seed = get_or<std::uint64_t>(h, "seed", s.seed);
  s.count = get_or<int>(h, "count", s.count);
  s.dims = get_or<std::vector<int>>(h, "dims", s.dims);
  s.weighted = get_or<bool>(h, "weighted", s.weighted);
  s.margin = get_or<double>(h, "margin", s.margin);
  s.resolution = get_or<int>(h, "resolution", s.resolution);
  s.refine = get_or<bool>(h, "refine", s.refine);
  s.N = get_or<std::vector<int>>(h, "N", s.N);
  s.trials = get_or<int>(h, "trials", s.trials);
  s.out = get_or<std::string>(h, "out", s.out);
  s.plots = get_or<bool>(h, "plots", s.plots);
  // Keep the axes section as the single source for the grid if it names one.
  const auto& axes = config.section("axes");
  if (axes.contains("resolution") && !h.contains("resolution")) {
    s.resolution = axes.at("resolution").get<int>();
  }
  return s;
}

ExponentVector exponents_from_json(const json& value, const std::string& field) {
  try {
    if (value.is_string()) return ExponentVector::parse(value.get<std::string>());
    std::vector<double> entries;
    for (const auto& e : value)
      entries.push_back(e.is_string() ? kInf : e.get<double>());
    return ExponentVector(std::move(entries));
  } catch (const Error& e) {
    throw ConfigError("field " + field, e.what());
  }
}

InstanceParams instance_from_config(const Config& config) {
  auto missing = [&](const std::string& field) {
    std::ostringstream where;
    where << "field " << field;
    return ConfigError(where.str(), "required for this command");
  };
  auto mismatch = [&](const std::string& field, const std::string& key,
                      const std::string& what) {
    int line = locate(config.text, key);
    std::string where = (line ? "line " + std::to_string(line) + ", " : std::string()) +
                        "field " + field;
    return ConfigError(where, what);
  };

  InstanceParams params;
  const auto& axes = config.section("axes");
  if (!axes.contains("periodic")) throw missing("axes.periodic");
  params.periodic = axes.at("periodic").get<std::vector<bool>>();
  params.dim = static_cast<int>(params.periodic.size());
  if (params.dim < 1) throw mismatch("axes.periodic", "periodic", "needs at least one axis");
  params.half_width = get_or<double>(axes, "half_width", params.half_width);
  params.periods = get_or<int>(axes, "periods", params.periods);
  const int d = params.dim;

  const auto& basis = config.section("basis");
  if (basis.contains("dim") && basis.at("dim").get<int>() != d) {
    throw mismatch("basis.dim", "dim", "does not match the number of axes");
  }
  if (basis.contains("matrix")) {
    params.basis = basis.at("matrix").get<std::vector<double>>();
    if (params.basis.size() != static_cast<std::size_t>(d * d)) {
      throw mismatch("basis.matrix", "matrix", "needs dim*dim entries (row-major)");
    }
  }

  const auto& weights = config.section("weights");
  params.omega = get_or<std::string>(weights, "omega", params.omega);
  params.v = get_or<std::string>(weights, "v", params.v);
  params.omega_line_only = get_or<bool>(weights, "omega_line_only", params.omega_line_only);
  for (const char* key : {"omega", "v"}) {
    try {
      Weight::parse(key[0] == 'o' ? params.omega : params.v);
    } catch (const Error& e) {
      throw mismatch(std::string("weights.") + key, key, e.what());
    }
  }

  const auto& ex = config.section("exponents");
  if (!ex.contains("p")) throw missing("exponents.p");
  if (!ex.contains("r")) throw missing("exponents.r");
  params.p = exponents_from_json(ex.at("p"), "exponents.p");
  params.r = exponents_from_json(ex.at("r"), "exponents.r");
  if (params.p.size() != d) throw mismatch("exponents.p", "p", "needs one entry per axis");
  if (params.r.size() != d) throw mismatch("exponents.r", "r", "needs one entry per axis");

  const auto& gen = config.section("generator");
  bool any_line = false;
  for (bool p : params.periodic) any_line = any_line || !p;
  std::string kind = get_or<std::string>(
      gen, "kind", any_line ? "gaussian_line" : "periodic_trig");
  try {
    params.generator = parse_generator_kind(kind);
  } catch (const Error& e) {
    throw mismatch("generator.kind", "kind", e.what());
  }
  params.alpha = get_or<std::vector<double>>(gen, "alpha", std::vector<double>(d, 1.0));
  params.center = get_or<std::vector<double>>(gen, "center", std::vector<double>(d, 0.0));
  if (params.alpha.size() != static_cast<std::size_t>(d)) {
    throw mismatch("generator.alpha", "alpha", "needs one entry per axis");
  }
  if (params.center.size() != static_cast<std::size_t>(d)) {
    throw mismatch("generator.center", "center", "needs one entry per axis");
  }
  params.shear = get_or<std::vector<std::vector<double>>>(
      gen, "shear", std::vector<std::vector<double>>(d, std::vector<double>(d, 0.0)));
  if (params.shear.size() != static_cast<std::size_t>(d)) {
    throw mismatch("generator.shear", "shear", "must be a dim x dim matrix");
  }
  for (const auto& row : params.shear) {
    if (row.size() != static_cast<std::size_t>(d)) {
      throw mismatch("generator.shear", "shear", "must be a dim x dim matrix");
    }
  }
  double amp = 0.0;
  if (gen.contains("trig")) {
    for (const auto& t : gen.at("trig")) {
      TrigTerm term;
      term.freq = t.at("freq").get<std::vector<int>>();
      if (term.freq.size() != static_cast<std::size_t>(d)) {
        throw mismatch("generator.trig.freq", "freq", "needs one entry per axis");
      }
      term.amplitude = get_or<double>(t, "amplitude", 0.0);
      term.phase = get_or<double>(t, "phase", 0.0);
      amp += std::abs(term.amplitude);
      params.trig.push_back(std::move(term));
    }
  }
  params.offset = get_or<double>(gen, "offset", amp + 1.0);

  if (!config.has("sequence")) throw missing("sequence");
  for (const auto& e : config.section("sequence")) {
    auto index = e.at("index").get<std::vector<std::int64_t>>();
    if (index.size() != static_cast<std::size_t>(d)) {
      throw mismatch("sequence.index", "index", "needs one entry per axis");
    }
    params.a.emplace_back(LatticeIndex(index.begin(), index.end()),
                          e.at("value").get<double>());
  }
  return params;
}

}  // namespace mixedconv::tools
