#include "contmech/config.hpp"

#include "contmech/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace contmech::config {

using nlohmann::json;

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"rest", "translation", "scaling",
                                              "gaussian_bump", "compressive_ramp"};
  return names;
}

const std::vector<std::string>& force_kinds() {
  static const std::vector<std::string> kinds{"zero", "constant_density", "spatial_bump",
                                              "tabulated"};
  return kinds;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"christoffel_symmetry", "metric_compat",
                                              "first_variation",      "motion_residual",
                                              "energy_conservation",  "flux_balance"};
  return names;
}

const std::vector<std::string>& output_formats() {
  static const std::vector<std::string> formats{"trajectory", "diagnostics", "snapshots",
                                                "fields"};
  return formats;
}

std::string to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "leapfrog"; }

std::string to_string(SupportMode m) { return m == SupportMode::compact ? "compact" : "free"; }

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string listing(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// A JSON object whose keys must all come from `allowed`.
class Object {
public:
  Object(const json& j, std::string path, const std::vector<std::string>& allowed)
      : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_, "must be an object");
    for (const auto& item : j.items())
      if (!contains(allowed, item.key()))
        throw ConfigError(join(path_, item.key()), "unknown key");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  const json& at(const std::string& key) const { return j_.at(key); }
  std::string path(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key, double def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(path(key), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path(key), "must be finite");
    return d;
  }

  long long integer(const std::string& key, long long def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ConfigError(path(key), "must be an integer");
    return v.get<long long>();
  }

  std::string string(const std::string& key, const std::string& def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(path(key), "must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key) const {
    return number_array(j_.at(key), path(key));
  }

  static std::vector<double> number_array(const json& v, const std::string& path) {
    if (!v.is_array()) throw ConfigError(path, "must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>()))
        throw ConfigError(path + "[" + std::to_string(i) + "]", "must be a finite number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<std::string> strings(const std::string& key,
                                   const std::vector<std::string>& def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(path(key), "must be an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string())
        throw ConfigError(path(key) + "[" + std::to_string(i) + "]", "must be a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }

private:
  const json& j_;
  std::string path_;
};

GridSpec parse_grid(const json& j) {
  const Object o(j, "grid", {"x_min", "x_max", "n_nodes", "eps_emb", "band_width"});
  GridSpec g;
  g.x_min = o.number("x_min", g.x_min);
  g.x_max = o.number("x_max", g.x_max);
  g.n_nodes = o.integer("n_nodes", g.n_nodes);
  g.eps_emb = o.number("eps_emb", g.eps_emb);
  g.band_width = o.integer("band_width", g.band_width);
  if (g.n_nodes < 3) throw ConfigError("grid.n_nodes", "must be at least 3");
  if (!(g.x_max > g.x_min)) throw ConfigError("grid.x_max", "must be greater than x_min");
  if (!(g.eps_emb > 0.0)) throw ConfigError("grid.eps_emb", "must be positive");
  if (g.band_width < 1) throw ConfigError("grid.band_width", "must be at least 1");
  if (2 * g.band_width >= g.n_nodes)
    throw ConfigError("grid.band_width", "band covers the whole grid");
  return g;
}

TimeSpec parse_time(const json& j) {
  const Object o(j, "time", {"t_end", "dt", "scheme"});
  TimeSpec t;
  t.t_end = o.number("t_end", t.t_end);
  t.dt = o.number("dt", t.dt);
  const std::string scheme = o.string("scheme", "rk4");
  if (scheme == "rk4")
    t.scheme = Scheme::rk4;
  else if (scheme == "leapfrog")
    t.scheme = Scheme::leapfrog;
  else
    throw ConfigError("time.scheme", "unknown scheme '" + scheme + "' (rk4, leapfrog)");
  if (!(t.t_end > 0.0)) throw ConfigError("time.t_end", "must be positive");
  if (!(t.dt > 0.0)) throw ConfigError("time.dt", "must be positive");
  const double steps = t.t_end / t.dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
    throw ConfigError("time.dt", "must divide t_end into a whole number of steps");
  return t;
}

// Resolve a parameter object against named defaults.
json resolve_params(const json* given, const std::string& path,
                    const std::vector<std::pair<std::string, double>>& defaults) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : defaults) keys.push_back(k);
  const json empty = json::object();
  const Object o(given ? *given : empty, path, keys);
  json out = json::object();
  for (const auto& [k, v] : defaults) out[k] = o.number(k, v);
  return out;
}

json preset_params(const std::string& preset, const json* given, const GridSpec& g) {
  const std::string path = "initial.params";
  const double mid = 0.5 * (g.x_min + g.x_max);
  const double len = g.x_max - g.x_min;
  if (preset == "rest") return resolve_params(given, path, {});
  if (preset == "translation") return resolve_params(given, path, {{"speed", 0.5}});
  if (preset == "scaling") return resolve_params(given, path, {{"rate", 1.0 / 3.0}});
  if (preset == "gaussian_bump") {
    json p = resolve_params(given, path,
                            {{"amplitude", 0.005}, {"center", mid}, {"width", 0.1 * len}});
    if (!(p["width"].get<double>() > 0.0))
      throw ConfigError(path + ".width", "must be positive");
    return p;
  }
  return resolve_params(given, path, {{"k", 2.0}});
}

InitialSpec parse_initial(const json& j, const GridSpec& g) {
  const Object o(j, "initial", {"preset", "params", "phi", "v"});
  InitialSpec s;
  const bool arrays = o.has("phi") || o.has("v");
  if (arrays) {
    if (o.has("preset") || o.has("params"))
      throw ConfigError("initial", "give either preset/params or phi/v arrays, not both");
    if (!o.has("phi")) throw ConfigError("initial.phi", "required when v is given");
    if (!o.has("v")) throw ConfigError("initial.v", "required when phi is given");
    s.preset = "tabulated";
    s.phi = o.numbers("phi");
    s.v = o.numbers("v");
    for (const char* key : {"phi", "v"}) {
      const auto& arr = std::string(key) == "phi" ? s.phi : s.v;
      if (static_cast<long long>(arr.size()) != g.n_nodes)
        throw ConfigError(o.path(key), "length " + std::to_string(arr.size()) +
                                           " does not match grid.n_nodes");
    }
    return s;
  }
  s.preset = o.string("preset", s.preset);
  if (!contains(preset_names(), s.preset))
    throw ConfigError("initial.preset",
                      "unknown preset '" + s.preset + "' (" + listing(preset_names()) + ")");
  s.params = preset_params(s.preset, o.has("params") ? &o.at("params") : nullptr, g);
  return s;
}

ForceSpec parse_force(const json& j, const GridSpec& g) {
  const Object o(j, "force", {"kind", "params", "force_coefficient", "table"});
  ForceSpec f;
  f.kind = o.string("kind", f.kind);
  f.force_coefficient = o.number("force_coefficient", f.force_coefficient);
  if (!contains(force_kinds(), f.kind))
    throw ConfigError("force.kind",
                      "unknown force kind '" + f.kind + "' (" + listing(force_kinds()) + ")");
  const json* given = o.has("params") ? &o.at("params") : nullptr;
  const std::string path = "force.params";
  const double mid = 0.5 * (g.x_min + g.x_max);
  const double len = g.x_max - g.x_min;
  if (f.kind == "tabulated") {
    if (given) throw ConfigError(path, "tabulated forces take a table, not params");
    if (!o.has("table")) throw ConfigError("force.table", "required for kind tabulated");
    const Object t(o.at("table"), "force.table", {"times", "fields"});
    if (!t.has("times")) throw ConfigError("force.table.times", "required");
    if (!t.has("fields")) throw ConfigError("force.table.fields", "required");
    f.times = t.numbers("times");
    const json& fields = t.at("fields");
    if (!fields.is_array()) throw ConfigError("force.table.fields", "must be an array");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string p = "force.table.fields[" + std::to_string(i) + "]";
      auto row = Object::number_array(fields[i], p);
      if (static_cast<long long>(row.size()) != g.n_nodes)
        throw ConfigError(p, "length does not match grid.n_nodes");
      f.fields.push_back(std::move(row));
    }
    if (f.times.empty()) throw ConfigError("force.table.times", "must not be empty");
    if (f.times.size() != f.fields.size())
      throw ConfigError("force.table.fields", "need one field per time");
    for (std::size_t i = 1; i < f.times.size(); ++i)
      if (!(f.times[i] > f.times[i - 1]))
        throw ConfigError("force.table.times", "must be strictly increasing");
    return f;
  }
  if (o.has("table")) throw ConfigError("force.table", "only valid for kind tabulated");
  if (f.kind == "zero") {
    f.params = resolve_params(given, path, {});
  } else if (f.kind == "constant_density") {
    f.params = resolve_params(given, path, {{"value", 1.0}});
  } else {
    f.params = resolve_params(given, path,
                              {{"amplitude", 0.1}, {"center", mid}, {"width", 0.1 * len}});
    if (!(f.params["width"].get<double>() > 0.0))
      throw ConfigError(path + ".width", "must be positive");
  }
  return f;
}

OutputSpec parse_outputs(const json& j) {
  const Object o(j, "outputs", {"directory", "snapshot_every", "formats"});
  OutputSpec s;
  s.directory = o.string("directory", s.directory);
  s.snapshot_every = o.integer("snapshot_every", s.snapshot_every);
  s.formats = o.strings("formats", s.formats);
  if (s.directory.empty()) throw ConfigError("outputs.directory", "must not be empty");
  if (s.snapshot_every < 0) throw ConfigError("outputs.snapshot_every", "must be >= 0");
  for (std::size_t i = 0; i < s.formats.size(); ++i)
    if (!contains(output_formats(), s.formats[i]))
      throw ConfigError("outputs.formats[" + std::to_string(i) + "]",
                        "unknown format '" + s.formats[i] + "' (" +
                            listing(output_formats()) + ")");
  return s;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol{
      {"christoffel_symmetry", 0.0}, {"metric_compat", 1e-4},
      {"first_variation", 1e-4},     {"motion_residual", 1e-4},
      {"energy_conservation", 1e-6}, {"flux_balance", 1e-6},
      {"analytic", 1e-8}};
  return tol;
}

VerifySpec parse_verify(const json& j) {
  const Object o(j, "verify", {"suites", "trials", "seed", "tolerances"});
  VerifySpec s;
  s.suites = o.strings("suites", suite_names());
  for (std::size_t i = 0; i < s.suites.size(); ++i)
    if (!contains(suite_names(), s.suites[i]))
      throw ConfigError("verify.suites[" + std::to_string(i) + "]",
                        "unknown suite '" + s.suites[i] + "' (" + listing(suite_names()) +
                            ")");
  s.trials = o.integer("trials", s.trials);
  if (s.trials < 1) throw ConfigError("verify.trials", "must be at least 1");
  if (o.has("seed")) {
    const json& seed = o.at("seed");
    if (!seed.is_number_unsigned()) throw ConfigError("verify.seed", "must be a non-negative integer");
    s.seed = seed.get<std::uint64_t>();
  }
  s.tolerances = default_tolerances();
  if (o.has("tolerances")) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : default_tolerances()) keys.push_back(k);
    const Object t(o.at("tolerances"), "verify.tolerances", keys);
    for (auto& [k, v] : s.tolerances) {
      v = t.number(k, v);
      if (v < 0.0) throw ConfigError(t.path(k), "must be non-negative");
    }
  }
  return s;
}

SupportMode default_mode(const std::string& preset) {
  return preset == "rest" || preset == "gaussian_bump" ? SupportMode::compact
                                                       : SupportMode::free;
}

} // namespace

RunConfig parse(const json& j) {
  const json empty = json::object();
  const Object top(j, "",
                   {"grid", "time", "initial", "force", "boundary_mode", "outputs", "verify"});
  auto section = [&](const char* key) -> const json& {
    return top.has(key) ? top.at(key) : empty;
  };
  RunConfig c;
  c.grid = parse_grid(section("grid"));
  c.time = parse_time(section("time"));
  c.initial = parse_initial(section("initial"), c.grid);
  c.force = parse_force(section("force"), c.grid);
  c.outputs = parse_outputs(section("outputs"));
  c.verify = parse_verify(section("verify"));
  const std::string mode = top.string("boundary_mode", to_string(default_mode(c.initial.preset)));
  if (mode == "compact")
    c.boundary_mode = SupportMode::compact;
  else if (mode == "free")
    c.boundary_mode = SupportMode::free;
  else
    throw ConfigError("boundary_mode", "unknown mode '" + mode + "' (compact, free)");
  return c;
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "malformed JSON in '" + path + "': " + e.what());
  }
  return parse(j);
}

json to_json(const RunConfig& c) {
  json j;
  j["grid"] = {{"x_min", c.grid.x_min},
               {"x_max", c.grid.x_max},
               {"n_nodes", c.grid.n_nodes},
               {"eps_emb", c.grid.eps_emb},
               {"band_width", c.grid.band_width}};
  j["time"] = {{"t_end", c.time.t_end}, {"dt", c.time.dt}, {"scheme", to_string(c.time.scheme)}};
  if (c.initial.preset == "tabulated")
    j["initial"] = {{"phi", c.initial.phi}, {"v", c.initial.v}};
  else
    j["initial"] = {{"preset", c.initial.preset}, {"params", c.initial.params}};
  json force = {{"kind", c.force.kind}, {"force_coefficient", c.force.force_coefficient}};
  if (c.force.kind == "tabulated")
    force["table"] = {{"times", c.force.times}, {"fields", c.force.fields}};
  else
    force["params"] = c.force.params;
  j["force"] = force;
  j["boundary_mode"] = to_string(c.boundary_mode);
  j["outputs"] = {{"directory", c.outputs.directory},
                  {"snapshot_every", c.outputs.snapshot_every},
                  {"formats", c.outputs.formats}};
  j["verify"] = {{"suites", c.verify.suites},
                 {"trials", c.verify.trials},
                 {"seed", c.verify.seed},
                 {"tolerances", c.verify.tolerances}};
  return j;
}

BodyGrid build_grid(const RunConfig& c) {
  return make_grid(c.grid.x_min, c.grid.x_max, c.grid.n_nodes);
}

State initial_state(const RunConfig& c) {
  const BodyGrid grid = build_grid(c);
  const auto band = static_cast<std::size_t>(c.grid.band_width);
  const bool compact = c.boundary_mode == SupportMode::compact;
  if (c.initial.preset == "tabulated") {
    std::optional<Configuration> phi;
    try {
      phi.emplace(ScalarField(grid, c.initial.phi), c.grid.eps_emb);
    } catch (const std::exception& e) {
      throw ConfigError("initial.phi", e.what());
    }
    try {
      return State{0.0, *phi, Section(ScalarField(grid, c.initial.v), c.boundary_mode, band)};
    } catch (const std::exception& e) {
      throw ConfigError("initial.v", e.what());
    }
  }
  const auto& p = c.initial.params;
  const std::string& name = c.initial.preset;
  std::function<double(double)> v = [](double) { return 0.0; };
  if (name == "translation") {
    const double speed = p["speed"].get<double>();
    v = [speed](double) { return speed; };
  } else if (name == "scaling") {
    const double rate = p["rate"].get<double>();
    v = [rate](double x) { return rate * x; };
  } else if (name == "gaussian_bump") {
    const double a = p["amplitude"].get<double>();
    const double mu = p["center"].get<double>();
    const double w = p["width"].get<double>();
    v = [=](double x) { return a * std::exp(-(x - mu) * (x - mu) / (2.0 * w * w)); };
  } else if (name == "compressive_ramp") {
    const double k = p["k"].get<double>();
    const double x0 = c.grid.x_min;
    v = [=](double x) { return -k * (x - x0); };
  }
  Configuration phi(ScalarField::sample(grid, [](double x) { return x; }), c.grid.eps_emb);
  ScalarField vf = ScalarField::sample(grid, v);
  return State{0.0, std::move(phi),
               compact ? Section::pinned(std::move(vf), band) : Section::free(std::move(vf))};
}

ForceModel build_force(const RunConfig& c) {
  const auto& f = c.force;
  const auto& p = f.params;
  if (f.kind == "zero") return ForceModel(ForceModel::Zero{}, f.force_coefficient);
  if (f.kind == "constant_density")
    return ForceModel(ForceModel::ConstantDensity{p["value"].get<double>()},
                      f.force_coefficient);
  if (f.kind == "spatial_bump")
    return ForceModel(ForceModel::SpatialBump{p["amplitude"].get<double>(),
                                              p["center"].get<double>(),
                                              p["width"].get<double>()},
                      f.force_coefficient);
  const BodyGrid grid = build_grid(c);
  ForceModel::Tabulated tab{f.times, {}};
  for (const auto& row : f.fields) tab.fields.emplace_back(grid, row);
  return ForceModel(std::move(tab), f.force_coefficient);
}

std::optional<std::function<double(double, double)>> analytic_solution(const RunConfig& c) {
  if (c.force.kind != "zero") return std::nullopt;
  const std::string& name = c.initial.preset;
  if (name == "rest") return [](double, double x) { return x; };
  if (c.boundary_mode != SupportMode::free) return std::nullopt;
  if (name == "translation") {
    const double speed = c.initial.params["speed"].get<double>();
    return [speed](double t, double x) { return x + speed * t; };
  }
  if (name == "scaling") {
    const double rate = c.initial.params["rate"].get<double>();
    return [rate](double t, double x) { return x * std::cbrt(1.0 + 3.0 * rate * t); };
  }
  return std::nullopt;
}

} // namespace contmech::config
