#include "shockfan/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "shockfan/errors.hpp"
#include "shockfan/system_model.hpp"

namespace shockfan {

namespace {

struct Value {
  enum Kind { Number, Boolean, String, Array } kind = Number;
  double num = 0.0;
  bool flag = false;
  std::string str;
  std::vector<double> arr;
};

struct Context {
  std::string origin;
  int line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
  }
};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_number(const std::string& s, const Context& ctx) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    ctx.fail("expected a number, got '" + s + "'");
  return v;
}

Value parse_value(const std::string& raw, const Context& ctx) {
  Value v;
  if (raw.empty()) ctx.fail("missing value");
  if (raw == "true" || raw == "false") {
    v.kind = Value::Boolean;
    v.flag = raw == "true";
    return v;
  }
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      ctx.fail("unterminated string");
    v.kind = Value::String;
    v.str = raw.substr(1, raw.size() - 2);
    if (v.str.find('"') != std::string::npos)
      ctx.fail("nested quote in string");
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') ctx.fail("unterminated array");
    v.kind = Value::Array;
    const std::string inner = trim(raw.substr(1, raw.size() - 2));
    if (!inner.empty()) {
      std::stringstream ss(inner);
      std::string item;
      while (std::getline(ss, item, ','))
        v.arr.push_back(parse_number(trim(item), ctx));
    }
    return v;
  }
  v.kind = Value::Number;
  v.num = parse_number(raw, ctx);
  return v;
}

double as_number(const Value& v, const Context& ctx, const std::string& key) {
  if (v.kind != Value::Number) ctx.fail("key '" + key + "' expects a number");
  return v.num;
}

int as_int(const Value& v, const Context& ctx, const std::string& key) {
  const double d = as_number(v, ctx, key);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    ctx.fail("key '" + key + "' expects an integer");
  return i;
}

bool as_bool(const Value& v, const Context& ctx, const std::string& key) {
  if (v.kind != Value::Boolean)
    ctx.fail("key '" + key + "' expects true or false");
  return v.flag;
}

std::string as_string(const Value& v, const Context& ctx,
                      const std::string& key) {
  if (v.kind != Value::String)
    ctx.fail("key '" + key + "' expects a quoted string");
  return v.str;
}

std::vector<double> as_array(const Value& v, const Context& ctx,
                             const std::string& key, int expected) {
  if (v.kind != Value::Array)
    ctx.fail("key '" + key + "' expects an array");
  if (expected >= 0 && static_cast<int>(v.arr.size()) != expected)
    ctx.fail("key '" + key + "' expects " + std::to_string(expected) +
             " entries, got " + std::to_string(v.arr.size()));
  return v.arr;
}

void apply_model(Scenario& sc, const std::string& key, const Value& v,
                 const Context& ctx) {
  crystal::CrystalParams& p = sc.params;
  if (key == "K1") p.K1 = as_number(v, ctx, key);
  else if (key == "K2") p.K2 = as_number(v, ctx, key);
  else if (key == "C111") p.C111 = as_number(v, ctx, key);
  else if (key == "C112") p.C112 = as_number(v, ctx, key);
  else if (key == "C122") p.C122 = as_number(v, ctx, key);
  else if (key == "C222") p.C222 = as_number(v, ctx, key);
  else if (key == "h_fraction") sc.h_fraction = as_number(v, ctx, key);
  else if (key == "delta_override") sc.delta_override = as_number(v, ctx, key);
  else if (key == "delta_max") sc.delta_max = as_number(v, ctx, key);
  else if (key == "frame_speed") sc.frame_speed = as_number(v, ctx, key);
  else if (key == "c_switch") sc.c_switch = as_number(v, ctx, key);
  else ctx.fail("unknown key '" + key + "' in [model]");
}

void apply_seed(Scenario& sc, const std::string& key, const Value& v,
                const Context& ctx) {
  SeedSection& s = sc.seed;
  if (key == "kind") s.kind = as_string(v, ctx, key);
  else if (key == "amplitude") s.amplitude = as_number(v, ctx, key);
  else if (key == "weights") {
    const auto w = as_array(v, ctx, key, 4);
    for (int i = 0; i < 4; ++i) s.weights[i] = w[i];
  } else ctx.fail("unknown key '" + key + "' in [seed]");
}

void apply_numerics(Scenario& sc, const std::string& key, const Value& v,
                    const Context& ctx) {
  NumericsSection& n = sc.numerics;
  if (key == "x_lo") n.x_lo = as_number(v, ctx, key);
  else if (key == "x_hi") n.x_hi = as_number(v, ctx, key);
  else if (key == "dx") n.dx = as_number(v, ctx, key);
  else if (key == "cfl") n.cfl = as_number(v, ctx, key);
  else if (key == "t_end") n.t_end = as_number(v, ctx, key);
  else if (key == "scheme") n.scheme = as_string(v, ctx, key);
  else if (key == "limiter") n.limiter = as_string(v, ctx, key);
  else if (key == "level_budget_mb") n.level_budget_mb = as_number(v, ctx, key);
  else if (key == "z_count") n.z_count = as_int(v, ctx, key);
  else if (key == "z_lo") n.z_lo = as_number(v, ctx, key);
  else if (key == "z_hi") n.z_hi = as_number(v, ctx, key);
  else if (key == "rho_stop") n.rho_stop = as_number(v, ctx, key);
  else if (key == "trace_dt") n.trace_dt = as_number(v, ctx, key);
  else if (key == "record_dt") n.record_dt = as_number(v, ctx, key);
  else if (key == "epsilon") n.epsilon = as_number(v, ctx, key);
  else if (key == "slack") n.slack = as_number(v, ctx, key);
  else if (key == "scan_points") n.scan_points = as_int(v, ctx, key);
  else if (key == "margin_samples") n.margin_samples = as_int(v, ctx, key);
  else if (key == "gradient_cap_factor")
    n.gradient_cap_factor = as_number(v, ctx, key);
  else ctx.fail("unknown key '" + key + "' in [numerics]");
}

void apply_exact(Scenario& sc, const std::string& key, const Value& v,
                 const Context& ctx) {
  ExactSection& e = sc.exact;
  if (key == "kind") e.kind = as_string(v, ctx, key);
  else if (key == "amplitudes") {
    const auto a = as_array(v, ctx, key, 2);
    e.amplitudes[0] = a[0];
    e.amplitudes[1] = a[1];
  } else if (key == "slice_times") e.slice_times = as_array(v, ctx, key, -1);
  else if (key == "slice_x_lo") e.slice_x_lo = as_number(v, ctx, key);
  else if (key == "slice_x_hi") e.slice_x_hi = as_number(v, ctx, key);
  else if (key == "slice_nx") e.slice_nx = as_int(v, ctx, key);
  else ctx.fail("unknown key '" + key + "' in [exact]");
}

void apply_output(Scenario& sc, const std::string& key, const Value& v,
                  const Context& ctx) {
  OutputSection& o = sc.output;
  if (key == "directory") o.directory = as_string(v, ctx, key);
  else if (key == "fans") o.fans = as_bool(v, ctx, key);
  else if (key == "diagnostics") o.diagnostics = as_bool(v, ctx, key);
  else if (key == "report") o.report = as_bool(v, ctx, key);
  else if (key == "slices") o.slices = as_bool(v, ctx, key);
  else ctx.fail("unknown key '" + key + "' in [output]");
}

// Drops a trailing comment, honoring quoted strings.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    else if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

void validate_scenario(const Scenario& sc, const std::string& origin) {
  auto fail = [&](const std::string& msg) {
    throw ConfigError(origin + ": " + msg);
  };
  sc.params.validate();
  if (!(sc.h_fraction > 0.0 && sc.h_fraction < 1.0))
    fail("h_fraction must lie strictly inside (0, 1)");
  if (sc.delta_override < 0.0) fail("delta_override must be non-negative");
  if (!(sc.delta_max > 0.0)) fail("delta_max must be positive");

  const SeedSection& s = sc.seed;
  if (s.kind != "bump" && s.kind != "comoving_pair" && s.kind != "zero")
    fail("seed.kind must be bump, comoving_pair, or zero");
  if (s.amplitude < 0.0) fail("seed.amplitude must be non-negative");

  const NumericsSection& n = sc.numerics;
  if (!(n.dx > 0.0)) fail("numerics.dx must be positive");
  if (!(n.x_hi > n.x_lo)) fail("numerics needs x_hi > x_lo");
  if (!(n.cfl > 0.0 && n.cfl <= 1.0)) fail("numerics.cfl must lie in (0, 1]");
  if (n.t_end < 0.0) fail("numerics.t_end must be non-negative");
  if (n.scheme != "conservative" && n.scheme != "primitive")
    fail("numerics.scheme must be conservative or primitive");
  if (n.limiter != "none" && n.limiter != "minmod" && n.limiter != "mc")
    fail("numerics.limiter must be none, minmod, or mc");
  if (!(n.level_budget_mb > 0.0))
    fail("numerics.level_budget_mb must be positive");
  if (n.z_count < 2) fail("numerics.z_count must be at least 2");
  if (!(n.z_hi > n.z_lo)) fail("numerics needs z_hi > z_lo");
  if (n.rho_stop < 0.0 || n.rho_stop >= 1.0)
    fail("numerics.rho_stop must lie in [0, 1)");
  if (!(n.epsilon > 0.0 && n.epsilon < 0.01))
    fail("numerics.epsilon must lie in (0, 1/100)");
  if (n.slack < 0.0) fail("numerics.slack must be non-negative");
  if (n.scan_points < 16) fail("numerics.scan_points must be at least 16");
  if (n.margin_samples < 1)
    fail("numerics.margin_samples must be at least 1");
  if (n.gradient_cap_factor < 0.0)
    fail("numerics.gradient_cap_factor must be non-negative");
  if (n.trace_dt < 0.0) fail("numerics.trace_dt must be non-negative");
  if (n.record_dt < 0.0) fail("numerics.record_dt must be non-negative");

  const ExactSection& e = sc.exact;
  if (e.kind != "cauchy" && e.kind != "interface")
    fail("exact.kind must be cauchy or interface");
  if (e.slice_nx < 2) fail("exact.slice_nx must be at least 2");
  if (!(e.slice_x_hi > e.slice_x_lo)) fail("exact needs slice_x_hi > slice_x_lo");
  for (double t : e.slice_times)
    if (t < 0.0) fail("exact.slice_times must be non-negative");

  if (sc.output.directory.empty()) fail("output.directory must be non-empty");
}

} // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  Scenario sc;
  Context ctx{origin, 0};
  std::string section;
  std::stringstream ss(text);
  std::string raw;
  while (std::getline(ss, raw)) {
    ++ctx.line;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') ctx.fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "model" && section != "seed" && section != "numerics" &&
          section != "exact" && section != "output")
        ctx.fail("unknown section [" + section + "]");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) ctx.fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) ctx.fail("empty key");
    for (char c : key)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
        ctx.fail("malformed key '" + key + "'");
    if (section.empty()) ctx.fail("key '" + key + "' outside any section");
    const Value v = parse_value(trim(line.substr(eq + 1)), ctx);

    if (section == "model") apply_model(sc, key, v, ctx);
    else if (section == "seed") apply_seed(sc, key, v, ctx);
    else if (section == "numerics") apply_numerics(sc, key, v, ctx);
    else if (section == "exact") apply_exact(sc, key, v, ctx);
    else apply_output(sc, key, v, ctx);
  }
  validate_scenario(sc, origin);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), path);
}

SystemModel scenario_model(const Scenario& sc) {
  SystemModel model = crystal::make_model(sc.params, sc.h_fraction,
                                          sc.delta_override, sc.delta_max);
  if (sc.frame_speed != 0.0) model = boosted(model, sc.frame_speed);
  return model;
}

SeedProfile scenario_seed(const Scenario& sc) {
  if (sc.seed.kind == "comoving_pair")
    return make_comoving_seed(sc.params, sc.seed.amplitude);
  const double amp = sc.seed.kind == "zero" ? 0.0 : sc.seed.amplitude;
  return make_bump_seed(amp, sc.seed.weights);
}

SolveOptions scenario_solve_options(const Scenario& sc, double t_end,
                                    int threads) {
  const NumericsSection& n = sc.numerics;
  SolveOptions opt;
  opt.t_end = t_end;
  opt.cfl = n.cfl;
  opt.dx = n.dx;
  opt.x_lo = n.x_lo;
  opt.x_hi = n.x_hi;
  opt.scheme = n.scheme;
  opt.limiter = n.limiter;
  opt.level_budget_mb = n.level_budget_mb;
  opt.threads = threads;
  opt.enforce_ball = true;
  opt.gradient_cap = 0.0;
  if (n.gradient_cap_factor > 0.0) {
    // Cap relative to the seed's own initial steepness: an event fires when
    // the solution gradient exceeds gradient_cap_factor times its initial
    // maximum.
    const SeedProfile seed = scenario_seed(sc);
    double g0 = 0.0;
    for (int k = 0; k <= 512; ++k) {
      const double z = -1.0 + 2.0 * k / 512.0;
      g0 = std::max(g0, Vec4(seed.f_prime(z)).cwiseAbs().maxCoeff());
    }
    if (g0 > 0.0) opt.gradient_cap = n.gradient_cap_factor * g0;
  }
  return opt;
}

} // namespace shockfan
