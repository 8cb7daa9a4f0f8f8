#include "nldiv/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nldiv/linalg.hpp"

namespace nldiv {

namespace {

struct RawValue {
  enum class Kind { number, string, boolean, array } kind = Kind::number;
  double num = 0.0;
  std::string str;
  bool b = false;
  std::vector<double> arr;
  int line = 0;
  bool used = false;
};

using RawMap = std::map<std::string, RawValue>;

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
  throw std::invalid_argument(origin + ":" + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& origin, int line, const std::string& tok) {
  if (tok == "inf" || tok == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) fail(origin, line, "malformed number '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(origin, line, "malformed number '" + tok + "'");
  } catch (const std::out_of_range&) {
    fail(origin, line, "number out of range '" + tok + "'");
  }
}

RawMap tokenize(const std::string& text, const std::string& origin) {
  RawMap out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    // strip comments outside strings
    std::string s;
    bool in_str = false;
    for (char ch : raw) {
      if (ch == '"') in_str = !in_str;
      if (ch == '#' && !in_str) break;
      s.push_back(ch);
    }
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, line, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty()) fail(origin, line, "empty key");
    if (!section.empty()) key = section + "." + key;

    RawValue rv;
    rv.line = line;
    if (val.empty()) fail(origin, line, "empty value for '" + key + "'");
    if (val.front() == '"') {
      if (val.size() < 2 || val.back() != '"')
        fail(origin, line, "unterminated string for '" + key + "'");
      rv.kind = RawValue::Kind::string;
      rv.str = val.substr(1, val.size() - 2);
    } else if (val == "true" || val == "false") {
      rv.kind = RawValue::Kind::boolean;
      rv.b = (val == "true");
    } else if (val.front() == '[') {
      if (val.back() != ']') fail(origin, line, "unterminated array for '" + key + "'");
      rv.kind = RawValue::Kind::array;
      std::string body = val.substr(1, val.size() - 2);
      std::istringstream items(body);
      std::string tok;
      while (std::getline(items, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) fail(origin, line, "empty array element for '" + key + "'");
        rv.arr.push_back(parse_number(origin, line, tok));
      }
    } else {
      rv.kind = RawValue::Kind::number;
      rv.num = parse_number(origin, line, val);
    }
    if (out.count(key) > 0)
      fail(origin, line, "duplicate key '" + key + "'");
    out[key] = rv;
  }
  return out;
}

struct Extractor {
  RawMap& raw;
  const std::string& origin;

  RawValue* find(const std::string& key) {
    auto it = raw.find(key);
    if (it == raw.end()) return nullptr;
    it->second.used = true;
    return &it->second;
  }
  double number(const std::string& key, double fallback) {
    RawValue* v = find(key);
    if (!v) return fallback;
    if (v->kind != RawValue::Kind::number)
      fail(origin, v->line, "'" + key + "' must be a number");
    return v->num;
  }
  std::string str(const std::string& key, const std::string& fallback) {
    RawValue* v = find(key);
    if (!v) return fallback;
    if (v->kind != RawValue::Kind::string)
      fail(origin, v->line, "'" + key + "' must be a string");
    return v->str;
  }
  bool boolean(const std::string& key, bool fallback) {
    RawValue* v = find(key);
    if (!v) return fallback;
    if (v->kind != RawValue::Kind::boolean)
      fail(origin, v->line, "'" + key + "' must be true or false");
    return v->b;
  }
  std::vector<double> array(const std::string& key, std::vector<double> fallback) {
    RawValue* v = find(key);
    if (!v) return fallback;
    if (v->kind != RawValue::Kind::array)
      fail(origin, v->line, "'" + key + "' must be an array");
    return v->arr;
  }
  int line_of(const std::string& key) {
    auto it = raw.find(key);
    return it == raw.end() ? 0 : it->second.line;
  }
};

const char* kKnownExperiments[] = {"constants", "recover-a", "build-m",
                                   "solve",     "sweep-s",   "limits",
                                   "verify"};

} // namespace

unsigned long long fnv1a(const std::string& text) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream o;
  o << "schema=" << schema << ";experiment=" << experiment << ";n=" << n
    << ";domain=" << domain_a << "," << domain_b << ";mesh_n=" << mesh_n << ";s=";
  for (double s : s_values) o << s << ",";
  o << ";ell=";
  for (int e : ell_grid) o << e << ",";
  o << ";rho=" << rho << ";level=" << level << ";seed=" << seed
    << ";det=" << deterministic << ";linear=" << linear_mode
    << ";field=" << field.kind << ";";
  for (double d : field.diag) o << d << ",";
  o << ";";
  for (double d : field.entries) o << d << ",";
  o << ";";
  for (double d : field.eigs) o << d << ",";
  o << ";theta=" << field.theta << ";omega=" << field.omega << ";lo=" << field.lo
    << ";hi=" << field.hi << ";a=" << data.a << ";f=" << data.f << ";Q=" << data.q
    << ";h=" << data.h << ";ap=" << data.a_profile << ";fp=" << data.f_profile
    << ";tol_outer=" << tol_outer << ";tol_newton=" << tol_newton;
  return o.str();
}

void finalize_config(ExperimentConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", fnv1a(cfg.canonical()));
  cfg.hash = buf;
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;
  if (experiment == "sweep-s") cfg.s_values = {0.6, 0.75, 0.9, 0.95};
  if (experiment == "limits") cfg.s_values = {0.7, 0.8, 0.9, 0.95, 0.99};
  if (experiment == "solve") {
    cfg.data.a = 1.0;
    cfg.data.f = 0.4;
    cfg.data.q = 0.4;
  }
  finalize_config(cfg);
  return cfg;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  RawMap raw = tokenize(text, origin);
  Extractor ex{raw, origin};
  ExperimentConfig cfg;

  cfg.schema = static_cast<int>(ex.number("schema", 1));
  if (cfg.schema != 1)
    fail(origin, ex.line_of("schema"), "unsupported schema version");

  cfg.experiment = ex.str("experiment", "verify");
  bool known = false;
  for (const char* e : kKnownExperiments) known = known || cfg.experiment == e;
  if (!known)
    fail(origin, ex.line_of("experiment"),
         "unknown experiment '" + cfg.experiment + "'");

  cfg.n = static_cast<int>(ex.number("n", 1));
  if (cfg.n < 1 || cfg.n > 3) fail(origin, ex.line_of("n"), "n must be 1, 2 or 3");

  const std::vector<double> dom = ex.array("domain", {-1.0, 1.0});
  if (dom.size() != 2 || !(dom[1] > dom[0]))
    fail(origin, ex.line_of("domain"), "domain must be [a, b] with a < b");
  cfg.domain_a = dom[0];
  cfg.domain_b = dom[1];

  cfg.mesh_n = static_cast<int>(ex.number("mesh_n", 128));
  if (cfg.mesh_n < 2) fail(origin, ex.line_of("mesh_n"), "mesh_n must be >= 2");

  {
    RawValue* v = ex.find("s");
    RawValue* g = ex.find("s_grid");
    if (v && g) fail(origin, g->line, "give either 's' or 's_grid', not both");
    if (v) {
      if (v->kind != RawValue::Kind::number)
        fail(origin, v->line, "'s' must be a number");
      cfg.s_values = {v->num};
    } else if (g) {
      if (g->kind != RawValue::Kind::array)
        fail(origin, g->line, "'s_grid' must be an array");
      cfg.s_values = g->arr;
    } else {
      cfg.s_values = default_config(cfg.experiment).s_values;
    }
  }
  for (double s : cfg.s_values)
    if (!(s > 0.0 && s < 1.0))
      fail(origin, std::max(ex.line_of("s"), ex.line_of("s_grid")),
           "s must lie in the open interval (0,1)");

  for (double e : ex.array("ell_grid", {}))
    cfg.ell_grid.push_back(static_cast<int>(e));

  if (RawValue* v = ex.find("rho")) {
    if (v->kind == RawValue::Kind::string) {
      if (v->str != "inf") fail(origin, v->line, "rho must be positive or \"inf\"");
      cfg.rho = std::numeric_limits<double>::infinity();
    } else if (v->kind == RawValue::Kind::number) {
      cfg.rho = v->num;
    } else {
      fail(origin, v->line, "rho must be positive or \"inf\"");
    }
    if (!(cfg.rho > 0.0)) fail(origin, v->line, "rho must be positive");
  }

  cfg.level = static_cast<int>(ex.number("level", 3));
  if (cfg.level < 1) fail(origin, ex.line_of("level"), "level must be >= 1");
  cfg.seed = static_cast<unsigned long long>(ex.number("seed", 0));
  cfg.deterministic = ex.boolean("deterministic", false);
  cfg.threads_explicit = raw.count("threads") > 0;
  cfg.threads = static_cast<int>(ex.number("threads", 1));
  if (cfg.threads < 1) fail(origin, ex.line_of("threads"), "threads must be >= 1");
  cfg.linear_mode = ex.boolean("linear_mode", false);
  cfg.solution_out = ex.str("solution_out", "");

  cfg.field.kind = ex.str("field.kind", "identity");
  cfg.field.diag = ex.array("field.diag", {2.0, 0.5, 1.0});
  cfg.field.entries = ex.array("field.entries", {});
  cfg.field.eigs = ex.array("field.eigs", {0.5, 2.0});
  cfg.field.theta = ex.number("field.theta", 0.0);
  cfg.field.omega = ex.number("field.omega", 1.0);
  cfg.field.lo = ex.number("field.lo", 1.0);
  cfg.field.hi = ex.number("field.hi", 2.0);

  cfg.data.a = ex.number("data.a", 1.0);
  cfg.data.f = ex.number("data.f", 0.0);
  cfg.data.q = ex.number("data.q", 0.5);
  cfg.data.h = ex.str("data.h", "identity");
  cfg.data.a_profile = ex.str("data.a_profile", "constant");
  cfg.data.f_profile = ex.str("data.f_profile", "constant");

  cfg.tol_outer = ex.number("tol.outer", 1e-7);
  cfg.tol_newton = ex.number("tol.newton", 1e-11);

  for (const auto& [key, v] : raw)
    if (!v.used) fail(origin, v.line, "unknown key '" + key + "'");

  // catalogue names checked eagerly
  nl_by_name(cfg.data.h);
  if (cfg.field.kind != "identity" && cfg.field.kind != "anisotropic-diag" &&
      cfg.field.kind != "rotating-field" && cfg.field.kind != "step-field" &&
      cfg.field.kind != "constant" && cfg.field.kind != "rotation-eigs")
    fail(origin, ex.line_of("field.kind"),
         "unknown field kind '" + cfg.field.kind + "'");

  // data domination is a load-time contract for the solve experiments
  if ((cfg.experiment == "solve" || cfg.experiment == "sweep-s") &&
      !cfg.linear_mode) {
    try {
      cfg.make_data(cfg.make_mesh());
    } catch (const std::invalid_argument& e) {
      fail(origin, 0, std::string(e.what()));
    }
  }

  finalize_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

MatrixFieldA ExperimentConfig::make_field() const {
  if (field.kind == "identity") return field_identity(n);
  if (field.kind == "anisotropic-diag") {
    Vec d(n);
    for (int i = 0; i < n; ++i)
      d[i] = i < static_cast<int>(field.diag.size()) ? field.diag[static_cast<std::size_t>(i)] : 1.0;
    return field_anisotropic_diag(n, d);
  }
  if (field.kind == "rotating-field") {
    Vec e(2);
    e[0] = field.eigs.size() > 0 ? field.eigs[0] : 0.5;
    e[1] = field.eigs.size() > 1 ? field.eigs[1] : 2.0;
    return field_rotating(2, e, field.omega);
  }
  if (field.kind == "step-field") return field_step(n, field.lo, field.hi);
  if (field.kind == "constant") {
    SymMat a(n);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        a.set(i, j, idx < field.entries.size() ? field.entries[idx++] : (i == j ? 1.0 : 0.0));
    return field_constant(n, a);
  }
  // rotation-eigs: O(theta) diag(eigs) O(theta)^T, two dimensions
  if (n != 2) throw std::invalid_argument("rotation-eigs field needs n = 2");
  Vec e(2);
  e[0] = field.eigs.size() > 0 ? field.eigs[0] : 0.5;
  e[1] = field.eigs.size() > 1 ? field.eigs[1] : 2.0;
  const Mat o = rotation2(field.theta);
  return field_constant(2, SymMat::from(o.mul(SymMat::diag(e).full()).mul(o.transposed())));
}

Mesh ExperimentConfig::make_mesh() const {
  return Mesh::interval(domain_a, domain_b, mesh_n);
}

ProblemData ExperimentConfig::make_data(const Mesh& mesh) const {
  const double mid = 0.5 * (domain_a + domain_b);
  const double width = domain_b - domain_a;
  auto profile = [&](const std::string& name, double amp) {
    if (name == "constant") return std::function<double(double)>([amp](double) { return amp; });
    if (name == "bump")
      return std::function<double(double)>([amp, mid, width](double x) {
        const double t = 2.0 * (x - mid) / width;
        const double v = 1.0 - t * t;
        return v > 0.0 ? amp * v : 0.0;
      });
    throw std::invalid_argument("unknown data profile '" + name + "'");
  };
  return make_problem_data(mesh, profile(data.a_profile, data.a),
                           profile(data.f_profile, data.f), data.q,
                           nl_by_name(data.h), linear_mode);
}

} // namespace nldiv
