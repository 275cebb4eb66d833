#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "feller/errors.hpp"
#include "feller/jump_measure.hpp"
#include "feller/validation.hpp"

namespace feller::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_name(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(std::string_view(s).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

// Located error: "source:line: [section] key: message".
struct Where {
  const std::string& source;
  const std::string& section;
  const IniEntry& entry;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(source + ":" + std::to_string(entry.line) + ": [" + section + "] " +
                      entry.key + ": " + msg);
  }
};

double to_double(const std::string& text, const Where& w) {
  std::string_view s = text;
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    w.fail("expected a finite number, got '" + text + "'");
  }
  return v;
}

long to_long(const std::string& text, const Where& w) {
  std::string_view s = text;
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    w.fail("expected an integer, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& text, const Where& w) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || p != text.data() + text.size()) {
    w.fail("expected an unsigned 64-bit integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> to_list(const std::string& text, const Where& w) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item, w));
  return out;
}

bool to_bool(const std::string& text, const Where& w) {
  if (text == "true") return true;
  if (text == "false") return false;
  w.fail("expected true or false, got '" + text + "'");
}

std::string join(const std::vector<double>& v, const char* sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += format_double(v[i]);
  }
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

enum class Kind { Number, Integer, List, Word };

struct ParamSpec {
  const char* key;
  Kind kind;
  const char* fallback;  // nullptr: required
};

struct FamilySpec {
  const char* name;
  std::vector<ParamSpec> params;
};

const std::vector<FamilySpec>& families() {
  static const std::vector<FamilySpec> table = {
      {"brownian", {{"dim", Kind::Integer, "1"}, {"variance", Kind::Number, "1"}}},
      {"cauchy", {}},
      {"symmetric_stable",
       {{"alpha", Kind::Number, nullptr}, {"scale", Kind::Number, "1"}, {"dim", Kind::Integer, "1"}}},
      {"compound_poisson",
       {{"rate", Kind::Number, nullptr},
        {"jumps", Kind::Word, "point"},
        {"location", Kind::List, "1"},
        {"mean", Kind::Number, "0"},
        {"stddev", Kind::Number, "1"}}},
      {"stable_like",
       {{"offset", Kind::Number, "0.9"},
        {"slope", Kind::Number, "1"},
        {"lower", Kind::Number, "0.9"},
        {"upper", Kind::Number, "1.9"},
        {"scale", Kind::Number, "1"}}},
      {"drift", {{"drift", Kind::List, nullptr}}},
      {"power", {{"alpha", Kind::Number, nullptr}, {"weight", Kind::Number, "1"}}},
  };
  return table;
}

const FamilySpec* find_family(const std::string& name) {
  for (const auto& f : families()) {
    if (name == f.name) return &f;
  }
  return nullptr;
}

std::string canonical(Kind kind, const std::string& text, const Where& w) {
  switch (kind) {
    case Kind::Number: return format_double(to_double(text, w));
    case Kind::Integer: return std::to_string(to_long(text, w));
    case Kind::List: return join(to_list(text, w));
    case Kind::Word: return lower(text);
  }
  return text;
}

double num(const SymbolConfig& c, const char* key) {
  double v = 0.0;
  const auto& s = c.params.at(key);
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

std::vector<double> list(const SymbolConfig& c, const char* key) {
  std::vector<double> out;
  for (const auto& item : split(c.params.at(key), ',')) {
    double v = 0.0;
    std::from_chars(item.data(), item.data() + item.size(), v);
    out.push_back(v);
  }
  return out;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

using Handler = std::function<void(const IniEntry&, const Where&)>;

void require_positive(double v, const Where& w) {
  if (!(v > 0.0)) w.fail("must be positive");
}

}  // namespace

std::vector<IniSection> parse_ini(std::string_view text, const std::string& source) {
  std::vector<IniSection> sections;
  std::set<std::string> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == ';' || line[0] == '#') continue;
    if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
    const auto at = [&](const std::string& msg) {
      return ConfigError(source + ":" + std::to_string(line_no) + ": " + msg);
    };
    if (line.front() == '[') {
      if (line.back() != ']') throw at("unterminated section header");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) throw at("invalid section name '" + name + "'");
      if (!seen.insert(name).second) throw at("duplicate section [" + name + "]");
      sections.push_back({name, line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw at("expected 'key = value' or '[section]'");
    if (sections.empty()) throw at("key outside of any section");
    IniEntry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no};
    if (!valid_name(e.key)) throw at("invalid key '" + e.key + "'");
    if (e.value.empty()) throw at("empty value for '" + e.key + "'");
    auto& entries = sections.back().entries;
    if (std::any_of(entries.begin(), entries.end(), [&](const auto& o) { return o.key == e.key; })) {
      throw at("duplicate key '" + e.key + "' in [" + sections.back().name + "]");
    }
    entries.push_back(std::move(e));
    if (end == text.size()) break;
  }
  return sections;
}

double SimulationConfig::step_size() const {
  if (h) return *h;
  if (T && n_steps) return *T / static_cast<double>(*n_steps);
  throw ConfigError("[simulation] needs h, or T and n_steps");
}

long SimulationConfig::steps() const {
  if (n_steps) return *n_steps;
  if (h) return 1;
  throw ConfigError("[simulation] needs h, or T and n_steps");
}

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  ExperimentConfig cfg;
  cfg.source = source;
  const auto sections = parse_ini(text, source);

  const IniEntry* family_entry = nullptr;
  int symbol_line = 0;
  std::vector<const IniEntry*> symbol_params;
  int validate_line = 0;

  std::map<std::string, std::map<std::string, Handler>> handlers;
  auto& sim = cfg.simulation;
  handlers["simulation"] = {
      {"x0", [&](auto& e, auto& w) { sim.x0 = to_list(e.value, w); }},
      {"h", [&](auto& e, auto& w) { sim.h = to_double(e.value, w); require_positive(*sim.h, w); }},
      {"T", [&](auto& e, auto& w) { sim.T = to_double(e.value, w); require_positive(*sim.T, w); }},
      {"n_steps", [&](auto& e, auto& w) {
         sim.n_steps = to_long(e.value, w);
         if (*sim.n_steps < 1) w.fail("must be >= 1");
       }},
      {"n_paths", [&](auto& e, auto& w) {
         sim.n_paths = to_long(e.value, w);
         if (sim.n_paths < 1) w.fail("must be >= 1");
       }},
      {"seed", [&](auto& e, auto& w) { sim.seed = to_u64(e.value, w); }},
  };
  auto& so = cfg.sampler;
  handlers["sampler"] = {
      {"epsilon", [&](auto& e, auto& w) { so.epsilon = to_double(e.value, w); require_positive(*so.epsilon, w); }},
      {"small_jumps", [&](auto& e, auto& w) {
         const auto v = lower(e.value);
         if (v == "auto") so.small_jumps = SmallJumpPolicy::Auto;
         else if (v == "gaussian") so.small_jumps = SmallJumpPolicy::Gaussian;
         else if (v == "drop") so.small_jumps = SmallJumpPolicy::Drop;
         else w.fail("expected auto, gaussian or drop");
       }},
      {"gaussian_threshold", [&](auto& e, auto& w) { so.gaussian_threshold = to_double(e.value, w); require_positive(so.gaussian_threshold, w); }},
      {"max_jumps_per_step", [&](auto& e, auto& w) { so.max_jumps_per_step = to_double(e.value, w); require_positive(so.max_jumps_per_step, w); }},
      {"small_jump_budget", [&](auto& e, auto& w) { so.small_jump_budget = to_double(e.value, w); require_positive(so.small_jump_budget, w); }},
      {"quantization", [&](auto& e, auto& w) {
         cfg.quantization = to_double(e.value, w);
         if (*cfg.quantization < 0.0) w.fail("must be >= 0");
       }},
  };
  auto& ck = cfg.check;
  const auto points = [](long v, const Where& w) {
    if (v < 3 || v % 2 == 0) w.fail("must be an odd integer >= 3");
    return static_cast<int>(v);
  };
  handlers["check"] = {
      {"x_min", [&](auto& e, auto& w) { ck.x_min = to_double(e.value, w); }},
      {"x_max", [&](auto& e, auto& w) { ck.x_max = to_double(e.value, w); }},
      {"x_points", [&](auto& e, auto& w) {
         const long v = to_long(e.value, w);
         if (v < 1) w.fail("must be >= 1");
         ck.x_points = static_cast<int>(v);
       }},
      {"xi_min", [&](auto& e, auto& w) { ck.xi_min = to_double(e.value, w); require_positive(ck.xi_min, w); }},
      {"xi_max", [&](auto& e, auto& w) { ck.xi_max = to_double(e.value, w); require_positive(ck.xi_max, w); }},
      {"xi_points", [&](auto& e, auto& w) { ck.xi_points = points(to_long(e.value, w), w); }},
      {"closed_form", [&](auto& e, auto& w) { ck.closed_form = to_bool(e.value, w); }},
  };
  auto& va = cfg.validate;
  handlers["validate"] = {
      {"tests", [&](auto& e, auto& w) {
         va.tests.clear();
         for (auto& t : split(e.value, ',')) {
           t = lower(t);
           if (t != "cf" && t != "jump_count" && t != "convergence" && t != "state_dependence") {
             w.fail("unknown test '" + t + "' (cf, jump_count, convergence, state_dependence)");
           }
           if (std::find(va.tests.begin(), va.tests.end(), t) == va.tests.end()) va.tests.push_back(t);
         }
       }},
      {"states", [&](auto& e, auto& w) {
         va.states.clear();
         for (const auto& s : split(e.value, ';')) va.states.push_back(to_list(s, w));
       }},
      {"n", [&](auto& e, auto& w) {
         va.n = to_long(e.value, w);
         if (va.n < 1000) w.fail("must be >= 1000");
       }},
      {"points", [&](auto& e, auto& w) { va.points = points(to_long(e.value, w), w); }},
      {"bias", [&](auto& e, auto& w) {
         va.bias = to_double(e.value, w);
         if (*va.bias < 0.0) w.fail("must be >= 0");
       }},
      {"level", [&](auto& e, auto& w) {
         va.level = to_double(e.value, w);
         if (!(va.level > 0.0 && va.level < 1.0)) w.fail("must lie in (0, 1)");
       }},
      {"convergence_h", [&](auto& e, auto& w) { va.convergence_h = to_list(e.value, w); }},
      {"convergence_paths", [&](auto& e, auto& w) {
         va.convergence_paths = to_long(e.value, w);
         if (va.convergence_paths < 1000) w.fail("must be >= 1000");
       }},
      {"state_dependence_n", [&](auto& e, auto& w) {
         va.state_dependence_n = to_long(e.value, w);
         if (va.state_dependence_n < 2) w.fail("must be >= 2");
       }},
      {"state_dependence_h", [&](auto& e, auto& w) { va.state_dependence_h = to_double(e.value, w); require_positive(va.state_dependence_h, w); }},
  };
  handlers["output"] = {{"dir", [&](auto& e, auto&) { cfg.output_dir = e.value; }}};
  // Written into manifests; informational only.
  handlers["run"] = {{"command", [](auto&, auto&) {}}, {"library_version", [](auto&, auto&) {}}};

  for (const auto& sec : sections) {
    if (sec.name == "symbol") {
      symbol_line = sec.line;
      for (const auto& e : sec.entries) {
        if (e.key == "family") family_entry = &e;
        else symbol_params.push_back(&e);
      }
      continue;
    }
    if (sec.name == "validate") validate_line = sec.line;
    const auto it = handlers.find(sec.name);
    if (it == handlers.end()) {
      throw ConfigError(source + ":" + std::to_string(sec.line) + ": unknown section [" + sec.name + "]");
    }
    for (const auto& e : sec.entries) {
      const Where w{source, sec.name, e};
      const auto h = it->second.find(e.key);
      if (h == it->second.end()) w.fail("unknown key");
      h->second(e, w);
    }
  }

  // Symbol: family first, then its parameters with defaults filled in.
  const std::string symbol_sec = "symbol";
  if (family_entry) {
    cfg.symbol.family = lower(family_entry->value);
    if (!find_family(cfg.symbol.family)) {
      std::string names;
      for (const auto& n : family_names()) names += (names.empty() ? "" : ", ") + n;
      Where{source, symbol_sec, *family_entry}.fail("unknown family '" + family_entry->value +
                                                    "' (" + names + ")");
    }
  }
  const FamilySpec& fam = *find_family(cfg.symbol.family);
  for (const IniEntry* e : symbol_params) {
    const Where w{source, symbol_sec, *e};
    if (e->key == "killing") {
      const double k = to_double(e->value, w);
      if (k < 0.0) w.fail("must be >= 0");
      cfg.symbol.params["killing"] = format_double(k);
      continue;
    }
    const auto spec = std::find_if(fam.params.begin(), fam.params.end(),
                                   [&](const ParamSpec& p) { return e->key == p.key; });
    if (spec == fam.params.end()) w.fail("not a parameter of family " + cfg.symbol.family);
    cfg.symbol.params[e->key] = canonical(spec->kind, e->value, w);
  }
  for (const auto& p : fam.params) {
    if (cfg.symbol.params.count(p.key)) continue;
    if (!p.fallback) {
      throw ConfigError(source + ":" + std::to_string(symbol_line) + ": [symbol] missing parameter '" +
                        p.key + "' for family " + cfg.symbol.family);
    }
    cfg.symbol.params[p.key] = p.fallback;
  }
  if (!cfg.symbol.params.count("killing")) cfg.symbol.params["killing"] = "0";

  int dim = 1;
  try {
    dim = build_symbol(cfg.symbol).dim();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(source + ":" + std::to_string(symbol_line) + ": [symbol] " + e.what());
  }

  if (sim.h && sim.T) throw ConfigError(source + ": [simulation] give either h or T, not both");
  if (sim.T && !sim.n_steps) throw ConfigError(source + ": [simulation] T requires n_steps");
  if (!sim.x0.empty() && static_cast<int>(sim.x0.size()) != dim) {
    throw ConfigError(source + ": [simulation] x0 has " + std::to_string(sim.x0.size()) +
                      " components, the symbol has dimension " + std::to_string(dim));
  }
  for (const auto& s : va.states) {
    if (static_cast<int>(s.size()) != dim) {
      throw ConfigError(source + ": [validate] every state needs " + std::to_string(dim) + " components");
    }
  }
  if (ck.x_min > ck.x_max) throw ConfigError(source + ": [check] x_min exceeds x_max");
  if (ck.xi_min >= ck.xi_max) throw ConfigError(source + ": [check] xi_min must be below xi_max");

  const auto has_test = [&](const char* t) {
    return std::find(va.tests.begin(), va.tests.end(), t) != va.tests.end();
  };
  const std::string vline = source + ":" + std::to_string(validate_line) + ": [validate] ";
  if (has_test("convergence")) {
    const auto& hl = va.convergence_h;
    if (hl.size() < 3) throw ConfigError(vline + "convergence needs at least three convergence_h values");
    for (std::size_t k = 0; k < hl.size(); ++k) {
      if (!(hl[k] > 0.0)) throw ConfigError(vline + "convergence_h values must be positive");
      if (k && !(hl[k] < hl[k - 1])) throw ConfigError(vline + "convergence_h must be strictly decreasing");
    }
    if (!sim.T && !(sim.h && sim.n_steps)) {
      throw ConfigError(vline + "convergence needs the horizon: [simulation] T and n_steps, or h and n_steps");
    }
    const double T = sim.T ? *sim.T : *sim.h * static_cast<double>(*sim.n_steps);
    for (double h : hl) {
      const double m = T / h;
      if (std::abs(m - std::round(m)) > 1e-9 * m) {
        throw ConfigError(vline + "T / h is not an integer for h = " + format_double(h));
      }
    }
  }
  if (has_test("state_dependence") && cfg.symbol.family != "stable_like") {
    throw ConfigError(vline + "state_dependence requires family stable_like");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string to_manifest(const ExperimentConfig& cfg, const std::string& command) {
  const auto sym = build_symbol(cfg.symbol);
  std::ostringstream o;
  o << "# feller run manifest; feed back with --config to reproduce\n";
  o << "[run]\ncommand = " << command << "\nlibrary_version = " << kLibraryVersion << "\n\n";

  o << "[symbol]\nfamily = " << cfg.symbol.family << "\n";
  for (const auto& [k, v] : cfg.symbol.params) o << k << " = " << v << "\n";

  const auto& s = cfg.simulation;
  std::vector<double> x0 = s.x0;
  if (x0.empty()) x0.assign(sym.dim(), 0.0);
  o << "\n[simulation]\nx0 = " << join(x0) << "\n";
  if (s.h) o << "h = " << format_double(*s.h) << "\n";
  if (s.T) o << "T = " << format_double(*s.T) << "\n";
  if (s.n_steps) o << "n_steps = " << *s.n_steps << "\n";
  o << "n_paths = " << s.n_paths << "\n";
  if (s.seed) o << "seed = " << *s.seed << "\n";

  const auto& so = cfg.sampler;
  o << "\n[sampler]\n";
  if (so.epsilon) o << "epsilon = " << format_double(*so.epsilon) << "\n";
  o << "small_jumps = " << to_string(so.small_jumps) << "\n";
  o << "gaussian_threshold = " << format_double(so.gaussian_threshold) << "\n";
  o << "max_jumps_per_step = " << format_double(so.max_jumps_per_step) << "\n";
  o << "small_jump_budget = " << format_double(so.small_jump_budget) << "\n";
  if (cfg.quantization) o << "quantization = " << format_double(*cfg.quantization) << "\n";

  const auto& c = cfg.check;
  o << "\n[check]\nx_min = " << format_double(c.x_min) << "\nx_max = " << format_double(c.x_max)
    << "\nx_points = " << c.x_points << "\nxi_min = " << format_double(c.xi_min)
    << "\nxi_max = " << format_double(c.xi_max) << "\nxi_points = " << c.xi_points
    << "\nclosed_form = " << (c.closed_form ? "true" : "false") << "\n";

  const auto& v = cfg.validate;
  o << "\n[validate]\ntests = ";
  for (std::size_t i = 0; i < v.tests.size(); ++i) o << (i ? ", " : "") << v.tests[i];
  o << "\n";
  if (!v.states.empty()) {
    o << "states = ";
    for (std::size_t i = 0; i < v.states.size(); ++i) o << (i ? "; " : "") << join(v.states[i]);
    o << "\n";
  }
  o << "n = " << v.n << "\npoints = " << v.points << "\n";
  if (v.bias) o << "bias = " << format_double(*v.bias) << "\n";
  o << "level = " << format_double(v.level) << "\n";
  if (!v.convergence_h.empty()) o << "convergence_h = " << join(v.convergence_h) << "\n";
  o << "convergence_paths = " << v.convergence_paths << "\n";
  o << "state_dependence_n = " << v.state_dependence_n << "\n";
  o << "state_dependence_h = " << format_double(v.state_dependence_h) << "\n";
  return o.str();
}

StateDependentSymbol build_symbol(const SymbolConfig& c) {
  const std::string& f = c.family;
  std::optional<StateDependentSymbol> sym;
  if (f == "brownian") {
    const long dim = std::lround(num(c, "dim"));
    if (dim < 1) throw DomainError("dim must be >= 1");
    const double var = num(c, "variance");
    if (!(var > 0.0)) throw DomainError("variance must be positive");
    sym = var == 1.0 ? brownian(static_cast<int>(dim))
                     : brownian(Matrix(var * Matrix::Identity(dim, dim)));
  } else if (f == "cauchy") {
    sym = cauchy();
  } else if (f == "symmetric_stable") {
    const long dim = std::lround(num(c, "dim"));
    if (dim < 1) throw DomainError("dim must be >= 1");
    sym = symmetric_stable(num(c, "alpha"), num(c, "scale"), static_cast<int>(dim));
  } else if (f == "compound_poisson") {
    const std::string& jumps = c.params.at("jumps");
    if (jumps == "point") {
      sym = compound_poisson_point(num(c, "rate"), to_vector(list(c, "location")));
    } else if (jumps == "normal") {
      sym = compound_poisson_normal(num(c, "rate"), num(c, "mean"), num(c, "stddev"));
    } else {
      throw DomainError("jumps must be point or normal");
    }
  } else if (f == "stable_like") {
    ClampedLinearIndex idx{num(c, "offset"), num(c, "slope"), num(c, "lower"), num(c, "upper")};
    if (!(idx.lower > 0.0 && idx.upper < 2.0 && idx.lower <= idx.upper)) {
      throw DomainError("stable_like needs 0 < lower <= upper < 2");
    }
    const double scale = num(c, "scale");
    if (!(scale > 0.0)) throw DomainError("scale must be positive");
    sym = stable_like(idx, scale, "stable_like",
                      {{"offset", idx.offset}, {"slope", idx.slope}, {"lower", idx.lower},
                       {"upper", idx.upper}, {"scale", scale}});
  } else if (f == "drift") {
    sym = pure_drift(to_vector(list(c, "drift")));
  } else if (f == "power") {
    const double a = num(c, "alpha");
    const double w = num(c, "weight");
    if (!(a > 0.0 && a < 2.0)) throw DomainError("power alpha must lie in (0, 2)");
    if (!(w > 0.0)) throw DomainError("power weight must be positive");
    auto m = JumpMeasure::generic([a, w](double y) { return w * std::pow(std::abs(y), -1.0 - a); },
                                  GenericHints{a});
    sym = levy_constant(make_triplet(Vector::Zero(1), Matrix::Zero(1, 1), std::move(m)), "power");
  } else {
    throw ConfigError("unknown family '" + f + "'");
  }
  const double k = num(c, "killing");
  if (k > 0.0) return with_killing(*sym, k);
  return *sym;
}

EngineOptions engine_options(const ExperimentConfig& cfg) {
  EngineOptions o;
  o.sampler = cfg.sampler;
  o.quantization = cfg.quantization;
  return o;
}

Vector initial_state(const ExperimentConfig& cfg, int dim) {
  if (cfg.simulation.x0.empty()) return Vector::Zero(dim);
  return to_vector(cfg.simulation.x0);
}

std::vector<std::string> family_names() {
  std::vector<std::string> out;
  for (const auto& f : families()) out.emplace_back(f.name);
  return out;
}

}  // namespace feller::cli
