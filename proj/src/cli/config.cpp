#include "robin/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace robin::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : obj.items()) {
    (void)v;
    if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; })) {
      throw ConfigError(join(path, k), "unknown field");
    }
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(join(path, key), "missing required field");
  return *it;
}

double positive(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError(path, "must be positive and finite");
  return x;
}

DomainSpec parse_domain(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const auto& type = require(j, path, "type");
  if (!type.is_string()) throw ConfigError(join(path, "type"), "expected a string");
  const auto t = type.get<std::string>();
  DomainSpec d;
  if (t == "interval") {
    allow_keys(j, path, {"type", "length"});
    d = Interval{j.contains("length") ? positive(j["length"], join(path, "length")) : 1.0};
  } else if (t == "rectangle") {
    allow_keys(j, path, {"type", "l", "L"});
    d = Rectangle{positive(require(j, path, "l"), join(path, "l")), positive(require(j, path, "L"), join(path, "L"))};
  } else if (t == "disk") {
    allow_keys(j, path, {"type", "R"});
    d = Disk{positive(require(j, path, "R"), join(path, "R"))};
  } else if (t == "polygon") {
    allow_keys(j, path, {"type", "vertices"});
    const auto& vs = require(j, path, "vertices");
    const auto vpath = join(path, "vertices");
    if (!vs.is_array()) throw ConfigError(vpath, "expected an array of [x, y] pairs");
    Polygon p;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const auto& v = vs[i];
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(index_path(vpath, i), "expected [x, y]");
      }
      p.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    d = p;
  } else {
    throw ConfigError(join(path, "type"), "unknown domain type '" + t + "' (interval, rectangle, disk, polygon)");
  }
  try {
    validate_domain(d);
  } catch (const GeometryError& e) {
    throw ConfigError(path, e.what());
  }
  return d;
}

std::vector<double> parse_alpha_grid(const json& j, const std::string& path) {
  std::vector<double> grid;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) grid.push_back(positive(j[i], index_path(path, i)));
  } else if (j.is_object()) {
    allow_keys(j, path, {"start", "factor", "count"});
    const double start = positive(require(j, path, "start"), join(path, "start"));
    const double factor = positive(require(j, path, "factor"), join(path, "factor"));
    const auto& c = require(j, path, "count");
    if (!c.is_number_integer() || c.get<long long>() < 1 || c.get<long long>() > 1000) {
      throw ConfigError(join(path, "count"), "expected an integer in [1, 1000]");
    }
    if (!(factor > 1.0)) throw ConfigError(join(path, "factor"), "must exceed 1");
    double a = start;
    for (long long i = 0; i < c.get<long long>(); ++i, a *= factor) grid.push_back(a);
  } else {
    throw ConfigError(path, "expected a list of alphas or {start, factor, count}");
  }
  if (grid.empty()) throw ConfigError(path, "alpha grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ConfigError(index_path(path, i), "alpha grid must be strictly increasing");
  }
  return grid;
}

bool check_allowed(const std::string& id, Backend b, const DomainSpec& d, std::string& why) {
  const bool rect = std::holds_alternative<Rectangle>(d);
  if ((id == "torsion_bounds" || id == "monotonicity" || id == "omega_rho") && b == Backend::separable) {
    why = "needs a torsion solver (backend exact1d or fem)";
    return false;
  }
  if (id == "eigenfunctions" && b != Backend::fem) {
    why = "needs discrete eigenfunctions (backend fem)";
    return false;
  }
  if (id == "splitting" && !rect) {
    why = "is defined for rectangle domains";
    return false;
  }
  return true;
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::exact1d:
      return "exact1d";
    case Backend::separable:
      return "separable";
    case Backend::fem:
      return "fem";
  }
  return "?";
}

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> ids = {"spectrum",  "torsion_bounds", "monotonicity", "expansion",
                                               "eigenfunctions", "omega_rho", "splitting",    "rates"};
  return ids;
}

bool RunConfig::has_check(const std::string& id) const {
  return std::find(checks.begin(), checks.end(), id) != checks.end();
}

bool RunConfig::outside_window(double alpha) const {
  return backend == Backend::fem && mesh_h && alpha > 0.1 / *mesh_h;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("", "expected a JSON object");
  allow_keys(j, "", {"domain", "backend", "mesh_h", "alpha_grid", "clusters", "checks", "output_dir", "seed"});
  RunConfig c;
  c.domain = parse_domain(require(j, "", "domain"), "domain");

  const auto& b = require(j, "", "backend");
  if (!b.is_string()) throw ConfigError("backend", "expected a string");
  const auto bs = b.get<std::string>();
  if (bs == "exact1d") {
    c.backend = Backend::exact1d;
  } else if (bs == "separable") {
    c.backend = Backend::separable;
  } else if (bs == "fem") {
    c.backend = Backend::fem;
  } else {
    throw ConfigError("backend", "unknown backend '" + bs + "' (exact1d, separable, fem)");
  }
  const bool interval = std::holds_alternative<Interval>(c.domain);
  if (c.backend == Backend::exact1d && !interval) throw ConfigError("backend", "exact1d needs an interval domain");
  if (c.backend == Backend::exact1d && std::get<Interval>(c.domain).length != 1.0) {
    throw ConfigError("domain.length", "exact1d works on the unit interval");
  }
  if (c.backend == Backend::separable && !std::holds_alternative<Rectangle>(c.domain) &&
      !std::holds_alternative<Disk>(c.domain)) {
    throw ConfigError("backend", "separable needs a rectangle or disk domain");
  }
  if (c.backend == Backend::fem && interval) throw ConfigError("backend", "fem cannot mesh an interval domain");

  if (j.contains("mesh_h")) c.mesh_h = positive(j["mesh_h"], "mesh_h");
  if (c.backend == Backend::fem && !c.mesh_h) throw ConfigError("mesh_h", "required by backend fem");

  c.alpha_grid = parse_alpha_grid(require(j, "", "alpha_grid"), "alpha_grid");

  if (j.contains("clusters")) {
    const auto& cl = j["clusters"];
    if (!cl.is_array() || cl.empty()) throw ConfigError("clusters", "expected a nonempty list of indices");
    for (std::size_t i = 0; i < cl.size(); ++i) {
      if (!cl[i].is_number_integer() || cl[i].get<long long>() < 1 || cl[i].get<long long>() > 50) {
        throw ConfigError(index_path("clusters", i), "expected an integer index in [1, 50]");
      }
      c.clusters.push_back(cl[i].get<int>());
    }
    std::sort(c.clusters.begin(), c.clusters.end());
    c.clusters.erase(std::unique(c.clusters.begin(), c.clusters.end()), c.clusters.end());
  } else {
    c.clusters = {1};
  }

  const auto& ch = require(j, "", "checks");
  if (!ch.is_array() || ch.empty()) throw ConfigError("checks", "expected a nonempty list of check ids");
  std::set<std::string> wanted;
  for (std::size_t i = 0; i < ch.size(); ++i) {
    if (!ch[i].is_string()) throw ConfigError(index_path("checks", i), "expected a string");
    const auto id = ch[i].get<std::string>();
    const auto& ids = known_checks();
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
      std::string list;
      for (const auto& k : ids) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError(index_path("checks", i), "unknown check '" + id + "' (valid: " + list + ")");
    }
    std::string why;
    if (!check_allowed(id, c.backend, c.domain, why)) {
      throw ConfigError(index_path("checks", i), "check '" + id + "' " + why);
    }
    wanted.insert(id);
  }
  for (const auto& id : known_checks()) {
    if (wanted.count(id)) c.checks.push_back(id);
  }

  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string() || j["output_dir"].get<std::string>().empty()) {
      throw ConfigError("output_dir", "expected a nonempty path string");
    }
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("seed")) {
    const auto& s = j["seed"];
    if (!s.is_number_integer() || s.get<long long>() < 0 || s.get<long long>() > 0xffffffffLL) {
      throw ConfigError("seed", "expected an integer in [0, 2^32)");
    }
    c.seed = static_cast<std::uint32_t>(s.get<long long>());
  }

  c.source = j;
  c.source.erase("output_dir");  // where results go does not change them
  c.source["seed"] = c.seed;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

std::uint64_t config_hash(const RunConfig& config) {
  // json objects keep keys sorted, so dump() is canonical.
  const std::string text = config.source.dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash_hex(const RunConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(config)));
  return buf;
}

}  // namespace robin::cli
