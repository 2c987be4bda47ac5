#include <charconv>
#include <set>

#include <json.hpp>

#include "finiteband/error.hpp"
#include "finiteband/io.hpp"
#include "finiteband_cli/cli.hpp"

namespace finiteband::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::ConfigError, path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

long integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<long>();
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Grid grid(const json& v, const std::string& path, Grid dflt) {
  reject_unknown(v, path, {"start", "stop", "points"});
  if (v.contains("start")) dflt.start = number(v["start"], path + ".start");
  if (v.contains("stop")) dflt.stop = number(v["stop"], path + ".stop");
  if (v.contains("points")) dflt.points = static_cast<int>(integer(v["points"], path + ".points"));
  if (dflt.points < 5) fail(path + ".points", "need at least 5 points");
  if (!(dflt.stop > dflt.start)) fail(path + ".stop", "must exceed start");
  return dflt;
}

}  // namespace

std::vector<double> Grid::values() const {
  std::vector<double> v;
  for (int i = 0; i < points; ++i) v.push_back(start + (stop - start) * i / static_cast<double>(points - 1));
  return v;
}

std::map<std::string, double> default_tolerances() {
  return {{"hermitian", 1e-12}, {"ledger", 1e-10},        {"riccati", 1e-7},  {"skdv", 1e-7},
          {"algebraic", 1e-9},  {"commutator", 1e-10},    {"green", 1e-10},   {"reflectionless", 1e-6},
          {"xi", 1e-4},         {"floquet", 1e-6},        {"flow", 1e-7}};
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& tol_overrides,
                       std::optional<std::uint64_t> seed_override) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail("<root>", std::string("invalid JSON: ") + e.what());
  }
  reject_unknown(doc, "", {"schema", "bands", "m", "seed", "spec", "x_grid", "lambda_grid", "eta", "z_probes",
                           "tolerances"});
  if (!doc.contains("schema") || doc["schema"] != "finiteband/1") fail("schema", "must be \"finiteband/1\"");
  if (!doc.contains("bands")) fail("bands", "missing");
  if (!doc.contains("m")) fail("m", "missing");

  RunConfig cfg;
  try {
    cfg.bands = BandStructure(numbers(doc["bands"], "bands"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail("bands", e.what());
  }
  if (cfg.n() > 1) fail("bands", "closed-form potentials exist for at most one gap");
  const long m = integer(doc["m"], "m");
  if (m < 1 || m > 64) fail("m", "must lie in 1..64");
  cfg.m = static_cast<std::size_t>(m);
  if (doc.contains("seed")) {
    const long s = integer(doc["seed"], "seed");
    if (s < 0) fail("seed", "must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (seed_override) cfg.seed = *seed_override;

  if (cfg.n() == 1) {
    if (!doc.contains("spec")) fail("spec", "missing (required for one gap)");
    const json& s = doc["spec"];
    reject_unknown(s, "spec", {"alphas", "U"});
    if (!s.contains("alphas")) fail("spec.alphas", "missing");
    HochstadtSpec spec;
    spec.bands = cfg.bands.edges();
    spec.alphas = numbers(s["alphas"], "spec.alphas");
    if (spec.alphas.size() != cfg.m) fail("spec.alphas", "length must equal m");
    cfg.u_source = "random:" + std::to_string(cfg.seed);
    if (s.contains("U")) {
      const json& u = s["U"];
      if (u.is_string()) {
        const std::string tag = u.get<std::string>();
        if (tag == "identity") {
          cfg.u_source = tag;
        } else if (tag.rfind("random:", 0) == 0) {
          std::uint64_t seed = 0;
          const char* b = tag.data() + 7;
          const auto [ptr, ec] = std::from_chars(b, tag.data() + tag.size(), seed);
          if (ec != std::errc() || ptr != tag.data() + tag.size() || b == ptr) fail("spec.U", "bad random seed");
          cfg.u_source = tag;
        } else {
          fail("spec.U", "string must be \"identity\" or \"random:<seed>\"");
        }
      } else {
        try {
          spec.U = matrix_from_json(u.dump());
        } catch (const Error& e) {
          fail("spec.U", e.what());
        }
        cfg.u_source = "matrix";
      }
    }
    const auto n = static_cast<Eigen::Index>(cfg.m);
    if (cfg.u_source == "identity") {
      spec.U = CMatrix::Identity(n, n);
    } else if (cfg.u_source != "matrix") {
      spec.U = random_unitary(cfg.m, std::stoull(cfg.u_source.substr(7)));
    }
    if (spec.U.rows() != n || spec.U.cols() != n) fail("spec.U", "must be m x m");
    if ((spec.U.adjoint() * spec.U - CMatrix::Identity(n, n)).norm() > 1e-10) fail("spec.U", "not unitary");
    cfg.spec = spec;
  } else if (doc.contains("spec")) {
    fail("spec", "only used for one-gap spectra");
  }

  const auto& E = cfg.bands.edges();
  double period = 1.0;
  if (cfg.n() == 1) period = curve_from_bands(cfg.bands).period();
  cfg.x_grid = grid(doc.value("x_grid", json::object()), "x_grid", {0.0, period, 257});
  cfg.lambda_grid = grid(doc.value("lambda_grid", json::object()), "lambda_grid",
                         {E.front() - 1.0, E.back() + 2.0, 201});
  if (doc.contains("eta")) {
    cfg.eta = number(doc["eta"], "eta");
    if (!(cfg.eta > 0)) fail("eta", "must be positive");
  }
  if (doc.contains("z_probes")) {
    const json& z = doc["z_probes"];
    reject_unknown(z, "z_probes", {"count", "radius"});
    if (z.contains("count")) cfg.z_probes = static_cast<int>(integer(z["count"], "z_probes.count"));
    if (z.contains("radius")) cfg.z_radius = number(z["radius"], "z_probes.radius");
    if (cfg.z_probes < 1) fail("z_probes.count", "must be positive");
    if (!(cfg.z_radius > 0)) fail("z_probes.radius", "must be positive");
  }

  cfg.tolerances = default_tolerances();
  auto set_tol = [&](const std::string& key, double v, const std::string& path) {
    if (!cfg.tolerances.count(key)) fail(path, "unknown tolerance");
    if (!(v > 0)) fail(path, "must be positive");
    cfg.tolerances[key] = v;
  };
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) fail("tolerances", "expected an object");
    for (const auto& [k, v] : t.items()) set_tol(k, number(v, "tolerances." + k), "tolerances." + k);
  }
  for (const auto& o : tol_overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) fail("--tol " + o, "expected key=value");
    const std::string key = o.substr(0, eq), val = o.substr(eq + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
    if (ec != std::errc() || ptr != val.data() + val.size()) fail("--tol " + key, "not a number");
    set_tol(key, v, "--tol " + key);
  }
  return cfg;
}

}  // namespace finiteband::cli
