#include "pmdrift/config.hpp"

#include <cmath>
#include <json.hpp>

namespace pmdrift {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError("config." + where + ": " + what);
}

double get_number(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) fail(path + "." + key, "missing");
  if (!j[key].is_number()) fail(path + "." + key, "expected a number");
  return j[key].get<double>();
}

template <typename T, std::size_t N>
std::array<T, N> get_array(const json& j, const std::string& key, const std::string& path,
                           int needed, std::array<T, N> defaults) {
  std::array<T, N> out = defaults;
  if (!j.contains(key)) return out;
  const json& a = j[key];
  if (!a.is_array() || static_cast<int>(a.size()) < needed)
    fail(path + "." + key, "expected an array with " + std::to_string(needed) + " entries");
  for (std::size_t k = 0; k < a.size() && k < N; ++k) out[k] = a[k].get<T>();
  return out;
}

ScalarSpec parse_scalar(const json& j, const std::string& path, int dim) {
  if (!j.is_object()) fail(path, "expected an object");
  ScalarSpec s;
  s.kind = j.value("kind", std::string("zero"));
  if (s.kind == "zero") {
  } else if (s.kind == "constant") {
    s.value = get_number(j, "value", path);
  } else if (s.kind == "bump") {
    s.center = get_array<double, 2>(j, "center", path, dim, {0.5, 0.5});
    s.width = get_array<double, 2>(j, "width", path, dim, {0.25, 0.25});
    s.amplitude = j.value("amplitude", 1.0);
    if (j.contains("cap")) s.cap = j["cap"].get<double>();
    for (int a = 0; a < dim; ++a)
      if (!(s.width[a] > 0.0)) fail(path + ".width", "must be positive");
  } else if (s.kind == "step") {
    s.lo = j.value("lo", 0.0);
    s.hi = j.value("hi", 1.0);
    s.pos = j.value("pos", 0.5);
    s.axis = j.value("axis", 0);
    if (s.axis < 0 || s.axis >= dim) fail(path + ".axis", "out of range");
  } else {
    fail(path + ".kind", "unknown scalar kind '" + s.kind + "'");
  }
  return s;
}

json scalar_to_json(const ScalarSpec& s, int dim) {
  json j;
  j["kind"] = s.kind;
  if (s.kind == "constant") j["value"] = s.value;
  if (s.kind == "bump") {
    j["center"] = dim == 2 ? json{s.center[0], s.center[1]} : json{s.center[0]};
    j["width"] = dim == 2 ? json{s.width[0], s.width[1]} : json{s.width[0]};
    j["amplitude"] = s.amplitude;
    if (std::isfinite(s.cap)) j["cap"] = s.cap;
  }
  if (s.kind == "step") {
    j["lo"] = s.lo;
    j["hi"] = s.hi;
    j["pos"] = s.pos;
    j["axis"] = s.axis;
  }
  return j;
}

DriftSpec parse_drift(const json& j, int dim) {
  if (!j.is_object()) fail("drift", "expected an object");
  DriftSpec d;
  d.kind = j.value("kind", std::string("zero"));
  if (d.kind == "zero") {
  } else if (d.kind == "constant") {
    d.value = get_array<double, 2>(j, "value", "drift", dim, {0.0, 0.0});
  } else if (d.kind == "linear") {
    d.scale = get_array<double, 2>(j, "scale", "drift", dim, {1.0, 1.0});
    d.center = get_array<double, 2>(j, "center", "drift", dim, {0.0, 0.0});
  } else if (d.kind == "rotational") {
    if (dim != 2) fail("drift.kind", "rotational drift needs a 2D grid");
    d.strength = j.value("strength", 1.0);
    d.center = get_array<double, 2>(j, "center", "drift", dim, {0.5, 0.5});
  } else {
    fail("drift.kind", "unknown drift kind '" + d.kind + "'");
  }
  return d;
}

json drift_to_json(const DriftSpec& d, int dim) {
  json j;
  j["kind"] = d.kind;
  auto arr = [dim](const std::array<double, 2>& a) {
    return dim == 2 ? json{a[0], a[1]} : json{a[0]};
  };
  if (d.kind == "constant") j["value"] = arr(d.value);
  if (d.kind == "linear") {
    j["scale"] = arr(d.scale);
    j["center"] = arr(d.center);
  }
  if (d.kind == "rotational") {
    j["strength"] = d.strength;
    j["center"] = arr(d.center);
  }
  return j;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  RunConfig cfg;
  try {
    if (!j.contains("grid")) fail("grid", "missing");
    const json& gj = j["grid"];
    cfg.grid.dim = gj.value("dim", 1);
    if (cfg.grid.dim != 1 && cfg.grid.dim != 2) fail("grid.dim", "must be 1 or 2");
    cfg.grid.cells = get_array<int, 2>(gj, "cells", "grid", cfg.grid.dim, {64, 64});
    for (int a = 0; a < cfg.grid.dim; ++a)
      if (cfg.grid.cells[a] < 3) fail("grid.cells", "need at least 3 cells per axis");
    if (gj.contains("extents")) {
      const json& e = gj["extents"];
      if (!e.is_array() || static_cast<int>(e.size()) < cfg.grid.dim)
        fail("grid.extents", "expected one [lo, hi] pair per axis");
      for (int a = 0; a < cfg.grid.dim; ++a) {
        cfg.grid.extents[a] = {e[a][0].get<double>(), e[a][1].get<double>()};
        if (!(cfg.grid.extents[a][1] > cfg.grid.extents[a][0]))
          fail("grid.extents", "upper bound must exceed lower bound");
      }
    }
    if (cfg.grid.dim == 1) {
      cfg.grid.cells[1] = 1;
      cfg.grid.extents[1] = {0.0, 1.0};
    }

    cfg.drift = parse_drift(j.value("drift", json::object()), cfg.grid.dim);

    if (j.contains("m")) {
      cfg.m = get_number(j, "m", "");
      if (!(*cfg.m >= 1.0)) fail("m", "must be >= 1");
    }
    if (j.contains("m_list")) {
      for (const auto& v : j["m_list"]) {
        const double m = v.get<double>();
        if (!(m >= 1.0)) fail("m_list", "entries must be >= 1");
        if (!cfg.m_list.empty() && m <= cfg.m_list.back())
          fail("m_list", "must be strictly increasing");
        cfg.m_list.push_back(m);
      }
    }
    if (j.contains("lambda")) {
      cfg.lambda = get_number(j, "lambda", "");
      if (!(*cfg.lambda > 0.0)) fail("lambda", "must be positive");
    }
    if (j.contains("horizon")) {
      cfg.horizon = get_number(j, "horizon", "");
      if (!(*cfg.horizon > 0.0)) fail("horizon", "must be positive");
    }
    if (j.contains("steps")) {
      cfg.steps = j["steps"].get<int>();
      if (*cfg.steps < 1) fail("steps", "must be at least 1");
    }
    cfg.initial = parse_scalar(j.value("initial", json{{"kind", "zero"}}), "initial",
                               cfg.grid.dim);
    if (j.contains("source")) cfg.source = parse_scalar(j["source"], "source", cfg.grid.dim);
    if (j.contains("source2"))
      cfg.source2 = parse_scalar(j["source2"], "source2", cfg.grid.dim);
    if (j.contains("reaction")) {
      const json& rj = j["reaction"];
      ReactionConfig rc;
      rc.kind = rj.value("kind", std::string("constant"));
      if (rc.kind == "linear") {
        rc.coef = get_number(rj, "coef", "reaction");
      } else if (rc.kind == "constant") {
        rc.source = parse_scalar(rj.value("source", json{{"kind", "zero"}}),
                                 "reaction.source", cfg.grid.dim);
      } else if (rc.kind != "quadratic") {
        fail("reaction.kind", "unknown reaction kind '" + rc.kind + "'");
      }
      cfg.reaction = rc;
    }
    if (cfg.reaction && cfg.source)
      fail("reaction", "give either a reaction or a plain source, not both");
    cfg.window_h = j.value("window_h", 0.0);
    if (cfg.window_h < 0.0) fail("window_h", "must be nonnegative");
    if (j.contains("tolerances")) {
      const json& t = j["tolerances"];
      if (t.contains("newton_tol")) cfg.tol.newton_tol = t["newton_tol"].get<double>();
      if (t.contains("max_newton")) cfg.tol.max_newton = t["max_newton"].get<int>();
      if (t.contains("eps_floor")) cfg.tol.eps_floor = t["eps_floor"].get<double>();
      if (t.contains("delta_floor")) cfg.tol.delta_floor = t["delta_floor"].get<double>();
      if (t.contains("lin_tol")) cfg.tol.lin_tol = t["lin_tol"].get<double>();
      if (t.contains("check_tol")) cfg.tol.check_tol = t["check_tol"].get<double>();
    }
    cfg.seed = j.value("seed", 0ULL);
    cfg.out_dir = j.value("out_dir", std::string());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  json j;
  {
    json gj;
    gj["dim"] = cfg.grid.dim;
    gj["cells"] = cfg.grid.dim == 2 ? json{cfg.grid.cells[0], cfg.grid.cells[1]}
                                    : json{cfg.grid.cells[0]};
    json ext = json::array();
    for (int a = 0; a < cfg.grid.dim; ++a)
      ext.push_back({cfg.grid.extents[a][0], cfg.grid.extents[a][1]});
    gj["extents"] = ext;
    j["grid"] = gj;
  }
  j["drift"] = drift_to_json(cfg.drift, cfg.grid.dim);
  if (cfg.m) j["m"] = *cfg.m;
  if (!cfg.m_list.empty()) j["m_list"] = cfg.m_list;
  if (cfg.lambda) j["lambda"] = *cfg.lambda;
  if (cfg.horizon) j["horizon"] = *cfg.horizon;
  if (cfg.steps) j["steps"] = *cfg.steps;
  j["initial"] = scalar_to_json(cfg.initial, cfg.grid.dim);
  if (cfg.source) j["source"] = scalar_to_json(*cfg.source, cfg.grid.dim);
  if (cfg.source2) j["source2"] = scalar_to_json(*cfg.source2, cfg.grid.dim);
  if (cfg.reaction) {
    json rj;
    rj["kind"] = cfg.reaction->kind;
    if (cfg.reaction->kind == "linear") rj["coef"] = cfg.reaction->coef;
    if (cfg.reaction->kind == "constant")
      rj["source"] = scalar_to_json(cfg.reaction->source, cfg.grid.dim);
    j["reaction"] = rj;
  }
  if (cfg.window_h > 0.0) j["window_h"] = cfg.window_h;
  {
    json t;
    if (cfg.tol.newton_tol) t["newton_tol"] = *cfg.tol.newton_tol;
    if (cfg.tol.max_newton) t["max_newton"] = *cfg.tol.max_newton;
    if (cfg.tol.eps_floor) t["eps_floor"] = *cfg.tol.eps_floor;
    if (cfg.tol.delta_floor) t["delta_floor"] = *cfg.tol.delta_floor;
    if (cfg.tol.lin_tol) t["lin_tol"] = *cfg.tol.lin_tol;
    if (cfg.tol.check_tol) t["check_tol"] = *cfg.tol.check_tol;
    if (!t.empty()) j["tolerances"] = t;
  }
  if (cfg.seed != 0) j["seed"] = cfg.seed;
  if (!cfg.out_dir.empty()) j["out_dir"] = cfg.out_dir;
  return j.dump(2);
}

std::string config_digest(const RunConfig& cfg) {
  const std::string canon = serialize_config(cfg);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

Grid make_grid(const GridSpec& spec) {
  return Grid(spec.dim, spec.cells, spec.extents);
}

VectorFieldSpec make_drift(const DriftSpec& spec, const Grid& grid) {
  if (spec.kind == "zero") return VectorFieldSpec::zero(grid);
  if (spec.kind == "constant") {
    const double vx = spec.value[0], vy = spec.value[1];
    return VectorFieldSpec::sample(
        grid, [vx](double, double) { return vx; }, [vy](double, double) { return vy; },
        [](double, double) { return 0.0; });
  }
  if (spec.kind == "linear") {
    const double ax = spec.scale[0], cx = spec.center[0];
    const double ay = spec.scale[1], cy = spec.center[1];
    const double div = grid.dim() == 2 ? ax + ay : ax;
    return VectorFieldSpec::sample(
        grid, [ax, cx](double x, double) { return ax * (x - cx); },
        [ay, cy](double, double y) { return ay * (y - cy); },
        [div](double, double) { return div; });
  }
  if (spec.kind == "rotational") {
    const double s = spec.strength;
    const double cx = spec.center[0], cy = spec.center[1];
    return VectorFieldSpec::sample(
        grid, [s, cy](double, double y) { return -s * (y - cy); },
        [s, cx](double x, double) { return s * (x - cx); },
        [](double, double) { return 0.0; });
  }
  throw ConfigError("drift kind '" + spec.kind + "' not realizable");
}

Field make_scalar(const ScalarSpec& spec, const Grid& grid) {
  Field f = grid.make_field();
  if (spec.kind == "zero") return f;
  if (spec.kind == "constant") {
    for (auto& x : f.values()) x = spec.value;
    return f;
  }
  if (spec.kind == "bump") {
    for (std::size_t c = 0; c < f.size(); ++c) {
      const auto x = grid.cell_center(c);
      double val = spec.amplitude;
      for (int a = 0; a < grid.dim(); ++a) {
        const double r = std::abs(x[a] - spec.center[a]) / spec.width[a];
        if (r >= 1.0) {
          val = 0.0;
          break;
        }
        const double s = std::cos(0.5 * M_PI * r);
        val *= s * s;
      }
      f[c] = std::min(val, spec.cap);
    }
    return f;
  }
  if (spec.kind == "step") {
    for (std::size_t c = 0; c < f.size(); ++c)
      f[c] = grid.cell_center(c)[spec.axis] < spec.pos ? spec.lo : spec.hi;
    return f;
  }
  throw ConfigError("scalar kind '" + spec.kind + "' not realizable");
}

ReactionSpec make_reaction(const ReactionConfig& spec, const Grid& grid) {
  if (spec.kind == "linear") return ReactionSpec::linear(spec.coef);
  if (spec.kind == "quadratic") return ReactionSpec::quadratic();
  if (spec.kind == "constant")
    return ReactionSpec::constant_source(grid, make_scalar(spec.source, grid));
  throw ConfigError("reaction kind '" + spec.kind + "' not realizable");
}

SolverConfig make_solver_config(const ToleranceOverrides& tol) {
  SolverConfig cfg;
  if (tol.newton_tol) cfg.tol = *tol.newton_tol;
  if (tol.max_newton) cfg.max_newton = *tol.max_newton;
  if (tol.eps_floor) cfg.eps_floor = *tol.eps_floor;
  if (tol.delta_floor) cfg.delta_floor = *tol.delta_floor;
  if (tol.lin_tol) cfg.lin_tol = *tol.lin_tol;
  return cfg;
}

double check_tolerance(const ToleranceOverrides& tol) {
  return tol.check_tol.value_or(1e-8);
}

}  // namespace pmdrift
