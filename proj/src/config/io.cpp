#include "hmcf/config/io.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hmcf/error.hpp"

namespace hmcf::config {

using nlohmann::json;

namespace {

// Reads fields from one JSON object, remembering which keys were consumed so
// leftovers can be rejected.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError("`" + path_ + "` must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    return Reader(obj_.at(key), field(key));
  }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    seen_.insert(key);
    try {
      const json& v = obj_.at(key);
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
        out = v.get<bool>();
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0) throw ConfigError("");
        }
        out = v.get<T>();
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("");
        out = v.get<T>();
      } else {
        if (!v.is_string()) throw ConfigError("");
        out = v.get<T>();
      }
    } catch (const ConfigError&) {
      throw ConfigError("invalid `" + field(key) + "`: wrong type");
    }
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("unknown field `" + field(it.key()) + "`");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void parse_geometry(Reader g, ProblemSpec& spec) {
  if (!g.has("type")) throw ConfigError("missing field `geometry.type`");
  std::string type;
  g.get("type", type);
  auto need = [&](const char* key) {
    if (!g.has(key)) throw ConfigError("missing field `geometry." + std::string(key) + "`");
    double v = 0.0;
    g.get(key, v);
    return v;
  };
  if (type == "circle") {
    spec.kind = ProblemKind::Curve;
    spec.curve = geometry::CurveShape::circle(need("r0"));
  } else if (type == "ellipse") {
    spec.kind = ProblemKind::Curve;
    const double a = need("a");
    spec.curve = geometry::CurveShape::ellipse(a, need("b"));
  } else if (type == "sphere") {
    spec.kind = ProblemKind::Surface;
    spec.surface = geometry::SurfaceShape::sphere(need("r0"));
  } else if (type == "ellipsoid") {
    spec.kind = ProblemKind::Surface;
    const double a = need("a");
    const double b = need("b");
    spec.surface = geometry::SurfaceShape::ellipsoid(a, b, need("c"));
  } else if (type == "torus") {
    spec.kind = ProblemKind::Surface;
    const double major = need("R");
    spec.surface = geometry::SurfaceShape::torus(major, need("r"));
  } else {
    throw ConfigError("invalid `geometry.type`: unknown shape '" + type + "'");
  }
  g.finish();
}

void apply_kind_defaults(ProblemSpec& spec) {
  if (spec.is_curve()) {
    spec.network = {2, 2, 7, 50};
    spec.t_train = 1.1;
    spec.t_display = 1.2;
  } else {
    spec.network = {3, 3, 6, 100};
    spec.t_train = 0.7;
    spec.t_display = 0.8;
  }
}

json geometry_json(const ProblemSpec& spec) {
  if (spec.is_curve()) {
    if (spec.curve.kind == geometry::CurveShape::Kind::Circle) return {{"type", "circle"}, {"r0", spec.curve.a}};
    return {{"type", "ellipse"}, {"a", spec.curve.a}, {"b", spec.curve.b}};
  }
  const auto& s = spec.surface;
  switch (s.kind) {
    case geometry::SurfaceShape::Kind::Sphere:
      return {{"type", "sphere"}, {"r0", s.a}};
    case geometry::SurfaceShape::Kind::Ellipsoid:
      return {{"type", "ellipsoid"}, {"a", s.a}, {"b", s.b}, {"c", s.c}};
    case geometry::SurfaceShape::Kind::Torus:
      break;
  }
  return {{"type", "torus"}, {"R", s.major}, {"r", s.minor}};
}

}  // namespace

ProblemSpec parse_problem(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Reader top(doc, "");
  ProblemSpec spec;
  if (!top.has("geometry")) throw ConfigError("missing required field `geometry`");
  parse_geometry(top.child("geometry"), spec);
  apply_kind_defaults(spec);

  if (top.has("velocity")) {
    Reader v = top.child("velocity");
    std::string profile = spec.velocity.name();
    v.get("profile", profile);
    if (profile == "constant") {
      spec.velocity.kind = geometry::VelocityProfile::Kind::Constant;
    } else if (profile == "sin_u") {
      spec.velocity.kind = geometry::VelocityProfile::Kind::SinU;
    } else if (profile == "cos_u") {
      spec.velocity.kind = geometry::VelocityProfile::Kind::CosU;
    } else {
      throw ConfigError("invalid `velocity.profile`: expected constant, sin_u or cos_u");
    }
    v.get("r1", spec.velocity.r1);
    v.finish();
  }
  top.get("beta", spec.beta);
  if (top.has("time")) {
    Reader t = top.child("time");
    t.get("train", spec.t_train);
    if (!t.has("display")) spec.t_display = std::max(spec.t_display, spec.t_train);
    t.get("display", spec.t_display);
    t.finish();
  }
  if (top.has("network")) {
    Reader n = top.child("network");
    n.get("hidden_layers", spec.network.hidden_layers);
    n.get("hidden_width", spec.network.hidden_width);
    n.finish();
  }
  if (top.has("sampling")) {
    Reader s = top.child("sampling");
    s.get("n_f", spec.sampling.n_f);
    s.get("n_0", spec.sampling.n_0);
    s.get("n_b", spec.sampling.n_b);
    spec.sampling.n_p = spec.sampling.n_b;
    s.get("n_p", spec.sampling.n_p);
    s.get("pole_delta", spec.sampling.pole_delta);
    s.get("pole_ring", spec.sampling.pole_ring);
    s.finish();
  } else {
    spec.sampling.n_p = spec.sampling.n_b;
  }
  if (top.has("schedule")) {
    Reader s = top.child("schedule");
    if (spec.is_curve()) {
      auto& c = spec.curve_schedule;
      s.get("adam1_steps", c.adam1_steps);
      s.get("adam1_lr", c.adam1_lr);
      s.get("adam2_steps", c.adam2_steps);
      s.get("adam2_lr", c.adam2_lr);
      s.get("lbfgs_iters", c.lbfgs_iters);
      s.get("warmup_steps", c.warmup_steps);
      s.get("warmup_weight", c.warmup_weight);
    } else {
      auto& c = spec.surface_schedule;
      s.get("adam_steps", c.adam_steps);
      s.get("max_lr", c.max_lr);
      s.get("warmup_fraction", c.warmup_fraction);
      s.get("div_factor", c.div_factor);
      s.get("final_div_factor", c.final_div_factor);
      s.get("clip", c.clip);
      s.get("tier1_end", c.tier1_end);
      s.get("tier2_end", c.tier2_end);
      s.get("tier_weight", c.tier_weight);
      s.get("tier_decay", c.tier_decay);
      s.get("lbfgs_iters", c.lbfgs_iters);
    }
    s.finish();
  }
  if (top.has("adam")) {
    Reader a = top.child("adam");
    a.get("beta1", spec.adam.beta1);
    a.get("beta2", spec.adam.beta2);
    a.get("eps", spec.adam.eps);
    a.finish();
  }
  if (top.has("lbfgs")) {
    Reader l = top.child("lbfgs");
    l.get("history", spec.lbfgs.history);
    l.get("initial_step", spec.lbfgs.initial_step);
    l.get("g_tol", spec.lbfgs.g_tol);
    l.get("max_evals", spec.lbfgs.max_evals);
    l.get("c1", spec.lbfgs.c1);
    l.get("c2", spec.lbfgs.c2);
    l.finish();
  }
  if (top.has("validation")) {
    Reader v = top.child("validation");
    v.get("interval", spec.validation.interval);
    v.get("points", spec.validation.points);
    v.finish();
  }
  if (top.has("evaluation")) {
    Reader e = top.child("evaluation");
    e.get("time_samples", spec.evaluation.time_samples);
    e.get("curve_samples", spec.evaluation.curve_samples);
    e.get("surface_u1_samples", spec.evaluation.surface_u1_samples);
    e.get("surface_u2_samples", spec.evaluation.surface_u2_samples);
    e.get("snapshot_times", spec.evaluation.snapshot_times);
    e.finish();
  }
  if (top.has("seeds")) {
    Reader s = top.child("seeds");
    s.get("init", spec.init_seed);
    s.get("sample", spec.sample_seed);
    s.finish();
  }
  if (top.has("tolerances")) {
    Reader t = top.child("tolerances");
    t.get("tangent_eps", spec.residual.tangent_eps);
    t.get("metric_eps", spec.residual.metric_eps);
    t.finish();
  }
  if (top.has("flags")) {
    Reader f = top.child("flags");
    f.get("tangential_sign", spec.residual.tangential_sign);
    f.get("antipodal", spec.antipodal);
    f.get("normalize_inputs", spec.normalize_inputs);
    std::string smooth = spec.pole_smoothness == PoleSmoothness::Meridian ? "meridian" : "literal";
    f.get("pole_smoothness", smooth);
    if (smooth == "meridian") {
      spec.pole_smoothness = PoleSmoothness::Meridian;
    } else if (smooth == "literal") {
      spec.pole_smoothness = PoleSmoothness::Literal;
    } else {
      throw ConfigError("invalid `flags.pole_smoothness`: expected meridian or literal");
    }
    f.finish();
  }
  top.get("output_dir", spec.output_dir);
  if (top.has("run")) top.raw("run");
  top.finish();

  spec.validate();
  return spec;
}

ProblemSpec load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

std::string dump_problem(const ProblemSpec& spec, int indent) {
  json j;
  j["geometry"] = geometry_json(spec);
  j["velocity"] = {{"profile", spec.velocity.name()}, {"r1", spec.velocity.r1}};
  j["beta"] = spec.beta;
  j["time"] = {{"train", spec.t_train}, {"display", spec.t_display}};
  j["network"] = {{"hidden_layers", spec.network.hidden_layers}, {"hidden_width", spec.network.hidden_width}};
  j["sampling"] = {{"n_f", spec.sampling.n_f},
                   {"n_0", spec.sampling.n_0},
                   {"n_b", spec.sampling.n_b},
                   {"n_p", spec.sampling.n_p},
                   {"pole_delta", spec.sampling.pole_delta},
                   {"pole_ring", spec.sampling.pole_ring}};
  if (spec.is_curve()) {
    const auto& c = spec.curve_schedule;
    j["schedule"] = {{"adam1_steps", c.adam1_steps}, {"adam1_lr", c.adam1_lr},       {"adam2_steps", c.adam2_steps},
                     {"adam2_lr", c.adam2_lr},       {"lbfgs_iters", c.lbfgs_iters}, {"warmup_steps", c.warmup_steps},
                     {"warmup_weight", c.warmup_weight}};
  } else {
    const auto& c = spec.surface_schedule;
    j["schedule"] = {{"adam_steps", c.adam_steps},
                     {"max_lr", c.max_lr},
                     {"warmup_fraction", c.warmup_fraction},
                     {"div_factor", c.div_factor},
                     {"final_div_factor", c.final_div_factor},
                     {"clip", c.clip},
                     {"tier1_end", c.tier1_end},
                     {"tier2_end", c.tier2_end},
                     {"tier_weight", c.tier_weight},
                     {"tier_decay", c.tier_decay},
                     {"lbfgs_iters", c.lbfgs_iters}};
  }
  j["adam"] = {{"beta1", spec.adam.beta1}, {"beta2", spec.adam.beta2}, {"eps", spec.adam.eps}};
  j["lbfgs"] = {{"history", spec.lbfgs.history},     {"initial_step", spec.lbfgs.initial_step},
                {"g_tol", spec.lbfgs.g_tol},         {"max_evals", spec.lbfgs.max_evals},
                {"c1", spec.lbfgs.c1},               {"c2", spec.lbfgs.c2}};
  j["validation"] = {{"interval", spec.validation.interval}, {"points", spec.validation.points}};
  j["evaluation"] = {{"time_samples", spec.evaluation.time_samples},
                     {"curve_samples", spec.evaluation.curve_samples},
                     {"surface_u1_samples", spec.evaluation.surface_u1_samples},
                     {"surface_u2_samples", spec.evaluation.surface_u2_samples},
                     {"snapshot_times", spec.evaluation.snapshot_times}};
  j["seeds"] = {{"init", spec.init_seed}, {"sample", spec.sample_seed}};
  j["tolerances"] = {{"tangent_eps", spec.residual.tangent_eps}, {"metric_eps", spec.residual.metric_eps}};
  j["flags"] = {{"tangential_sign", spec.residual.tangential_sign},
                {"antipodal", spec.antipodal},
                {"normalize_inputs", spec.normalize_inputs},
                {"pole_smoothness", spec.pole_smoothness == PoleSmoothness::Meridian ? "meridian" : "literal"}};
  j["output_dir"] = spec.output_dir;
  return j.dump(indent);
}

std::filesystem::path resolve_output_dir(const ProblemSpec& spec) {
  std::filesystem::path dir(spec.output_dir);
  if (dir.is_relative()) {
    if (const char* root = std::getenv("HMCF_OUTPUT_ROOT"); root != nullptr && *root != '\0') {
      return std::filesystem::path(root) / dir;
    }
  }
  return dir;
}

}  // namespace hmcf::config
