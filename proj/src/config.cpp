#include "hgcl/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hgcl/autodiff.hpp"
#include "hgcl/errors.hpp"
#include "hgcl/rng.hpp"

namespace hgcl {

using nlohmann::json;

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::Full: return "full";
    case Variant::TopoOnly: return "topo";
    case Variant::AttrOnly: return "attr";
    case Variant::SampTopo: return "samp_t";
    case Variant::SampAttr: return "samp_a";
  }
  return "?";
}

Variant variant_from_name(const std::string& s) {
  if (s == "full") return Variant::Full;
  if (s == "topo") return Variant::TopoOnly;
  if (s == "attr") return Variant::AttrOnly;
  if (s == "samp_t") return Variant::SampTopo;
  if (s == "samp_a") return Variant::SampAttr;
  throw ConfigError("unknown variant '" + s + "'");
}

namespace {

json named_values_to_json(const NamedValues& v) {
  if (v.overrides.empty()) return v.fallback;
  json j;
  j["default"] = v.fallback;
  for (const auto& [k, x] : v.overrides) j[k] = x;
  return j;
}

NamedValues named_values_from_json(const json& j, const char* field) {
  NamedValues v;
  if (j.is_number()) {
    v.fallback = j.get<double>();
    return v;
  }
  if (!j.is_object())
    throw ConfigError(std::string(field) + ": expected a number or an object");
  for (const auto& [k, x] : j.items()) {
    if (!x.is_number()) throw ConfigError(std::string(field) + "." + k + ": expected a number");
    if (k == "default")
      v.fallback = x.get<double>();
    else
      v.overrides[k] = x.get<double>();
  }
  return v;
}

void check_activation(const std::string& name, const char* field) {
  try {
    ad::activation_from_name(name);
  } catch (const ConfigError&) {
    throw ConfigError(std::string("activations.") + field + ": unknown activation '" + name + "'");
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (learning_rate <= 0) throw ConfigError("learning_rate must be > 0");
  if (hidden_dim <= 0 || out_dim <= 0) throw ConfigError("dims must be > 0");
  if (tau <= 0) throw ConfigError("tau must be > 0");
  if (lambda < 0 || lambda > 1) throw ConfigError("lambda must be in [0,1]");
  if (eps_a < 0) throw ConfigError("eps_a must be >= 0");
  if (eps_t < 0) throw ConfigError("eps_t must be >= 0");
  auto check_named = [](const NamedValues& v, const char* field, double lo, double hi) {
    auto in_range = [&](double x) { return x >= lo && x <= hi; };
    if (!in_range(v.fallback)) throw ConfigError(std::string(field) + " out of range");
    for (const auto& [k, x] : v.overrides)
      if (!in_range(x)) throw ConfigError(std::string(field) + "." + k + " out of range");
  };
  check_named(eps_homo, "eps_homo", 0.0, 1e9);
  check_named(eps_hetero, "eps_hetero", 0.0, 1e9);
  check_named(delta, "delta", 0.0, 1.0);
  if (min_rel_improve < 0) throw ConfigError("min_rel_improve must be >= 0");
  check_activation(activations.sage, "sage");
  check_activation(activations.hetero_score, "hetero_score");
  check_activation(activations.hetero_agg, "hetero_agg");
  check_activation(activations.semantic, "semantic");
  check_activation(activations.topo_score, "topo_score");
  check_activation(activations.topo_agg, "topo_agg");
}

std::string TrainConfig::to_json() const {
  json j;
  j["epochs"] = epochs;
  j["learning_rate"] = learning_rate;
  j["hidden_dim"] = hidden_dim;
  j["out_dim"] = out_dim;
  j["tau"] = tau;
  j["lambda"] = lambda;
  j["eps_a"] = eps_a;
  j["eps_t"] = eps_t;
  j["eps_homo"] = named_values_to_json(eps_homo);
  j["eps_hetero"] = named_values_to_json(eps_hetero);
  j["delta"] = named_values_to_json(delta);
  j["activations"] = {{"sage", activations.sage},
                      {"hetero_score", activations.hetero_score},
                      {"hetero_agg", activations.hetero_agg},
                      {"semantic", activations.semantic},
                      {"topo_score", activations.topo_score},
                      {"topo_agg", activations.topo_agg}};
  j["seed"] = seed;
  j["patience"] = patience;
  j["min_rel_improve"] = min_rel_improve;
  j["variant"] = variant_name(variant);
  return j.dump(2);
}

TrainConfig TrainConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  TrainConfig c;
  try {
    if (j.contains("epochs")) c.epochs = j["epochs"].get<int>();
    if (j.contains("learning_rate")) c.learning_rate = j["learning_rate"].get<double>();
    if (j.contains("hidden_dim")) c.hidden_dim = j["hidden_dim"].get<int>();
    if (j.contains("out_dim")) c.out_dim = j["out_dim"].get<int>();
    if (j.contains("tau")) c.tau = j["tau"].get<double>();
    if (j.contains("lambda")) c.lambda = j["lambda"].get<double>();
    if (j.contains("eps_a")) c.eps_a = j["eps_a"].get<double>();
    if (j.contains("eps_t")) c.eps_t = j["eps_t"].get<double>();
    if (j.contains("eps_homo")) c.eps_homo = named_values_from_json(j["eps_homo"], "eps_homo");
    if (j.contains("eps_hetero"))
      c.eps_hetero = named_values_from_json(j["eps_hetero"], "eps_hetero");
    if (j.contains("delta")) c.delta = named_values_from_json(j["delta"], "delta");
    if (j.contains("activations")) {
      const json& a = j["activations"];
      if (a.contains("sage")) c.activations.sage = a["sage"].get<std::string>();
      if (a.contains("hetero_score"))
        c.activations.hetero_score = a["hetero_score"].get<std::string>();
      if (a.contains("hetero_agg")) c.activations.hetero_agg = a["hetero_agg"].get<std::string>();
      if (a.contains("semantic")) c.activations.semantic = a["semantic"].get<std::string>();
      if (a.contains("topo_score")) c.activations.topo_score = a["topo_score"].get<std::string>();
      if (a.contains("topo_agg")) c.activations.topo_agg = a["topo_agg"].get<std::string>();
    }
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("patience")) c.patience = j["patience"].get<int>();
    if (j.contains("min_rel_improve")) c.min_rel_improve = j["min_rel_improve"].get<double>();
    if (j.contains("variant")) c.variant = variant_from_name(j["variant"].get<std::string>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  c.validate();
  return c;
}

TrainConfig TrainConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string TrainConfig::hash() const {
  const std::string canon = to_json();
  const std::uint64_t h = Rng::fnv1a(canon);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace hgcl
