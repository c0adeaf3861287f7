#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace hgcl {

/// A per-name threshold/weight table: a fallback value plus overrides keyed
/// by node-type or meta-path name. Serializes as either a bare number or
/// {"default": x, "<name>": y, ...}.
struct NamedValues {
  double fallback = 0.0;
  std::map<std::string, double> overrides;

  NamedValues() = default;
  explicit NamedValues(double v) : fallback(v) {}

  double get(const std::string& name) const {
    const auto it = overrides.find(name);
    return it == overrides.end() ? fallback : it->second;
  }
};

/// Which parts of the model/sampling a run uses. The ablation variants
/// differ from the full model in exactly this field.
enum class Variant { Full, TopoOnly, AttrOnly, SampTopo, SampAttr };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& s);

struct ActivationConfig {
  std::string sage = "elu";
  std::string hetero_score = "leaky_relu";
  std::string hetero_agg = "elu";
  std::string semantic = "tanh";
  std::string topo_score = "leaky_relu";
  std::string topo_agg = "elu";
};

/// Every hyperparameter of a training run. JSON field names match the
/// member names one to one.
struct TrainConfig {
  int epochs = 200;
  double learning_rate = 1e-4;
  int hidden_dim = 128;
  int out_dim = 64;          // per view; the evaluation embedding concatenates two views
  double tau = 0.4;
  double lambda = 0.5;
  double eps_a = 0.5;        // attribute-similarity threshold for sampling
  double eps_t = 1.0;        // topological-correlation threshold for sampling
  NamedValues eps_homo{0.5};    // per-type threshold for regenerated homogeneous edges
  NamedValues eps_hetero{0.5};  // per-type threshold for regenerated heterogeneous edges
  NamedValues delta{1.0};       // per-meta-path importance weight
  ActivationConfig activations;
  std::uint64_t seed = 1;
  int patience = 20;         // epochs without relative improvement before stopping; <=0 disables
  double min_rel_improve = 1e-4;
  Variant variant = Variant::Full;

  void validate() const;  // throws ConfigError

  std::string to_json() const;
  static TrainConfig from_json(const std::string& text);
  static TrainConfig load(const std::string& path);

  /// Stable 64-bit hash of the canonical JSON form, hex-encoded. Embedded
  /// in run outputs so artifacts can be traced to their configuration.
  std::string hash() const;
};

}  // namespace hgcl
