#include "hgcl/synthetic.hpp"

#include <string>

#include "hgcl/errors.hpp"
#include "hgcl/rng.hpp"

namespace hgcl::eval {

void SyntheticSpec::validate() const {
  if (num_classes < 2) throw ConfigError("synthetic: need at least 2 classes");
  if (per_class < 1) throw ConfigError("synthetic: per_class must be >= 1");
  if (aux_sizes.empty()) throw ConfigError("synthetic: need at least one auxiliary type");
  for (const int a : aux_sizes)
    if (a < 1) throw ConfigError("synthetic: auxiliary sizes must be >= 1");
  if (p_intra.empty() || p_inter.empty())
    throw ConfigError("synthetic: edge probabilities required");
  for (const double p : p_intra)
    if (p < 0.0 || p > 1.0) throw ConfigError("synthetic: p_intra out of [0,1]");
  for (const double p : p_inter)
    if (p < 0.0 || p > 1.0) throw ConfigError("synthetic: p_inter out of [0,1]");
  if (noise < 0.0) throw ConfigError("synthetic: noise must be >= 0");
  if (target_dim < 1 || aux_dim < 1) throw ConfigError("synthetic: dims must be >= 1");
}

namespace {

double pick(const std::vector<double>& v, std::size_t i) {
  return i < v.size() ? v[i] : v.back();
}

/// Class centroids drawn once per type; each node's attribute row is its
/// class centroid plus Gaussian noise of the given scale.
Matrix class_attributes(int n, int dim, int num_classes,
                        const std::vector<int>& classes, double noise, Rng& rng) {
  Matrix centroids(num_classes, dim);
  for (std::size_t i = 0; i < centroids.size(); ++i) centroids.data()[i] = rng.normal();
  Matrix x(n, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < dim; ++j)
      x(i, j) = centroids(classes[i], j) + noise * rng.normal();
  return x;
}

}  // namespace

HeteroGraph generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng = Rng::substream(spec.seed, "synthetic");

  const int n_target = spec.num_classes * spec.per_class;
  std::vector<int> target_class(n_target);
  for (int i = 0; i < n_target; ++i) target_class[i] = i / spec.per_class;

  HeteroGraph g;
  g.target_type = "item";
  g.node_types.push_back("item");
  g.node_counts.push_back(n_target);
  g.attributes.push_back(class_attributes(n_target, spec.target_dim, spec.num_classes,
                                          target_class, spec.noise, rng));
  g.labels = target_class;

  for (std::size_t a = 0; a < spec.aux_sizes.size(); ++a) {
    const int n_aux = spec.aux_sizes[a];
    std::vector<int> aux_class(n_aux);
    for (int j = 0; j < n_aux; ++j) aux_class[j] = j % spec.num_classes;
    const std::string type = "ctx" + std::to_string(a);
    g.node_types.push_back(type);
    g.node_counts.push_back(n_aux);
    g.attributes.push_back(class_attributes(n_aux, spec.aux_dim, spec.num_classes,
                                            aux_class, spec.noise, rng));

    Relation rel;
    rel.name = "IC" + std::to_string(a);
    rel.src_type = "item";
    rel.dst_type = type;
    const double pi = pick(spec.p_intra, a);
    const double pe = pick(spec.p_inter, a);
    for (int i = 0; i < n_target; ++i)
      for (int j = 0; j < n_aux; ++j) {
        const double p = target_class[i] == aux_class[j] ? pi : pe;
        if (rng.uniform() < p)
          rel.edges.emplace_back(static_cast<std::uint32_t>(i),
                                 static_cast<std::uint32_t>(j));
      }
    g.relations.push_back(std::move(rel));

    MetaPath mp;
    mp.name = "MP" + std::to_string(a);
    mp.type_sequence = {"item", type, "item"};
    mp.relation_sequence = {"IC" + std::to_string(a), "IC" + std::to_string(a)};
    g.meta_paths.push_back(std::move(mp));
  }

  validate(g);
  return g;
}

}  // namespace hgcl::eval
