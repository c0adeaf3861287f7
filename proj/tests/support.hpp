#pragma once

// Shared helpers for the test suites: a central-difference gradient checker
// and independent brute-force oracles. Everything here recomputes results
// from first principles so it stays decoupled from the library internals it
// checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hgcl/autodiff.hpp"
#include "hgcl/graph.hpp"
#include "hgcl/matrix.hpp"
#include "hgcl/rng.hpp"

namespace hgcl::test {

inline Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double lo = -1.0,
                            double hi = 1.0) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(lo, hi);
  return m;
}

/// Builds a scalar function of the parameter list on a fresh tape.
using ScalarBuild = std::function<ad::Var(ad::Tape&, const std::vector<ad::Var>&)>;

/// Max relative error between tape gradients and central finite differences
/// over every entry of every parameter. Denominator floored at 1e-4 so a
/// pair of near-zero values does not amplify rounding noise.
inline double fd_max_rel_error(const ScalarBuild& build, const std::vector<Matrix>& init,
                               double h = 1e-5) {
  ad::Tape tape;
  std::vector<ad::Var> params;
  params.reserve(init.size());
  for (const Matrix& m : init) params.push_back(tape.param(m));
  ad::Var out = build(tape, params);
  tape.backward(out);

  auto eval_at = [&](std::size_t p, std::size_t entry, double delta) {
    std::vector<Matrix> shifted = init;
    shifted[p].data()[entry] += delta;
    ad::Tape t2;
    std::vector<ad::Var> vars;
    vars.reserve(shifted.size());
    for (const Matrix& m : shifted) vars.push_back(t2.param(m));
    return build(t2, vars).scalar();
  };

  double worst = 0.0;
  for (std::size_t p = 0; p < init.size(); ++p) {
    const Matrix& grad = params[p].grad();
    for (std::size_t e = 0; e < init[p].size(); ++e) {
      const double fd = (eval_at(p, e, h) - eval_at(p, e, -h)) / (2.0 * h);
      const double an = grad.data()[e];
      const double denom = std::max({std::abs(fd), std::abs(an), 1e-4});
      worst = std::max(worst, std::abs(fd - an) / denom);
    }
  }
  return worst;
}

/// Reduces an arbitrary tensor to a scalar through a fixed random linear
/// functional, so every output entry influences the check.
inline ad::Var to_scalar(ad::Tape& tape, ad::Var v, const Matrix& weights) {
  return tape.mean_rows(tape.masked_row_sum(v, weights));
}

// ---------------------------------------------------------------------------
// Random heterogeneous graphs for oracle comparisons
// ---------------------------------------------------------------------------

/// Random graph with 2-3 node types (<= max_nodes each), one relation from
/// the target to each auxiliary type, sometimes a same-type relation on the
/// target, and 1-3 meta-paths over those relations.
inline HeteroGraph random_hetero_graph(std::uint64_t seed, std::size_t max_nodes = 50) {
  Rng rng(seed);
  HeteroGraph g;
  const std::size_t n_aux_types = 1 + rng.uniform_index(2);
  g.target_type = "t0";
  g.node_types.push_back("t0");
  g.node_counts.push_back(1 + rng.uniform_index(max_nodes));
  for (std::size_t a = 0; a < n_aux_types; ++a) {
    g.node_types.push_back("a" + std::to_string(a));
    g.node_counts.push_back(1 + rng.uniform_index(max_nodes));
  }
  for (std::size_t t = 0; t < g.node_types.size(); ++t) {
    Matrix x(g.node_counts[t], 3);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1.0, 1.0);
    g.attributes.push_back(std::move(x));
  }

  auto bernoulli_edges = [&](std::size_t ns, std::size_t nd, double p) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::size_t i = 0; i < ns; ++i)
      for (std::size_t j = 0; j < nd; ++j)
        if (rng.uniform() < p)
          edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    return edges;
  };

  for (std::size_t a = 0; a < n_aux_types; ++a) {
    Relation rel;
    rel.name = "r" + std::to_string(a);
    rel.src_type = "t0";
    rel.dst_type = "a" + std::to_string(a);
    rel.edges = bernoulli_edges(g.node_counts[0], g.node_counts[a + 1],
                                rng.uniform(0.02, 0.2));
    g.relations.push_back(std::move(rel));
  }
  const bool with_self_relation = rng.uniform() < 0.5;
  if (with_self_relation) {
    Relation rel;
    rel.name = "rt";
    rel.src_type = "t0";
    rel.dst_type = "t0";
    rel.edges = bernoulli_edges(g.node_counts[0], g.node_counts[0],
                                rng.uniform(0.02, 0.15));
    g.relations.push_back(std::move(rel));
  }

  // two-step paths t0 -> aK -> t0
  for (std::size_t a = 0; a < n_aux_types; ++a) {
    MetaPath m;
    m.name = "P" + std::to_string(a);
    m.type_sequence = {"t0", "a" + std::to_string(a), "t0"};
    m.relation_sequence = {"r" + std::to_string(a), "r" + std::to_string(a)};
    g.meta_paths.push_back(std::move(m));
  }
  if (with_self_relation) {
    MetaPath m;  // one- and two-step same-type paths
    m.name = "PT";
    m.type_sequence = {"t0", "t0", "t0"};
    m.relation_sequence = {"rt", "rt"};
    g.meta_paths.push_back(std::move(m));
  }
  if (n_aux_types == 2 && rng.uniform() < 0.5) {
    MetaPath m;  // four-step palindrome t0-a0-t0-a1-t0
    m.name = "PL";
    m.type_sequence = {"t0", "a0", "t0", "a1", "t0"};
    m.relation_sequence = {"r0", "r0", "r1", "r1"};
    g.meta_paths.push_back(std::move(m));
  }
  validate(g);
  return g;
}

/// Independent meta-path oracle: depth-first enumeration of every node
/// sequence instantiating the path, with end-of-path deduplication. A
/// same-type step may traverse an edge in either direction; cross-type
/// steps use the direction the type sequence demands.
inline std::vector<std::vector<std::uint32_t>> brute_force_metapath(const HeteroGraph& g,
                                                                    const MetaPath& m) {
  const std::size_t n_target = g.target_count();
  const std::size_t l = m.relation_sequence.size();

  // per-step successor lists, built by a straight scan of the edge lists
  std::vector<std::vector<std::vector<std::uint32_t>>> succ(l);
  for (std::size_t step = 0; step < l; ++step) {
    const std::string& from = m.type_sequence[step];
    const std::string& to = m.type_sequence[step + 1];
    succ[step].resize(g.node_counts[g.type_index(from)]);
    for (const Relation& rel : g.relations) {
      if (rel.name != m.relation_sequence[step]) continue;
      const bool same = rel.src_type == rel.dst_type;
      for (const auto& [s, d] : rel.edges) {
        if (same && rel.src_type == from) {
          succ[step][s].push_back(d);
          succ[step][d].push_back(s);
        } else if (rel.src_type == from && rel.dst_type == to) {
          succ[step][s].push_back(d);
        } else if (rel.dst_type == from && rel.src_type == to) {
          succ[step][d].push_back(s);
        }
      }
    }
  }

  std::vector<std::vector<std::uint32_t>> result(n_target);
  std::function<void(std::size_t, std::uint32_t, std::vector<std::uint32_t>&)> walk =
      [&](std::size_t step, std::uint32_t node, std::vector<std::uint32_t>& ends) {
        if (step == l) {
          ends.push_back(node);
          return;
        }
        for (const std::uint32_t next : succ[step][node]) walk(step + 1, next, ends);
      };

  for (std::size_t i = 0; i < n_target; ++i) {
    std::vector<std::uint32_t> ends;
    walk(0, static_cast<std::uint32_t>(i), ends);
    ends.push_back(static_cast<std::uint32_t>(i));  // self-inclusion
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    result[i] = std::move(ends);
  }
  return result;
}

/// Plain-loop cosine similarity for oracle use.
inline double naive_cosine(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return num / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace hgcl::test
