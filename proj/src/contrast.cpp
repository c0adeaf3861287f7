#include "hgcl/contrast.hpp"

#include <fstream>

#include "hgcl/errors.hpp"

namespace hgcl::contrast {

double topological_correlation(std::uint32_t i, std::uint32_t j,
                               const std::vector<double>& delta,
                               const std::vector<MetaPathAdjacency>& adjacencies) {
  if (delta.size() != adjacencies.size())
    throw ShapeError("topological_correlation: one delta per meta-path required");
  double t = 0.0;
  for (std::size_t p = 0; p < adjacencies.size(); ++p)
    if (adjacencies[p].contains(i, j)) t += delta[p];
  return t;
}

Matrix topological_correlation_matrix(const std::vector<MetaPathAdjacency>& adjacencies,
                                      const std::vector<double>& delta) {
  if (delta.size() != adjacencies.size())
    throw ShapeError("topological_correlation_matrix: one delta per meta-path required");
  if (adjacencies.empty()) return Matrix();
  const std::size_t n = adjacencies.front().neighbor_sets.size();
  Matrix t(n, n);
  for (std::size_t p = 0; p < adjacencies.size(); ++p) {
    const auto& sets = adjacencies[p].neighbor_sets;
    if (sets.size() != n)
      throw ShapeError("topological_correlation_matrix: adjacency sizes differ");
    for (std::size_t i = 0; i < n; ++i)
      for (const std::uint32_t j : sets[i]) t(i, j) += delta[p];
  }
  return t;
}

SampleSets select_samples(const Matrix& similarity, const Matrix& correlation,
                          std::optional<double> eps_a, std::optional<double> eps_t) {
  if (similarity.rows() != similarity.cols())
    throw ShapeError("select_samples: similarity must be square");
  if (!correlation.same_shape(similarity))
    throw ShapeError("select_samples: correlation/similarity shapes differ");
  const std::size_t n = similarity.rows();
  SampleSets s;
  s.positives.resize(n);
  s.negatives.resize(n);
  s.similarity = similarity;
  s.correlation = correlation;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool attr_ok = !eps_a || similarity(i, j) >= *eps_a;
      const bool topo_ok = !eps_t || correlation(i, j) >= *eps_t;
      if (attr_ok && topo_ok)
        s.positives[i].push_back(static_cast<std::uint32_t>(j));
      else
        s.negatives[i].push_back(static_cast<std::uint32_t>(j));
    }
  }
  return s;
}

ad::Var view_contrastive_loss(ad::Tape& tape, ad::Var z, ad::Var z_other,
                              const SampleSets& samples, double tau) {
  if (tau <= 0.0) throw ConfigError("view_contrastive_loss: tau must be > 0");
  const std::size_t n = z.rows();
  if (z_other.rows() != n || z_other.cols() != z.cols())
    throw ShapeError("view_contrastive_loss: views must be row-aligned");
  if (samples.size() != n)
    throw ShapeError("view_contrastive_loss: sample sets do not cover the rows");

  ad::Var zn = tape.l2_normalize_rows(z);
  ad::Var zo = tape.l2_normalize_rows(z_other);
  const double inv_tau = 1.0 / tau;
  ad::Var s_intra = tape.scale(tape.matmul(zn, tape.transpose(zn)), inv_tau);
  ad::Var s_cross = tape.scale(tape.matmul(zn, tape.transpose(zo)), inv_tau);
  ad::Var e_intra = tape.exp(s_intra);
  ad::Var e_cross = tape.exp(s_cross);

  // The numerator holds positives (both views) and the cross-view self
  // term; the denominator adds the negatives. The intra-view self term is
  // excluded everywhere.
  Matrix pos_intra(n, n), pos_cross(n, n), all_intra(n, n), all_cross(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    pos_cross(i, i) = 1.0;
    all_cross(i, i) = 1.0;
    for (const std::uint32_t j : samples.positives[i]) {
      pos_intra(i, j) = 1.0;
      pos_cross(i, j) = 1.0;
      all_intra(i, j) = 1.0;
      all_cross(i, j) = 1.0;
    }
    for (const std::uint32_t j : samples.negatives[i]) {
      all_intra(i, j) = 1.0;
      all_cross(i, j) = 1.0;
    }
  }

  ad::Var numer = tape.add(tape.masked_row_sum(e_intra, std::move(pos_intra)),
                           tape.masked_row_sum(e_cross, std::move(pos_cross)));
  ad::Var denom = tape.add(tape.masked_row_sum(e_intra, std::move(all_intra)),
                           tape.masked_row_sum(e_cross, std::move(all_cross)));
  ad::Var per_node = tape.sub(tape.log(denom), tape.log(numer));
  return tape.mean_rows(per_node);
}

ad::Var final_loss(ad::Tape& tape, ad::Var z_topo, ad::Var z_attr,
                   const SampleSets& samples, double tau, double lambda) {
  ad::Var a = view_contrastive_loss(tape, z_topo, z_attr, samples, tau);
  ad::Var b = view_contrastive_loss(tape, z_attr, z_topo, samples, tau);
  return tape.add(tape.scale(a, lambda), tape.scale(b, 1.0 - lambda));
}

void write_sample_diagnostics(const SampleSets& samples, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << "node,positives,negatives\n";
  for (std::size_t i = 0; i < samples.size(); ++i)
    out << i << "," << samples.positives[i].size() << "," << samples.negatives[i].size()
        << "\n";
}

}  // namespace hgcl::contrast
