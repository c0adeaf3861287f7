#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hgcl/config.hpp"
#include "hgcl/graph.hpp"
#include "hgcl/matrix.hpp"
#include "hgcl/trainer.hpp"

namespace hgcl::eval {

struct RatioMetrics {
  double ratio = 0.0;
  double macro_mean = 0.0, macro_std = 0.0;
  double micro_mean = 0.0, micro_std = 0.0;
  int resampled_splits = 0;  // splits redrawn because a class was missing
};

struct EvalReport {
  std::string task;
  std::vector<RatioMetrics> classification;  // per training ratio
  double nmi_mean = 0.0, nmi_std = 0.0;
  double ari_mean = 0.0, ari_std = 0.0;
  int repeats = 0;
  std::uint64_t seed = 0;
  std::string config_hash;

  /// Mean Macro-F1 over all training ratios.
  double mean_macro_f1() const;
};

struct ClassificationOptions {
  std::vector<double> ratios = {0.2, 0.4, 0.6, 0.8};
  int repeats = 10;
  /// When < 1, a fixed random pool of this fraction is drawn first and the
  /// ratios are applied inside it, mirroring the paper's protocol of
  /// classifying only test-set nodes.
  double test_fraction = 1.0;
  std::uint64_t seed = 0;
};

/// Linear hinge-loss classification over seeded splits. A split missing a
/// class in its training part is redrawn (and counted).
EvalReport evaluate_classification(const Matrix& z, const std::vector<int>& labels,
                                   const ClassificationOptions& opts = {});

struct ClusteringOptions {
  int k = 0;  // 0: number of label classes
  int repeats = 10;
  std::uint64_t seed = 0;
};

/// Seeded k-means repeated `repeats` times; reports mean/std NMI and ARI.
EvalReport evaluate_clustering(const Matrix& z, const std::vector<int>& labels,
                               const ClusteringOptions& opts = {});

enum class Perturbation { EdgeDeletion, AttributeMasking };
std::string perturbation_name(Perturbation p);

struct RobustnessCell {
  Perturbation kind;
  double level;
  EvalReport report;
};

/// Perturb -> retrain -> classify, for every (kind, level) pair. Each cell
/// perturbs the pristine graph with a seed derived from the config seed and
/// the cell name, so the curve is reproducible cell by cell.
std::vector<RobustnessCell> robustness_suite(const HeteroGraph& g, const TrainConfig& cfg,
                                             const std::vector<Perturbation>& kinds,
                                             const std::vector<double>& levels,
                                             const ClassificationOptions& copts);

/// Copy of `base` differing in exactly the variant field.
TrainConfig make_variant(const TrainConfig& base, Variant v);

struct AblationResult {
  Variant variant;
  EvalReport report;
};

/// Trains and classifies the full model plus its four ablation variants.
std::vector<AblationResult> ablation_suite(const HeteroGraph& g, const TrainConfig& cfg,
                                           const ClassificationOptions& copts);

struct SweepResult {
  std::vector<std::string> param_names;
  std::vector<std::vector<double>> values;  // one row per grid cell
  std::vector<double> macro_f1;             // mean Macro-F1 per cell
};

/// Full grid over per-meta-path delta weights (first one or two meta-paths)
/// at fixed eps_a. One training run per cell.
SweepResult sweep_delta(const HeteroGraph& g, const TrainConfig& cfg,
                        const std::vector<double>& grid,
                        const ClassificationOptions& copts);

/// One training run per attribute-similarity threshold value.
SweepResult sweep_eps_a(const HeteroGraph& g, const TrainConfig& cfg,
                        const std::vector<double>& values,
                        const ClassificationOptions& copts);

/// Long-format row of a report CSV; one row per configuration x metric.
struct ReportRow {
  std::string task;
  std::string detail;  // variant, perturbation@level, swept values, or ""
  double ratio = -1.0;  // training ratio; -1 when not applicable
  std::string metric;
  double mean = 0.0;
  double stddev = 0.0;
  int repeats = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

std::vector<ReportRow> report_rows(const EvalReport& r, const std::string& task,
                                   const std::string& detail);
void write_report_csv(const std::vector<ReportRow>& rows, const std::filesystem::path& file);
void write_summary(const std::vector<ReportRow>& rows, const std::filesystem::path& file);

}  // namespace hgcl::eval
