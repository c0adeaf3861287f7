#include "hgcl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "hgcl/errors.hpp"
#include "hgcl/hinge_classifier.hpp"
#include "hgcl/kmeans.hpp"
#include "hgcl/metrics.hpp"
#include "hgcl/parallel.hpp"
#include "hgcl/rng.hpp"

namespace hgcl::eval {

namespace {

struct MeanStd {
  double mean = 0.0, stddev = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd ms;
  if (xs.empty()) return ms;
  ms.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double var = 0.0;
  for (const double x : xs) var += (x - ms.mean) * (x - ms.mean);
  ms.stddev = std::sqrt(var / static_cast<double>(xs.size()));
  return ms;
}

int count_classes(const std::vector<int>& labels) {
  int k = 0;
  for (const int l : labels) k = std::max(k, l + 1);
  return k;
}

std::vector<std::uint32_t> shuffled(std::vector<std::uint32_t> xs, Rng& rng) {
  for (std::size_t i = xs.size(); i > 1; --i)
    std::swap(xs[i - 1], xs[rng.uniform_index(i)]);
  return xs;
}

Matrix gather(const Matrix& z, const std::vector<std::uint32_t>& idx) {
  Matrix out(idx.size(), z.cols());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j) out(i, j) = z(idx[i], j);
  return out;
}

std::vector<int> gather(const std::vector<int>& labels, const std::vector<std::uint32_t>& idx) {
  std::vector<int> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = labels[idx[i]];
  return out;
}

}  // namespace

double EvalReport::mean_macro_f1() const {
  if (classification.empty()) return 0.0;
  double s = 0.0;
  for (const RatioMetrics& m : classification) s += m.macro_mean;
  return s / static_cast<double>(classification.size());
}

EvalReport evaluate_classification(const Matrix& z, const std::vector<int>& labels,
                                   const ClassificationOptions& opts) {
  if (z.rows() != labels.size())
    throw ShapeError("evaluate_classification: labels must cover all embedded nodes");
  if (opts.repeats < 1) throw ConfigError("evaluate_classification: repeats must be >= 1");
  const int k = count_classes(labels);
  if (k < 2) throw ConfigError("evaluate_classification: need at least 2 classes");

  // Optional fixed evaluation pool (the paper's "test set only" protocol).
  std::vector<std::uint32_t> pool(z.rows());
  std::iota(pool.begin(), pool.end(), 0u);
  if (opts.test_fraction < 1.0) {
    Rng pool_rng = Rng::substream(opts.seed, "eval/test_pool");
    pool = shuffled(std::move(pool), pool_rng);
    const auto keep = static_cast<std::size_t>(
        std::lround(opts.test_fraction * static_cast<double>(pool.size())));
    pool.resize(std::max<std::size_t>(keep, 2));
    std::sort(pool.begin(), pool.end());
  }

  EvalReport report;
  report.task = "classification";
  report.repeats = opts.repeats;
  report.seed = opts.seed;

  for (const double ratio : opts.ratios) {
    if (ratio <= 0.0 || ratio >= 1.0)
      throw ConfigError("evaluate_classification: ratios must be in (0,1)");
    std::vector<double> macros(opts.repeats), micros(opts.repeats);
    std::vector<int> resamples(opts.repeats, 0);

    parallel_for(opts.repeats, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t rep = lo; rep < hi; ++rep) {
        Rng rng = Rng::substream(opts.seed, "eval/split/" + std::to_string(ratio) + "/" +
                                                std::to_string(rep));
        const auto n_train = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::lround(ratio * static_cast<double>(pool.size()))));
        std::vector<std::uint32_t> train_idx, test_idx;
        for (int attempt = 0;; ++attempt) {
          if (attempt > 200)
            throw ConfigError("evaluate_classification: cannot draw a split containing "
                              "every class; training ratio too small");
          const std::vector<std::uint32_t> order = shuffled(pool, rng);
          train_idx.assign(order.begin(), order.begin() + n_train);
          test_idx.assign(order.begin() + n_train, order.end());
          std::vector<bool> present(k, false);
          for (const std::uint32_t i : train_idx) present[labels[i]] = true;
          if (std::all_of(present.begin(), present.end(), [](bool b) { return b; })) break;
          ++resamples[rep];
        }
        HingeClassifier clf;
        clf.fit(gather(z, train_idx), gather(labels, train_idx), k);
        const std::vector<int> pred = clf.predict(gather(z, test_idx));
        const metrics::F1Scores f1 = metrics::f1_scores(gather(labels, test_idx), pred, k);
        macros[rep] = f1.macro;
        micros[rep] = f1.micro;
      }
    });

    RatioMetrics rm;
    rm.ratio = ratio;
    const MeanStd ma = mean_std(macros);
    const MeanStd mi = mean_std(micros);
    rm.macro_mean = ma.mean;
    rm.macro_std = ma.stddev;
    rm.micro_mean = mi.mean;
    rm.micro_std = mi.stddev;
    rm.resampled_splits = std::accumulate(resamples.begin(), resamples.end(), 0);
    report.classification.push_back(rm);
  }
  return report;
}

EvalReport evaluate_clustering(const Matrix& z, const std::vector<int>& labels,
                               const ClusteringOptions& opts) {
  if (z.rows() != labels.size())
    throw ShapeError("evaluate_clustering: labels must cover all embedded nodes");
  const int k = opts.k > 0 ? opts.k : count_classes(labels);
  if (opts.repeats < 1) throw ConfigError("evaluate_clustering: repeats must be >= 1");

  std::vector<double> nmis(opts.repeats), aris(opts.repeats);
  parallel_for(opts.repeats, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t rep = lo; rep < hi; ++rep) {
      const KMeansResult km =
          kmeans(z, k, Rng::mix(opts.seed ^ Rng::fnv1a("eval/kmeans")) + rep);
      nmis[rep] = metrics::nmi(labels, km.assignment);
      aris[rep] = metrics::ari(labels, km.assignment);
    }
  });

  EvalReport report;
  report.task = "clustering";
  report.repeats = opts.repeats;
  report.seed = opts.seed;
  const MeanStd n = mean_std(nmis);
  const MeanStd a = mean_std(aris);
  report.nmi_mean = n.mean;
  report.nmi_std = n.stddev;
  report.ari_mean = a.mean;
  report.ari_std = a.stddev;
  return report;
}

std::string perturbation_name(Perturbation p) {
  return p == Perturbation::EdgeDeletion ? "edge_deletion" : "attribute_masking";
}

std::vector<RobustnessCell> robustness_suite(const HeteroGraph& g, const TrainConfig& cfg,
                                             const std::vector<Perturbation>& kinds,
                                             const std::vector<double>& levels,
                                             const ClassificationOptions& copts) {
  if (!g.has_labels()) throw GraphError("robustness_suite: graph has no labels");
  std::vector<RobustnessCell> cells;
  for (const Perturbation kind : kinds) {
    for (const double level : levels) {
      const std::uint64_t cell_seed =
          Rng::mix(cfg.seed ^ Rng::fnv1a("robust/" + perturbation_name(kind) + "/" +
                                         std::to_string(level)));
      const HeteroGraph perturbed = kind == Perturbation::EdgeDeletion
                                        ? perturb_edges(g, level, cell_seed)
                                        : mask_attributes(g, level, cell_seed);
      const train::TrainedModel model = train::train(perturbed, cfg);
      ClassificationOptions cell_opts = copts;
      cell_opts.seed = copts.seed;
      RobustnessCell cell;
      cell.kind = kind;
      cell.level = level;
      cell.report = evaluate_classification(model.z, g.labels, cell_opts);
      cell.report.config_hash = cfg.hash();
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

TrainConfig make_variant(const TrainConfig& base, Variant v) {
  TrainConfig cfg = base;
  cfg.variant = v;
  return cfg;
}

std::vector<AblationResult> ablation_suite(const HeteroGraph& g, const TrainConfig& cfg,
                                           const ClassificationOptions& copts) {
  if (!g.has_labels()) throw GraphError("ablation_suite: graph has no labels");
  std::vector<AblationResult> results;
  for (const Variant v : {Variant::Full, Variant::TopoOnly, Variant::AttrOnly,
                          Variant::SampTopo, Variant::SampAttr}) {
    const TrainConfig vcfg = make_variant(cfg, v);
    const train::TrainedModel model = train::train(g, vcfg);
    AblationResult r;
    r.variant = v;
    r.report = evaluate_classification(model.z, g.labels, copts);
    r.report.config_hash = vcfg.hash();
    results.push_back(std::move(r));
  }
  return results;
}

namespace {

double cell_macro_f1(const HeteroGraph& g, const TrainConfig& cfg,
                     const ClassificationOptions& copts) {
  const train::TrainedModel model = train::train(g, cfg);
  return evaluate_classification(model.z, g.labels, copts).mean_macro_f1();
}

}  // namespace

SweepResult sweep_delta(const HeteroGraph& g, const TrainConfig& cfg,
                        const std::vector<double>& grid,
                        const ClassificationOptions& copts) {
  if (!g.has_labels()) throw GraphError("sweep_delta: graph has no labels");
  if (g.meta_paths.empty()) throw GraphError("sweep_delta: no meta-paths configured");
  if (grid.empty()) throw ConfigError("sweep_delta: empty grid");
  SweepResult res;
  if (g.meta_paths.size() == 1) {
    const std::string name = g.meta_paths[0].name;
    res.param_names = {"delta." + name};
    for (const double d : grid) {
      TrainConfig c = cfg;
      c.delta.overrides[name] = d;
      res.values.push_back({d});
      res.macro_f1.push_back(cell_macro_f1(g, c, copts));
    }
    return res;
  }
  const std::string name0 = g.meta_paths[0].name;
  const std::string name1 = g.meta_paths[1].name;
  res.param_names = {"delta." + name0, "delta." + name1};
  for (const double d0 : grid)
    for (const double d1 : grid) {
      TrainConfig c = cfg;
      c.delta.overrides[name0] = d0;
      c.delta.overrides[name1] = d1;
      res.values.push_back({d0, d1});
      res.macro_f1.push_back(cell_macro_f1(g, c, copts));
    }
  return res;
}

SweepResult sweep_eps_a(const HeteroGraph& g, const TrainConfig& cfg,
                        const std::vector<double>& values,
                        const ClassificationOptions& copts) {
  if (!g.has_labels()) throw GraphError("sweep_eps_a: graph has no labels");
  if (values.empty()) throw ConfigError("sweep_eps_a: empty grid");
  SweepResult res;
  res.param_names = {"eps_a"};
  for (const double v : values) {
    TrainConfig c = cfg;
    c.eps_a = v;
    res.values.push_back({v});
    res.macro_f1.push_back(cell_macro_f1(g, c, copts));
  }
  return res;
}

std::vector<ReportRow> report_rows(const EvalReport& r, const std::string& task,
                                   const std::string& detail) {
  std::vector<ReportRow> rows;
  auto base = [&] {
    ReportRow row;
    row.task = task;
    row.detail = detail;
    row.repeats = r.repeats;
    row.seed = r.seed;
    row.config_hash = r.config_hash;
    return row;
  };
  for (const RatioMetrics& m : r.classification) {
    ReportRow row = base();
    row.ratio = m.ratio;
    row.metric = "macro_f1";
    row.mean = m.macro_mean;
    row.stddev = m.macro_std;
    rows.push_back(row);
    row.metric = "micro_f1";
    row.mean = m.micro_mean;
    row.stddev = m.micro_std;
    rows.push_back(row);
  }
  if (r.task == "clustering") {
    ReportRow row = base();
    row.metric = "nmi";
    row.mean = r.nmi_mean;
    row.stddev = r.nmi_std;
    rows.push_back(row);
    row.metric = "ari";
    row.mean = r.ari_mean;
    row.stddev = r.ari_std;
    rows.push_back(row);
  }
  return rows;
}

void write_report_csv(const std::vector<ReportRow>& rows, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out << "task,detail,ratio,metric,mean,stddev,repeats,seed,config_hash\n";
  out.precision(10);
  for (const ReportRow& r : rows) {
    out << r.task << "," << r.detail << ",";
    if (r.ratio >= 0.0)
      out << r.ratio;
    out << "," << r.metric << "," << r.mean << "," << r.stddev << "," << r.repeats << ","
        << r.seed << "," << r.config_hash << "\n";
  }
}

void write_summary(const std::vector<ReportRow>& rows, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  out.precision(4);
  out << std::fixed;
  for (const ReportRow& r : rows) {
    out << r.task;
    if (!r.detail.empty()) out << " [" << r.detail << "]";
    if (r.ratio >= 0.0) out << " @ train ratio " << r.ratio;
    out << ": " << r.metric << " = " << r.mean << " +/- " << r.stddev << " (" << r.repeats
        << " repeats)\n";
  }
}

}  // namespace hgcl::eval
