#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "hgcl/eval.hpp"
#include "hgcl/hinge_classifier.hpp"
#include "hgcl/kmeans.hpp"
#include "hgcl/metrics.hpp"
#include "hgcl/synthetic.hpp"
#include "support.hpp"

using namespace hgcl;
using namespace hgcl::eval;
namespace fs = std::filesystem;

TEST_CASE("f1: hand-verified confusion table") {
  // 10 samples, binary; class 1: TP=2, FP=1, FN=1 -> F1 = 4/6
  const std::vector<int> truth = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  const std::vector<int> pred = {1, 1, 0, 1, 0, 0, 0, 0, 0, 0};
  const auto per_class = metrics::per_class_f1(truth, pred, 2);
  CHECK(per_class[1] == doctest::Approx(2.0 * 2 / (2.0 * 2 + 1 + 1)).epsilon(1e-12));
  // class 0: TP=6, FP=1, FN=1 -> 12/14
  CHECK(per_class[0] == doctest::Approx(12.0 / 14.0).epsilon(1e-12));

  const metrics::F1Scores f1 = metrics::f1_scores(truth, pred, 2);
  CHECK(f1.macro == doctest::Approx(0.5 * (2.0 / 3.0 + 6.0 / 7.0)).epsilon(1e-12));
  // micro-F1 for single-label multiclass equals accuracy = 8/10
  CHECK(f1.micro == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("f1: macro is the unweighted mean of per-class scores") {
  Rng rng(5);
  const int k = 4;
  std::vector<int> truth(60), pred(60);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    truth[i] = static_cast<int>(rng.uniform_index(k));
    pred[i] = static_cast<int>(rng.uniform_index(k));
  }
  const auto per_class = metrics::per_class_f1(truth, pred, k);
  double mean = 0.0;
  for (const double f : per_class) mean += f;
  mean /= k;
  CHECK(metrics::f1_scores(truth, pred, k).macro == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("nmi: identity, trivial partition, symmetry") {
  const std::vector<int> labels = {0, 0, 1, 1, 2, 2};
  CHECK(metrics::nmi(labels, labels) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<int> single(6, 0);
  CHECK(metrics::nmi(labels, single) == 0.0);
  Rng rng(6);
  std::vector<int> a(50), b(50);
  for (std::size_t i = 0; i < 50; ++i) {
    a[i] = static_cast<int>(rng.uniform_index(3));
    b[i] = static_cast<int>(rng.uniform_index(4));
  }
  CHECK(metrics::nmi(a, b) == doctest::Approx(metrics::nmi(b, a)).epsilon(1e-12));
  CHECK(metrics::nmi(a, b) >= 0.0);
  CHECK(metrics::nmi(a, b) <= 1.0);
}

TEST_CASE("ari: identity is 1; relabeled clusters still score 1") {
  const std::vector<int> labels = {0, 0, 1, 1, 2, 2};
  CHECK(metrics::ari(labels, labels) == doctest::Approx(1.0).epsilon(1e-12));
  const std::vector<int> renamed = {2, 2, 0, 0, 1, 1};
  CHECK(metrics::ari(labels, renamed) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("nmi/ari: random partitions score near zero") {
  Rng rng(7);
  const std::size_t n = 1000;
  std::vector<int> truth(n), rand_labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    truth[i] = static_cast<int>(i % 3);
    rand_labels[i] = static_cast<int>(rng.uniform_index(3));
  }
  CHECK(std::abs(metrics::ari(truth, rand_labels)) < 0.05);
  CHECK(metrics::nmi(truth, rand_labels) < 0.05);
}

TEST_CASE("kmeans: recovers well-separated blobs and is deterministic") {
  Rng rng(8);
  const int per = 30;
  Matrix x(3 * per, 2);
  std::vector<int> labels(3 * per);
  const double centers[3][2] = {{0, 0}, {10, 0}, {0, 10}};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < per; ++i) {
      x(c * per + i, 0) = centers[c][0] + rng.normal() * 0.5;
      x(c * per + i, 1) = centers[c][1] + rng.normal() * 0.5;
      labels[c * per + i] = c;
    }
  const KMeansResult km = kmeans(x, 3, 17);
  CHECK(metrics::nmi(labels, km.assignment) == doctest::Approx(1.0).epsilon(1e-9));
  const KMeansResult km2 = kmeans(x, 3, 17);
  CHECK(km.assignment == km2.assignment);
}

TEST_CASE("hinge classifier: separates linearly separable classes") {
  Rng rng(9);
  Matrix x(40, 3);
  std::vector<int> y(40);
  for (int i = 0; i < 40; ++i) {
    const int c = i % 2;
    y[i] = c;
    x(i, 0) = (c == 0 ? -2.0 : 2.0) + rng.normal() * 0.2;
    x(i, 1) = rng.normal();
    x(i, 2) = rng.normal();
  }
  HingeClassifier clf;
  clf.fit(x, y, 2);
  const std::vector<int> pred = clf.predict(x);
  CHECK(metrics::f1_scores(y, pred, 2).macro == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("evaluate_classification: perfect embeddings reach F1 = 1") {
  // one-hot rows by class are separable at any ratio
  const int per = 20;
  Matrix z(2 * per, 2);
  std::vector<int> labels(2 * per);
  Rng rng(10);
  for (int i = 0; i < 2 * per; ++i) {
    const int c = i < per ? 0 : 1;
    labels[i] = c;
    z(i, c) = 1.0 + 0.01 * rng.normal();
    z(i, 1 - c) = 0.01 * rng.normal();
  }
  ClassificationOptions opts;
  opts.ratios = {0.2, 0.6};
  opts.repeats = 5;
  opts.seed = 3;
  const EvalReport report = evaluate_classification(z, labels, opts);
  REQUIRE(report.classification.size() == 2);
  for (const RatioMetrics& m : report.classification) {
    CHECK(m.macro_mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.micro_mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.macro_std == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("evaluate_classification: shuffled labels land near chance micro-F1") {
  Rng rng(11);
  const std::size_t n = 400;
  Matrix z = test::random_matrix(rng, n, 8, -1.0, 1.0);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(rng.uniform_index(2));
  ClassificationOptions opts;
  opts.ratios = {0.5};
  opts.repeats = 10;
  opts.seed = 4;
  const EvalReport report = evaluate_classification(z, labels, opts);
  CHECK(report.classification[0].micro_mean == doctest::Approx(0.5).epsilon(0.12));
}

TEST_CASE("evaluate_classification: determinism and the test-pool protocol") {
  Rng rng(12);
  Matrix z = test::random_matrix(rng, 100, 4, -1.0, 1.0);
  std::vector<int> labels(100);
  for (std::size_t i = 0; i < 100; ++i) labels[i] = static_cast<int>(i % 3);
  ClassificationOptions opts;
  opts.ratios = {0.4};
  opts.repeats = 4;
  opts.seed = 9;
  opts.test_fraction = 0.8;
  const EvalReport a = evaluate_classification(z, labels, opts);
  const EvalReport b = evaluate_classification(z, labels, opts);
  CHECK(a.classification[0].macro_mean == b.classification[0].macro_mean);
  CHECK(a.classification[0].macro_std == b.classification[0].macro_std);
}

TEST_CASE("evaluate_clustering: label-identical embeddings give NMI = ARI = 1") {
  const int per = 15;
  Matrix z(3 * per, 3);
  std::vector<int> labels(3 * per);
  for (int i = 0; i < 3 * per; ++i) {
    const int c = i / per;
    labels[i] = c;
    z(i, c) = 5.0;
  }
  ClusteringOptions opts;
  opts.repeats = 10;
  opts.seed = 5;
  const EvalReport report = evaluate_clustering(z, labels, opts);
  CHECK(report.nmi_mean == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.ari_mean == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(report.repeats == 10);
}

TEST_CASE("generate_synthetic: determinism and degenerate settings") {
  SyntheticSpec spec;
  spec.num_classes = 3;
  spec.per_class = 20;
  spec.aux_sizes = {9};
  spec.p_intra = {0.4};
  spec.p_inter = {0.0};
  spec.noise = 0.0;
  spec.seed = 77;
  const HeteroGraph a = generate_synthetic(spec);
  const HeteroGraph b = generate_synthetic(spec);
  CHECK(a.attributes[0] == b.attributes[0]);
  CHECK(a.relations[0].edges == b.relations[0].edges);

  // zero inter-class probability: every edge stays inside its class block
  for (const auto& [i, j] : a.relations[0].edges)
    CHECK(a.labels[i] == static_cast<int>(j % 3));

  // noiseless attributes are identical within a class
  for (int i = 1; i < 20; ++i)
    for (std::size_t col = 0; col < a.attributes[0].cols(); ++col)
      CHECK(a.attributes[0](i, col) == a.attributes[0](0, col));
}

TEST_CASE("generate_synthetic: strong signal lets raw k-means hit NMI > 0.9") {
  SyntheticSpec spec;
  spec.num_classes = 3;
  spec.per_class = 100;
  spec.aux_sizes = {30};
  spec.noise = 0.25;  // strong signal relative to unit-scale centroids
  spec.seed = 78;
  const HeteroGraph g = generate_synthetic(spec);
  ClusteringOptions opts;
  opts.repeats = 5;
  opts.seed = 6;
  const EvalReport report = evaluate_clustering(g.attributes[0], g.labels, opts);
  CHECK(report.nmi_mean > 0.9);
}

TEST_CASE("make_variant changes exactly the variant field") {
  TrainConfig base;
  base.seed = 123;
  base.eps_a = 0.6;
  for (const Variant v : {Variant::TopoOnly, Variant::AttrOnly, Variant::SampTopo,
                          Variant::SampAttr}) {
    const TrainConfig cfg = make_variant(base, v);
    CHECK(cfg.variant == v);
    TrainConfig reverted = cfg;
    reverted.variant = base.variant;
    CHECK(reverted.to_json() == base.to_json());
  }
}

TEST_CASE("majority baseline macro-F1 for balanced classes") {
  std::vector<int> labels;
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < 10; ++i) labels.push_back(c);
  // majority predictor: one class with F1 = 2p/(1+p), p = 1/3; others 0
  const double expected = (2.0 * (1.0 / 3.0) / (1.0 + 1.0 / 3.0)) / 3.0;
  CHECK(metrics::majority_class_macro_f1(labels) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("report rows and CSV writing") {
  EvalReport r;
  r.task = "classification";
  r.repeats = 10;
  r.seed = 42;
  r.config_hash = "abc123";
  RatioMetrics m;
  m.ratio = 0.2;
  m.macro_mean = 0.91;
  m.macro_std = 0.01;
  m.micro_mean = 0.92;
  m.micro_std = 0.02;
  r.classification.push_back(m);
  const auto rows = report_rows(r, "classification", "full");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].metric == "macro_f1");
  CHECK(rows[1].metric == "micro_f1");

  const fs::path file = fs::temp_directory_path() / "hgcl_test_report.csv";
  write_report_csv(rows, file);
  std::ifstream in(file);
  std::string header;
  std::getline(in, header);
  CHECK(header == "task,detail,ratio,metric,mean,stddev,repeats,seed,config_hash");
  std::string line;
  std::getline(in, line);
  CHECK(line.find("classification,full,0.2,macro_f1,0.91") == 0);
  fs::remove(file);
}

// ---------------------------------------------------------------------------
// suite-level checks on a small synthetic instance
// ---------------------------------------------------------------------------

namespace {

SyntheticSpec suite_spec() {
  SyntheticSpec spec;
  spec.num_classes = 2;
  spec.per_class = 12;
  spec.aux_sizes = {8, 6};
  spec.p_intra = {0.5};
  spec.p_inter = {0.08};
  spec.noise = 0.5;
  spec.target_dim = 5;
  spec.aux_dim = 4;
  spec.seed = 90;
  return spec;
}

TrainConfig suite_cfg() {
  TrainConfig cfg;
  cfg.hidden_dim = 6;
  cfg.out_dim = 4;
  cfg.epochs = 6;
  cfg.learning_rate = 5e-3;
  cfg.eps_a = 0.3;
  cfg.eps_homo = NamedValues(0.4);
  cfg.eps_hetero = NamedValues(0.3);
  cfg.patience = 0;
  cfg.seed = 31;
  return cfg;
}

ClassificationOptions suite_copts() {
  ClassificationOptions opts;
  opts.ratios = {0.4};
  opts.repeats = 3;
  opts.seed = 11;
  return opts;
}

}  // namespace

TEST_CASE("ablation_suite covers the five variants deterministically") {
  const HeteroGraph g = generate_synthetic(suite_spec());
  const auto results = ablation_suite(g, suite_cfg(), suite_copts());
  REQUIRE(results.size() == 5);
  CHECK(results[0].variant == Variant::Full);
  CHECK(results[1].variant == Variant::TopoOnly);
  for (const auto& r : results) {
    REQUIRE(r.report.classification.size() == 1);
    CHECK(r.report.classification[0].macro_mean >= 0.0);
    CHECK(r.report.classification[0].macro_mean <= 1.0);
  }
  const auto again = ablation_suite(g, suite_cfg(), suite_copts());
  for (std::size_t i = 0; i < results.size(); ++i)
    CHECK(results[i].report.classification[0].macro_mean ==
          again[i].report.classification[0].macro_mean);
}

TEST_CASE("robustness_suite: level-0 edge deletion equals the clean pipeline") {
  const HeteroGraph g = generate_synthetic(suite_spec());
  const TrainConfig cfg = suite_cfg();
  const ClassificationOptions copts = suite_copts();

  const auto cells = robustness_suite(g, cfg, {Perturbation::EdgeDeletion}, {0.0}, copts);
  REQUIRE(cells.size() == 1);
  const train::TrainedModel clean = train::train(g, cfg);
  const EvalReport clean_report = evaluate_classification(clean.z, g.labels, copts);
  CHECK(cells[0].report.classification[0].macro_mean ==
        clean_report.classification[0].macro_mean);
  CHECK(cells[0].report.classification[0].micro_mean ==
        clean_report.classification[0].micro_mean);
}

TEST_CASE("parameter sweeps: single-cell grids match direct runs") {
  const HeteroGraph g = generate_synthetic(suite_spec());
  const TrainConfig cfg = suite_cfg();
  const ClassificationOptions copts = suite_copts();

  const SweepResult eps = sweep_eps_a(g, cfg, {cfg.eps_a}, copts);
  REQUIRE(eps.macro_f1.size() == 1);
  TrainConfig direct_cfg = cfg;
  direct_cfg.eps_a = cfg.eps_a;
  const train::TrainedModel m = train::train(g, direct_cfg);
  const double direct = evaluate_classification(m.z, g.labels, copts).mean_macro_f1();
  CHECK(eps.macro_f1[0] == direct);

  const SweepResult delta = sweep_delta(g, cfg, {1.0}, copts);
  REQUIRE(delta.macro_f1.size() == 1);  // 1x1 grid over two meta-paths
  CHECK(delta.values[0] == std::vector<double>{1.0, 1.0});
  const SweepResult delta2 = sweep_delta(g, cfg, {1.0}, copts);
  CHECK(delta.macro_f1 == delta2.macro_f1);
}
