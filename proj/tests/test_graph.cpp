#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "hgcl/dataset_io.hpp"
#include "hgcl/graph.hpp"
#include "support.hpp"

using namespace hgcl;
namespace fs = std::filesystem;

namespace {

/// Two-type graph with the author-paper-author running example:
/// A1-P1-A2, A2-P2-A3 (0-based: authors 0,1,2; papers 0,1).
HeteroGraph apa_line_graph() {
  HeteroGraph g;
  g.node_types = {"author", "paper"};
  g.node_counts = {3, 2};
  g.attributes = {Matrix(3, 2, 1.0), Matrix(2, 2, 1.0)};
  Relation pa;
  pa.src_type = "paper";
  pa.name = "PA";
  pa.dst_type = "author";
  pa.edges = {{0, 0}, {0, 1}, {1, 1}, {1, 2}};
  g.relations = {pa};
  g.target_type = "author";
  return g;
}

MetaPath apa_path() {
  MetaPath m;
  m.name = "APA";
  m.type_sequence = {"author", "paper", "author"};
  m.relation_sequence = {"PA", "PA"};
  return m;
}

/// Graph whose per-type node and edge counts match a Table-1 row; edge
/// targets are arbitrary but in range.
HeteroGraph counts_shaped_graph(const std::vector<std::pair<std::string, std::size_t>>& types,
                                const std::vector<std::tuple<std::string, std::string,
                                                             std::string, std::size_t>>& rels) {
  HeteroGraph g;
  for (const auto& [name, count] : types) {
    g.node_types.push_back(name);
    g.node_counts.push_back(count);
    g.attributes.emplace_back(count, 1);
  }
  g.target_type = types.front().first;
  for (const auto& [name, src, dst, count] : rels) {
    Relation r;
    r.name = name;
    r.src_type = src;
    r.dst_type = dst;
    const std::size_t ns = g.node_counts[g.type_index(src)];
    const std::size_t nd = g.node_counts[g.type_index(dst)];
    for (std::size_t k = 0; k < count; ++k)
      r.edges.emplace_back(static_cast<std::uint32_t>(k % ns),
                           static_cast<std::uint32_t>(k % nd));
    g.relations.push_back(std::move(r));
  }
  validate(g);
  return g;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("hgcl_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("validate: heterogeneity and index bounds") {
  HeteroGraph g = apa_line_graph();
  CHECK_NOTHROW(validate(g));

  SUBCASE("edge index out of range") {
    g.relations[0].edges.push_back({0, 5});
    CHECK_THROWS_AS(validate(g), GraphError);
  }
  SUBCASE("attribute row count mismatch") {
    g.attributes[0] = Matrix(2, 2);
    CHECK_THROWS_AS(validate(g), GraphError);
  }
  SUBCASE("non-finite attribute") {
    g.attributes[0](0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(validate(g), GraphError);
  }
  SUBCASE("labels must cover the target type") {
    g.labels = {0, 1};  // 3 authors
    CHECK_THROWS_AS(validate(g), GraphError);
    g.labels = {0, 1, 0};
    CHECK_NOTHROW(validate(g));
  }
  SUBCASE("single type with no relations fails the heterogeneity condition") {
    HeteroGraph h;
    h.node_types = {"only"};
    h.node_counts = {3};
    h.attributes = {Matrix(3, 1)};
    h.target_type = "only";
    CHECK_THROWS_AS(validate(h), GraphError);
  }
}

TEST_CASE("density: Table-1 shaped fixtures and the zero-edge graph") {
  const HeteroGraph acm = counts_shaped_graph(
      {{"paper", 4019}, {"author", 7167}, {"subject", 60}},
      {{"PP", "paper", "paper", 9615},
       {"PA", "paper", "author", 13407},
       {"PS", "paper", "subject", 4019}});
  // 27041 / 11246^2
  CHECK(density(acm) == doctest::Approx(27041.0 / (11246.0 * 11246.0)).epsilon(1e-12));
  CHECK(density(acm) == doctest::Approx(0.00021).epsilon(0.05));  // 2 significant figures

  const HeteroGraph yelp = counts_shaped_graph(
      {{"business", 2614}, {"user", 1286}, {"service", 4}, {"level", 9}},
      {{"BU", "business", "user", 30838},
       {"BS", "business", "service", 2614},
       {"BL", "business", "level", 2614}});
  CHECK(density(yelp) == doctest::Approx(36066.0 / (3913.0 * 3913.0)).epsilon(1e-12));
  CHECK(density(yelp) == doctest::Approx(0.00235).epsilon(0.05));

  HeteroGraph empty = apa_line_graph();
  empty.relations[0].edges.clear();
  CHECK(density(empty) == 0.0);
}

TEST_CASE("meta_path_neighbors: APA on the line graph") {
  const HeteroGraph g = apa_line_graph();
  const MetaPathAdjacency adj = meta_path_neighbors(g, apa_path());
  // A1(0)-P1-A2(1), A2-P2-A3(2): N(0)={0,1}, N(1)={0,1,2}, N(2)={1,2}
  CHECK(adj.neighbor_sets[0] == std::vector<std::uint32_t>{0, 1});
  CHECK(adj.neighbor_sets[1] == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(adj.neighbor_sets[2] == std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("meta_path_neighbors: empty edge set leaves only self-inclusion") {
  HeteroGraph g = apa_line_graph();
  g.relations[0].edges.clear();
  const MetaPathAdjacency adj = meta_path_neighbors(g, apa_path());
  for (std::uint32_t i = 0; i < 3; ++i)
    CHECK(adj.neighbor_sets[i] == std::vector<std::uint32_t>{i});
}

TEST_CASE("meta_path_neighbors: unknown relation or type is an error") {
  const HeteroGraph g = apa_line_graph();
  MetaPath bad = apa_path();
  bad.relation_sequence = {"PA", "PX"};
  CHECK_THROWS_AS(meta_path_neighbors(g, bad), GraphError);
  bad = apa_path();
  bad.type_sequence = {"author", "venue", "author"};
  CHECK_THROWS_AS(meta_path_neighbors(g, bad), GraphError);
  bad = apa_path();
  bad.type_sequence = {"paper", "author", "paper"};  // wrong endpoints
  CHECK_THROWS_AS(meta_path_neighbors(g, bad), GraphError);
}

TEST_CASE("meta_path_neighbors: equals brute-force path enumeration on random graphs") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const HeteroGraph g = test::random_hetero_graph(seed);
    for (const MetaPath& m : g.meta_paths) {
      const MetaPathAdjacency adj = meta_path_neighbors(g, m);
      const auto oracle = test::brute_force_metapath(g, m);
      REQUIRE(adj.neighbor_sets.size() == oracle.size());
      for (std::size_t i = 0; i < oracle.size(); ++i) {
        INFO("seed ", seed, " path ", m.name, " node ", i);
        CHECK(adj.neighbor_sets[i] == oracle[i]);
      }
    }
  }
}

TEST_CASE("meta_path_neighbors: symmetric for palindromic paths") {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const HeteroGraph g = test::random_hetero_graph(seed);
    for (const MetaPath& m : g.meta_paths) {
      std::vector<std::string> reversed_types(m.type_sequence.rbegin(),
                                              m.type_sequence.rend());
      if (reversed_types != m.type_sequence) continue;
      const MetaPathAdjacency adj = meta_path_neighbors(g, m);
      for (std::uint32_t i = 0; i < adj.neighbor_sets.size(); ++i)
        for (const std::uint32_t j : adj.neighbor_sets[i]) CHECK(adj.contains(j, i));
    }
  }
}

TEST_CASE("perturb_edges: endpoints p=0 and p=1, binomial mid, determinism") {
  const HeteroGraph base = counts_shaped_graph(
      {{"t", 100}, {"a", 100}}, {{"R", "t", "a", 10000}});

  const HeteroGraph same = perturb_edges(base, 0.0, 7);
  CHECK(same.relations[0].edges == base.relations[0].edges);

  const HeteroGraph none = perturb_edges(base, 1.0, 7);
  CHECK(none.relations[0].edges.empty());

  const HeteroGraph half = perturb_edges(base, 0.5, 7);
  const double kept = static_cast<double>(half.relations[0].edges.size());
  CHECK(std::abs(kept - 5000.0) <= 3.0 * 50.0);  // binomial 3 sigma

  const HeteroGraph half2 = perturb_edges(base, 0.5, 7);
  CHECK(half.relations[0].edges == half2.relations[0].edges);
  const HeteroGraph other_seed = perturb_edges(base, 0.5, 8);
  CHECK(half.relations[0].edges != other_seed.relations[0].edges);

  CHECK(half.total_nodes() == base.total_nodes());
  CHECK(half.attributes[0] == base.attributes[0]);
}

TEST_CASE("mask_attributes: ratio endpoints, exact count, determinism") {
  Rng rng(55);
  HeteroGraph g = apa_line_graph();
  g.attributes[0] = test::random_matrix(rng, 3, 100, 0.5, 1.5);  // no existing zeros
  g.attributes[1] = test::random_matrix(rng, 2, 100, 0.5, 1.5);

  const HeteroGraph same = mask_attributes(g, 0.0, 3);
  CHECK(same.attributes[0] == g.attributes[0]);

  const HeteroGraph zeroed = mask_attributes(g, 1.0, 3);
  for (std::size_t i = 0; i < zeroed.attributes[0].size(); ++i)
    CHECK(zeroed.attributes[0].data()[i] == 0.0);

  const HeteroGraph quarter = mask_attributes(g, 0.25, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    std::size_t zeros = 0;
    for (std::size_t j = 0; j < 100; ++j)
      if (quarter.attributes[0](i, j) == 0.0) ++zeros;
    CHECK(zeros == 25);
  }

  const HeteroGraph quarter2 = mask_attributes(g, 0.25, 3);
  CHECK(quarter.attributes[0] == quarter2.attributes[0]);
  CHECK(quarter.attributes[1] == quarter2.attributes[1]);
}

// ---------------------------------------------------------------------------
// dataset loading
// ---------------------------------------------------------------------------

TEST_CASE("load_graph: minimal two-type dataset round trip") {
  const fs::path dir = fresh_dir("minimal");
  {
    std::ofstream schema(dir / "schema.json");
    schema << R"({
      "node_types": ["author", "paper"],
      "target_type": "author",
      "relations": [{"name": "AP", "src": "author", "dst": "paper"}],
      "meta_paths": [{"name": "APA", "types": ["author", "paper", "author"],
                      "relations": ["AP", "AP"]}]
    })";
    std::ofstream nodes_a(dir / "nodes_author.csv");
    nodes_a << "node_index,f0,f1\n0,1.0,0.5\n1,0.25,1.5\n";
    std::ofstream nodes_p(dir / "nodes_paper.csv");
    nodes_p << "node_index,f0\n0,2.0\n";
    std::ofstream edges(dir / "edges_AP.csv");
    edges << "src,dst\n0,0\n1,0\n";
  }
  const HeteroGraph g = load_graph(dir);
  CHECK(g.node_counts == std::vector<std::size_t>{2, 1});
  CHECK(g.target_type == "author");
  CHECK(g.relations[0].edges.size() == 2);
  CHECK(g.attributes[0](1, 1) == 1.5);
  CHECK(g.meta_paths.size() == 1);
  CHECK_FALSE(g.has_labels());

  // save -> load returns the same graph
  const fs::path dir2 = fresh_dir("minimal2");
  save_graph(g, dir2);
  const HeteroGraph g2 = load_graph(dir2);
  CHECK(g2.node_counts == g.node_counts);
  CHECK(g2.attributes[0] == g.attributes[0]);
  CHECK(g2.relations[0].edges == g.relations[0].edges);
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("load_graph: distinct diagnostics name file and line") {
  const fs::path dir = fresh_dir("io_errors");
  auto write_schema = [&] {
    std::ofstream schema(dir / "schema.json");
    schema << R"({"node_types": ["author"], "target_type": "author",
                  "relations": [{"name": "AA", "src": "author", "dst": "author"}]})";
  };

  SUBCASE("missing file") {
    write_schema();
    try {
      load_graph(dir);
      FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
      CHECK(std::string(e.what()).find("nodes_author.csv") != std::string::npos);
      CHECK(std::string(e.what()).find("missing file") != std::string::npos);
    }
  }
  SUBCASE("out-of-range edge index names the line") {
    write_schema();
    std::ofstream(dir / "nodes_author.csv") << "node_index,f0\n0,1\n1,2\n";
    std::ofstream(dir / "edges_AA.csv") << "src,dst\n0,1\n0,5\n";
    try {
      load_graph(dir);
      FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("edges_AA.csv:3") != std::string::npos);
      CHECK(msg.find("out of range") != std::string::npos);
    }
  }
  SUBCASE("ragged node row is a dimension mismatch") {
    write_schema();
    std::ofstream(dir / "nodes_author.csv") << "node_index,f0,f1\n0,1,2\n1,3\n";
    std::ofstream(dir / "edges_AA.csv") << "src,dst\n";
    try {
      load_graph(dir);
      FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
      CHECK(std::string(e.what()).find("nodes_author.csv:3") != std::string::npos);
    }
  }
  SUBCASE("non-finite attribute is rejected") {
    write_schema();
    std::ofstream(dir / "nodes_author.csv") << "node_index,f0\n0,nan\n";
    std::ofstream(dir / "edges_AA.csv") << "src,dst\n";
    CHECK_THROWS_AS(load_graph(dir), DatasetError);
  }
  fs::remove_all(dir);
}

TEST_CASE("load_graph: labels load for the target type") {
  const fs::path dir = fresh_dir("labels");
  std::ofstream(dir / "schema.json")
      << R"({"node_types": ["item", "tag"], "target_type": "item",
             "relations": [{"name": "IT", "src": "item", "dst": "tag"}]})";
  std::ofstream(dir / "nodes_item.csv") << "node_index,label,f0\n0,1,0.5\n1,0,0.25\n";
  std::ofstream(dir / "nodes_tag.csv") << "node_index,f0\n0,1\n";
  std::ofstream(dir / "edges_IT.csv") << "src,dst\n0,0\n";
  const HeteroGraph g = load_graph(dir);
  CHECK(g.labels == std::vector<int>{1, 0});
  CHECK(g.num_classes() == 2);
  fs::remove_all(dir);
}
