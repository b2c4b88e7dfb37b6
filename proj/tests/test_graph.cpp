#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "tgcm/graph.hpp"
#include "tgcm/rng.hpp"

using namespace tgcm;

TEST_CASE("cooccurrence window counting") {
  // [a,b] w=2: a single window
  auto stats = cooccurrence({1, 2}, 2);
  CHECK(stats.window_count == 1);
  CHECK(stats.pair_count(1, 2) == 1);
  CHECK(stats.unigram_count(1) == 1);
  CHECK(stats.unigram_count(2) == 1);

  // [a,b,a,b] w=2: windows [a,b],[b,a],[a,b]
  stats = cooccurrence({1, 2, 1, 2}, 2);
  CHECK(stats.window_count == 3);
  CHECK(stats.pair_count(1, 2) == 3);

  // repeated token forms no self-pair
  stats = cooccurrence({1, 1}, 2);
  CHECK(stats.window_count == 1);
  CHECK(stats.pair_counts.empty());
  CHECK(stats.unigram_count(1) == 1);

  // shorter than the window: one window
  stats = cooccurrence({1, 2}, 5);
  CHECK(stats.window_count == 1);
  CHECK(stats.pair_count(1, 2) == 1);

  CHECK(cooccurrence({}, 3).window_count == 0);
}

TEST_CASE("ppmi on the hand-enumerated stream") {
  // [a,b,a,b,c,d,c,d] w=2: N_w=7, c(a,b)=3, c(a)=3, c(b)=4
  std::vector<int> ids{1, 2, 1, 2, 3, 4, 3, 4};
  auto stats = cooccurrence(ids, 2);
  CHECK(stats.window_count == 7);
  CHECK(stats.pair_count(1, 2) == 3);
  CHECK(stats.unigram_count(1) == 3);
  CHECK(stats.unigram_count(2) == 4);
  CHECK(ppmi(stats, 1, 2) == doctest::Approx(std::log(7.0 / 4.0)).epsilon(1e-12));
  // negative PMI clips to zero: ln(7/16) < 0
  CHECK(ppmi(stats, 2, 3) == 0.0);
  // unseen pair
  CHECK(ppmi(stats, 1, 4) == 0.0);
  // symmetry
  CHECK(ppmi(stats, 2, 1) == ppmi(stats, 1, 2));
}

TEST_CASE("ppmi matches the window-enumeration oracle on random streams") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    int len = rng.next_int(1, 12);
    int w = rng.next_int(2, 4);
    std::vector<int> ids;
    for (int i = 0; i < len; ++i) ids.push_back(rng.next_int(0, 4));
    auto stats = cooccurrence(ids, w);
    oracle::PpmiOracle ref(ids, w);
    CHECK(stats.window_count == ref.windows);
    for (int i = 0; i <= 4; ++i)
      for (int j = i + 1; j <= 4; ++j)
        CHECK(ppmi(stats, i, j) == doctest::Approx(ref.ppmi(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("to_csr validates and round-trips") {
  Csr<double> empty = to_csr<double>({}, 2);
  CHECK(empty.nnz() == 0);
  CHECK(to_dense(empty).isZero());

  Csr<double> one = to_csr<double>({{0, 1, 0.5}}, 2);
  CHECK(one.nnz() == 1);
  CHECK(to_dense(one)(0, 1) == 0.5);

  CHECK_THROWS_AS(to_csr<double>({{0, 2, 1.0}}, 2), Error);
  CHECK_THROWS_AS(to_csr<double>({{-1, 0, 1.0}}, 2), Error);
  CHECK_THROWS_AS(to_csr<double>({{0, 1, 1.0}, {0, 1, 2.0}}, 2), Error);

  // dense -> triplets -> CSR -> dense is the identity
  Rng rng(5);
  Mat<double> dense = Mat<double>::Zero(5, 5);
  std::vector<Triplet<double>> triplets;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c)
      if (rng.next_double() < 0.4) {
        double v = rng.uniform(-2.0, 2.0);
        dense(r, c) = v;
        triplets.emplace_back(r, c, v);
      }
  CHECK(to_dense(to_csr(std::move(triplets), 5)) == dense);
}

TEST_CASE("normalize worked examples") {
  auto a1 = to_csr<double>({{0, 1, 1.0}, {1, 0, 1.0}}, 2);
  Mat<double> n1 = to_dense(normalize(a1));
  CHECK(n1(0, 0) == doctest::Approx(0.5));
  CHECK(n1(0, 1) == doctest::Approx(0.5));
  CHECK(n1(1, 0) == doctest::Approx(0.5));
  CHECK(n1(1, 1) == doctest::Approx(0.5));

  auto a3 = to_csr<double>({{0, 1, 3.0}, {1, 0, 3.0}}, 2);
  Mat<double> n3 = to_dense(normalize(a3));
  CHECK(n3(0, 0) == doctest::Approx(0.25));
  CHECK(n3(0, 1) == doctest::Approx(0.75));

  auto isolated = to_csr<double>({}, 1);
  CHECK(to_dense(normalize(isolated))(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("normalize matches the dense oracle on random graphs") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    int n = rng.next_int(1, 6);
    std::vector<std::vector<double>> dense(n, std::vector<double>(n, 0.0));
    std::vector<Triplet<double>> triplets;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.next_double() < 0.5) {
          double w = rng.uniform(0.01, 3.0);
          dense[i][j] = dense[j][i] = w;
          triplets.emplace_back(i, j, w);
          triplets.emplace_back(j, i, w);
        }
    Mat<double> got = to_dense(normalize(to_csr(std::move(triplets), n)));
    auto want = oracle::normalize_dense(dense);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(std::abs(got(i, j) - want[static_cast<std::size_t>(i)]
                                       [static_cast<std::size_t>(j)]) < 1e-6);
  }
}

TEST_CASE("normalize folds an existing diagonal into the self-loop") {
  // A with a self edge: the dense oracle handles it the same way
  auto a = to_csr<double>({{0, 0, 2.0}, {0, 1, 1.0}, {1, 0, 1.0}}, 2);
  Mat<double> got = to_dense(normalize(a));
  auto want = oracle::normalize_dense({{2.0, 1.0}, {1.0, 0.0}});
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(got(i, j) == doctest::Approx(want[static_cast<std::size_t>(i)]
                                             [static_cast<std::size_t>(j)]));

  Mat<double> l = to_dense(laplacian(a));
  CHECK(std::abs(l.row(0).sum()) < 1e-12);
  CHECK(std::abs(l.row(1).sum()) < 1e-12);
}

TEST_CASE("laplacian rows sum to zero") {
  auto a = to_csr<double>({{0, 1, 1.0}, {1, 0, 1.0}}, 2);
  Mat<double> l = to_dense(laplacian(a));
  CHECK(l(0, 0) == 1.0);
  CHECK(l(0, 1) == -1.0);
  CHECK(l(1, 0) == -1.0);
  CHECK(l(1, 1) == 1.0);

  CHECK(to_dense(laplacian(to_csr<double>({}, 1)))(0, 0) == 0.0);

  auto a2 = to_csr<double>({{0, 1, 2.0}, {1, 0, 2.0}}, 2);
  Mat<double> l2 = to_dense(laplacian(a2));
  CHECK(l2(0, 0) == 2.0);
  CHECK(l2(0, 1) == -2.0);

  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    int n = rng.next_int(1, 7);
    std::vector<Triplet<double>> triplets;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.next_double() < 0.5) {
          double w = rng.uniform(0.1, 2.0);
          triplets.emplace_back(i, j, w);
          triplets.emplace_back(j, i, w);
        }
    Mat<double> l = to_dense(laplacian(to_csr(std::move(triplets), n)));
    for (int i = 0; i < n; ++i) CHECK(std::abs(l.row(i).sum()) < 1e-9);
  }
}

TEST_CASE("build_graph worked examples") {
  GraphConfig cfg;
  cfg.window_size = 2;

  // single token: one node, no edges, A_hat = [1]
  TextGraph<double> single = build_graph<double>({7}, cfg);
  CHECK(single.size() == 1);
  CHECK(single.A.nnz() == 0);
  CHECK(to_dense(single.A_hat)(0, 0) == doctest::Approx(1.0));

  // [a,b,a,b,c,d,c,d]: edges a-b and c-d at ln(7/4); b-c pruned (PPMI 0)
  TextGraph<double> g = build_graph<double>({1, 2, 1, 2, 3, 4, 3, 4}, cfg);
  CHECK(g.size() == 4);
  CHECK(g.nodes == std::vector<int>{1, 2, 3, 4});
  Mat<double> a = to_dense(g.A);
  double w = std::log(7.0 / 4.0);
  CHECK(a(0, 1) == doctest::Approx(w));
  CHECK(a(1, 0) == doctest::Approx(w));
  CHECK(a(2, 3) == doctest::Approx(w));
  CHECK(a(1, 2) == 0.0);
  CHECK(g.A.nnz() == 4);

  CHECK_THROWS_AS(build_graph<double>({}, cfg), Error);
}

TEST_CASE("top-k pruning keeps the union of per-node picks") {
  // Star: hub 0 with spokes 1,2,3 at distinct weights. With k=1 the hub marks
  // only its strongest edge, but every spoke marks its hub edge, so all three
  // survive.
  std::vector<WeightedEdge> star{{0, 1, 0.5}, {0, 2, 0.9}, {0, 3, 0.7}};
  auto kept = select_top_k(star, 4, 1);
  CHECK(kept == std::vector<char>{1, 1, 1});

  // With k=2 on a path graph the middle node cannot save the weakest edge.
  std::vector<WeightedEdge> path{{0, 1, 0.9}, {1, 2, 0.5}, {1, 3, 0.7}};
  kept = select_top_k(path, 4, 1);
  // node1 marks 0-1; node2 marks 1-2; node3 marks 1-3: union keeps all
  CHECK(kept == std::vector<char>{1, 1, 1});
}

TEST_CASE("top-k selection matches a brute-force reimplementation") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    int n = rng.next_int(2, 7);
    std::vector<WeightedEdge> candidates;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.next_double() < 0.6)
          candidates.push_back({u, v, rng.uniform(0.01, 1.0)});
    int k = rng.next_int(1, 3);
    auto kept = select_top_k(candidates, n, k);

    // independently: edge kept iff it ranks in the top k of either endpoint
    for (std::size_t e = 0; e < candidates.size(); ++e) {
      bool expect = false;
      for (int endpoint : {candidates[e].u, candidates[e].v}) {
        int stronger = 0;
        for (std::size_t f = 0; f < candidates.size(); ++f) {
          if (f == e) continue;
          if (candidates[f].u != endpoint && candidates[f].v != endpoint) continue;
          if (candidates[f].weight > candidates[e].weight) ++stronger;
        }
        if (stronger < k) expect = true;
      }
      CHECK(static_cast<bool>(kept[e]) == expect);
    }
  }
}

TEST_CASE("build_graph is deterministic") {
  GraphConfig cfg;
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> ids;
    int len = rng.next_int(1, 30);
    for (int i = 0; i < len; ++i) ids.push_back(rng.next_int(0, 9));
    TextGraph<double> g1 = build_graph<double>(ids, cfg);
    TextGraph<double> g2 = build_graph<double>(ids, cfg);
    CHECK(g1.nodes == g2.nodes);
    CHECK(g1.A.indices == g2.A.indices);
    CHECK(g1.A.values == g2.A.values);
  }
}

TEST_CASE("spectral radius of A_hat stays at or below one") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> ids;
    int len = rng.next_int(1, 20);
    for (int i = 0; i < len; ++i) ids.push_back(rng.next_int(0, 7));
    GraphConfig cfg;
    cfg.window_size = rng.next_int(2, 4);
    TextGraph<double> g = build_graph<double>(ids, cfg);
    if (g.size() > 8) continue;
    // power iteration on the dense form
    Mat<double> a_hat = to_dense(g.A_hat);
    Mat<double> v = Mat<double>::Constant(a_hat.rows(), 1, 1.0);
    double radius = 0.0;
    for (int it = 0; it < 200; ++it) {
      Mat<double> next = a_hat * v;
      radius = next.norm() / v.norm();
      if (next.norm() == 0.0) break;
      v = next / next.norm();
    }
    CHECK(radius <= 1.0 + 1e-6);
  }
}

TEST_CASE("neighbor_lists includes self once") {
  auto a = to_csr<double>({{0, 1, 1.0}, {1, 0, 1.0}}, 3);
  auto adj = neighbor_lists(a, true);
  CHECK(adj[0] == std::vector<int>{0, 1});
  CHECK(adj[1] == std::vector<int>{1, 0});
  CHECK(adj[2] == std::vector<int>{2});
  auto bare = neighbor_lists(a, false);
  CHECK(bare[2].empty());
}
