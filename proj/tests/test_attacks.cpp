#include "doctest.h"

#include "ppgsl/attacks.hpp"
#include "ppgsl/graph.hpp"
#include "ppgsl/numkit.hpp"
#include "ppgsl/rng.hpp"

#include "support.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

using namespace ppgsl;

TEST_CASE("attack method names are fixed") {
    CHECK(heuristic_name(HeuristicKind::CommonNeighbors) == "cn");
    CHECK(heuristic_name(HeuristicKind::AdamicAdar) == "aa");
    CHECK(heuristic_name(HeuristicKind::ResourceAllocation) == "ra");
    CHECK(embed_method_name(HeadKind::Cosine) == "embed_cos");
    CHECK(embed_method_name(HeadKind::InnerProduct) == "embed_ip");
    CHECK(embed_method_name(HeadKind::Mlp) == "embed_mlp");
}

TEST_CASE("neighborhood scores match set-based references on random graphs") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const int n = 10 + static_cast<int>(seed % 30);
        const Graph g = refimpl::random_graph(n, 0.15 + 0.02 * static_cast<double>(seed % 5),
                                              1000 + seed);
        std::vector<NodePair> pairs;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) pairs.emplace_back(u, v);

        const std::vector<double> cn =
            heuristic_scores(g.adjacency, HeuristicKind::CommonNeighbors, pairs);
        const std::vector<double> aa =
            heuristic_scores(g.adjacency, HeuristicKind::AdamicAdar, pairs);
        const std::vector<double> ra =
            heuristic_scores(g.adjacency, HeuristicKind::ResourceAllocation, pairs);

        for (size_t k = 0; k < pairs.size(); ++k) {
            const int u = pairs[k].u, v = pairs[k].v;
            // bitwise equality: both sides accumulate in ascending neighbor order
            CHECK(cn[k] == refimpl::common_neighbors(g.adjacency, u, v));
            CHECK(aa[k] == refimpl::adamic_adar(g.adjacency, u, v));
            CHECK(ra[k] == refimpl::resource_allocation(g.adjacency, u, v));
            CHECK(heuristic_score(g.adjacency, HeuristicKind::CommonNeighbors, u, v) == cn[k]);
        }
    }
}

TEST_CASE("neighborhood scores ignore explicit zero entries") {
    // a path 0-1-2 plus a zero-weight stored entry 1-3 that must not count
    std::vector<Edge> edges = {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}};
    SpMat a = adjacency_from_edges(4, edges);
    a.coeffRef(1, 3) = 0.0;
    a.coeffRef(3, 1) = 0.0;

    CHECK(heuristic_score(a, HeuristicKind::CommonNeighbors, 0, 2) == 1.0);
    CHECK(heuristic_score(a, HeuristicKind::CommonNeighbors, 0, 3) == 0.0);
    // degree of node 1 stays 2, so AA sees 1/ln(2)
    CHECK(heuristic_score(a, HeuristicKind::AdamicAdar, 0, 2) ==
          doctest::Approx(1.0 / std::log(2.0)));
    CHECK(heuristic_score(a, HeuristicKind::ResourceAllocation, 0, 2) == doctest::Approx(0.5));
}

TEST_CASE("roc_auc agrees with the brute-force rank statistic") {
    RngStream rng(55);
    for (int trial = 0; trial < 300; ++trial) {
        const size_t np = 1 + static_cast<size_t>(rng.uniform_int(20));
        const size_t nn = 1 + static_cast<size_t>(rng.uniform_int(20));
        std::vector<double> pos(np), neg(nn);
        // coarse grid forces plenty of ties
        for (double& s : pos) s = static_cast<double>(rng.uniform_int(8)) / 4.0;
        for (double& s : neg) s = static_cast<double>(rng.uniform_int(8)) / 4.0;

        const double got = roc_auc(pos, neg);
        const double want = refimpl::auc(pos, neg);
        CHECK(std::abs(got - want) < 1e-12);
        // the complement identity holds exactly, not just approximately
        CHECK(roc_auc(pos, neg) + roc_auc(neg, pos) == 1.0);
    }
}

TEST_CASE("roc_auc endpoint and tie cases") {
    CHECK(roc_auc({2.0, 3.0}, {0.0, 1.0}) == 1.0);
    CHECK(roc_auc({0.0, 1.0}, {2.0, 3.0}) == 0.0);
    CHECK(roc_auc({1.0}, {1.0}) == 0.5);
    CHECK(roc_auc({1.0, 1.0, 1.0}, {1.0, 1.0}) == 0.5);

    CHECK_THROWS_AS(roc_auc({}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(roc_auc({1.0}, {}), std::invalid_argument);
    CHECK_THROWS_AS(roc_auc({std::numeric_limits<double>::quiet_NaN()}, {1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(roc_auc({1.0}, {std::numeric_limits<double>::infinity()}),
                    std::invalid_argument);
}

TEST_CASE("heuristic attacks score hidden links above matched negatives") {
    // hidden links inside dense blocks keep lots of common neighbors, so the
    // neighborhood heuristics should separate them from cross-block negatives
    const Graph truth = generate_sbm({40, 40}, 0.5, 0.02, 71);
    const MaskedGraph masked = mask_sensitive(truth, 0.1, 72);

    for (HeuristicKind h : {HeuristicKind::CommonNeighbors, HeuristicKind::AdamicAdar,
                            HeuristicKind::ResourceAllocation}) {
        const AttackResult r = heuristic_attack(masked.visible, masked.splits, h);
        CHECK(r.method == heuristic_name(h));
        CHECK(r.pos_scores.size() == masked.splits.sensitive.size());
        CHECK(r.neg_scores.size() == masked.splits.eval_negatives.size());
        CHECK(r.auc == roc_auc(r.pos_scores, r.neg_scores));
        CHECK(r.auc > 0.8);
        CHECK(!r.model);  // structural scores carry no trained model
    }
}

TEST_CASE("embedding attack learns the planted structure") {
    const Graph truth = generate_sbm({30, 30}, 0.5, 0.02, 81);
    const MaskedGraph masked = mask_sensitive(truth, 0.1, 82);

    AttackTrainConfig cfg;
    cfg.hidden1 = 32;
    cfg.hidden2 = 16;
    cfg.epochs = 120;

    const AttackResult r = embedding_attack(masked.visible, masked.splits, HeadKind::Cosine,
                                            cfg, 83);
    CHECK(r.method == "embed_cos");
    CHECK(r.pos_scores.size() == masked.splits.sensitive.size());
    CHECK(r.auc > 0.7);
    REQUIRE(r.model);
    CHECK(r.model->head.kind == HeadKind::Cosine);

    // deterministic for a fixed seed
    const AttackResult r2 = embedding_attack(masked.visible, masked.splits, HeadKind::Cosine,
                                             cfg, 83);
    CHECK(r2.auc == r.auc);
    CHECK(r2.pos_scores == r.pos_scores);
    CHECK(model_checksum(*r2.model) == model_checksum(*r.model));
}

TEST_CASE("the attack suite runs every method in fixed order") {
    const Graph truth = generate_sbm({25, 25}, 0.45, 0.03, 91);
    const MaskedGraph masked = mask_sensitive(truth, 0.1, 92);

    AttackTrainConfig cfg;
    cfg.hidden1 = 16;
    cfg.hidden2 = 8;
    cfg.epochs = 30;

    const std::vector<AttackResult> suite = run_attack_suite(masked.visible, masked.splits,
                                                             cfg, 93);
    REQUIRE(suite.size() == 6);
    const char* order[] = {"cn", "aa", "ra", "embed_cos", "embed_ip", "embed_mlp"};
    for (size_t i = 0; i < 6; ++i) {
        CHECK(suite[i].method == order[i]);
        CHECK(suite[i].auc >= 0.0);
        CHECK(suite[i].auc <= 1.0);
    }

    // each embedding attack draws its own stream: equal seeds reproduce, and
    // the encoders (same shape for every head) start from different draws
    const std::vector<AttackResult> again = run_attack_suite(masked.visible, masked.splits,
                                                             cfg, 93);
    for (size_t i = 0; i < 6; ++i) CHECK(again[i].auc == suite[i].auc);
    CHECK(checksum(suite[3].model->encoder.w1) != checksum(suite[4].model->encoder.w1));
    CHECK(checksum(suite[4].model->encoder.w1) != checksum(suite[5].model->encoder.w1));
}
