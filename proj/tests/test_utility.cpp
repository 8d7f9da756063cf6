#include "doctest.h"

#include "ppgsl/graph.hpp"
#include "ppgsl/utility.hpp"

#include "support.hpp"

#include <stdexcept>
#include <vector>

using namespace ppgsl;

TEST_CASE("link prediction utility separates held-out edges on a clean graph") {
    const Graph truth = generate_sbm({40, 40}, 0.5, 0.02, 11);
    const MaskedGraph masked = mask_sensitive(truth, 0.1, 12);

    AttackTrainConfig cfg;
    cfg.hidden1 = 32;
    cfg.hidden2 = 16;
    cfg.epochs = 120;
    cfg.seed = 13;

    const double auc = linkpred_auc(masked.visible, masked.splits, cfg);
    CHECK(auc > 0.7);
    CHECK(auc <= 1.0);
    CHECK(linkpred_auc(masked.visible, masked.splits, cfg) == auc);  // seeded, repeatable
}

TEST_CASE("node classification recovers planted communities") {
    const Graph truth = generate_sbm({50, 50}, 0.3, 0.02, 21);
    const MaskedGraph masked = mask_sensitive(truth, 0.1, 22);
    REQUIRE(masked.visible.labels.size() == 100);
    REQUIRE(!masked.splits.train_nodes.empty());

    NodeClassConfig cfg;
    cfg.epochs = 120;
    cfg.seed = 23;
    const NodeClassResult r = nodeclass_eval(masked.visible, masked.splits, cfg);
    CHECK(r.micro_f1 > 0.9);
    CHECK(r.macro_f1 > 0.9);
    CHECK(r.micro_f1 <= 1.0);
    CHECK(r.macro_f1 <= 1.0);

    const NodeClassResult again = nodeclass_eval(masked.visible, masked.splits, cfg);
    CHECK(again.micro_f1 == r.micro_f1);
    CHECK(again.macro_f1 == r.macro_f1);
}

TEST_CASE("node classification requires labels") {
    Graph g = refimpl::random_graph(20, 0.3, 31);
    DataSplits splits;
    splits.train_nodes = {0, 1, 2, 3, 4, 5};
    CHECK_THROWS_AS(nodeclass_eval(g, splits, NodeClassConfig{}), std::invalid_argument);

    g.labels.assign(20, 0);
    DataSplits empty_train;
    CHECK_THROWS_AS(nodeclass_eval(g, empty_train, NodeClassConfig{}), std::invalid_argument);
}

TEST_CASE("micro F1 equals accuracy for single-label predictions") {
    // perfectly separable two-block graph: the classifier should hit every
    // test node, making micro F1 and accuracy both exactly 1
    const Graph truth = generate_sbm({30, 30}, 0.6, 0.01, 41);
    const MaskedGraph masked = mask_sensitive(truth, 0.1, 42);
    NodeClassConfig cfg;
    cfg.epochs = 150;
    cfg.seed = 43;
    const NodeClassResult r = nodeclass_eval(masked.visible, masked.splits, cfg);
    CHECK(r.micro_f1 == 1.0);
    CHECK(r.macro_f1 == 1.0);
}

TEST_CASE("distortion report counts edits and measures the squared gap") {
    // original: a 5-cycle; published: one edge deleted, two added, one kept
    // at a different weight
    const Graph original = make_graph(
        5, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}, {0, 4, 1.0}});
    const Graph published = make_graph(
        5, {{0, 1, 1.0}, {1, 2, 0.5}, {2, 3, 1.0}, {0, 4, 1.0}, {0, 2, 1.0}, {1, 3, 1.0}});

    const DistortionReport r = distortion_report(original, published);
    CHECK(r.deleted == 1);  // (3,4) vanished
    CHECK(r.added == 2);    // (0,2) and (1,3) appeared
    // both triangles count: (3,4) twice, (0,2) twice, (1,3) twice, (1,2) twice
    const double want = 2.0 * (1.0 + 1.0 + 1.0 + 0.25);
    CHECK(r.distortion == doctest::Approx(want).epsilon(1e-14));

    const DistortionReport same = distortion_report(original, original);
    CHECK(same.distortion == 0.0);
    CHECK(same.deleted == 0);
    CHECK(same.added == 0);
}

TEST_CASE("distortion report rejects mismatched node counts") {
    const Graph a = refimpl::random_graph(6, 0.5, 51);
    const Graph b = refimpl::random_graph(7, 0.5, 52);
    CHECK_THROWS_AS(distortion_report(a, b), std::invalid_argument);
}
