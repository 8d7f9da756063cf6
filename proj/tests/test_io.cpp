#include "doctest.h"

#include "ppgsl/io.hpp"

#include "support.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace ppgsl;

TEST_CASE("content hashes are stable and collision-averse") {
    CHECK(hash_string("") == "cbf29ce484222325");  // offset basis of the digest
    CHECK(hash_string("a") == "af63dc4c8601ec8c");
    CHECK(hash_string("abc") != hash_string("acb"));
    CHECK(hash_string("abc").size() == 16);

    const std::string path = "tmp_hash_input.txt";
    {
        std::ofstream f(path);
        f << "graph bytes";
    }
    CHECK(hash_file(path) == hash_string("graph bytes"));
    std::remove(path.c_str());
    CHECK_THROWS_AS(hash_file(path), std::runtime_error);
}

TEST_CASE("run manifests round-trip and hash only what reruns can reproduce") {
    RunManifest m;
    m.version = kVersion;
    m.command = "protect";
    m.argv = {"ppgsl", "protect", "--method", "ppgsl"};
    m.config = {{"alpha", 0.005}, {"mu", 50}};
    m.inputs = {{"g.edges", hash_string("edges")}, {"g.splits", hash_string("splits")}};
    m.seed = 7;
    m.outputs = {"out.edges", "out.provenance.json"};
    m.wall_seconds = 1.25;

    const std::string path = "tmp_manifest.json";
    save_manifest(path, m);
    CHECK(!m.manifest_hash.empty());
    CHECK(m.manifest_hash == manifest_hash(m));

    const RunManifest back = load_manifest(path);
    std::remove(path.c_str());
    CHECK(back.version == m.version);
    CHECK(back.command == m.command);
    CHECK(back.argv == m.argv);
    CHECK(back.config == m.config);
    CHECK(back.inputs == m.inputs);
    CHECK(back.seed == m.seed);
    CHECK(back.outputs == m.outputs);
    CHECK(back.wall_seconds == m.wall_seconds);
    CHECK(back.manifest_hash == m.manifest_hash);

    // timing varies across reruns, so it must not move the hash
    RunManifest slower = m;
    slower.wall_seconds = 99.0;
    CHECK(manifest_hash(slower) == manifest_hash(m));

    // everything else must
    RunManifest other = m;
    other.seed = 8;
    CHECK(manifest_hash(other) != manifest_hash(m));
    other = m;
    other.outputs.push_back("extra.csv");
    CHECK(manifest_hash(other) != manifest_hash(m));
    other = m;
    other.config["alpha"] = 0.01;
    CHECK(manifest_hash(other) != manifest_hash(m));
}

TEST_CASE("provenance round-trips with its parameter order intact") {
    Provenance p;
    p.method = "lapgraph";
    p.config_hash = hash_string("cfg");
    p.seed = 99;
    // loaders normalize to sorted key order, so start there for an exact match
    p.params = {{"eps_count", "0.4"}, {"eps_weight", "3.6"}, {"epsilon", "4"}};

    const std::string path = "tmp_provenance.json";
    save_provenance(path, p);
    const Provenance back = load_provenance(path);
    std::remove(path.c_str());

    CHECK(back.method == p.method);
    CHECK(back.config_hash == p.config_hash);
    CHECK(back.seed == p.seed);
    CHECK(back.params == p.params);
}

TEST_CASE("score histograms cover the observed range in twenty bins") {
    std::vector<double> pos = {0.0, 0.5, 1.0, 1.0};
    std::vector<double> neg = {0.25, 0.75};
    const ScoreHistogram h = score_histogram(pos, neg);

    REQUIRE(h.pos.size() == 20);
    REQUIRE(h.neg.size() == 20);
    CHECK(h.lo == 0.0);
    CHECK(h.hi == 1.0);
    int64_t pos_total = 0, neg_total = 0;
    for (int64_t c : h.pos) pos_total += c;
    for (int64_t c : h.neg) neg_total += c;
    CHECK(pos_total == 4);
    CHECK(neg_total == 2);
    CHECK(h.pos[0] == 1);   // 0.0 lands in the first bin
    CHECK(h.pos[19] == 2);  // the top of the range lands in the last bin
    CHECK(h.neg[5] == 1);   // 0.25 of [0,1] is bin 5
    CHECK(h.neg[15] == 1);

    // all-equal scores collapse the range; every count lands in the first bin
    const ScoreHistogram flat = score_histogram({0.5, 0.5}, {0.5});
    CHECK(flat.pos[0] == 2);
    CHECK(flat.neg[0] == 1);
}

TEST_CASE("attack reports serialize every method with its scores") {
    std::vector<AttackResult> results(2);
    results[0].method = "cn";
    results[0].pos_scores = {2.0, 3.0};
    results[0].neg_scores = {0.0};
    results[0].auc = 1.0;
    results[1].method = "embed_cos";
    results[1].pos_scores = {0.9};
    results[1].neg_scores = {0.1, 0.2};
    results[1].auc = 1.0;

    const std::string path = "tmp_attack_report.json";
    save_attack_report(path, results, 42, "deadbeef");

    std::ifstream f(path);
    REQUIRE(f);
    json j;
    f >> j;
    std::remove(path.c_str());

    CHECK(j.at("seed").get<uint64_t>() == 42);
    CHECK(j.at("manifest_hash").get<std::string>() == "deadbeef");
    REQUIRE(j.at("attacks").size() == 2);
    CHECK(j["attacks"][0].at("method") == "cn");
    CHECK(j["attacks"][0].at("auc").get<double>() == 1.0);
    CHECK(j["attacks"][0].at("num_pos").get<int>() == 2);
    CHECK(j["attacks"][0].at("num_neg").get<int>() == 1);
    CHECK(j["attacks"][1].at("method") == "embed_cos");
}

TEST_CASE("eval reports mark which sections were computed") {
    EvalReport r;
    r.linkpred_auc = 0.81;
    r.has_nodeclass = true;
    r.nodeclass.micro_f1 = 0.9;
    r.nodeclass.macro_f1 = 0.85;
    r.has_distortion = false;

    const std::string path = "tmp_eval_report.json";
    save_eval_report(path, r, "cafef00d");
    std::ifstream f(path);
    REQUIRE(f);
    json j;
    f >> j;
    std::remove(path.c_str());

    CHECK(j.at("manifest_hash") == "cafef00d");
    CHECK(j.at("linkpred_auc").get<double>() == 0.81);
    CHECK(j.at("f1_micro").get<double>() == 0.9);
    CHECK(j.at("f1_macro").get<double>() == 0.85);
    CHECK(!j.contains("distortion"));
}
