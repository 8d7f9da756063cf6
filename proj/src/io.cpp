#include "ppgsl/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "ppgsl/rng.hpp"

namespace ppgsl {

const char* const kVersion = "0.1.0";

namespace {

std::string to_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    json j;
    f >> j;
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(1) << "\n";
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string hash_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[1 << 16];
    while (f.read(buf, sizeof(buf)) || f.gcount() > 0)
        h = fnv1a64(buf, static_cast<std::size_t>(f.gcount()), h);
    return to_hex(h);
}

std::string hash_string(const std::string& s) { return to_hex(fnv1a64(s)); }

std::string manifest_hash(const RunManifest& m) {
    json j;
    j["version"] = m.version;
    j["command"] = m.command;
    j["argv"] = m.argv;
    j["config"] = m.config;
    json in = json::array();
    for (const auto& [path, digest] : m.inputs) in.push_back({{"path", path}, {"hash", digest}});
    j["inputs"] = std::move(in);
    j["seed"] = m.seed;
    j["outputs"] = m.outputs;
    return hash_string(j.dump());
}

void save_manifest(const std::string& path, RunManifest& m) {
    m.manifest_hash = manifest_hash(m);
    json j;
    j["version"] = m.version;
    j["command"] = m.command;
    j["argv"] = m.argv;
    j["config"] = m.config;
    json in = json::array();
    for (const auto& [p, digest] : m.inputs) in.push_back({{"path", p}, {"hash", digest}});
    j["inputs"] = std::move(in);
    j["seed"] = m.seed;
    j["outputs"] = m.outputs;
    j["wall_seconds"] = m.wall_seconds;
    j["manifest_hash"] = m.manifest_hash;
    write_json(path, j);
}

RunManifest load_manifest(const std::string& path) {
    const json j = read_json(path);
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.config = j.at("config");
    for (const json& e : j.at("inputs"))
        m.inputs.emplace_back(e.at("path").get<std::string>(), e.at("hash").get<std::string>());
    m.seed = j.at("seed").get<std::uint64_t>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.wall_seconds = j.value("wall_seconds", 0.0);
    m.manifest_hash = j.at("manifest_hash").get<std::string>();
    return m;
}

void save_provenance(const std::string& path, const Provenance& p) {
    json j;
    j["method"] = p.method;
    j["seed"] = p.seed;
    j["config_hash"] = p.config_hash;
    json params = json::object();
    for (const auto& [k, v] : p.params) params[k] = v;
    j["params"] = std::move(params);
    write_json(path, j);
}

Provenance load_provenance(const std::string& path) {
    const json j = read_json(path);
    Provenance p;
    p.method = j.at("method").get<std::string>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.config_hash = j.value("config_hash", "");
    if (j.contains("params"))
        for (const auto& [k, v] : j.at("params").items())
            p.params.emplace_back(k, v.get<std::string>());
    std::sort(p.params.begin(), p.params.end());
    return p;
}

ScoreHistogram score_histogram(const std::vector<double>& pos, const std::vector<double>& neg) {
    constexpr int kBins = 20;
    ScoreHistogram h;
    h.pos.assign(kBins, 0);
    h.neg.assign(kBins, 0);
    if (pos.empty() && neg.empty()) return h;

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double s : pos) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    for (double s : neg) {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    if (!(hi > lo)) hi = lo + 1.0;  // degenerate: everything lands in bin 0
    h.lo = lo;
    h.hi = hi;

    auto bin = [&](double s) {
        const int b = static_cast<int>((s - lo) / (hi - lo) * kBins);
        return std::clamp(b, 0, kBins - 1);
    };
    for (double s : pos) ++h.pos[static_cast<std::size_t>(bin(s))];
    for (double s : neg) ++h.neg[static_cast<std::size_t>(bin(s))];
    return h;
}

void save_attack_report(const std::string& path, const std::vector<AttackResult>& results,
                        std::uint64_t seed, const std::string& manifest_hash) {
    json j;
    j["manifest_hash"] = manifest_hash;
    j["seed"] = seed;
    json attacks = json::array();
    for (const AttackResult& r : results) {
        const ScoreHistogram h = score_histogram(r.pos_scores, r.neg_scores);
        json a;
        a["method"] = r.method;
        a["auc"] = r.auc;
        a["num_pos"] = r.pos_scores.size();
        a["num_neg"] = r.neg_scores.size();
        a["hist_lo"] = h.lo;
        a["hist_hi"] = h.hi;
        a["pos_hist"] = h.pos;
        a["neg_hist"] = h.neg;
        attacks.push_back(std::move(a));
    }
    j["attacks"] = std::move(attacks);
    write_json(path, j);
}

void save_eval_report(const std::string& path, const EvalReport& r,
                      const std::string& manifest_hash) {
    json j;
    j["manifest_hash"] = manifest_hash;
    j["linkpred_auc"] = r.linkpred_auc;
    if (r.has_nodeclass) {
        j["f1_micro"] = r.nodeclass.micro_f1;
        j["f1_macro"] = r.nodeclass.macro_f1;
    }
    if (r.has_distortion) {
        j["distortion"] = r.distortion.distortion;
        j["deleted"] = r.distortion.deleted;
        j["added"] = r.distortion.added;
    }
    write_json(path, j);
}

}  // namespace ppgsl
