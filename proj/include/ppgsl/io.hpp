#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "../../vendor/json.hpp"
#include "ppgsl/attacks.hpp"
#include "ppgsl/learner.hpp"
#include "ppgsl/utility.hpp"

namespace ppgsl {

using json = nlohmann::json;

extern const char* const kVersion;

// FNV-1a over the file's bytes, as 16 hex digits. Throws if unreadable.
std::string hash_file(const std::string& path);
// Same digest form for in-memory strings (config hashing).
std::string hash_string(const std::string& s);

// A complete record of one CLI invocation: what ran, with which resolved
// configuration, on which inputs (by content hash), producing which outputs.
// manifest_hash covers everything except wall_seconds and the hash itself, so
// reruns of a deterministic command agree on it.
struct RunManifest {
    std::string version;
    std::string command;
    std::vector<std::string> argv;
    json config;
    std::vector<std::pair<std::string, std::string>> inputs;  // path, content hash
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;
    std::string manifest_hash;
};

std::string manifest_hash(const RunManifest& m);
void save_manifest(const std::string& path, RunManifest& m);  // fills manifest_hash
RunManifest load_manifest(const std::string& path);

void save_provenance(const std::string& path, const Provenance& p);
Provenance load_provenance(const std::string& path);

// Histogram of scores over 20 equal bins spanning [lo, hi].
struct ScoreHistogram {
    double lo = 0.0, hi = 1.0;
    std::vector<std::int64_t> pos;  // 20 counts
    std::vector<std::int64_t> neg;
};
ScoreHistogram score_histogram(const std::vector<double>& pos, const std::vector<double>& neg);

void save_attack_report(const std::string& path, const std::vector<AttackResult>& results,
                        std::uint64_t seed, const std::string& manifest_hash);

struct EvalReport {
    double linkpred_auc = 0.0;
    bool has_nodeclass = false;
    NodeClassResult nodeclass;
    bool has_distortion = false;
    DistortionReport distortion;
};
void save_eval_report(const std::string& path, const EvalReport& r,
                      const std::string& manifest_hash);

}  // namespace ppgsl
