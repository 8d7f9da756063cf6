#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ppgsl/attacks.hpp"
#include "ppgsl/baselines.hpp"
#include "ppgsl/graph.hpp"
#include "ppgsl/io.hpp"
#include "ppgsl/learner.hpp"
#include "ppgsl/rng.hpp"
#include "ppgsl/sitp.hpp"
#include "ppgsl/utility.hpp"

namespace {

using namespace ppgsl;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Collects inputs/outputs while a command runs and writes the manifest last.
// The hash covers everything except wall time, so reruns agree on it.
struct ManifestBuilder {
    RunManifest m;
    Clock::time_point t0 = Clock::now();

    ManifestBuilder(const std::string& command, int argc, char** argv, std::uint64_t seed) {
        m.version = kVersion;
        m.command = command;
        for (int i = 0; i < argc; ++i) m.argv.emplace_back(argv[i]);
        m.seed = seed;
        m.config = json::object();
    }

    void input(const std::string& path) {
        if (!path.empty()) m.inputs.emplace_back(path, hash_file(path));
    }
    void output(const std::string& path) { m.outputs.push_back(path); }
    std::string hash() const { return manifest_hash(m); }
    void save(const std::string& path) {
        m.wall_seconds = seconds_since(t0);
        save_manifest(path, m);
    }
};

// Shared input flags: the graph under evaluation plus its splits.
struct GraphInputs {
    std::string graph, splits, features, labels;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--graph", graph, "edge list file")->required();
        cmd->add_option("--splits", splits, "splits file")->required();
        cmd->add_option("--features", features, "node feature CSV");
        cmd->add_option("--labels", labels, "node label file");
    }
    Graph load() const { return load_graph(graph, features, labels); }
    void record(ManifestBuilder& mb) const {
        mb.input(graph);
        mb.input(splits);
        mb.input(features);
        mb.input(labels);
    }
};

std::string echo_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// --- gen ---

struct GenArgs {
    std::string kind, out;
    int nodes = 0;
    double avg_degree = 10.0;
    std::vector<int> blocks;
    double p_in = 0.1, p_out = 0.01;
    bool with_features = false;
    double mask = 0.1, util_fraction = -1.0, train_fraction = 0.3;
    std::uint64_t seed = 0;
};

int cmd_gen(const GenArgs& a, int argc, char** argv, const std::string& config_echo) {
    ManifestBuilder mb("gen", argc, argv, a.seed);

    Graph truth;
    if (a.kind == "er") {
        if (a.nodes < 2) throw std::invalid_argument("gen: --nodes required (>= 2) for --kind er");
        if (a.with_features)
            throw std::invalid_argument("gen: --with-features needs block labels (--kind sbm)");
        truth = generate_erdos_renyi(a.nodes, a.avg_degree, a.seed);
    } else if (a.kind == "sbm") {
        if (a.blocks.empty()) throw std::invalid_argument("gen: --blocks required for --kind sbm");
        truth = generate_sbm(a.blocks, a.p_in, a.p_out, a.seed);
        if (a.with_features) truth.features = one_hot_labels(truth.labels);
    } else {
        throw std::invalid_argument("gen: unknown --kind '" + a.kind + "' (expected er|sbm)");
    }

    const MaskedGraph mg = mask_sensitive(truth, a.mask, a.seed, a.util_fraction, a.train_fraction);

    mb.m.config = {{"kind", a.kind},
                   {"nodes", truth.n},
                   {"avg_degree", a.avg_degree},
                   {"blocks", a.blocks},
                   {"p_in", a.p_in},
                   {"p_out", a.p_out},
                   {"with_features", a.with_features},
                   {"mask", a.mask},
                   {"util_fraction", a.util_fraction},
                   {"train_fraction", a.train_fraction},
                   {"seed", a.seed}};
    if (!config_echo.empty()) mb.m.config["config_file"] = config_echo;

    save_graph(a.out + ".edges", mg.visible);
    mb.output(a.out + ".edges");
    save_splits(a.out + ".splits", mg.splits);
    mb.output(a.out + ".splits");
    if (!mg.visible.labels.empty()) {
        save_labels(a.out + ".labels", mg.visible.labels);
        mb.output(a.out + ".labels");
    }
    if (mg.visible.features.size() > 0) {
        save_features_csv(a.out + ".features.csv", mg.visible.features);
        mb.output(a.out + ".features.csv");
    }
    mb.save(a.out + ".manifest.json");
    std::cout << "wrote " << a.out << ".edges (" << mg.visible.n << " nodes, "
              << num_edges(mg.visible) << " edges, " << mg.splits.sensitive.size()
              << " sensitive pairs)\n";
    return 0;
}

// --- protect ---

struct ProtectArgs {
    GraphInputs in;
    std::string method, out;
    double alpha = 0.005, k = 1.0;
    int mu = 50, n1 = 500, n2 = 500;
    double eta1 = 0.01, eta2 = 0.5;
    std::string head = "cosine", mode = "sparse", protocol = "sitp";
    int eval_every = 0;
    long long edits = -1;
    double epsilon = -1.0;
    std::uint64_t seed = 0;
};

bool is_baseline(const std::string& method) {
    return method == "random" || method == "dice" || method == "edgerand" ||
           method == "lapgraph";
}

json protect_config_json(const ProtectArgs& a) {
    json c = {{"method", a.method}, {"seed", a.seed}};
    if (a.method == "ppgsl") {
        c["alpha"] = a.alpha;
        c["k"] = a.k;
        c["mu"] = a.mu;
        c["n1"] = a.n1;
        c["n2"] = a.n2;
        c["eta1"] = a.eta1;
        c["eta2"] = a.eta2;
        c["head"] = a.head;
        c["mode"] = a.mode;
        c["protocol"] = a.protocol;
        c["eval_every"] = a.eval_every;
    } else if (a.method == "random" || a.method == "dice") {
        c["edits"] = a.edits;
    } else {
        c["epsilon"] = a.epsilon;
    }
    return c;
}

int cmd_protect(const ProtectArgs& a, int argc, char** argv, const std::string& config_echo) {
    if (a.method != "ppgsl" && !is_baseline(a.method))
        throw std::invalid_argument("protect: unknown --method '" + a.method + "'");
    if (a.method == "ppgsl") {
        if (!(a.alpha >= 0.0)) throw std::invalid_argument("protect: --alpha must be >= 0");
        if (!(a.k >= 0.0)) throw std::invalid_argument("protect: --k must be >= 0");
        if (a.protocol != "sitp" && a.protocol != "adv")
            throw std::invalid_argument("protect: --protocol must be sitp|adv");
    } else if (a.method == "random" || a.method == "dice") {
        if (a.edits < 0) throw std::invalid_argument("protect: --edits required for " + a.method);
    } else if (!(a.epsilon > 0.0)) {
        throw std::invalid_argument("protect: --epsilon (> 0) required for " + a.method);
    }

    ManifestBuilder mb("protect", argc, argv, a.seed);
    mb.m.config = protect_config_json(a);
    if (!config_echo.empty()) mb.m.config["config_file"] = config_echo;
    a.in.record(mb);

    const Graph visible = a.in.load();
    const DataSplits splits = load_splits(a.in.splits);

    PublishedGraph pub;
    TrainTrace trace;
    bool has_trace = false;

    if (a.method == "ppgsl") {
        SitpConfig c;
        c.mode = learner_mode_from_string(a.mode);
        c.alpha = a.alpha;
        c.k = a.k;
        c.mu = a.mu;
        c.n1 = a.n1;
        c.n2 = a.n2;
        c.eta1 = a.eta1;
        c.eta2 = a.eta2;
        c.head = head_kind_from_string(a.head);
        c.seed = a.seed;
        c.eval_every = a.eval_every;
        c.adversarial = a.protocol == "adv";
        SitpResult r = run_sitp(visible, splits, c);
        pub = std::move(r.published);
        trace = std::move(r.trace);
        has_trace = true;
    } else {
        PerturbResult pr;
        if (a.method == "random") {
            pr = random_perturb(visible, splits, a.edits, a.seed);
            pub.provenance.params = {{"edits", std::to_string(a.edits)}};
        } else if (a.method == "dice") {
            pr = dice_perturb(visible, splits, a.edits, a.seed);
            pub.provenance.params = {{"edits", std::to_string(a.edits)}};
        } else if (a.method == "edgerand") {
            pr = edgerand_perturb(visible, splits, a.epsilon, a.seed);
            pub.provenance.params = {{"epsilon", format_double(a.epsilon)}};
        } else {
            // conventional budget split: a sliver for the count, the rest for weights
            pr = lapgraph_perturb(visible, splits, 0.1 * a.epsilon, 0.9 * a.epsilon, a.seed);
            pub.provenance.params = {{"epsilon", format_double(a.epsilon)}};
        }
        pub.graph = std::move(pr.published);
        pub.provenance.method = a.method;
        pub.provenance.seed = a.seed;
    }
    pub.provenance.config_hash = hash_string(mb.m.config.dump());

    save_graph(a.out + ".edges", pub.graph);
    mb.output(a.out + ".edges");
    save_provenance(a.out + ".provenance.json", pub.provenance);
    mb.output(a.out + ".provenance.json");
    if (has_trace) {
        save_trace_csv(a.out + ".trace.csv", trace);
        mb.output(a.out + ".trace.csv");
    }
    mb.save(a.out + ".manifest.json");
    std::cout << "wrote " << a.out << ".edges (" << num_edges(pub.graph) << " edges)\n";
    return 0;
}

// --- attack ---

struct AttackArgs {
    GraphInputs in;
    std::string out, save_model;
    int epochs = 500;
    double lr = 0.01;
    std::uint64_t seed = 0;
};

int cmd_attack(const AttackArgs& a, int argc, char** argv, const std::string& config_echo) {
    ManifestBuilder mb("attack", argc, argv, a.seed);
    mb.m.config = {{"epochs", a.epochs}, {"lr", a.lr}, {"seed", a.seed}};
    if (!config_echo.empty()) mb.m.config["config_file"] = config_echo;
    a.in.record(mb);

    const Graph pub = a.in.load();
    const DataSplits splits = load_splits(a.in.splits);

    AttackTrainConfig base;
    base.epochs = a.epochs;
    base.lr = a.lr;
    const std::vector<AttackResult> results = run_attack_suite(pub, splits, base, a.seed);

    mb.output(a.out + ".attack.json");
    std::vector<std::pair<std::string, const AttackModel*>> to_save;
    if (!a.save_model.empty()) {
        for (const AttackResult& r : results) {
            if (!r.model) continue;
            const std::string path = a.save_model + "." + r.method + ".json";
            to_save.emplace_back(path, r.model.get());
            mb.output(path);
        }
    }

    // reports embed the manifest hash, which covers the full output list
    const std::string h = mb.hash();
    save_attack_report(a.out + ".attack.json", results, a.seed, h);
    for (const auto& [path, model] : to_save) save_attack_model(path, *model);
    mb.save(a.out + ".manifest.json");

    for (const AttackResult& r : results)
        std::cout << r.method << " auc " << format_double(r.auc) << "\n";
    return 0;
}

// --- eval ---

struct EvalArgs {
    GraphInputs in;
    std::string original, out;
    int epochs = 500;
    double lr = 0.01;
    std::uint64_t seed = 0;
};

int cmd_eval(const EvalArgs& a, int argc, char** argv, const std::string& config_echo) {
    ManifestBuilder mb("eval", argc, argv, a.seed);
    mb.m.config = {{"epochs", a.epochs}, {"lr", a.lr}, {"seed", a.seed}};
    if (!config_echo.empty()) mb.m.config["config_file"] = config_echo;
    a.in.record(mb);
    mb.input(a.original);

    const Graph pub = a.in.load();
    const DataSplits splits = load_splits(a.in.splits);

    EvalReport rep;
    AttackTrainConfig lp;
    lp.epochs = a.epochs;
    lp.lr = a.lr;
    lp.seed = RngStream::derive_seed(a.seed, "linkpred");
    rep.linkpred_auc = linkpred_auc(pub, splits, lp);

    if (!pub.labels.empty()) {
        NodeClassConfig nc;
        nc.seed = RngStream::derive_seed(a.seed, "nodeclass");
        rep.nodeclass = nodeclass_eval(pub, splits, nc);
        rep.has_nodeclass = true;
    } else {
        std::cerr << "warning: no labels, node classification skipped\n";
    }
    if (!a.original.empty()) {
        rep.distortion = distortion_report(load_graph(a.original), pub);
        rep.has_distortion = true;
    }

    mb.output(a.out + ".eval.json");
    save_eval_report(a.out + ".eval.json", rep, mb.hash());
    mb.save(a.out + ".manifest.json");

    std::cout << "linkpred_auc " << format_double(rep.linkpred_auc) << "\n";
    if (rep.has_nodeclass)
        std::cout << "f1_micro " << format_double(rep.nodeclass.micro_f1) << "\nf1_macro "
                  << format_double(rep.nodeclass.macro_f1) << "\n";
    if (rep.has_distortion)
        std::cout << "distortion " << format_double(rep.distortion.distortion) << " (deleted "
                  << rep.distortion.deleted << ", added " << rep.distortion.added << ")\n";
    return 0;
}

// --- sweep ---

struct SweepArgs {
    GraphInputs in;
    std::string original, out;
    std::vector<std::string> methods{"ppgsl", "random", "dice", "edgerand", "lapgraph"};
    std::vector<double> alphas;
    std::vector<long long> edits;
    std::vector<double> epsilons;
    std::vector<std::uint64_t> seeds;
    int jobs = 1;
    // shared PPGSL knobs
    double k = 1.0;
    int mu = 50, n1 = 500, n2 = 500;
    double eta1 = 0.01, eta2 = 0.5;
    std::string head = "cosine", mode = "sparse";
    int attack_epochs = 500;
};

constexpr const char* kSweepHeader =
    "method,knob,seed,auc_cn,auc_aa,auc_ra,auc_embed_cos,auc_embed_ip,auc_embed_mlp,"
    "linkpred_auc,f1_micro,f1_macro,distortion,deleted,added,seconds";

struct SweepRow {
    std::string method;
    double knob = 0.0;
    std::string seed_label;
    // metric order matches the CSV header after the seed column
    std::array<double, 13> vals{};
    bool error = false;
    std::string error_msg;
};

constexpr int kMetricCount = 13;
constexpr int kSecondsIdx = 12;

SweepRow run_sweep_cell(const Graph& visible, const DataSplits& splits, const Graph& reference,
                        const SweepArgs& a, const std::string& method, double knob,
                        std::uint64_t seed) {
    SweepRow row;
    row.method = method;
    row.knob = knob;
    row.seed_label = std::to_string(seed);
    row.vals.fill(std::numeric_limits<double>::quiet_NaN());

    const auto t0 = Clock::now();
    try {
        Graph published;
        if (method == "ppgsl") {
            SitpConfig c;
            c.mode = learner_mode_from_string(a.mode);
            c.alpha = knob;
            c.k = a.k;
            c.mu = a.mu;
            c.n1 = a.n1;
            c.n2 = a.n2;
            c.eta1 = a.eta1;
            c.eta2 = a.eta2;
            c.head = head_kind_from_string(a.head);
            c.seed = seed;
            published = run_sitp(visible, splits, c).published.graph;
        } else if (method == "random") {
            published = random_perturb(visible, splits, std::llround(knob), seed).published;
        } else if (method == "dice") {
            published = dice_perturb(visible, splits, std::llround(knob), seed).published;
        } else if (method == "edgerand") {
            published = edgerand_perturb(visible, splits, knob, seed).published;
        } else if (method == "lapgraph") {
            published = lapgraph_perturb(visible, splits, 0.1 * knob, 0.9 * knob, seed).published;
        } else {
            throw std::invalid_argument("sweep: unknown method '" + method + "'");
        }

        AttackTrainConfig base;
        base.epochs = a.attack_epochs;
        const std::vector<AttackResult> attacks =
            run_attack_suite(published, splits, base, RngStream::derive_seed(seed, "sweep_attack"));
        for (int i = 0; i < 6; ++i) row.vals[static_cast<std::size_t>(i)] = attacks[static_cast<std::size_t>(i)].auc;

        AttackTrainConfig lp;
        lp.epochs = a.attack_epochs;
        lp.seed = RngStream::derive_seed(seed, "sweep_linkpred");
        row.vals[6] = linkpred_auc(published, splits, lp);

        if (!published.labels.empty()) {
            NodeClassConfig nc;
            nc.seed = RngStream::derive_seed(seed, "sweep_nodeclass");
            const NodeClassResult r = nodeclass_eval(published, splits, nc);
            row.vals[7] = r.micro_f1;
            row.vals[8] = r.macro_f1;
        }

        const DistortionReport d = distortion_report(reference, published);
        row.vals[9] = d.distortion;
        row.vals[10] = static_cast<double>(d.deleted);
        row.vals[11] = static_cast<double>(d.added);
    } catch (const std::exception& e) {
        row.error = true;
        row.error_msg = e.what();
        row.vals.fill(std::numeric_limits<double>::quiet_NaN());
    }
    row.vals[kSecondsIdx] = row.error ? std::numeric_limits<double>::quiet_NaN()
                                      : seconds_since(t0);
    return row;
}

// median over the finite entries; NaN when none (matches cmd_report's check)
double finite_median(std::vector<double> v) {
    v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return !std::isfinite(x); }),
            v.end());
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string csv_cell(double v) { return std::isnan(v) ? "nan" : format_double(v); }

int cmd_sweep(const SweepArgs& a, int argc, char** argv, const std::string& config_echo) {
    if (a.methods.empty()) throw std::invalid_argument("sweep: --methods must not be empty");
    if (a.seeds.empty()) throw std::invalid_argument("sweep: --seeds must not be empty");
    if (a.jobs < 1) throw std::invalid_argument("sweep: --jobs must be >= 1");

    struct Cell {
        std::string method;
        double knob;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (const std::string& m : a.methods) {
        std::vector<double> knobs;
        if (m == "ppgsl") {
            knobs = a.alphas;
        } else if (m == "random" || m == "dice") {
            for (long long e : a.edits) knobs.push_back(static_cast<double>(e));
        } else if (m == "edgerand" || m == "lapgraph") {
            knobs = a.epsilons;
        } else {
            throw std::invalid_argument("sweep: unknown method '" + m + "'");
        }
        if (knobs.empty())
            throw std::invalid_argument("sweep: no knob grid for method '" + m +
                                        "' (--alphas / --edits / --epsilons)");
        for (double knob : knobs)
            for (std::uint64_t s : a.seeds) cells.push_back({m, knob, s});
    }

    ManifestBuilder mb("sweep", argc, argv, a.seeds.front());
    mb.m.config = {{"methods", a.methods}, {"alphas", a.alphas},   {"edits", a.edits},
                   {"epsilons", a.epsilons}, {"seeds", a.seeds},   {"jobs", a.jobs},
                   {"k", a.k},             {"mu", a.mu},           {"n1", a.n1},
                   {"n2", a.n2},           {"eta1", a.eta1},       {"eta2", a.eta2},
                   {"head", a.head},       {"mode", a.mode},       {"attack_epochs", a.attack_epochs}};
    if (!config_echo.empty()) mb.m.config["config_file"] = config_echo;
    a.in.record(mb);
    mb.input(a.original);

    const Graph visible = a.in.load();
    const DataSplits splits = load_splits(a.in.splits);
    const Graph reference = a.original.empty() ? visible : load_graph(a.original);

    // worker pool over an atomic cursor; cells are independent and each one is
    // internally deterministic, so the pool size never changes the results
    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= cells.size()) break;
            rows[i] = run_sweep_cell(visible, splits, reference, a, cells[i].method,
                                     cells[i].knob, cells[i].seed);
        }
    };
    std::vector<std::thread> threads;
    for (int t = 1; t < a.jobs; ++t) threads.emplace_back(worker);
    worker();
    for (std::thread& t : threads) t.join();

    // append per-(method, knob) median rows
    std::vector<SweepRow> medians;
    for (const std::string& m : a.methods) {
        std::vector<double> knobs;
        for (const SweepRow& r : rows)
            if (r.method == m && (knobs.empty() || knobs.back() != r.knob))
                knobs.push_back(r.knob);
        for (double knob : knobs) {
            SweepRow med;
            med.method = m;
            med.knob = knob;
            med.seed_label = "median";
            for (int c = 0; c < kMetricCount; ++c) {
                std::vector<double> col;
                for (const SweepRow& r : rows)
                    if (r.method == m && r.knob == knob) col.push_back(r.vals[static_cast<std::size_t>(c)]);
                med.vals[static_cast<std::size_t>(c)] = finite_median(std::move(col));
            }
            medians.push_back(std::move(med));
        }
    }
    rows.insert(rows.end(), medians.begin(), medians.end());

    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& x, const SweepRow& y) {
        if (x.method != y.method) return x.method < y.method;
        if (x.knob != y.knob) return x.knob < y.knob;
        const bool xm = x.seed_label == "median", ym = y.seed_label == "median";
        if (xm != ym) return ym;  // medians after the seed rows
        return std::stoull(x.seed_label) < std::stoull(y.seed_label);
    });

    const std::string csv_path = a.out + ".sweep.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot open for writing: " + csv_path);
    csv << kSweepHeader << "\n";
    for (const SweepRow& r : rows) {
        csv << r.method << ',' << format_double(r.knob) << ',' << r.seed_label;
        for (int c = 0; c < kMetricCount; ++c) csv << ',' << csv_cell(r.vals[static_cast<std::size_t>(c)]);
        csv << '\n';
    }
    if (!csv) throw std::runtime_error("write failed: " + csv_path);
    csv.close();
    mb.output(csv_path);

    std::vector<std::string> errors;
    for (const SweepRow& r : rows)
        if (r.error)
            errors.push_back("method=" + r.method + " knob=" + format_double(r.knob) +
                             " seed=" + r.seed_label + ": " + r.error_msg);
    if (!errors.empty()) {
        const std::string err_path = a.out + ".sweep_errors.txt";
        std::ofstream ef(err_path);
        if (!ef) throw std::runtime_error("cannot open for writing: " + err_path);
        for (const std::string& e : errors) ef << e << "\n";
        mb.output(err_path);
    }

    mb.save(a.out + ".manifest.json");
    std::cout << "wrote " << csv_path << " (" << rows.size() << " rows, " << errors.size()
              << " failed cells)\n";
    return 0;
}

// --- report ---

struct ParsedSweep {
    std::vector<SweepRow> seed_rows;
    std::vector<SweepRow> median_rows;
};

ParsedSweep parse_sweep_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(f, line) || line != kSweepHeader)
        throw std::runtime_error(path + ": not a sweep CSV (unexpected header)");

    ParsedSweep out;
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 3 + kMetricCount)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(3 + kMetricCount) + " columns");
        SweepRow r;
        r.method = cells[0];
        r.knob = parse_double(cells[1]);
        r.seed_label = cells[2];
        for (int c = 0; c < kMetricCount; ++c) r.vals[static_cast<std::size_t>(c)] = parse_double(cells[static_cast<std::size_t>(c) + 3]);
        (r.seed_label == "median" ? out.median_rows : out.seed_rows).push_back(std::move(r));
    }
    return out;
}

int cmd_report(const std::string& sweep_path) {
    const ParsedSweep s = parse_sweep_csv(sweep_path);
    if (s.median_rows.empty())
        throw std::runtime_error(sweep_path + ": no median rows to verify");

    int mismatches = 0;
    for (const SweepRow& med : s.median_rows) {
        for (int c = 0; c < kMetricCount; ++c) {
            if (c == kSecondsIdx) continue;  // timing is not a reproducible statistic
            std::vector<double> col;
            for (const SweepRow& r : s.seed_rows)
                if (r.method == med.method && r.knob == med.knob) col.push_back(r.vals[static_cast<std::size_t>(c)]);
            const double expect = finite_median(std::move(col));
            const double got = med.vals[static_cast<std::size_t>(c)];
            const bool ok = (std::isnan(expect) && std::isnan(got)) || expect == got;
            if (!ok) {
                std::cerr << "median mismatch: method=" << med.method
                          << " knob=" << format_double(med.knob) << " column=" << c
                          << " stored=" << format_double(got)
                          << " recomputed=" << format_double(expect) << "\n";
                ++mismatches;
            }
        }
    }
    if (mismatches > 0) {
        std::cerr << mismatches << " median cells disagree with the per-seed rows\n";
        return 2;
    }

    std::cout << "medians verified for " << s.median_rows.size() << " (method, knob) groups\n";
    std::cout << "method,knob,auc_embed_cos,linkpred_auc,distortion\n";
    for (const SweepRow& med : s.median_rows)
        std::cout << med.method << ',' << format_double(med.knob) << ',' << csv_cell(med.vals[3])
                  << ',' << csv_cell(med.vals[6]) << ',' << csv_cell(med.vals[9]) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"privacy-preserving graph publishing: learn a release that starves "
                 "link inference attacks while staying close to the input graph"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file (flags win)");

    GenArgs gen;
    CLI::App* cgen = app.add_subcommand("gen", "generate a benchmark graph and its splits");
    cgen->add_option("--kind", gen.kind, "er|sbm")->required();
    cgen->add_option("--nodes", gen.nodes, "node count (er)");
    cgen->add_option("--avg-degree", gen.avg_degree, "average degree (er)");
    cgen->add_option("--blocks", gen.blocks, "block sizes (sbm)")->delimiter(',');
    cgen->add_option("--p-in", gen.p_in, "intra-block edge probability (sbm)");
    cgen->add_option("--p-out", gen.p_out, "inter-block edge probability (sbm)");
    cgen->add_flag("--with-features", gen.with_features, "one-hot block features (sbm)");
    cgen->add_option("--mask", gen.mask, "sensitive fraction of edges");
    cgen->add_option("--util-fraction", gen.util_fraction, "held-out test edge fraction");
    cgen->add_option("--train-fraction", gen.train_fraction, "classification train fraction");
    cgen->add_option("--seed", gen.seed, "master seed");
    cgen->add_option("--out", gen.out, "output prefix")->required();

    ProtectArgs prot;
    CLI::App* cprot = app.add_subcommand("protect", "publish a protected graph");
    prot.in.add_to(cprot);
    cprot->add_option("--method", prot.method, "ppgsl|random|dice|edgerand|lapgraph")->required();
    cprot->add_option("--alpha", prot.alpha, "utility weight (ppgsl)");
    cprot->add_option("--k", prot.k, "non-edge candidate budget x|E| (ppgsl)");
    cprot->add_option("--mu", prot.mu, "attack retraining period (ppgsl)");
    cprot->add_option("--n1", prot.n1, "attack epochs per retraining (ppgsl)");
    cprot->add_option("--n2", prot.n2, "learner epochs (ppgsl)");
    cprot->add_option("--eta1", prot.eta1, "attack learning rate (ppgsl)");
    cprot->add_option("--eta2", prot.eta2, "learner learning rate (ppgsl)");
    cprot->add_option("--head", prot.head, "cosine|ip|mlp (ppgsl)");
    cprot->add_option("--mode", prot.mode, "sparse|full (ppgsl)");
    cprot->add_option("--protocol", prot.protocol, "sitp|adv (ppgsl)");
    cprot->add_option("--eval-every", prot.eval_every, "trace AUC eval period, 0=off (ppgsl)");
    cprot->add_option("--edits", prot.edits, "edit count (random/dice)");
    cprot->add_option("--epsilon", prot.epsilon, "privacy budget (edgerand/lapgraph)");
    cprot->add_option("--seed", prot.seed, "master seed");
    cprot->add_option("--out", prot.out, "output prefix")->required();

    AttackArgs atk;
    CLI::App* catk = app.add_subcommand("attack", "run the link inference attack suite");
    atk.in.add_to(catk);
    catk->add_option("--epochs", atk.epochs, "attack training epochs");
    catk->add_option("--lr", atk.lr, "attack learning rate");
    catk->add_option("--seed", atk.seed, "master seed");
    catk->add_option("--save-model", atk.save_model, "prefix for embedding model checkpoints");
    catk->add_option("--out", atk.out, "output prefix")->required();

    EvalArgs ev;
    CLI::App* cev = app.add_subcommand("eval", "measure utility of a published graph");
    ev.in.add_to(cev);
    cev->add_option("--original", ev.original, "pre-publication graph, enables distortion");
    cev->add_option("--epochs", ev.epochs, "link predictor training epochs");
    cev->add_option("--lr", ev.lr, "link predictor learning rate");
    cev->add_option("--seed", ev.seed, "master seed");
    cev->add_option("--out", ev.out, "output prefix")->required();

    SweepArgs sw;
    CLI::App* csw = app.add_subcommand("sweep", "trade-off grid over methods, knobs, seeds");
    sw.in.add_to(csw);
    csw->add_option("--original", sw.original, "reference graph for distortion (default: input)");
    csw->add_option("--methods", sw.methods, "subset of ppgsl,random,dice,edgerand,lapgraph")
        ->delimiter(',');
    csw->add_option("--alphas", sw.alphas, "alpha grid (ppgsl)")->delimiter(',');
    csw->add_option("--edits", sw.edits, "edit grid (random/dice)")->delimiter(',');
    csw->add_option("--epsilons", sw.epsilons, "epsilon grid (edgerand/lapgraph)")->delimiter(',');
    csw->add_option("--seeds", sw.seeds, "replicate seeds")->delimiter(',')->required();
    csw->add_option("--jobs", sw.jobs, "worker threads");
    csw->add_option("--k", sw.k, "ppgsl candidate budget");
    csw->add_option("--mu", sw.mu, "ppgsl retraining period");
    csw->add_option("--n1", sw.n1, "ppgsl attack epochs");
    csw->add_option("--n2", sw.n2, "ppgsl learner epochs");
    csw->add_option("--eta1", sw.eta1, "ppgsl attack learning rate");
    csw->add_option("--eta2", sw.eta2, "ppgsl learner learning rate");
    csw->add_option("--head", sw.head, "ppgsl surrogate head");
    csw->add_option("--mode", sw.mode, "ppgsl learner mode");
    csw->add_option("--attack-epochs", sw.attack_epochs, "evaluation attack epochs");
    csw->add_option("--out", sw.out, "output prefix")->required();

    std::string report_sweep;
    CLI::App* crep = app.add_subcommand("report", "verify and summarize a sweep CSV");
    crep->add_option("--sweep", report_sweep, "sweep CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems are exit 1, --help is success
    }

    std::string config_echo;
    try {
        // echo the config file into manifests so runs are replayable from them
        const CLI::Option* copt = app.get_config_ptr();
        if (copt != nullptr && copt->count() > 0)
            config_echo = echo_config_file(copt->as<std::string>());
        if (cgen->parsed()) return cmd_gen(gen, argc, argv, config_echo);
        if (cprot->parsed()) return cmd_protect(prot, argc, argv, config_echo);
        if (catk->parsed()) return cmd_attack(atk, argc, argv, config_echo);
        if (cev->parsed()) return cmd_eval(ev, argc, argv, config_echo);
        if (csw->parsed()) return cmd_sweep(sw, argc, argv, config_echo);
        if (crep->parsed()) return cmd_report(report_sweep);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
