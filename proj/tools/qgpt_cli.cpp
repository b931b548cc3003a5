// qgpt: command-line front end over the mesh codec, tri2quad conversion,
// quality filters, topology metrics, preference-pair construction, tDPO
// evaluation and the toy hourglass model.
//
// Exit codes: 0 success, 1 validation/filter failure, 2 usage error, 3 I/O
// error.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgpt/codec.hpp"
#include "qgpt/error.hpp"
#include "qgpt/hourglass.hpp"
#include "qgpt/mesh.hpp"
#include "qgpt/obj_io.hpp"
#include "qgpt/preference.hpp"
#include "qgpt/quality_filter.hpp"
#include "qgpt/tdpo.hpp"
#include "qgpt/topo_metrics.hpp"
#include "qgpt/tri2quad.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qgpt;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fnv1a_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for digest: " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

class StageTimer {
public:
    void start(const std::string& name) {
        name_ = name;
        t0_ = std::chrono::steady_clock::now();
    }
    void stop(json& report) {
        auto ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0_).count();
        report["timings_ms"][name_] = ms;
    }

private:
    std::string name_;
    std::chrono::steady_clock::time_point t0_;
};

json base_report() {
    json r;
    r["tool_version"] = kVersion;
    r["timings_ms"] = json::object();
    r["inputs"] = json::object();
    r["seeds"] = json::object();
    return r;
}

void emit_report(const json& report, const std::string& path) {
    if (path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write report: " + path);
        out << report.dump(2) << "\n";
    }
}

Axis parse_axis(const std::string& s) {
    if (s == "x") return Axis::X;
    if (s == "y") return Axis::Y;
    if (s == "z") return Axis::Z;
    throw InvalidInput("up axis must be x, y or z");
}

json score_to_json(const TopoScore& s) {
    json j;
    j["c_frac"] = s.fracture_count;
    j["r_frac"] = s.r_frac;
    j["l_avg"] = s.l_avg;
    j["ring_face_ratio"] = s.ring_face_ratio;
    j["rings"] = s.rings;
    j["lines"] = s.lines;
    return j;
}

FilterConfig filter_config_from_json(const json& j) {
    FilterConfig cfg;
    if (j.contains("tau_vtx_min")) cfg.tau_vtx_min = j["tau_vtx_min"];
    if (j.contains("tau_weld")) cfg.tau_weld = j["tau_weld"];
    if (j.contains("tau_edge_delta")) cfg.tau_edge_delta = j["tau_edge_delta"];
    if (j.contains("aspect_max")) cfg.aspect_max = j["aspect_max"];
    if (j.contains("face_min")) cfg.face_min = j["face_min"];
    if (j.contains("face_max")) cfg.face_max = j["face_max"];
    return cfg;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad JSON in ") + path + ": " + e.what());
    }
    return j;
}

std::vector<std::string> sorted_token_files(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("missing candidate dir: " + dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

// ---- pair construction shared by `pair` and `pipeline` ---------------------

struct PairStageConfig {
    std::size_t tau = 36864;
    std::size_t pairs_per_condition = 4;
    std::uint64_t seed = 0;
    Axis up_axis = Axis::Y;
    std::vector<std::pair<std::string, std::string>> conditions;  // (id, dir)
    std::string windows_dir;
    std::string manifest_path;
    bool filter_enabled = false;
    FilterConfig filter;
};

PairStageConfig pair_config_from_json(const json& j, const std::string& root) {
    PairStageConfig cfg;
    if (j.contains("tau")) cfg.tau = j["tau"];
    if (j.contains("pairs_per_condition")) cfg.pairs_per_condition = j["pairs_per_condition"];
    if (j.contains("seed")) cfg.seed = j["seed"];
    if (j.contains("up_axis")) cfg.up_axis = parse_axis(j["up_axis"]);
    auto resolve = [&](const std::string& p) {
        return fs::path(p).is_absolute() ? p : (fs::path(root) / p).string();
    };
    for (const auto& c : j.at("conditions"))
        cfg.conditions.emplace_back(c.at("id"), resolve(c.at("candidate_dir")));
    if (j.contains("windows_dir")) cfg.windows_dir = resolve(j["windows_dir"]);
    if (j.contains("out_manifest")) cfg.manifest_path = resolve(j["out_manifest"]);
    if (j.contains("filter")) {
        cfg.filter_enabled = true;
        cfg.filter = filter_config_from_json(j["filter"]);
    }
    return cfg;
}

json run_pair_stage(const PairStageConfig& cfg, json& report) {
    TopoConfig topo_cfg;
    topo_cfg.up_axis = cfg.up_axis;

    std::vector<std::vector<Candidate>> conditions;
    int filtered_out = 0;
    for (const auto& [id, dir] : cfg.conditions) {
        std::vector<Candidate> cands;
        for (const std::string& file : sorted_token_files(dir)) {
            Candidate c = make_candidate(id, read_tokens_auto(file), topo_cfg);
            c.source_file = file;
            if (cfg.filter_enabled && !run_filter(c.mesh, cfg.filter).pass) {
                ++filtered_out;
                continue;
            }
            cands.push_back(std::move(c));
        }
        conditions.push_back(std::move(cands));
    }

    // Conditions reduced below 2 candidates cannot form pairs.
    std::vector<std::vector<Candidate>> usable;
    int skipped_conditions = 0;
    for (auto& c : conditions) {
        if (c.size() >= 2) usable.push_back(std::move(c));
        else ++skipped_conditions;
    }

    json manifest = json::array();
    DatasetManifest ds;
    if (!usable.empty()) {
        ds = build_dataset(usable, cfg.tau, cfg.pairs_per_condition, cfg.seed);
        if (!cfg.windows_dir.empty()) fs::create_directories(cfg.windows_dir);
        for (std::size_t i = 0; i < ds.pairs.size(); ++i) {
            const PreferencePair& p = ds.pairs[i];
            json e;
            e["condition"] = p.condition_id;
            std::size_t cond_idx = 0;
            for (std::size_t k = 0; k < usable.size(); ++k)
                if (usable[k].front().condition_id == p.condition_id) cond_idx = k;
            const auto& cands = usable[cond_idx];
            e["winner_file"] = cands[p.winner_index].source_file;
            e["loser_file"] = cands[p.loser_index].source_file;
            e["m"] = p.prefix_offset;
            e["tau"] = p.window_len;
            e["scores"] = {{"winner", score_to_json(p.winner_score)},
                           {"loser", score_to_json(p.loser_score)}};
            if (!cfg.windows_dir.empty()) {
                std::string w = (fs::path(cfg.windows_dir) /
                                 ("pair_" + std::to_string(i) + "_winner.bin")).string();
                std::string l = (fs::path(cfg.windows_dir) /
                                 ("pair_" + std::to_string(i) + "_loser.bin")).string();
                write_tokens_binary(p.winner_window, w);
                write_tokens_binary(p.loser_window, l);
                e["winner_window"] = w;
                e["loser_window"] = l;
            }
            manifest.push_back(std::move(e));
        }
    }

    report["pair_stage"] = {{"conditions", cfg.conditions.size()},
                            {"skipped_conditions", skipped_conditions},
                            {"candidates", ds.candidates},
                            {"dominance_pairs", ds.dominance_pairs},
                            {"discarded", ds.discarded},
                            {"filtered_out", filtered_out},
                            {"pairs_emitted", manifest.size()}};
    report["seeds"]["pair"] = cfg.seed;

    if (!cfg.manifest_path.empty()) {
        std::ofstream out(cfg.manifest_path, std::ios::binary);
        if (!out) throw IoError("cannot write manifest: " + cfg.manifest_path);
        out << manifest.dump(2) << "\n";
    }
    return manifest;
}

// ---- subcommand bodies -----------------------------------------------------

int cmd_tokenize(const std::string& in, const std::string& out, const std::string& format,
                 bool delimiters, bool triangulate, const std::string& report_path) {
    json report = base_report();
    report["inputs"][in] = fnv1a_digest(in);
    StageTimer timer;
    timer.start("tokenize");

    ObjReadOptions opts;
    opts.triangulate_ngons = triangulate;
    Mesh mesh = load_obj(in, opts);
    QuantizedMesh qm = canonicalize(normalize(mesh));
    TokenSequence seq = tokenize(qm, delimiters);
    if (format == "bin") write_tokens_binary(seq, out);
    else write_tokens_text(seq, out);

    timer.stop(report);
    report["output"] = {{"path", out},
                        {"tokens", seq.size()},
                        {"faces", qm.faces.size()},
                        {"vertices", qm.vertices.size()},
                        {"dropped_degenerate_faces", qm.dropped_degenerate}};
    emit_report(report, report_path);
    return 0;
}

int cmd_detokenize(const std::string& in, const std::string& out, const std::string& mode,
                   const std::string& report_path) {
    json report = base_report();
    report["inputs"][in] = fnv1a_digest(in);
    StageTimer timer;
    timer.start("detokenize");

    TokenSequence seq = read_tokens_auto(in);
    DetokenizeDiagnostics diag;
    Mesh mesh = detokenize(seq, mode == "strict" ? DetokenizeMode::Strict
                                                 : DetokenizeMode::Lenient, &diag);
    save_obj(mesh, out);

    timer.stop(report);
    report["output"] = {{"path", out},
                        {"faces", diag.faces_parsed},
                        {"tokens_dropped", diag.tokens_dropped},
                        {"partial_blocks", diag.partial_blocks},
                        {"malformed_blocks", diag.malformed_blocks}};
    emit_report(report, report_path);
    return 0;
}

int cmd_quadify(const std::string& in, const std::string& out, const std::string& solver,
                double max_angle, const std::string& report_path) {
    json report = base_report();
    report["inputs"][in] = fnv1a_digest(in);
    StageTimer timer;
    timer.start("quadify");

    Mesh mesh = load_obj(in);
    MatchingProblem problem = build_problem(mesh);
    MatchingSolution sol = solver == "exact" ? solve_exact(problem) : solve_greedy(problem);
    auto [converted, stats] = apply_and_validate(mesh, problem, sol, max_angle);
    save_obj(converted, out);

    timer.stop(report);
    report["output"] = {{"path", out},
                        {"solver", solver},
                        {"candidates", problem.candidates.size()},
                        {"selected", sol.selected.size()},
                        {"total_weight", sol.total_weight},
                        {"merged", stats.merged},
                        {"split_back", stats.split_back},
                        {"quad_ratio", stats.quad_ratio}};
    emit_report(report, report_path);
    return 0;
}

int cmd_filter(const std::string& config_path, const std::vector<std::string>& inputs,
               const std::string& report_path) {
    FilterConfig cfg;
    if (!config_path.empty()) cfg = filter_config_from_json(load_json_file(config_path));

    json report = base_report();
    json verdicts = json::array();
    bool all_pass = true;
    for (const std::string& path : inputs) {
        report["inputs"][path] = fnv1a_digest(path);
        Mesh mesh = load_obj(path);
        FilterVerdict v = run_filter(mesh, cfg);
        all_pass = all_pass && v.pass;
        verdicts.push_back({{"input", path},
                            {"pass", v.pass},
                            {"face_count", v.face_count},
                            {"face_count_ok", v.face_count_ok},
                            {"aspect_ok", v.aspect_ok},
                            {"worst_aspect", v.worst_aspect},
                            {"fracture", v.fracture},
                            {"component_count", v.component_count},
                            {"failed_rules", v.failed_rules()}});
    }
    report["verdicts"] = verdicts;
    emit_report(report, report_path);
    return all_pass ? 0 : 1;
}

int cmd_score(const std::string& ref, const std::string& gen, std::size_t points,
              std::uint64_t seed, const std::string& up_axis, const std::string& walk_mode,
              const std::string& report_path) {
    json report = base_report();
    report["inputs"][ref] = fnv1a_digest(ref);
    report["inputs"][gen] = fnv1a_digest(gen);
    report["seeds"]["sampling"] = seed;
    StageTimer timer;
    timer.start("score");

    Mesh ref_mesh = load_obj(ref);
    Mesh gen_mesh = load_obj(gen);
    TopoConfig topo_cfg;
    topo_cfg.up_axis = parse_axis(up_axis);
    topo_cfg.walk_mode =
        walk_mode == "paper-literal" ? WalkMode::PaperLiteral : WalkMode::Bidirectional;

    TopoScore ts = topo_score(gen_mesh, topo_cfg);
    PointCloud ref_cloud = sample_point_cloud(ref_mesh, points, 0.0, seed);
    PointCloud gen_cloud = sample_point_cloud(gen_mesh, points, 0.0, seed + 1);

    timer.stop(report);
    json out = score_to_json(ts);
    out["cd"] = chamfer_distance(ref_cloud, gen_cloud);
    out["hd"] = hausdorff_distance(ref_cloud, gen_cloud);
    out["qr"] = quad_ratio(gen_mesh);
    report["score"] = out;
    emit_report(report, report_path);
    return 0;
}

int cmd_pair(const std::string& config_path, const std::string& root,
             const std::string& report_path) {
    json cfg_json = load_json_file(config_path);
    PairStageConfig cfg = pair_config_from_json(cfg_json, root);
    json report = base_report();
    report["inputs"][config_path] = fnv1a_digest(config_path);
    StageTimer timer;
    timer.start("pair");
    json manifest = run_pair_stage(cfg, report);
    timer.stop(report);
    if (cfg.manifest_path.empty()) report["manifest"] = manifest;
    emit_report(report, report_path);
    return 0;
}

std::vector<double> read_logprob_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open log-prob file: " + path);
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    return out;
}

int cmd_tdpo_eval(const std::string& pairs_path, const std::string& logprob_dir, double beta,
                  const std::string& report_path) {
    json manifest = load_json_file(pairs_path);
    std::vector<WindowLogProbs> batch;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
        WindowLogProbs w;
        w.beta = beta;
        auto file = [&](const char* role) {
            return (fs::path(logprob_dir) /
                    ("pair_" + std::to_string(i) + "_" + role + ".txt")).string();
        };
        w.policy_w = read_logprob_file(file("policy_w"));
        w.ref_w = read_logprob_file(file("ref_w"));
        w.policy_l = read_logprob_file(file("policy_l"));
        w.ref_l = read_logprob_file(file("ref_l"));
        batch.push_back(std::move(w));
    }
    BatchResult result = batch_loss(batch);

    json report = base_report();
    report["inputs"][pairs_path] = fnv1a_digest(pairs_path);
    json per_pair = json::array();
    for (const TdpoResult& r : result.per_pair)
        per_pair.push_back({{"z", r.margin}, {"loss", r.loss}, {"prob", r.preference_prob}});
    report["tdpo"] = {{"beta", beta}, {"loss", result.mean_loss}, {"per_pair", per_pair}};
    emit_report(report, report_path);
    return 0;
}

struct ToyOptions {
    std::string action;  // forward | generate | logprobs
    std::string in, out;
    std::uint64_t seed = 0;
    int l = 144;
    std::vector<int> dims = {16, 32, 64};
    double r = 1.0;
    int k = 10;
    double p = 0.95;
    double t = 0.5;
    std::size_t max_tokens = 0;
    std::size_t m = 0, tau = 0;
    std::string weights;
};

int cmd_toy(const ToyOptions& o, const std::string& report_path) {
    HourglassConfig cfg;
    cfg.max_len = o.l;
    if (o.dims.size() != 3) throw InvalidInput("--dims needs exactly 3 values");
    cfg.d0 = o.dims[0];
    cfg.d1 = o.dims[1];
    cfg.d2 = o.dims[2];
    cfg.seed = o.seed;

    HourglassModel model = o.weights.empty() ? HourglassModel(cfg)
                                             : HourglassModel::load_weights(o.weights);
    ConditionSpec cond;
    cond.quad_dominance = o.r;
    cond.shape_embedding.assign(model.config().cond_dim, 0.0f);

    TokenSequence tokens = o.in.empty() ? TokenSequence{} : read_tokens_auto(o.in);

    json report = base_report();
    report["seeds"]["model"] = o.seed;
    if (o.action == "forward") {
        Tensor logits = model.forward(tokens, cond);
        report["toy"] = {{"positions", logits.rows}, {"vocab", logits.cols}};
    } else if (o.action == "generate") {
        SamplerConfig s;
        s.top_k = o.k;
        s.top_p = o.p;
        s.temperature = o.t;
        s.seed = o.seed;
        std::size_t max_tokens = o.max_tokens ? o.max_tokens : std::size_t(o.l);
        TokenSequence outseq = model.generate(tokens, cond, s, max_tokens);
        if (!o.out.empty()) write_tokens_text(outseq, o.out);
        DetokenizeDiagnostics diag;
        detokenize(outseq, DetokenizeMode::Lenient, &diag);
        report["toy"] = {{"generated_tokens", outseq.size()},
                         {"faces_parsed", diag.faces_parsed},
                         {"malformed_blocks", diag.malformed_blocks}};
    } else if (o.action == "logprobs") {
        std::size_t tau = o.tau ? o.tau : tokens.size() - o.m;
        std::vector<double> lp = model.window_logprobs(tokens, o.m, tau, cond);
        if (!o.out.empty()) {
            std::ofstream outf(o.out, std::ios::binary);
            if (!outf) throw IoError("cannot write: " + o.out);
            outf.precision(17);
            for (double v : lp) outf << v << '\n';
        }
        double sum = 0.0;
        for (double v : lp) sum += v;
        report["toy"] = {{"window_tokens", lp.size()}, {"sum_logprob", sum}};
    } else {
        throw InvalidInput("unknown toy action: " + o.action);
    }
    emit_report(report, report_path);
    return 0;
}

int cmd_pipeline(const std::string& config_path, const std::string& root,
                 const std::string& report_path) {
    json cfg = load_json_file(config_path);
    json report = base_report();
    report["inputs"][config_path] = fnv1a_digest(config_path);

    StageTimer timer;
    timer.start("pipeline");
    PairStageConfig pair_cfg = pair_config_from_json(cfg, root);
    json manifest;
    try {
        manifest = run_pair_stage(pair_cfg, report);
    } catch (const Error& e) {
        throw Error(std::string("pair stage: ") + e.what());
    }
    if (manifest.empty())
        std::cerr << "warning: no preference pairs emitted\n";

    if (cfg.contains("tdpo")) {
        const json& t = cfg["tdpo"];
        std::string dir = t.at("logprob_dir");
        if (fs::path(dir).is_relative()) dir = (fs::path(root) / dir).string();
        double beta = t.value("beta", 0.1);
        std::vector<WindowLogProbs> batch;
        try {
            for (std::size_t i = 0; i < manifest.size(); ++i) {
                WindowLogProbs w;
                w.beta = beta;
                auto file = [&](const char* role) {
                    return (fs::path(dir) / ("pair_" + std::to_string(i) + "_" + role + ".txt"))
                        .string();
                };
                w.policy_w = read_logprob_file(file("policy_w"));
                w.ref_w = read_logprob_file(file("ref_w"));
                w.policy_l = read_logprob_file(file("policy_l"));
                w.ref_l = read_logprob_file(file("ref_l"));
                batch.push_back(std::move(w));
            }
            if (!batch.empty()) {
                BatchResult result = batch_loss(batch);
                report["tdpo"] = {{"beta", beta}, {"loss", result.mean_loss}};
            }
        } catch (const Error& e) {
            throw Error(std::string("tdpo stage: ") + e.what());
        }
    }
    timer.stop(report);
    emit_report(report, report_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QuadGPT-style mesh codec, conversion, scoring and tDPO toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string root = ".";
    app.add_option("--root", root, "Base directory for relative paths in configs");
    std::string report_path;
    app.add_option("--report", report_path, "Write the JSON run report here instead of stdout");

    // tokenize
    auto* tok = app.add_subcommand("tokenize", "OBJ -> canonical token sequence");
    std::string tok_in, tok_out, tok_format = "text";
    bool tok_delims = false, tok_tri = false;
    tok->add_option("--in", tok_in)->required();
    tok->add_option("--out", tok_out)->required();
    tok->add_option("--format", tok_format)->check(CLI::IsMember({"text", "bin"}));
    tok->add_flag("--delimiters", tok_delims, "Wrap in BOS/EOS");
    tok->add_flag("--triangulate-ngons", tok_tri, "Fan-triangulate polygons with >4 vertices");

    // detokenize
    auto* detok = app.add_subcommand("detokenize", "Token sequence -> OBJ");
    std::string detok_in, detok_out, detok_mode = "strict";
    detok->add_option("--in", detok_in)->required();
    detok->add_option("--out", detok_out)->required();
    detok->add_option("--mode", detok_mode)->check(CLI::IsMember({"strict", "lenient"}));

    // quadify
    auto* quad = app.add_subcommand("quadify", "Triangle mesh -> quad-dominant mesh");
    std::string quad_in, quad_out, quad_solver = "greedy";
    double quad_max_angle = kDefaultMaxAngleDeg;
    quad->add_option("--in", quad_in)->required();
    quad->add_option("--out", quad_out)->required();
    quad->add_option("--solver", quad_solver)->check(CLI::IsMember({"exact", "greedy"}));
    quad->add_option("--max-angle", quad_max_angle);

    // filter
    auto* filt = app.add_subcommand("filter", "Rule-based quality screening");
    std::string filt_config;
    std::vector<std::string> filt_inputs;
    filt->add_option("--config", filt_config, "JSON with threshold overrides");
    filt->add_option("inputs", filt_inputs, "OBJ files")->required();

    // score
    auto* score = app.add_subcommand("score", "Topological + geometric metrics");
    std::string score_ref, score_gen, score_axis = "y", score_mode = "bidirectional";
    std::size_t score_points = 40960;
    std::uint64_t score_seed = 0;
    score->add_option("--ref", score_ref)->required();
    score->add_option("--gen", score_gen)->required();
    score->add_option("--points", score_points);
    score->add_option("--seed", score_seed)->required();
    score->add_option("--up-axis", score_axis)->check(CLI::IsMember({"x", "y", "z"}));
    score->add_option("--mode", score_mode)
        ->check(CLI::IsMember({"paper-literal", "bidirectional"}));

    // pair
    auto* pair = app.add_subcommand("pair", "Build preference pairs from candidate sets");
    std::string pair_config;
    pair->add_option("--config", pair_config)->required();

    // tdpo-eval
    auto* tdpo = app.add_subcommand("tdpo-eval", "Evaluate the tDPO loss over a pair manifest");
    std::string tdpo_pairs, tdpo_logprobs;
    double tdpo_beta = 0.1;
    tdpo->add_option("--pairs", tdpo_pairs)->required();
    tdpo->add_option("--logprobs", tdpo_logprobs)->required();
    tdpo->add_option("--beta", tdpo_beta);

    // toy
    auto* toy = app.add_subcommand("toy", "Toy hourglass model: forward | generate | logprobs");
    ToyOptions toyo;
    toy->add_option("action", toyo.action)->required()
        ->check(CLI::IsMember({"forward", "generate", "logprobs"}));
    toy->add_option("--in", toyo.in, "Input token file");
    toy->add_option("--out", toyo.out, "Output file (tokens or log-probs)");
    toy->add_option("--seed", toyo.seed)->required();
    toy->add_option("--l", toyo.l, "Context length (multiple of 12)");
    toy->add_option("--dims", toyo.dims, "Stage widths d0,d1,d2")->delimiter(',');
    toy->add_option("--r", toyo.r, "Quad-dominance in [0,1]");
    toy->add_option("--k", toyo.k, "Top-k");
    toy->add_option("--p", toyo.p, "Nucleus top-p");
    toy->add_option("--t", toyo.t, "Temperature");
    toy->add_option("--max-tokens", toyo.max_tokens);
    toy->add_option("--m", toyo.m, "Window offset (block-aligned)");
    toy->add_option("--tau", toyo.tau, "Window length");
    toy->add_option("--weights", toyo.weights, "Load weights from a QGHW file");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "filter -> score -> pair -> optional tdpo-eval");
    std::string pipe_config;
    pipe->add_option("--config", pipe_config)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*tok)
            return cmd_tokenize(tok_in, tok_out, tok_format, tok_delims, tok_tri, report_path);
        if (*detok) return cmd_detokenize(detok_in, detok_out, detok_mode, report_path);
        if (*quad)
            return cmd_quadify(quad_in, quad_out, quad_solver, quad_max_angle, report_path);
        if (*filt) return cmd_filter(filt_config, filt_inputs, report_path);
        if (*score)
            return cmd_score(score_ref, score_gen, score_points, score_seed, score_axis,
                             score_mode, report_path);
        if (*pair) return cmd_pair(pair_config, root, report_path);
        if (*tdpo) return cmd_tdpo_eval(tdpo_pairs, tdpo_logprobs, tdpo_beta, report_path);
        if (*toy) return cmd_toy(toyo, report_path);
        if (*pipe) return cmd_pipeline(pipe_config, root, report_path);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
