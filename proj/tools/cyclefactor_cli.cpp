// Command-line front end: graph generation and certification, template
// construction, partition diagnostics, and the embedding pipelines, with
// line-oriented run reports suitable for golden-file testing.

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "cyclefactor/absorber.hpp"
#include "cyclefactor/chains.hpp"
#include "cyclefactor/embedder.hpp"
#include "cyclefactor/errors.hpp"
#include "cyclefactor/graph.hpp"
#include "cyclefactor/jumbled.hpp"
#include "cyclefactor/partition.hpp"
#include "cyclefactor/template_graph.hpp"

using namespace cyclefactor;

namespace {

struct Report {
    std::vector<std::pair<std::string, std::string>> lines;

    void add(const std::string& k, const std::string& v) { lines.push_back({k, v}); }
    void add(const std::string& k, long long v) { add(k, std::to_string(v)); }
    void add(const std::string& k, double v) {
        std::ostringstream os;
        os << v;
        add(k, os.str());
    }
    void write(std::ostream& out) const {
        for (auto& [k, v] : lines) out << k << '=' << v << '\n';
    }
    void emit(const std::string& path) const {
        if (path.empty()) {
            write(std::cout);
        } else {
            std::ofstream out(path);
            if (!out) throw Error("io", "cannot open report path " + path);
            write(out);
        }
    }
};

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// flat key=value configuration files; command-line flags override
std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> kv;
    if (path.empty()) return kv;
    std::ifstream in(path);
    if (!in) throw Error("config", "cannot open config file " + path, ExitCode::parse);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config", "config lines must be key=value: " + line, ExitCode::parse);
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

RunConfig make_config(const std::string& mode, const std::string& config_path,
                      uint64_t seed, bool seed_set) {
    RunConfig cfg = mode == "practical" ? RunConfig::practical_defaults()
                                        : RunConfig::strict_defaults();
    auto kv = read_config(config_path);
    auto geti = [&](const char* k, auto& field) {
        auto it = kv.find(k);
        if (it != kv.end()) field = static_cast<std::decay_t<decltype(field)>>(std::stoll(it->second));
    };
    auto getd = [&](const char* k, double& field) {
        auto it = kv.find(k);
        if (it != kv.end()) field = std::stod(it->second);
    };
    geti("K", cfg.K);
    geti("L", cfg.L);
    getd("gamma", cfg.gamma);
    getd("alpha", cfg.alpha);
    geti("m_prime", cfg.m_prime);
    getd("epsilon", cfg.epsilon);
    getd("delta", cfg.delta);
    geti("template_degree", cfg.template_degree);
    geti("template_seed", cfg.template_seed);
    geti("template_trials", cfg.template_trials);
    geti("search_budget", cfg.search_budget);
    geti("seed", cfg.seed);
    if (seed_set) cfg.seed = seed;
    if (cfg.mode == Mode::strict) {
        RunConfig strict = RunConfig::strict_defaults();
        if (cfg.K < strict.K || cfg.L < strict.L)
            throw Error("config", "strict mode forbids lowering K or L below their published values",
                        ExitCode::parse);
    }
    return cfg;
}

void add_config_report(Report& rep, const RunConfig& cfg) {
    rep.add("mode", to_string(cfg.mode));
    rep.add("seed", (long long)cfg.seed);
    auto dev = cfg.deviations();
    rep.add("constant_deviations", (long long)dev.size());
    for (size_t i = 0; i < dev.size(); ++i) rep.add("deviation_" + std::to_string(i), dev[i]);
}

JumbledParams params_for(const Graph& g, double p, const RunConfig& cfg) {
    return JumbledParams::from_epsilon(p, cfg.epsilon, cfg.delta, g.vertex_count());
}

double infer_density(const Graph& g) {
    long long n = g.vertex_count();
    if (n < 2) return 0.0;
    return 2.0 * double(g.edge_count()) / (double(n) * double(n - 1));
}

int run(int argc, char** argv) {
    CLI::App app{"constructive 2-factor embedding in sparse pseudorandom graphs"};
    app.require_subcommand(1);

    std::string mode = "strict", config_path, out_path, report_path;
    uint64_t seed = 1;
    bool seed_given = false;
    app.add_option("--mode", mode, "strict or practical")->check(CLI::IsMember({"strict", "practical"}));
    app.add_option("--config", config_path, "flat key=value configuration file");
    app.add_option("--seed", seed, "pipeline seed")->each([&](const std::string&) { seed_given = true; });
    app.add_option("--out", out_path, "output path");
    app.add_option("--report", report_path, "write the run report here instead of stdout");

    // gen
    auto* gen = app.add_subcommand("gen", "sample a seeded G(n,p) edge list");
    long long gen_n = 0;
    double gen_p = 0.0;
    gen->add_option("--n", gen_n)->required();
    gen->add_option("--p", gen_p)->required();

    // certify
    auto* certify = app.add_subcommand("certify", "estimate lambda and sample the discrepancy");
    std::string certify_graph;
    double certify_p = -1.0;
    int certify_trials = 1000;
    certify->add_option("--graph", certify_graph)->required();
    certify->add_option("--p", certify_p);
    certify->add_option("--trials", certify_trials);

    // partition
    auto* part = app.add_subcommand("partition", "degree-preserving partition diagnostics");
    std::string part_graph;
    int part_k = 1;
    double part_delta = 0.5, part_p = -1.0;
    part->add_option("--graph", part_graph)->required();
    part->add_option("--k", part_k);
    part->add_option("--delta", part_delta);
    part->add_option("--p", part_p);

    // template
    auto* tmpl = app.add_subcommand("template", "build and verify a template");
    long long tmpl_m = 0;
    uint64_t tmpl_pr = 0;
    std::vector<std::string> tmpl_random;
    tmpl->add_option("--m", tmpl_m)->required();
    tmpl->add_option("--p-r", tmpl_pr, "LPS-backed construction with this prime");
    tmpl->add_option("--random", tmpl_random, "random fallback: DEGREE SEED")->expected(2);

    // embed family
    std::string emb_graph, emb_spec, emb_triangles = "greedy";
    auto add_embed_opts = [&](CLI::App* cmd) {
        cmd->add_option("--graph", emb_graph)->required();
        cmd->add_option("--spec", emb_spec)->required();
    };
    auto* embed = app.add_subcommand("embed", "embed a full 2-factor specification");
    add_embed_opts(embed);
    embed->add_option("--triangles", emb_triangles, "triangle provider: greedy or none")
        ->check(CLI::IsMember({"greedy", "none"}));
    auto* embed_short_cmd = app.add_subcommand("embed-short", "embed a short-cycle family");
    add_embed_opts(embed_short_cmd);
    auto* embed_long_cmd = app.add_subcommand("embed-long", "embed a long-cycle family");
    add_embed_opts(embed_long_cmd);

    // verify
    auto* verify = app.add_subcommand("verify", "re-verify an embedding file");
    std::string ver_graph, ver_spec, ver_emb;
    verify->add_option("--graph", ver_graph)->required();
    verify->add_option("--spec", ver_spec)->required();
    verify->add_option("--embedding", ver_emb)->required();

    CLI11_PARSE(app, argc, argv);

    RunConfig cfg = make_config(mode, config_path, seed, seed_given);
    Report rep;
    Timer timer;

    if (gen->parsed()) {
        Graph g = sample_gnp(int(gen_n), gen_p, cfg.seed);
        if (out_path.empty()) throw Error("gen", "--out is required", ExitCode::parse);
        g.save_edge_list_file(out_path);
        rep.add("command", "gen");
        rep.add("n", gen_n);
        rep.add("p", gen_p);
        rep.add("seed", (long long)cfg.seed);
        rep.add("edges", g.edge_count());
        rep.add("time_total_ms", timer.ms());
        rep.emit(report_path);
        return 0;
    }

    if (certify->parsed()) {
        Graph g = Graph::load_edge_list_file(certify_graph);
        double p = certify_p >= 0 ? certify_p : infer_density(g);
        LambdaEstimate est = estimate_lambda(g, p);
        JumbledParams prm = params_for(g, p, cfg);
        DiscrepancyReport disc = check_discrepancy(g, prm, certify_trials, cfg.seed);
        rep.add("command", "certify");
        rep.add("n", (long long)g.vertex_count());
        rep.add("p", p);
        rep.add("lambda_estimate", est.value);
        rep.add("lambda_converged", est.converged ? "yes" : "no");
        rep.add("lambda_iterations", (long long)est.iterations);
        rep.add("lambda_tolerance", est.tolerance);
        rep.add("sampled_max_ratio", disc.max_ratio);
        rep.add("sampled_trials", (long long)disc.trials);
        rep.add("epsilon_implied", est.value / (p * p * double(g.vertex_count())));
        rep.add("time_total_ms", timer.ms());
        rep.emit(report_path);
        return 0;
    }

    if (part->parsed()) {
        Graph g = Graph::load_edge_list_file(part_graph);
        double p = part_p >= 0 ? part_p : infer_density(g);
        VertexSet all = VertexSet::full(g.vertex_count());
        DegreePartition dp = degree_preserving_partition(g, all, all, part_k, part_delta, p, cfg);
        rep.add("command", "partition");
        rep.add("parts", (long long)dp.parts.size());
        for (size_t i = 0; i < dp.parts.size(); ++i)
            rep.add("part_" + std::to_string(i) + "_size", (long long)dp.parts[i].size());
        rep.add("provable", dp.provable ? "yes" : "no");
        rep.add("guarantee_factor", dp.factor);
        rep.add("time_total_ms", timer.ms());
        rep.emit(report_path);
        return 0;
    }

    if (tmpl->parsed()) {
        Template t;
        rep.add("command", "template");
        if (!tmpl_random.empty()) {
            int degree = std::stoi(tmpl_random[0]);
            uint64_t tseed = std::stoull(tmpl_random[1]);
            t = build_random_template(tmpl_m, degree, tseed, cfg);
            rep.add("source", "random");
        } else {
            if (tmpl_pr == 0) throw Error("template", "give --p-r or --random", ExitCode::parse);
            t = build_template(tmpl_m, tmpl_pr, cfg);
            rep.add("source", "lps");
        }
        if (!out_path.empty()) t.save_file(out_path);
        rep.add("m", (long long)t.m);
        rep.add("max_degree", (long long)t.max_degree);
        rep.add("edges", t.t.edge_count());
        rep.add("verified", t.verified == FlexVerification::exhaustive ? "exhaustive" : "sampled");
        if (t.verified == FlexVerification::sampled)
            rep.add("verification_trials", (long long)t.verification_trials);
        rep.add("time_total_ms", timer.ms());
        rep.emit(report_path);
        return 0;
    }

    if (verify->parsed()) {
        Graph g = Graph::load_edge_list_file(ver_graph);
        CycleFamilySpec spec = CycleFamilySpec::load_file(ver_spec);
        Embedding emb = Embedding::load_file(ver_emb);
        VerifyReport vr = verify_embedding(g, spec, emb);
        rep.add("command", "verify");
        rep.add("verdict", vr.ok ? "pass" : "fail");
        if (!vr.ok) rep.add("reason", vr.reason);
        rep.emit(report_path);
        return vr.ok ? 0 : int(ExitCode::verification_failure);
    }

    // embedding commands
    Graph g = Graph::load_edge_list_file(emb_graph);
    CycleFamilySpec spec = CycleFamilySpec::load_file(emb_spec);
    if (spec.total() > g.vertex_count())
        throw InfeasibleError("embed", "spec total exceeds the graph order");
    double p = infer_density(g);
    JumbledParams prm = params_for(g, p, cfg);
    EmbedStats stats;
    Embedding emb;
    std::string which;
    if (embed->parsed()) {
        which = "embed";
        TriangleProvider provider;
        if (emb_triangles == "greedy")
            provider = [](const Graph& gg, const VertexSet& host) {
                return brute_triangle_factor(gg, host);
            };
        emb = embed_two_factor(g, spec, prm, cfg, provider, &stats);
    } else if (embed_short_cmd->parsed()) {
        which = "embed-short";
        emb = embed_short_cycles(g, spec, prm, cfg, &stats);
    } else {
        which = "embed-long";
        emb = embed_long_cycles(g, spec, prm, cfg, &stats);
    }
    VerifyReport vr = verify_embedding(g, spec, emb);
    if (!vr.ok) throw Error("embed/verify", vr.reason, ExitCode::verification_failure);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw Error("io", "cannot open " + out_path);
        emb.save(out);
    }
    rep.add("command", which);
    rep.add("n", (long long)g.vertex_count());
    rep.add("p_inferred", p);
    rep.add("cycles", (long long)spec.lengths.size());
    rep.add("spec_total", spec.total());
    add_config_report(rep, cfg);
    rep.add("book_cycles", stats.book_cycles);
    rep.add("pairs_connected", stats.pairs_connected);
    rep.add("absorbed_cycles", stats.absorbed_cycles);
    rep.add("phase_two_spills", stats.phase_two_spills);
    rep.add("stall_swept", stats.stall_swept);
    rep.add("absorber_m", stats.m);
    for (auto& note : stats.notes) rep.add("note", note);
    rep.add("verification", "pass");
    rep.add("time_total_ms", timer.ms());
    rep.emit(report_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error[" << e.stage() << "]: " << e.what() << '\n';
        return int(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return int(ExitCode::stage_failure);
    }
}
