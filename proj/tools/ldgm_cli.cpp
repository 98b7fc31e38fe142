#include "ldgm/bench.hpp"
#include "ldgm/codec.hpp"
#include "ldgm/config.hpp"
#include "ldgm/report.hpp"
#include "ldgm/stability.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EnsembleOpts {
    std::string kind = "irregular";
    std::size_t k = 3;
    std::string preset = "optimized_rate_half";
    std::size_t n = 1000;
    double rate = 0.5;
};

void add_ensemble_opts(CLI::App* app, EnsembleOpts& o) {
    app->add_option("--ensemble", o.kind, "semi_regular or irregular")->check(CLI::IsMember({"semi_regular", "irregular"}));
    app->add_option("-K,--gen-degree", o.k, "generator degree of the semi-regular ensemble");
    app->add_option("--preset", o.preset, "degree distribution preset of the irregular ensemble");
    app->add_option("-N,--n", o.n, "number of source bits");
    app->add_option("-R,--rate", o.rate, "code rate M/N");
}

ldgm::EnsembleSpec to_spec(const EnsembleOpts& o) {
    ldgm::EnsembleSpec s;
    s.kind = o.kind == "semi_regular" ? ldgm::EnsembleKind::semi_regular : ldgm::EnsembleKind::irregular;
    s.gen_degree = o.k;
    s.preset = o.preset;
    return s;
}

ldgm::FactorGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open graph file " + path);
    return ldgm::read_graph(in);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("cannot parse number '" + item + "'");
        }
    }
    return out;
}

std::vector<double> beta_grid(const std::string& spec) {
    // "lo:hi:step" or a comma list.
    if (spec.find(':') == std::string::npos) return parse_list(spec);
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_list(item).at(0));
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) throw UsageError("beta grid must be lo:hi:step");
    std::vector<double> out;
    const auto steps = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (std::size_t k = 0; k <= steps; ++k) out.push_back(parts[0] + static_cast<double>(k) * parts[2]);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LDGM lossy source coding with BP-guided decimation"};
    app.require_subcommand(1);

    // generate
    EnsembleOpts gen_opts;
    std::uint64_t gen_seed = 1;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "sample a graph from an ensemble and write it in text form");
    add_ensemble_opts(generate, gen_opts);
    generate->add_option("--seed", gen_seed, "graph seed");
    generate->add_option("-o,--out", gen_out, "output file (default stdout)");

    // encode
    EnsembleOpts enc_opts;
    std::string enc_graph, enc_source, enc_schedule = "constant", enc_preset, enc_mode = "soft_hard", enc_order = "flooding";
    std::string enc_policy = "per_round", enc_bits = "auto", enc_inner = "auto";
    double enc_xi_start = 0.05, enc_xi_end = 0.05, enc_eps = ldgm::kDefaultEpsilon, enc_saturation = 0.99;
    std::size_t enc_iters = 100;
    std::uint64_t enc_seed = 1;
    bool enc_trace = false, enc_reinit = false;
    auto* encode = app.add_subcommand("encode", "run one encoder on one instance and print a JSON result");
    add_ensemble_opts(encode, enc_opts);
    encode->add_option("--graph", enc_graph, "read the graph from a file instead of sampling one");
    encode->add_option("--source", enc_source, "source bits as a 0/1 string (default: random)");
    encode->add_option("--seed", enc_seed, "root seed for graph, source and encoder streams");
    encode->add_option("--mode", enc_mode)->check(CLI::IsMember({"soft", "soft_hard"}));
    encode->add_option("--schedule", enc_schedule)->check(CLI::IsMember({"constant", "linear", "exponential"}));
    encode->add_option("--schedule-preset", enc_preset, "named schedule preset, e.g. n1000_exponential");
    encode->add_option("--xi-start", enc_xi_start);
    encode->add_option("--xi-end", enc_xi_end);
    encode->add_option("--iterations", enc_iters, "sweep budget");
    encode->add_option("--inner-iters", enc_inner, "sweeps per decimation round, or auto to spread the budget");
    encode->add_option("--bits-per-round", enc_bits, "auto or a count");
    encode->add_option("--policy", enc_policy)->check(CLI::IsMember({"per_round", "on_saturation"}));
    encode->add_option("--saturation", enc_saturation);
    encode->add_option("--epsilon", enc_eps);
    encode->add_option("--sweep-order", enc_order)->check(CLI::IsMember({"flooding", "sequential"}));
    encode->add_flag("--reinit-each-round", enc_reinit);
    encode->add_flag("--trace", enc_trace, "include the per-round trace");

    // sweep and grid
    std::string sweep_config, sweep_out;
    std::optional<std::uint64_t> sweep_seed;
    std::optional<std::size_t> sweep_workers, sweep_seeds;
    auto* sweep = app.add_subcommand("sweep", "run a multi-seed experiment from a config file");
    sweep->add_option("config", sweep_config, "experiment config file")->required();
    sweep->add_option("--seed", sweep_seed, "root seed")->required();
    sweep->add_option("--workers", sweep_workers, "worker threads");
    sweep->add_option("--seeds", sweep_seeds, "seeds per cell");
    sweep->add_option("-o,--out", sweep_out, "output directory");

    std::string grid_config, grid_out, grid_xis;
    std::optional<std::uint64_t> grid_seed;
    std::optional<std::size_t> grid_workers, grid_seeds;
    auto* grid = app.add_subcommand("grid", "constant-xi grid search on the config's ensemble");
    grid->add_option("config", grid_config, "experiment config file")->required();
    grid->add_option("--xi", grid_xis, "comma separated xi values")->required();
    grid->add_option("--seed", grid_seed, "root seed")->required();
    grid->add_option("--workers", grid_workers);
    grid->add_option("--seeds", grid_seeds);
    grid->add_option("-o,--out", grid_out, "CSV output file (default stdout)");

    // stability
    std::string stab_betas = "0.05:0.95:0.05", stab_out;
    double stab_eps = 0.1;
    std::size_t stab_n = 10000;
    std::uint64_t stab_seed = 1;
    auto* stability = app.add_subcommand("stability", "row-sum contraction bounds over a beta grid as CSV");
    stability->add_option("--beta", stab_betas, "lo:hi:step or a comma list");
    stability->add_option("--epsilon", stab_eps, "clip margin");
    stability->add_option("-N,--n", stab_n, "length of the sampled graphs whose degrees are used");
    stability->add_option("--seed", stab_seed, "graph seed");
    stability->add_option("-o,--out", stab_out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*generate) {
            const auto g = ldgm::build_ensemble(to_spec(gen_opts), gen_opts.n, gen_opts.rate, gen_seed);
            if (gen_out.empty()) {
                ldgm::write_graph(std::cout, g);
            } else {
                std::ofstream f(gen_out);
                if (!f) throw std::runtime_error("cannot write " + gen_out);
                ldgm::write_graph(f, g);
            }
            return 0;
        }

        if (*encode) {
            ldgm::Schedule sched;
            if (!enc_preset.empty()) {
                sched = ldgm::schedule_preset(enc_preset);
            } else {
                sched.kind = ldgm::parse_schedule_kind(enc_schedule);
                sched.xi_start = enc_xi_start;
                sched.xi_end = sched.kind == ldgm::ScheduleKind::constant ? enc_xi_start : enc_xi_end;
            }
            const auto graph = enc_graph.empty()
                                   ? ldgm::build_ensemble(to_spec(enc_opts), enc_opts.n, enc_opts.rate,
                                                          ldgm::graph_seed(enc_seed, enc_opts.n, 0, false))
                                   : load_graph_file(enc_graph);
            const std::size_t n = graph.n_generators();
            ldgm::BitVector source;
            if (!enc_source.empty()) {
                source = ldgm::BitVector::from_string(enc_source);
                if (source.size() != n) throw UsageError(fmt::format("source has {} bits, graph has N = {}", source.size(), n));
            } else {
                ldgm::Rng rng(ldgm::source_seed(enc_seed, n, 0));
                source = ldgm::random_source(n, rng);
            }

            ldgm::ExperimentConfig cfg;
            cfg.iterations = enc_iters;
            cfg.encoder.mode = ldgm::parse_encoder_mode(enc_mode);
            cfg.encoder.inner_iters = enc_inner == "auto" ? 0 : std::stoul(enc_inner);
            cfg.encoder.bits_per_round = enc_bits == "auto" ? 0 : std::stoul(enc_bits);
            cfg.encoder.policy = ldgm::parse_decimation_policy(enc_policy);
            cfg.encoder.saturation = enc_saturation;
            cfg.encoder.epsilon = enc_eps;
            cfg.encoder.sweep_order = ldgm::parse_sweep_order(enc_order);
            cfg.encoder.reinit_each_round = enc_reinit;
            auto ecfg = cfg.encoder_for(sched, ldgm::encoder_seed(enc_seed, n, 0));
            ecfg.record_trace = enc_trace;
            try {
                ecfg.validate();
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }

            const auto t0 = std::chrono::steady_clock::now();
            const auto res = ldgm::encode(graph, source, ecfg);
            const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            nlohmann::ordered_json j;
            j["mode"] = ldgm::to_string(ecfg.mode);
            j["N"] = n;
            j["M"] = graph.n_codebits();
            j["K"] = enc_graph.empty() && enc_opts.kind == "semi_regular" ? nlohmann::ordered_json(enc_opts.k)
                                                                         : nlohmann::ordered_json("irregular");
            j["schedule"] = {{"kind", ldgm::to_string(sched.kind)}, {"xi_start", sched.xi_start}, {"xi_end", sched.xi_end}};
            j["seed"] = enc_seed;
            j["distortion"] = res.distortion;
            j["rounds_used"] = res.rounds_used;
            j["sweeps"] = res.sweeps;
            j["hardened_tail"] = res.hardened_tail;
            j["non_converged"] = res.non_converged;
            j["shannon_floor"] = ldgm::rd_distortion(static_cast<double>(graph.n_codebits()) / static_cast<double>(n));
            j["codeword"] = res.codeword.to_string();
            j["wall_time"] = wall;
            if (enc_trace) {
                auto& t = j["trace"] = nlohmann::ordered_json::array();
                for (const auto& r : res.trace)
                    t.push_back({{"round", r.round}, {"xi", r.xi}, {"beta", r.beta}, {"mu", r.mu}, {"chosen", r.chosen},
                                 {"chosen_abs_bias", r.chosen_abs_bias}});
            }
            std::cout << j.dump(2) << '\n';
            return 0;
        }

        if (*sweep) {
            auto cfg = ldgm::load_config(sweep_config);
            cfg.root_seed = *sweep_seed;
            if (sweep_workers) cfg.workers = *sweep_workers;
            if (sweep_seeds) cfg.seeds = *sweep_seeds;
            if (!sweep_out.empty()) cfg.output_dir = sweep_out;
            try {
                cfg.validate();
            } catch (const ldgm::ConfigError& e) {
                throw UsageError(e.what());
            }
            const auto result = ldgm::run_sweep(cfg);
            ldgm::emit_outputs(cfg.output_dir, cfg, result);
            ldgm::write_summary_markdown(std::cout, result.summary, cfg.iterations);
            return 0;
        }

        if (*grid) {
            auto cfg = ldgm::load_config(grid_config);
            cfg.root_seed = *grid_seed;
            if (grid_workers) cfg.workers = *grid_workers;
            if (grid_seeds) cfg.seeds = *grid_seeds;
            const auto xis = parse_list(grid_xis);
            if (xis.empty()) throw UsageError("--xi must list at least one value");
            const auto result = ldgm::grid_search_constant(cfg, xis);
            if (grid_out.empty()) {
                ldgm::write_grid_csv(std::cout, result);
            } else {
                std::ofstream f(grid_out);
                if (!f) throw std::runtime_error("cannot write " + grid_out);
                ldgm::write_grid_csv(f, result);
            }
            for (const auto& b : result.best) std::cerr << fmt::format("N={} best xi={:.6g} mean={:.6f}\n", b.n, b.xi, b.mean);
            return 0;
        }

        if (*stability) {
            const auto betas = beta_grid(stab_betas);
            struct Profile {
                std::string name;
                ldgm::DegreeProfile degrees;
            };
            std::vector<Profile> profiles;
            for (std::size_t k : {3, 4, 5}) {
                ldgm::EnsembleSpec s{ldgm::EnsembleKind::semi_regular, k, ""};
                profiles.push_back({s.label(), ldgm::degree_stats(ldgm::build_ensemble(s, stab_n, 0.5, stab_seed))});
            }
            ldgm::EnsembleSpec irr;
            profiles.push_back({irr.label(), ldgm::degree_stats(ldgm::build_ensemble(irr, stab_n, 0.5, stab_seed))});

            std::vector<ldgm::StabilityRow> rows;
            for (const auto& p : profiles) {
                for (const bool use_max : {true, false}) {
                    const double dv = use_max ? static_cast<double>(p.degrees.max_code_degree) : p.degrees.mean_code_degree;
                    const double dc = use_max ? static_cast<double>(p.degrees.max_generator_degree) : p.degrees.mean_generator_degree;
                    for (double b : betas) {
                        ldgm::StabilityRow row{p.name, use_max ? "max" : "mean", b, stab_eps, dv, dc, std::nullopt};
                        try {
                            row.bound = ldgm::row_sum_bound(b, stab_eps, dv, dc);
                        } catch (const std::domain_error&) {
                            if (!(b > 0.0 && b < 1.0)) throw UsageError(fmt::format("beta {} outside (0, 1)", b));
                        }
                        rows.push_back(row);
                    }
                }
            }
            if (stab_out.empty()) {
                ldgm::write_stability_csv(std::cout, rows);
            } else {
                std::ofstream f(stab_out);
                if (!f) throw std::runtime_error("cannot write " + stab_out);
                ldgm::write_stability_csv(f, rows);
            }
            return 0;
        }
    } catch (const ldgm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const UsageError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return 0;
}
