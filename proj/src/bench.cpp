#include "ldgm/bench.hpp"

#include "ldgm/codec.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace ldgm {

std::uint64_t graph_seed(std::uint64_t root, std::size_t n, std::size_t seed_index, bool shared) {
    return shared ? derive_seed(root, {kStreamGraph, n}) : derive_seed(root, {kStreamGraph, n, seed_index});
}

std::uint64_t source_seed(std::uint64_t root, std::size_t n, std::size_t seed_index) {
    return derive_seed(root, {kStreamSource, n, seed_index});
}

std::uint64_t encoder_seed(std::uint64_t root, std::size_t n, std::size_t seed_index) {
    return derive_seed(root, {kStreamEncoder, n, seed_index});
}

FactorGraph build_ensemble(const EnsembleSpec& ensemble, std::size_t n, double rate, std::uint64_t seed) {
    if (ensemble.kind == EnsembleKind::semi_regular) return build_semi_regular(n, rate, ensemble.gen_degree, seed);
    return build_irregular(n, rate, degree_distribution_preset(ensemble.preset), seed);
}

namespace {

struct Job {
    std::size_t n_index;
    std::size_t seed_index;
};

std::vector<RunRecord> run_job(const ExperimentConfig& cfg, std::uint64_t root, std::size_t n, std::size_t seed_index,
                               const EncodeFn& encode_fn) {
    const auto g_seed = graph_seed(root, n, seed_index, cfg.shared_graph);
    const auto s_seed = source_seed(root, n, seed_index);
    const auto e_seed = encoder_seed(root, n, seed_index);
    const FactorGraph graph = build_ensemble(cfg.ensemble, n, cfg.rate, g_seed);
    Rng source_rng(s_seed);
    const BitVector source = random_source(n, source_rng);

    std::vector<RunRecord> out;
    out.reserve(cfg.schedules.size());
    for (std::size_t arm = 0; arm < cfg.schedules.size(); ++arm) {
        RunRecord rec;
        rec.ensemble = cfg.ensemble.label();
        rec.n = n;
        rec.m = graph.n_codebits();
        rec.edges = graph.n_edges();
        rec.rate = cfg.rate;
        rec.arm = arm;
        rec.schedule_label = cfg.schedules[arm].label;
        rec.seed_index = seed_index;
        rec.graph_seed = g_seed;
        rec.source_seed = s_seed;
        rec.shared_graph = cfg.shared_graph;
        rec.encoder = cfg.encoder_for(cfg.schedules[arm].schedule, e_seed);

        const auto t0 = std::chrono::steady_clock::now();
        const EncodeResult res = encode_fn(graph, source, rec.encoder);
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        if (!(res.distortion >= 0.0 && res.distortion <= 1.0))
            throw std::runtime_error(fmt::format("encoder returned distortion {} outside [0, 1]", res.distortion));
        rec.distortion = res.distortion;
        rec.rounds_used = res.rounds_used;
        rec.sweeps = res.sweeps;
        rec.hardened_tail = res.hardened_tail;
        rec.non_converged = res.non_converged;
        rec.edge_updates = res.edge_updates;
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& cfg, const EncodeFn& encode_fn) {
    cfg.validate();
    if (!cfg.root_seed) throw std::invalid_argument("run_sweep: a root seed is required");
    const std::uint64_t root = *cfg.root_seed;

    std::vector<Job> jobs;
    for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni)
        for (std::size_t s = 0; s < cfg.seeds; ++s) jobs.push_back({ni, s});

    std::vector<std::vector<RunRecord>> results(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= jobs.size()) return;
            {
                std::lock_guard lock(error_mutex);
                if (error) return;
            }
            try {
                results[j] = run_job(cfg, root, cfg.n_values[jobs[j].n_index], jobs[j].seed_index, encode_fn);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };

    const std::size_t threads = std::min(cfg.workers, jobs.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);

    // Merge in (N, arm, seed) order whatever the completion order was.
    SweepResult out;
    out.records.reserve(jobs.size() * cfg.schedules.size());
    for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni)
        for (std::size_t arm = 0; arm < cfg.schedules.size(); ++arm)
            for (std::size_t s = 0; s < cfg.seeds; ++s) out.records.push_back(results[ni * cfg.seeds + s][arm]);
    out.summary = summarize(cfg, out.records);
    return out;
}

std::vector<SummaryRow> summarize(const ExperimentConfig& cfg, std::span<const RunRecord> records) {
    const double floor = rd_distortion(cfg.rate);
    std::vector<SummaryRow> rows;
    for (std::size_t n : cfg.n_values) {
        // Baseline distortions of arm 0 keyed by seed index for paired deltas.
        std::vector<std::pair<std::size_t, double>> baseline;
        for (const auto& r : records)
            if (r.n == n && r.arm == 0) baseline.emplace_back(r.seed_index, r.distortion);

        for (std::size_t arm = 0; arm < cfg.schedules.size(); ++arm) {
            SummaryRow row;
            row.ensemble = cfg.ensemble.label();
            row.n = n;
            row.arm = arm;
            row.schedule_label = cfg.schedules[arm].label;
            row.schedule = cfg.schedules[arm].schedule;
            std::vector<double> values, deltas;
            std::size_t non_converged = 0;
            for (const auto& r : records) {
                if (r.n != n || r.arm != arm) continue;
                values.push_back(r.distortion);
                non_converged += r.non_converged ? 1 : 0;
                for (const auto& [seed, d0] : baseline)
                    if (seed == r.seed_index) deltas.push_back(r.distortion - d0);
            }
            if (values.empty()) continue;
            auto mean_sd = [](const std::vector<double>& v) {
                double mean = 0.0;
                for (double x : v) mean += x;
                mean /= static_cast<double>(v.size());
                double ss = 0.0;
                for (double x : v) ss += (x - mean) * (x - mean);
                const double sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
                return std::pair{mean, sd};
            };
            row.runs = values.size();
            std::tie(row.mean, row.stddev) = mean_sd(values);
            row.min = *std::min_element(values.begin(), values.end());
            row.max = *std::max_element(values.begin(), values.end());
            row.non_convergence_rate = static_cast<double>(non_converged) / static_cast<double>(values.size());
            if (!deltas.empty()) {
                const auto [dm, dsd] = mean_sd(deltas);
                row.paired_delta = dm;
                row.paired_delta_se = dsd / std::sqrt(static_cast<double>(deltas.size()));
            }
            row.below_floor = !(row.mean > floor);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

GridResult grid_search_constant(const ExperimentConfig& cfg, std::span<const double> xi_grid, const EncodeFn& encode_fn) {
    if (xi_grid.empty()) throw std::invalid_argument("grid_search_constant: grid must be nonempty");
    ExperimentConfig grid_cfg = cfg;
    grid_cfg.schedules.clear();
    for (double xi : xi_grid) grid_cfg.schedules.push_back({fmt::format("constant {:.6g}", xi), Schedule::constant(xi)});

    const auto sweep = run_sweep(grid_cfg, encode_fn);
    GridResult out;
    for (const auto& row : sweep.summary)
        out.table.push_back({row.n, xi_grid[row.arm], row.mean, row.stddev, row.runs});
    for (std::size_t n : cfg.n_values) {
        std::optional<GridBest> best;
        for (const auto& row : out.table) {
            if (row.n != n) continue;
            if (!best || row.mean < best->mean || (row.mean == best->mean && row.xi < best->xi)) best = GridBest{n, row.xi, row.mean};
        }
        out.best.push_back(*best);
    }
    return out;
}

}  // namespace ldgm
