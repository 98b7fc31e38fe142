#include "doctest.h"

#include "ldgm/bench.hpp"
#include "ldgm/codec.hpp"
#include "ldgm/config.hpp"
#include "ldgm/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace ldgm;

namespace {

ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "test.cfg");
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

const char* kBaseConfig = R"(schema_version = 1
ensemble.kind = semi_regular
ensemble.gen_degree = 3
n_values = 40, 60
rate = 0.5
seeds = 3
encoder.mode = soft_hard
encoder.iterations = 20
[schedule]
label = constant
kind = constant
xi_start = 0.1
[schedule]
preset = n100_exponential
)";

// Distortion is a known function of xi: (xi - 0.07)^2 + 0.2, minimum at 0.07.
EncodeResult stub_encoder(const FactorGraph& g, const BitVector&, const EncoderConfig& cfg) {
    EncodeResult r;
    r.codeword = BitVector(g.n_codebits());
    const double xi = cfg.schedule.xi_start;
    r.distortion = (xi - 0.07) * (xi - 0.07) + 0.2;
    return r;
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse(kBaseConfig);
    CHECK(cfg.ensemble.kind == EnsembleKind::semi_regular);
    CHECK(cfg.ensemble.label() == "K=3");
    CHECK(cfg.n_values == std::vector<std::size_t>{40, 60});
    CHECK(cfg.seeds == 3);
    REQUIRE(cfg.schedules.size() == 2);
    CHECK(cfg.schedules[0].schedule.xi_end == 0.1);
    CHECK(cfg.schedules[1].label == "n100_exponential");
    CHECK(cfg.schedules[1].schedule.xi_start == 0.025);
    const auto enc = cfg.encoder_for(cfg.schedules[1].schedule, 9);
    CHECK(enc.sweep_budget == 20);
    CHECK(enc.seed == 9);

    auto fixed = parse(std::string(kBaseConfig) + "");
    fixed.encoder.inner_iters = 2;
    CHECK(fixed.encoder_for(fixed.schedules[0].schedule, 1).max_rounds == 10);
    CHECK(fixed.encoder_for(fixed.schedules[0].schedule, 1).sweep_budget == 0);
    CHECK_THROWS_AS(parse("schema_version = 1\nn_values = 10\nencoder.inner_iters = 0\nschedule.xi = 0.1\n"), ConfigError);
}

TEST_CASE("config flat schedule keys") {
    const auto cfg = parse("schema_version = 1\nn_values = 100\nschedule.kind = linear\nschedule.xi_start = 0.02\nschedule.xi_end = 0.05\n");
    REQUIRE(cfg.schedules.size() == 1);
    CHECK(cfg.schedules[0].schedule.kind == ScheduleKind::linear);
    CHECK(cfg.schedules[0].label == "linear");
}

TEST_CASE("config errors carry line numbers") {
    auto expect_line = [](const std::string& text, std::size_t line) {
        try {
            parse(text);
            FAIL("expected a ConfigError");
        } catch (const ConfigError& e) {
            CHECK(e.line() == line);
            CHECK(std::string(e.what()).find("test.cfg") == 0);
        }
    };
    expect_line("schema_version = 1\nn_values = 10\nbogus = 3\n", 3);
    expect_line("schema_version = 2\n", 1);
    expect_line("schema_version = 1\n\n# comment\nrate = fast\n", 4);
    expect_line("schema_version = 1\nn_values = 10, 0\n", 2);
    expect_line("schema_version = 1\n[schedule]\nkind = cosine\n", 3);
    expect_line("schema_version = 1\n[other]\n", 2);
    expect_line("schema_version = 1\nseeds = 1\nseeds = 2\n", 3);
    // Whole-file problems have no line.
    expect_line("n_values = 10\n[schedule]\nxi_start = 0.1\n", 0);
    expect_line("schema_version = 1\nn_values = 10\n", 0);  // empty schedule list
    expect_line("schema_version = 1\nn_values = 10\nseeds = 0\nschedule.xi_start = 0.1\n", 0);
    expect_line("schema_version = 1\nn_values = 10\n[schedule]\nkind = linear\nxi_start = 0.2\nxi_end = 0.1\n", 0);
}

TEST_CASE("empty schedule list fails before any run") {
    ExperimentConfig cfg = parse(kBaseConfig);
    cfg.schedules.clear();
    cfg.root_seed = 1;
    int calls = 0;
    auto counting = [&](const FactorGraph& g, const BitVector& s, const EncoderConfig& c) {
        ++calls;
        return stub_encoder(g, s, c);
    };
    CHECK_THROWS_AS(run_sweep(cfg, counting), ConfigError);
    CHECK(calls == 0);
}

TEST_CASE("sweep pairs arms on the same graph and source") {
    auto cfg = parse(kBaseConfig);
    cfg.root_seed = 17;
    const auto res = run_sweep(cfg);
    REQUIRE(res.records.size() == 2 * 2 * 3);
    REQUIRE(res.summary.size() == 4);
    for (std::size_t k = 0; k < res.records.size(); ++k) {
        const auto& r = res.records[k];
        CHECK(r.distortion > 0.0);
        for (const auto& q : res.records) {
            if (q.n == r.n && q.seed_index == r.seed_index) {
                CHECK(q.graph_seed == r.graph_seed);
                CHECK(q.source_seed == r.source_seed);
                CHECK(q.encoder.seed == r.encoder.seed);
            }
        }
    }
    // Records are ordered by (N, arm, seed).
    CHECK(res.records[0].n == 40);
    CHECK(res.records[3].arm == 1);
    CHECK(res.records[6].n == 60);
    // Paired delta of arm 0 against itself is zero.
    CHECK(res.summary[0].paired_delta == 0.0);
    double direct = 0.0;
    for (std::size_t s = 0; s < 3; ++s) direct += res.records[3 + s].distortion - res.records[s].distortion;
    CHECK(res.summary[1].paired_delta == doctest::Approx(direct / 3));
}

TEST_CASE("shared graph mode uses one graph per length") {
    auto cfg = parse(kBaseConfig);
    cfg.root_seed = 5;
    cfg.shared_graph = true;
    const auto res = run_sweep(cfg);
    for (const auto& r : res.records)
        for (const auto& q : res.records)
            if (q.n == r.n) CHECK(q.graph_seed == r.graph_seed);
    CHECK(res.records[0].source_seed != res.records[1].source_seed);
}

TEST_CASE("sweep outputs are identical across runs and worker counts") {
    auto cfg = parse(kBaseConfig);
    cfg.root_seed = 99;
    cfg.seeds = 1;
    auto csv = [&](std::size_t workers) {
        cfg.workers = workers;
        const auto res = run_sweep(cfg);
        std::ostringstream os;
        write_records_csv(os, res.records);
        write_summary_csv(os, res.summary);
        return os.str();
    };
    const auto a = csv(1);
    CHECK(a == csv(1));
    cfg.seeds = 3;
    CHECK(csv(1) == csv(4));
}

TEST_CASE("grid search with a stub encoder") {
    auto cfg = parse(kBaseConfig);
    cfg.root_seed = 1;
    const std::vector<double> grid = {0.03, 0.05, 0.07, 0.09, 0.11};
    const auto res = grid_search_constant(cfg, grid, stub_encoder);
    REQUIRE(res.best.size() == 2);
    for (const auto& b : res.best) {
        CHECK(b.xi == 0.07);
        CHECK(b.mean == doctest::Approx(0.2));
    }
    CHECK(res.table.size() == 10);

    // Symmetric tie around the minimum goes to the smaller xi.
    const std::vector<double> tie = {0.06, 0.08};
    const auto tied = grid_search_constant(cfg, tie, [](const FactorGraph& g, const BitVector&, const EncoderConfig& c) {
        EncodeResult r;
        r.codeword = BitVector(g.n_codebits());
        r.distortion = std::abs(c.schedule.xi_start - 0.07) < 0.0100001 ? 0.25 : 0.5;
        return r;
    });
    CHECK(tied.best[0].xi == 0.06);

    const std::vector<double> single = {0.2};
    CHECK(grid_search_constant(cfg, single, stub_encoder).best[0].xi == 0.2);
    CHECK_THROWS(grid_search_constant(cfg, std::vector<double>{}, stub_encoder));
}

TEST_CASE("summary flags means at or below the Shannon floor") {
    auto cfg = parse(kBaseConfig);
    cfg.root_seed = 1;
    const auto res = run_sweep(cfg, [](const FactorGraph& g, const BitVector&, const EncoderConfig&) {
        EncodeResult r;
        r.codeword = BitVector(g.n_codebits());
        r.distortion = 0.05;
        return r;
    });
    for (const auto& row : res.summary) CHECK(row.below_floor);
}

TEST_CASE("plot has one curve per schedule, one point per length, and the floor") {
    std::vector<SummaryRow> rows;
    for (std::size_t arm = 0; arm < 3; ++arm)
        for (std::size_t n : {200, 500, 1000, 2000}) {
            SummaryRow r;
            r.n = n;
            r.arm = arm;
            r.schedule_label = "arm" + std::to_string(arm);
            r.mean = 0.15 - 0.002 * static_cast<double>(arm) - 1e-6 * static_cast<double>(n);
            rows.push_back(r);
        }
    std::ostringstream os;
    write_distortion_svg(os, rows, 0.5);
    const auto svg = os.str();
    CHECK(count_of(svg, "class=\"curve\"") == 3);
    CHECK(count_of(svg, "class=\"point\"") == 12);
    CHECK(count_of(svg, "class=\"shannon-floor\"") == 1);
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, std::regex("data-distortion=\"([0-9.]+)\"")));
    CHECK(std::stod(m[1]) == doctest::Approx(0.1100).epsilon(1e-3));
    CHECK(std::abs(std::stod(m[1]) - rd_distortion(0.5)) < 1e-6);
}

TEST_CASE("markdown table columns") {
    SummaryRow r;
    r.n = 1000;
    r.schedule = Schedule::exponential(0.022, 0.048);
    r.schedule_label = "exponential";
    r.mean = 0.1476;
    std::ostringstream os;
    write_summary_markdown(os, std::vector<SummaryRow>{r}, 100);
    CHECK(os.str() ==
          "| Length | Iteration | Method | Distortion | Start point | End point |\n"
          "|---:|---:|:---|---:|---:|---:|\n"
          "| 1000 | 100 | Exponential | 0.1476 | 0.022 | 0.048 |\n");
}

TEST_CASE("emit_outputs writes every file") {
    auto cfg = parse(kBaseConfig);
    cfg.root_seed = 3;
    const auto res = run_sweep(cfg);
    const auto dir = std::filesystem::temp_directory_path() / "ldgm_emit_test";
    std::filesystem::remove_all(dir);
    emit_outputs(dir, cfg, res);
    for (const char* f : {"records.csv", "summary.csv", "runs.jsonl", "distortion_vs_n.svg", "summary.md"})
        CHECK(std::filesystem::file_size(dir / f) > 0);
    std::ifstream jl(dir / "runs.jsonl");
    std::string first;
    std::getline(jl, first);
    CHECK(first.find("\"mode\":\"soft_hard\"") != std::string::npos);
    CHECK(first.find("\"K\":3") != std::string::npos);
    CHECK(first.find("\"wall_time\"") != std::string::npos);
    std::filesystem::remove_all(dir);
    CHECK_THROWS(emit_outputs(dir, cfg, SweepResult{}));
}
