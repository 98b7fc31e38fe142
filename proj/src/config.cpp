#include "ldgm/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace ldgm {

ConfigError::ConfigError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(line ? source + ":" + std::to_string(line) + ": " + what : source + ": " + what), line_(line) {}

std::string EnsembleSpec::label() const {
    return kind == EnsembleKind::semi_regular ? "K=" + std::to_string(gen_degree) : preset;
}

DegreeDistribution degree_distribution_preset(std::string_view name) {
    if (name == "optimized_rate_half") return DegreeDistribution::optimized_rate_half();
    throw std::invalid_argument("unknown degree distribution preset '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("config", 0, what); };
    if (schema_version != kConfigSchemaVersion) fail("unsupported schema_version " + std::to_string(schema_version));
    if (n_values.empty()) fail("n_values must list at least one block length");
    if (std::any_of(n_values.begin(), n_values.end(), [](std::size_t n) { return n == 0; })) fail("n_values must be positive");
    if (!(rate > 0.0 && rate <= 1.0)) fail("rate must lie in (0, 1]");
    if (seeds < 1) fail("seeds must be >= 1");
    if (workers < 1) fail("workers must be >= 1");
    if (schedules.empty()) fail("at least one schedule is required");
    if (iterations < 1) fail("encoder.iterations must be >= 1");
    if (ensemble.kind == EnsembleKind::semi_regular && ensemble.gen_degree < 1) fail("ensemble.gen_degree must be >= 1");
    if (ensemble.kind == EnsembleKind::irregular) {
        try {
            degree_distribution_preset(ensemble.preset);
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }
    if (encoder.mode == EncoderMode::soft_hard && encoder.inner_iters != 0 && iterations < encoder.inner_iters)
        fail("encoder.iterations must be at least encoder.inner_iters");
    std::set<std::string> labels;
    for (const auto& arm : schedules) {
        if (!labels.insert(arm.label).second) fail("duplicate schedule label '" + arm.label + "'");
        try {
            arm.schedule.validate();
        } catch (const std::invalid_argument& e) {
            fail("schedule '" + arm.label + "': " + e.what());
        }
    }
    try {
        encoder_for(schedules.front().schedule, 0).validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

EncoderConfig ExperimentConfig::encoder_for(const Schedule& schedule, std::uint64_t seed) const {
    EncoderConfig c = encoder;
    c.schedule = schedule;
    c.seed = seed;
    if (c.mode == EncoderMode::soft) {
        c.total_iters = iterations;
    } else if (c.inner_iters == 0) {
        c.sweep_budget = iterations;
        c.inner_iters = 1;
    } else {
        c.max_rounds = std::max<std::size_t>(1, iterations / c.inner_iters);
    }
    return c;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

class Parser {
public:
    Parser(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& what) const { throw ConfigError(source_, line_, what); }

    double to_double(const std::string& v) const {
        double out = 0.0;
        const auto* end = v.data() + v.size();
        auto [p, ec] = std::from_chars(v.data(), end, out);
        if (ec != std::errc{} || p != end) fail("expected a number, got '" + v + "'");
        return out;
    }

    std::uint64_t to_uint(const std::string& v) const {
        std::uint64_t out = 0;
        const auto* end = v.data() + v.size();
        auto [p, ec] = std::from_chars(v.data(), end, out);
        if (ec != std::errc{} || p != end) fail("expected a non-negative integer, got '" + v + "'");
        return out;
    }

    bool to_bool(const std::string& v) const {
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        fail("expected true or false, got '" + v + "'");
    }

    template <class F>
    auto guarded(F&& f) const {
        try {
            return f();
        } catch (const std::invalid_argument& e) {
            fail(e.what());
        }
    }

    ExperimentConfig parse(std::istream& in) {
        ExperimentConfig cfg;
        cfg.schedules.clear();
        bool saw_version = false;
        std::optional<ScheduleArm> flat_arm;
        ScheduleArm* section = nullptr;
        std::set<std::string> seen_keys;

        std::string raw;
        while (std::getline(in, raw)) {
            ++line_;
            std::string line = trim(raw.substr(0, raw.find('#')));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line != "[schedule]") fail("unknown section " + line);
                cfg.schedules.push_back({"", Schedule{}});
                section = &cfg.schedules.back();
                section_line_ = line_;
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail("expected 'key = value'");
            const std::string key = trim(std::string_view(line).substr(0, eq));
            const std::string value = trim(std::string_view(line).substr(eq + 1));
            if (key.empty() || value.empty()) fail("expected 'key = value'");

            if (section) {
                apply_schedule_key(*section, key, value);
                continue;
            }
            if (!seen_keys.insert(key).second) fail("duplicate key '" + key + "'");
            if (key.rfind("schedule.", 0) == 0) {
                if (!flat_arm) flat_arm = ScheduleArm{"", Schedule{}};
                apply_schedule_key(*flat_arm, key.substr(9), value);
                continue;
            }
            if (key == "schema_version") {
                cfg.schema_version = static_cast<int>(to_uint(value));
                if (cfg.schema_version != kConfigSchemaVersion) fail("unsupported schema_version " + value);
                saw_version = true;
            } else if (key == "ensemble.kind") {
                if (value == "semi_regular") cfg.ensemble.kind = EnsembleKind::semi_regular;
                else if (value == "irregular") cfg.ensemble.kind = EnsembleKind::irregular;
                else fail("ensemble.kind must be semi_regular or irregular");
            } else if (key == "ensemble.gen_degree") {
                cfg.ensemble.gen_degree = to_uint(value);
            } else if (key == "ensemble.preset") {
                guarded([&] { return degree_distribution_preset(value); });
                cfg.ensemble.preset = value;
            } else if (key == "n_values") {
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    const auto n = to_uint(trim(item));
                    if (n == 0) fail("n_values must be positive");
                    cfg.n_values.push_back(n);
                }
            } else if (key == "rate") {
                cfg.rate = to_double(value);
            } else if (key == "seeds") {
                cfg.seeds = to_uint(value);
            } else if (key == "root_seed") {
                cfg.root_seed = to_uint(value);
            } else if (key == "graph_mode") {
                if (value == "fresh") cfg.shared_graph = false;
                else if (value == "shared") cfg.shared_graph = true;
                else fail("graph_mode must be fresh or shared");
            } else if (key == "workers") {
                cfg.workers = to_uint(value);
            } else if (key == "output.dir") {
                cfg.output_dir = value;
            } else if (key == "encoder.mode") {
                cfg.encoder.mode = guarded([&] { return parse_encoder_mode(value); });
            } else if (key == "encoder.iterations") {
                cfg.iterations = to_uint(value);
            } else if (key == "encoder.inner_iters") {
                cfg.encoder.inner_iters = value == "auto" ? 0 : to_uint(value);
                if (value != "auto" && cfg.encoder.inner_iters == 0) fail("encoder.inner_iters must be auto or >= 1");
            } else if (key == "encoder.bits_per_round") {
                cfg.encoder.bits_per_round = value == "auto" ? 0 : to_uint(value);
            } else if (key == "encoder.policy") {
                cfg.encoder.policy = guarded([&] { return parse_decimation_policy(value); });
            } else if (key == "encoder.saturation") {
                cfg.encoder.saturation = to_double(value);
            } else if (key == "encoder.epsilon") {
                cfg.encoder.epsilon = to_double(value);
            } else if (key == "encoder.sweep_order") {
                cfg.encoder.sweep_order = guarded([&] { return parse_sweep_order(value); });
            } else if (key == "encoder.reinit_each_round") {
                cfg.encoder.reinit_each_round = to_bool(value);
            } else {
                fail("unknown key '" + key + "'");
            }
        }

        if (!saw_version) throw ConfigError(source_, 0, "missing schema_version");
        if (flat_arm) {
            if (!cfg.schedules.empty()) throw ConfigError(source_, 0, "use either schedule.* keys or [schedule] sections, not both");
            cfg.schedules.push_back(*flat_arm);
        }
        for (auto& arm : cfg.schedules) {
            if (arm.label.empty()) arm.label = std::string(to_string(arm.schedule.kind));
            if (arm.schedule.kind == ScheduleKind::constant && arm.schedule.xi_end != arm.schedule.xi_start)
                arm.schedule.xi_end = arm.schedule.xi_start;
        }
        try {
            cfg.validate();
        } catch (const ConfigError& e) {
            throw ConfigError(source_, 0, std::string(e.what()).substr(std::string("config: ").size()));
        }
        return cfg;
    }

private:
    void apply_schedule_key(ScheduleArm& arm, const std::string& key, const std::string& value) {
        if (key == "label") arm.label = value;
        else if (key == "kind") arm.schedule.kind = guarded([&] { return parse_schedule_kind(value); });
        else if (key == "xi_start") arm.schedule.xi_start = to_double(value);
        else if (key == "xi_end") arm.schedule.xi_end = to_double(value);
        else if (key == "xi") arm.schedule.xi_start = arm.schedule.xi_end = to_double(value);
        else if (key == "preset") {
            arm.schedule = guarded([&] { return schedule_preset(value); });
            if (arm.label.empty()) arm.label = value;
        } else fail("unknown schedule key '" + key + "'");
    }

    std::string source_;
    std::size_t line_ = 0;
    std::size_t section_line_ = 0;
};

}  // namespace

ExperimentConfig parse_config(std::istream& in, std::string_view source_name) {
    return Parser(std::string(source_name)).parse(in);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
    return parse_config(in, path.string());
}

}  // namespace ldgm
