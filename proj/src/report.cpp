#include "ldgm/report.hpp"

#include "ldgm/codec.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include "json.hpp"

namespace ldgm {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

void write_records_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << "ensemble,n,m,edges,rate,arm,schedule_label,schedule_kind,xi_start,xi_end,seed_index,graph_seed,source_seed,"
           "encoder_seed,shared_graph,mode,sweep_budget,inner_iters,total_iters,max_rounds,bits_per_round,policy,saturation,epsilon,"
           "sweep_order,reinit_each_round,distortion,rounds_used,sweeps,hardened_tail,non_converged,edge_updates\n";
    for (const auto& r : records) {
        const auto& e = r.encoder;
        out << fmt::format("{},{},{},{},{:.6g},{},{},{},{:.6g},{:.6g},{},{},{},{},{},{},{},{},{},{},{},{},{:.6g},{:.3g},{},{},{:.10g},{},{},{},{},{}\n",
                           csv_field(r.ensemble), r.n, r.m, r.edges, r.rate, r.arm, csv_field(r.schedule_label),
                           to_string(e.schedule.kind), e.schedule.xi_start, e.schedule.xi_end, r.seed_index, r.graph_seed,
                           r.source_seed, e.seed, r.shared_graph, to_string(e.mode), e.sweep_budget, e.inner_iters, e.total_iters, e.max_rounds,
                           e.bits_per_round, to_string(e.policy), e.saturation, e.epsilon, to_string(e.sweep_order),
                           e.reinit_each_round, r.distortion, r.rounds_used, r.sweeps, r.hardened_tail, r.non_converged,
                           r.edge_updates);
    }
}

void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows) {
    out << "ensemble,n,arm,schedule_label,schedule_kind,xi_start,xi_end,runs,mean,stddev,min,max,non_convergence_rate,"
           "paired_delta,paired_delta_se,below_floor\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{},{},{},{:.6g},{:.6g},{},{:.8f},{:.8f},{:.8f},{:.8f},{:.6f},{:.8f},{:.8f},{}\n",
                           csv_field(r.ensemble), r.n, r.arm, csv_field(r.schedule_label), to_string(r.schedule.kind),
                           r.schedule.xi_start, r.schedule.xi_end, r.runs, r.mean, r.stddev, r.min, r.max,
                           r.non_convergence_rate, r.paired_delta, r.paired_delta_se, r.below_floor);
    }
}

void write_runs_jsonl(std::ostream& out, std::span<const RunRecord> records) {
    for (const auto& r : records) {
        nlohmann::ordered_json j;
        j["mode"] = to_string(r.encoder.mode);
        j["N"] = r.n;
        j["M"] = r.m;
        if (r.ensemble.rfind("K=", 0) == 0) j["K"] = std::stoul(r.ensemble.substr(2));
        else j["K"] = "irregular";
        j["schedule"] = {{"label", r.schedule_label},
                         {"kind", to_string(r.encoder.schedule.kind)},
                         {"xi_start", r.encoder.schedule.xi_start},
                         {"xi_end", r.encoder.schedule.xi_end}};
        j["seed"] = r.encoder.seed;
        j["seed_index"] = r.seed_index;
        j["distortion"] = r.distortion;
        j["rounds_used"] = r.rounds_used;
        j["hardened_tail"] = r.hardened_tail;
        j["non_converged"] = r.non_converged;
        j["wall_time"] = r.wall_time;
        out << j.dump() << '\n';
    }
}

void write_distortion_svg(std::ostream& out, std::span<const SummaryRow> rows, double rate) {
    const double floor = rd_distortion(rate);
    const double width = 640, height = 420, left = 70, right = 170, top = 40, bottom = 60;
    const double plot_w = width - left - right, plot_h = height - top - bottom;

    std::vector<std::size_t> ns;
    double y_lo = floor, y_hi = floor;
    for (const auto& r : rows) {
        ns.push_back(r.n);
        y_lo = std::min(y_lo, r.mean);
        y_hi = std::max(y_hi, r.mean);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    const double pad = std::max(0.005, 0.08 * (y_hi - y_lo));
    y_lo -= pad;
    y_hi += pad;

    const double lx_lo = ns.empty() ? 0.0 : std::log10(static_cast<double>(ns.front()));
    const double lx_hi = ns.empty() ? 1.0 : std::log10(static_cast<double>(ns.back()));
    auto px = [&](std::size_t n) {
        if (lx_hi == lx_lo) return left + 0.5 * plot_w;
        return left + (std::log10(static_cast<double>(n)) - lx_lo) / (lx_hi - lx_lo) * plot_w;
    };
    auto py = [&](double d) { return top + (y_hi - d) / (y_hi - y_lo) * plot_h; };

    out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}" font-family="sans-serif" font-size="12">)",
                       width, height, width, height)
        << '\n';
    out << fmt::format(R"(<rect x="0" y="0" width="{}" height="{}" fill="white"/>)", width, height) << '\n';
    out << fmt::format(R"(<text x="{}" y="22" text-anchor="middle" font-size="14">Distortion versus code length (R = {:.3g})</text>)",
                       left + plot_w / 2, rate)
        << '\n';
    out << fmt::format(R"(<rect class="frame" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", left, top, plot_w,
                       plot_h)
        << '\n';
    for (std::size_t n : ns) {
        out << fmt::format(R"(<text class="xtick" x="{:.2f}" y="{}" text-anchor="middle">{}</text>)", px(n), top + plot_h + 18, n)
            << '\n';
    }
    for (int k = 0; k <= 5; ++k) {
        const double d = y_lo + (y_hi - y_lo) * k / 5.0;
        out << fmt::format(R"(<text class="ytick" x="{}" y="{:.2f}" text-anchor="end">{:.4f}</text>)", left - 6, py(d) + 4, d) << '\n';
    }
    out << fmt::format(R"(<text x="{}" y="{}" text-anchor="middle">code length N</text>)", left + plot_w / 2, height - 18) << '\n';
    out << fmt::format(R"svg(<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">mean distortion</text>)svg",
                       top + plot_h / 2, top + plot_h / 2)
        << '\n';

    out << fmt::format(R"(<line class="shannon-floor" data-distortion="{:.6f}" x1="{}" y1="{:.2f}" x2="{}" y2="{:.2f}" stroke="gray" stroke-dasharray="6 4"/>)",
                       floor, left, py(floor), left + plot_w, py(floor))
        << '\n';

    // Curves keyed by arm in first-seen order.
    std::map<std::size_t, std::vector<const SummaryRow*>> curves;
    for (const auto& r : rows) curves[r.arm].push_back(&r);
    std::size_t idx = 0;
    for (auto& [arm, pts] : curves) {
        std::sort(pts.begin(), pts.end(), [](const SummaryRow* a, const SummaryRow* b) { return a->n < b->n; });
        const char* color = kPalette[idx % std::size(kPalette)];
        std::string coords;
        for (const auto* p : pts) coords += fmt::format("{}{:.2f},{:.2f}", coords.empty() ? "" : " ", px(p->n), py(p->mean));
        const auto label = xml_escape(pts.front()->schedule_label);
        out << fmt::format(R"(<polyline class="curve" data-label="{}" points="{}" fill="none" stroke="{}" stroke-width="2"/>)", label,
                           coords, color)
            << '\n';
        for (const auto* p : pts) {
            out << fmt::format(R"(<circle class="point" data-label="{}" data-n="{}" data-mean="{:.6f}" cx="{:.2f}" cy="{:.2f}" r="3.5" fill="{}"/>)",
                               label, p->n, p->mean, px(p->n), py(p->mean), color)
                << '\n';
        }
        const double ly = top + 16 + 20.0 * static_cast<double>(idx);
        out << fmt::format(R"(<line x1="{}" y1="{:.2f}" x2="{}" y2="{:.2f}" stroke="{}" stroke-width="2"/>)", left + plot_w + 12, ly,
                           left + plot_w + 36, ly, color)
            << '\n';
        out << fmt::format(R"(<text x="{}" y="{:.2f}">{}</text>)", left + plot_w + 42, ly + 4, label) << '\n';
        ++idx;
    }
    const double ly = top + 16 + 20.0 * static_cast<double>(idx);
    out << fmt::format(R"(<line x1="{}" y1="{:.2f}" x2="{}" y2="{:.2f}" stroke="gray" stroke-dasharray="6 4"/>)", left + plot_w + 12, ly,
                       left + plot_w + 36, ly)
        << '\n';
    out << fmt::format(R"(<text x="{}" y="{:.2f}">Shannon limit {:.4f}</text>)", left + plot_w + 42, ly + 4, floor) << '\n';
    out << "</svg>\n";
}

void write_summary_markdown(std::ostream& out, std::span<const SummaryRow> rows, std::size_t iterations) {
    out << "| Length | Iteration | Method | Distortion | Start point | End point |\n";
    out << "|---:|---:|:---|---:|---:|---:|\n";
    for (const auto& r : rows) {
        std::string method(to_string(r.schedule.kind));
        method[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(method[0])));
        if (r.schedule_label != to_string(r.schedule.kind)) method += " (" + r.schedule_label + ")";
        out << fmt::format("| {} | {} | {} | {:.4f} | {:.3f} | {:.3f} |\n", r.n, iterations, method, r.mean, r.schedule.xi_start,
                           r.schedule.xi_end);
    }
}

void write_grid_csv(std::ostream& out, const GridResult& grid) {
    out << "n,xi,runs,mean,stddev,best\n";
    for (const auto& row : grid.table) {
        const bool best = std::any_of(grid.best.begin(), grid.best.end(),
                                      [&](const GridBest& b) { return b.n == row.n && b.xi == row.xi; });
        out << fmt::format("{},{:.6g},{},{:.8f},{:.8f},{}\n", row.n, row.xi, row.runs, row.mean, row.stddev, best);
    }
}

void emit_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg, const SweepResult& result) {
    if (result.records.empty()) throw std::invalid_argument("emit_outputs: no records");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

    auto write = [&](const char* name, auto&& body) {
        const auto path = dir / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
        body(f);
        f.flush();
        if (!f) throw std::runtime_error("write to " + path.string() + " failed");
    };
    write("records.csv", [&](std::ostream& f) { write_records_csv(f, result.records); });
    write("summary.csv", [&](std::ostream& f) { write_summary_csv(f, result.summary); });
    write("runs.jsonl", [&](std::ostream& f) { write_runs_jsonl(f, result.records); });
    write("distortion_vs_n.svg", [&](std::ostream& f) { write_distortion_svg(f, result.summary, cfg.rate); });
    write("summary.md", [&](std::ostream& f) { write_summary_markdown(f, result.summary, cfg.iterations); });
}

}  // namespace ldgm
