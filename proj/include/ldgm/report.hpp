#pragma once

#include "ldgm/bench.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>

namespace ldgm {

/// One row per record. Wall time is left out so equal seeds give equal bytes.
void write_records_csv(std::ostream& out, std::span<const RunRecord> records);
void write_summary_csv(std::ostream& out, std::span<const SummaryRow> rows);
/// JSON lines, wall time included.
void write_runs_jsonl(std::ostream& out, std::span<const RunRecord> records);
/// Mean distortion against N, one polyline per schedule arm plus a dashed
/// horizontal line at rd_distortion(rate).
void write_distortion_svg(std::ostream& out, std::span<const SummaryRow> rows, double rate);
/// Length | Iteration | Method | Distortion | Start point | End point
void write_summary_markdown(std::ostream& out, std::span<const SummaryRow> rows, std::size_t iterations);

void write_grid_csv(std::ostream& out, const GridResult& grid);

/// Writes records.csv, summary.csv, runs.jsonl, distortion_vs_n.svg and
/// summary.md into `dir` (created if missing). Throws std::runtime_error on I/O failure.
void emit_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg, const SweepResult& result);

}  // namespace ldgm
