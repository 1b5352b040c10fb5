#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "alpha_patch/convergence.hpp"
#include "alpha_patch/dynamics.hpp"
#include "alpha_patch/lemma_lab.hpp"
#include "alpha_patch/stability.hpp"

namespace alpha_patch::io {

/// Shortest decimal that reads back to the same double ("nan"/"inf"/"-inf" for
/// non-finite values).
std::string format_double(double value);

struct Snapshot {
  FlowState state;
  double alpha = 0.0;
};

/// {"n","alpha","time","nodes","g","tangent","scheme"}; numbers in shortest
/// round-trip form, so reading the text back reproduces every double exactly.
std::string snapshot_json(const FlowState& state, double alpha);

/// Parses a snapshot. "g" and "tangent" are optional; when absent they are taken
/// from the curve geometry, so a bare {"nodes": ...} file is a valid curve input.
/// Throws std::invalid_argument naming the offending field, or when the nodes
/// do not form a simple closed curve.
Snapshot parse_snapshot(std::string_view text);

void write_snapshot(const std::filesystem::path& path, const FlowState& state, double alpha);
Snapshot read_snapshot(const std::filesystem::path& path);

/// "snapshot_000042.json"
std::string snapshot_filename(std::size_t index);

void write_diagnostics_csv(std::ostream& out, std::span<const Diagnostics> rows);
void write_stability_csv(std::ostream& out, const StabilityReport& report);
/// {"C","residual","holds_pointwise"} plus "fitted", "truncated", "in_hypothesis" and "note".
std::string fit_summary_json(const StabilityReport& report);
void write_estimates_csv(std::ostream& out, std::span<const EstimateReport> rows);
void write_convergence_csv(std::ostream& out, const ConvergenceStudy& study);

/// Writes `content` to `path`, throwing std::runtime_error on failure.
void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace alpha_patch::io
