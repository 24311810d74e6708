#pragma once

// File formats.
//
// Model:    {"name": str, "c": number,
//            "states": [{"id": str, "value": number}, ...],
//            "transition": [[number, ...], ...]}
// Strategy: {"eta": {"id": number, ...}} or {"p": {"id": number, ...}}
// Blend:    {"weights": [number, ...], "regions": [["id", ...], ...]}
//
// JSON text produced here is compact, keys sorted, numbers in shortest
// round-trip form.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tcstop/blend.hpp"
#include "tcstop/equilibrium.hpp"
#include "tcstop/liquidation.hpp"
#include "tcstop/markov.hpp"
#include "tcstop/randomized.hpp"

namespace tcstop {

/// Parses and validates. Throws ParseError on malformed JSON or schema,
/// ValidationError (naming row and entry) on a rejected chain.
MarkovModel parse_model(std::string_view text, std::string_view origin = "<string>");
MarkovModel load_model(const std::filesystem::path& path);
std::string model_to_json(const MarkovModel& model);

enum class StrategyKind { Liquidation, Randomized };

struct LoadedStrategy {
  StrategyKind kind = StrategyKind::Liquidation;
  std::vector<double> fractions;      ///< normalized: absorbing states at 1
  std::vector<std::string> warnings;  ///< transient states left at 0

  LiquidationStrategy liquidation() const { return {fractions}; }
  RandomizedStrategy randomized() const { return {fractions}; }
};

LoadedStrategy parse_strategy(std::string_view text, const MarkovModel& model);
LoadedStrategy load_strategy(const std::filesystem::path& path, const MarkovModel& model);
std::string strategy_to_json(const MarkovModel& model, StrategyKind kind,
                             const std::vector<double>& fractions);

ScriptedBlend parse_blend(std::string_view text, const MarkovModel& model);
ScriptedBlend load_blend(const std::filesystem::path& path, const MarkovModel& model);

/// FNV-1a 64 over model_to_json.
std::uint64_t model_digest(const MarkovModel& model);
std::string digest_hex(std::uint64_t digest);

std::string equilibrium_report_json(const MarkovModel& model, const EquilibriumReport& report);

struct RunReport {
  std::string tool_version;
  std::string command;
  std::vector<std::string> arguments;
  std::string model_digest;
  double elapsed_ms = 0.0;
  std::string results = "null";  ///< JSON text
};

std::string serialize_run_report(const RunReport& report);
/// Throws ParseError.
RunReport parse_run_report(std::string_view text);

/// Writes the grid to `path` and the traced contours to
/// `<stem>.contours.csv` beside it. Returns the contour file path.
std::filesystem::path emit_surface_csv(const MarkovModel& model, const SurfaceGrid& grid,
                                       const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace tcstop
