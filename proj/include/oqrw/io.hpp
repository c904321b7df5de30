#pragma once
// File formats. Walks, states, observables and projections are JSON documents;
// every matrix is a list of rows, each row a list of [re, im] pairs. Doubles are
// written in shortest round-trip form, so load(save(x)) is bit-exact.
//
//   walk:        {"h_dim", "sites": [label...], "transitions": [{"from", "to", "matrix"}],
//                 "validation": "strict" | "relaxed" (optional)}
//   block files: {"h_dim", "blocks": [{"site", "matrix"}]}  or  {"h_dim", "dense": matrix}
//
// In the dense form the full matrix on 𝓗⊗𝒦 is indexed site-major (row i·h_dim + a)
// and must be block-diagonal to 1e-12.

#include "oqrw/blocks.hpp"
#include "oqrw/walk_model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oqrw::io {

inline constexpr double kOffDiagonalTol = 1e-12;

struct WalkOptions {
  double kraus_tol = kDefaultKrausTol;
  /// Overrides the file's "validation" key.
  std::optional<ValidationMode> mode;
};

TransitionFamily parse_walk(std::string_view text, const WalkOptions& opts = {});
std::string dump_walk(const TransitionFamily& family);

/// Site labels in block files are resolved against `labels` (the walk's site list).
BlockState parse_state(std::string_view text, const std::vector<std::string>& labels,
                       double trace_tol = BlockState::kDefaultTraceTol);
BlockObservable parse_observable(std::string_view text, const std::vector<std::string>& labels);
BlockProjection parse_projection(std::string_view text, const std::vector<std::string>& labels);

std::string dump_blocks(std::size_t h_dim, const Blocks& blocks, const std::vector<std::string>& labels);
std::string dump_state(const BlockState& state, const std::vector<std::string>& labels);
std::string dump_observable(const BlockObservable& obs, const std::vector<std::string>& labels);
std::string dump_projection(const BlockProjection& proj, const std::vector<std::string>& labels);

/// Throws ParseError when the file cannot be read.
std::string read_file(const std::string& path);
/// Writes through a temporary file and a rename, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

/// 17 significant digits.
std::string format_number(double value);

/// "site,probability" rows, zero-probability sites included.
std::string distribution_csv(const std::vector<double>& distribution, const std::vector<std::string>& labels);
/// "step,<label>,..." with one row per step.
std::string evolution_csv(const std::vector<std::vector<double>>& rows, const std::vector<std::string>& labels);
/// "n,value" per horizon.
std::string series_csv(const std::vector<double>& series);

}  // namespace oqrw::io
