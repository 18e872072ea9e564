#pragma once

#include <filesystem>
#include <optional>
#include <vector>

namespace practiq::bench {

enum class AlphaLevel { Ordinal, Nominal };

/// ratings[unit][rater], missing entries empty. Units rated by fewer than two
/// raters are excluded; at least one pairable unit is required.
struct RatingsMatrix {
  std::vector<std::vector<std::optional<double>>> cells;
};

/// Krippendorff's alpha = 1 - observed/expected disagreement, computed via
/// the coincidence matrix. Returns exactly 1.0 when both disagreements are
/// zero (degenerate single-value data).
double krippendorff_alpha(const RatingsMatrix& ratings, AlphaLevel level = AlphaLevel::Ordinal);

/// CSV rows of (unit_id, rater_id, score); a header line is skipped when the
/// score field is not numeric.
RatingsMatrix load_ratings_csv(const std::filesystem::path& path);

}  // namespace practiq::bench
