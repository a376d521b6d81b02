#ifndef STRICTCLUST_SIMILARITY_HPP
#define STRICTCLUST_SIMILARITY_HPP

#include <optional>
#include <vector>

#include "strictclust/model.hpp"

namespace strictclust {

/// Ratio similarity of a point's feature to the matching centroid feature,
/// in percent: 100 * value / centroid. A zero centroid gives 100 when the
/// value is also zero and no similarity (nullopt) otherwise.
inline std::optional<double> feature_similarity(double value, double centroid) noexcept {
    if (centroid == 0.0) {
        if (value == 0.0) return 100.0;
        return std::nullopt;
    }
    return 100.0 * value / centroid;
}

/// Inclusive band [lo, hi] a similarity must fall in to count as matched.
struct QualifyingRange {
    double lo;
    double hi;
};

inline QualifyingRange qualifying_range(double strictness) noexcept {
    return {strictness, 100.0 + (100.0 - strictness)};
}

/// Exact inclusive comparison against qualifying_range; undefined similarities
/// never qualify.
inline bool qualifies(std::optional<double> similarity, double strictness) noexcept {
    if (!similarity) return false;
    const auto [lo, hi] = qualifying_range(strictness);
    return *similarity >= lo && *similarity <= hi;
}

/// Folds values above 100 back below it (200 - v) so overshoot and undershoot
/// of the same size compare equal.
inline double scale_above_100(double similarity) noexcept {
    if (similarity <= 100.0) return similarity;
    return 100.0 - (similarity - 100.0);
}

/// Per-feature similarities of point against the cluster's current centroid.
std::vector<std::optional<double>> similarity_row(const DataPoint& point,
                                                  const Cluster& cluster);

MatchProfile match_profile(const DataPoint& point, const Cluster& cluster,
                           const Config& config);

}  // namespace strictclust

#endif  // STRICTCLUST_SIMILARITY_HPP
