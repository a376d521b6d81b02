#include "strictclust/similarity.hpp"

#include <algorithm>

namespace strictclust {

namespace {

// A feature can only qualify when 100 * value lies within [lo, hi] * centroid,
// up to rounding. Products with a 1e-9 relative margin dwarf the few ulps of
// error in either form, so anything outside the widened band also fails the
// exact comparison on 100 * value / centroid. Zero, tiny or huge centroids are
// always kept for the exact path.
bool maybe_inside(double value, double centroid, double lo, double hi) noexcept {
    constexpr double kMargin = 1e-9;
    const double scaled = 100.0 * value;
    const double lo_edge = lo * centroid;
    const double hi_edge = hi * centroid;
    const bool plain = (lo_edge >= 1e-290) & (hi_edge <= 1e290);
    const bool inside =
        (scaled >= lo_edge * (1.0 - kMargin)) & (scaled <= hi_edge * (1.0 + kMargin));
    return !plain | inside;
}

}  // namespace

std::vector<std::optional<double>> similarity_row(const DataPoint& point,
                                                  const Cluster& cluster) {
    std::vector<std::optional<double>> row;
    row.reserve(point.features.size());
    for (std::size_t j = 0; j < point.features.size(); ++j) {
        row.push_back(feature_similarity(point.features[j], cluster.centroid_at(j)));
    }
    return row;
}

MatchProfile match_profile(const DataPoint& point, const Cluster& cluster,
                           const Config& config) {
    MatchProfile profile;
    profile.cluster_id = cluster.id();
    const auto [lo, hi] = qualifying_range(config.strictness);
    const double* values = point.features.data();
    const double* centre = cluster.centroid().data();
    double scaled_sum = 0.0;
    const std::size_t n = config.n_features;
    std::size_t candidates[64];
    for (std::size_t base = 0; base < n; base += 64) {
        const std::size_t end = std::min(n, base + 64);
        std::size_t count = 0;
        for (std::size_t j = base; j < end; ++j) {
            candidates[count] = j;
            count += maybe_inside(values[j], centre[j], lo, hi);
        }
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t j = candidates[k];
            const auto sim = feature_similarity(values[j], centre[j]);
            if (sim && *sim >= lo && *sim <= hi) {
                ++profile.matched_count;
                scaled_sum += scale_above_100(*sim);
            }
        }
    }
    if (profile.matched_count > 0) {
        profile.qualifying_avg = scaled_sum / static_cast<double>(profile.matched_count);
    }
    return profile;
}

}  // namespace strictclust
