#include "strictclust/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "strictclust/similarity.hpp"

namespace strictclust {

std::size_t should_match_features(const Config& config) noexcept {
    const double raw =
        static_cast<double>(config.n_features) * config.strictness / 100.0;
    const auto need = static_cast<std::size_t>(std::ceil(raw));
    return std::clamp<std::size_t>(need, 1, config.n_features);
}

std::vector<double> centroid(const Cluster& cluster) { return cluster.centroid(); }

namespace {

void check_point(const ClusterState& state, const DataPoint& point) {
    if (point.features.size() != state.config.n_features) {
        throw Error(ErrorCode::DimensionMismatch,
                    "point " + std::to_string(point.seq) + " has " +
                        std::to_string(point.features.size()) + " features, expected " +
                        std::to_string(state.config.n_features));
    }
    for (std::size_t j = 0; j < point.features.size(); ++j) {
        const double v = point.features[j];
        if (!std::isfinite(v) || v < 0.0) {
            throw Error(std::isfinite(v) ? ErrorCode::NegativeFeature
                                         : ErrorCode::NonFiniteFeature,
                        "point " + std::to_string(point.seq) + " feature " +
                            std::to_string(j + 1) + " is not a finite nonnegative value");
        }
    }
    if (point.seq != state.points_seen) {
        throw Error(ErrorCode::InvariantViolation,
                    "point seq " + std::to_string(point.seq) +
                        " out of order, expected " + std::to_string(state.points_seen));
    }
}

}  // namespace

AssignmentOutcome assign(ClusterState& state, const DataPoint& point) {
    check_point(state, point);
    const std::size_t need = should_match_features(state.config);

    AssignmentOutcome outcome;
    outcome.point_seq = point.seq;
    outcome.profiles.reserve(state.clusters.size());

    // Indices into state.clusters, ascending id.
    std::vector<std::size_t> qualified;
    for (std::size_t i = 0; i < state.clusters.size(); ++i) {
        outcome.profiles.push_back(match_profile(point, state.clusters[i], state.config));
        if (outcome.profiles.back().matched_count >= need) qualified.push_back(i);
    }

    if (qualified.empty()) {
        state.clusters.push_back(Cluster::founded_by(state.clusters.size() + 1, point));
        ++state.points_seen;
        outcome.assigned_cluster_id = state.clusters.back().id();
        outcome.created_new = true;
        outcome.decision_path = DecisionPath::EmptyListNewCluster;
        return outcome;
    }

    std::size_t winner = qualified.front();
    if (qualified.size() == 1) {
        outcome.decision_path = DecisionPath::SingleQualified;
    } else {
        std::size_t max_matched = 0;
        for (std::size_t i : qualified) {
            max_matched = std::max(max_matched, outcome.profiles[i].matched_count);
        }
        std::vector<std::size_t> tied;
        for (std::size_t i : qualified) {
            if (outcome.profiles[i].matched_count == max_matched) tied.push_back(i);
        }
        winner = tied.front();
        if (tied.size() == 1) {
            outcome.decision_path = DecisionPath::MaxMatched;
        } else {
            // matched_count >= need >= 1, so every tied average is defined.
            // Strict > keeps the lowest id on an exact tie.
            for (std::size_t i : tied) {
                if (*outcome.profiles[i].qualifying_avg >
                    *outcome.profiles[winner].qualifying_avg) {
                    winner = i;
                }
            }
            outcome.decision_path = DecisionPath::AvgTiebreak;
        }
    }

    state.clusters[winner].add(point);
    ++state.points_seen;
    outcome.assigned_cluster_id = state.clusters[winner].id();
    outcome.created_new = false;
    return outcome;
}

StreamResult run_stream(const Config& config, std::span<const DataPoint> points) {
    StreamResult result{ClusterState(config), {}};
    result.outcomes.reserve(points.size());
    for (const DataPoint& p : points) {
        result.outcomes.push_back(assign(result.state, p));
    }
    return result;
}

}  // namespace strictclust
