#ifndef STRICTCLUST_ENGINE_HPP
#define STRICTCLUST_ENGINE_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "strictclust/model.hpp"

namespace strictclust {

/// Minimum number of matched features for a cluster to qualify:
/// ceil(n_features * strictness / 100), never below 1.
std::size_t should_match_features(const Config& config) noexcept;

std::vector<double> centroid(const Cluster& cluster);

/// Places one point. Every existing cluster is scored against its centroid as
/// it stood before this point; then exactly one of:
///   - nothing qualifies            -> a new cluster is founded by the point
///   - one cluster qualifies        -> it receives the point
///   - several, unique max matches  -> the max-matched cluster receives it
///   - several tie on max matches   -> highest qualifying average wins,
///                                     lowest id on an exact tie
/// Requires point.seq == state.points_seen.
AssignmentOutcome assign(ClusterState& state, const DataPoint& point);

struct StreamResult {
    ClusterState state;
    std::vector<AssignmentOutcome> outcomes;
};

/// Folds assign over points in order starting from an empty state.
StreamResult run_stream(const Config& config, std::span<const DataPoint> points);

}  // namespace strictclust

#endif  // STRICTCLUST_ENGINE_HPP
