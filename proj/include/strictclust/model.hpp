#ifndef STRICTCLUST_MODEL_HPP
#define STRICTCLUST_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "strictclust/error.hpp"

namespace strictclust {

/// Run-wide parameters. strictness is the minimum per-feature similarity, in
/// percent, for a feature to count as matched. Build through validate_config.
struct Config {
    double strictness = 0.0;
    std::size_t n_features = 0;

    friend bool operator==(const Config&, const Config&) = default;
};

Config validate_config(double strictness, std::size_t n_features);

/// One incoming observation. seq is the 0-based arrival index.
struct DataPoint {
    std::uint64_t seq = 0;
    std::vector<double> features;
    std::optional<std::string> label;

    friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

/// Checks length, finiteness and nonnegativity of the features.
DataPoint validate_point(std::vector<double> features, std::size_t n_features,
                         std::uint64_t seq = 0);
inline DataPoint validate_point(std::vector<double> features, const Config& config,
                                std::uint64_t seq = 0) {
    return validate_point(std::move(features), config.n_features, seq);
}

/// A cluster keeps, per feature, the total of its members' values as an
/// unevaluated sum feature_sums[j] + sum_residuals[j] (the residual holds the
/// rounding error of the high part, so the pair tracks the exact total), plus
/// the ids of its members. The centroid is derived from these and cached; it
/// is the mean rounded once to the nearest double, so a cluster of identical
/// points has exactly that point as centroid.
class Cluster {
public:
    Cluster() = default;
    /// sum_residuals defaults to all zeros.
    Cluster(std::uint64_t id, std::vector<double> feature_sums,
            std::vector<std::uint64_t> member_seqs, std::vector<double> sum_residuals = {});

    static Cluster founded_by(std::uint64_t id, const DataPoint& point);

    void add(const DataPoint& point);

    std::uint64_t id() const noexcept { return id_; }
    std::uint64_t member_count() const noexcept { return member_seqs_.size(); }
    const std::vector<double>& feature_sums() const noexcept { return feature_sums_; }
    const std::vector<double>& sum_residuals() const noexcept { return sum_residuals_; }
    const std::vector<std::uint64_t>& member_seqs() const noexcept { return member_seqs_; }
    const std::vector<double>& centroid() const noexcept { return centroid_; }
    double centroid_at(std::size_t feature) const noexcept { return centroid_[feature]; }

    friend bool operator==(const Cluster& a, const Cluster& b) {
        return a.id_ == b.id_ && a.feature_sums_ == b.feature_sums_ &&
               a.sum_residuals_ == b.sum_residuals_ && a.member_seqs_ == b.member_seqs_;
    }

private:
    void refresh_centroid();

    std::uint64_t id_ = 0;  // 1-based, creation order
    std::vector<double> feature_sums_;
    std::vector<double> sum_residuals_;
    std::vector<std::uint64_t> member_seqs_;
    std::vector<double> centroid_;
};

struct ClusterState {
    Config config;
    std::vector<Cluster> clusters;
    std::uint64_t points_seen = 0;

    explicit ClusterState(Config cfg) : config(cfg) {}

    friend bool operator==(const ClusterState&, const ClusterState&) = default;
};

/// Result of comparing one point against one cluster's centroid.
/// qualifying_avg is present iff matched_count >= 1.
struct MatchProfile {
    std::uint64_t cluster_id = 0;
    std::size_t matched_count = 0;
    std::optional<double> qualifying_avg;

    friend bool operator==(const MatchProfile&, const MatchProfile&) = default;
};

enum class DecisionPath {
    EmptyListNewCluster,
    SingleQualified,
    MaxMatched,
    AvgTiebreak,
};

std::string_view to_string(DecisionPath path) noexcept;

struct AssignmentOutcome {
    std::uint64_t point_seq = 0;
    std::uint64_t assigned_cluster_id = 0;
    bool created_new = false;
    std::vector<MatchProfile> profiles;  // one per pre-existing cluster, id order
    DecisionPath decision_path = DecisionPath::EmptyListNewCluster;

    friend bool operator==(const AssignmentOutcome&, const AssignmentOutcome&) = default;
};

/// Verifies every ClusterState invariant: contiguous ids, count conservation,
/// exact partition of 0..points_seen-1, matching dimensionality, finite
/// nonnegative sums. Throws Error(InvariantViolation) naming the first breach.
void audit(const ClusterState& state);

}  // namespace strictclust

#endif  // STRICTCLUST_MODEL_HPP
