#include "strictclust/model.hpp"

#include <cmath>
#include <sstream>

namespace strictclust {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::StrictnessOutOfRange: return "StrictnessOutOfRange";
        case ErrorCode::BadDimensionality: return "BadDimensionality";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NegativeFeature: return "NegativeFeature";
        case ErrorCode::NonFiniteFeature: return "NonFiniteFeature";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ChecksumMismatch: return "ChecksumMismatch";
        case ErrorCode::VersionUnsupported: return "VersionUnsupported";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

namespace {

std::string parse_error_message(std::size_t line, std::size_t column,
                                const std::string& message) {
    std::ostringstream os;
    if (line > 0) os << "line " << line;
    if (column > 0) os << (line > 0 ? ", " : "") << "column " << column;
    if (line > 0 || column > 0) os << ": ";
    os << message;
    return os.str();
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : Error(ErrorCode::ParseError, parse_error_message(line, column, message)),
      line_(line),
      column_(column) {}

std::string_view to_string(DecisionPath path) noexcept {
    switch (path) {
        case DecisionPath::EmptyListNewCluster: return "EMPTY_LIST_NEW_CLUSTER";
        case DecisionPath::SingleQualified: return "SINGLE_QUALIFIED";
        case DecisionPath::MaxMatched: return "MAX_MATCHED";
        case DecisionPath::AvgTiebreak: return "AVG_TIEBREAK";
    }
    return "UNKNOWN";
}

Config validate_config(double strictness, std::size_t n_features) {
    // Written as !(in range) so NaN is rejected too.
    if (!(strictness > 0.0 && strictness <= 100.0)) {
        std::ostringstream os;
        os << "strictness must be in (0, 100], got " << strictness;
        throw Error(ErrorCode::StrictnessOutOfRange, os.str());
    }
    if (n_features < 1) {
        throw Error(ErrorCode::BadDimensionality, "n_features must be at least 1");
    }
    return Config{strictness, n_features};
}

DataPoint validate_point(std::vector<double> features, std::size_t n_features,
                         std::uint64_t seq) {
    if (features.size() != n_features) {
        std::ostringstream os;
        os << "point " << seq << " has " << features.size() << " features, expected "
           << n_features;
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    for (std::size_t j = 0; j < features.size(); ++j) {
        const double v = features[j];
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "point " << seq << " feature " << j + 1 << " is not finite";
            throw Error(ErrorCode::NonFiniteFeature, os.str());
        }
        if (v < 0.0) {
            std::ostringstream os;
            os << "point " << seq << " feature " << j + 1 << " is negative (" << v << ")";
            throw Error(ErrorCode::NegativeFeature, os.str());
        }
    }
    return DataPoint{seq, std::move(features), std::nullopt};
}

namespace {

// s + e == a + b exactly (Knuth's branch-free TwoSum).
void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    const double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
}

// (hi + lo) / n with a single effective rounding: the remainder of the first
// quotient is exact via fma and feeds a one-step correction.
double compensated_mean(double hi, double lo, double n) {
    const double q = hi / n;
    const double r = std::fma(-q, n, hi);
    return q + (r + lo) / n;
}

}  // namespace

Cluster::Cluster(std::uint64_t id, std::vector<double> feature_sums,
                 std::vector<std::uint64_t> member_seqs, std::vector<double> sum_residuals)
    : id_(id),
      feature_sums_(std::move(feature_sums)),
      sum_residuals_(std::move(sum_residuals)),
      member_seqs_(std::move(member_seqs)) {
    if (sum_residuals_.empty()) sum_residuals_.assign(feature_sums_.size(), 0.0);
    refresh_centroid();
}

Cluster Cluster::founded_by(std::uint64_t id, const DataPoint& point) {
    return Cluster(id, point.features, {point.seq});
}

void Cluster::add(const DataPoint& point) {
    for (std::size_t j = 0; j < feature_sums_.size(); ++j) {
        double hi = 0.0;
        double err = 0.0;
        two_sum(feature_sums_[j], point.features[j], hi, err);
        const double lo = sum_residuals_[j] + err;
        // Renormalize so |residual| <= ulp(sum) / 2 (fast TwoSum, |hi| >= |lo|).
        feature_sums_[j] = hi + lo;
        sum_residuals_[j] = lo - (feature_sums_[j] - hi);
    }
    member_seqs_.push_back(point.seq);
    refresh_centroid();
}

void Cluster::refresh_centroid() {
    centroid_.assign(feature_sums_.size(), 0.0);
    if (member_seqs_.empty() || sum_residuals_.size() != feature_sums_.size()) return;
    const auto n = static_cast<double>(member_seqs_.size());
    for (std::size_t j = 0; j < feature_sums_.size(); ++j) {
        centroid_[j] = compensated_mean(feature_sums_[j], sum_residuals_[j], n);
    }
}

void audit(const ClusterState& state) {
    auto fail = [](const std::string& what) {
        throw Error(ErrorCode::InvariantViolation, what);
    };
    const Config& cfg = state.config;
    if (!(cfg.strictness > 0.0 && cfg.strictness <= 100.0) || cfg.n_features < 1) {
        fail("config out of range");
    }

    std::vector<bool> seen(state.points_seen, false);
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < state.clusters.size(); ++i) {
        const Cluster& c = state.clusters[i];
        const std::string name = "cluster " + std::to_string(c.id());
        if (c.id() != i + 1) {
            fail("cluster ids are not contiguous from 1 (position " + std::to_string(i) +
                 " has id " + std::to_string(c.id()) + ")");
        }
        if (c.member_seqs().empty()) fail(name + " is empty");
        if (c.feature_sums().size() != cfg.n_features ||
            c.sum_residuals().size() != cfg.n_features) {
            fail(name + " has wrong dimensionality");
        }
        for (std::size_t j = 0; j < cfg.n_features; ++j) {
            const double hi = c.feature_sums()[j];
            const double lo = c.sum_residuals()[j];
            if (!std::isfinite(hi) || !std::isfinite(lo) || hi < 0.0) {
                fail(name + " has a non-finite or negative sum");
            }
            // The residual is a rounding error of hi, so it cannot exceed half an ulp.
            if (std::abs(lo) > 0.5 * (std::nextafter(hi, INFINITY) - hi)) {
                fail(name + " has a residual larger than its sum's rounding error");
            }
            if (!(c.centroid_at(j) >= 0.0)) fail(name + " has a negative centroid");
        }
        for (std::uint64_t seq : c.member_seqs()) {
            if (seq >= state.points_seen) {
                fail(name + " holds unknown point " + std::to_string(seq));
            }
            if (seen[seq]) fail("point " + std::to_string(seq) + " is in two clusters");
            seen[seq] = true;
        }
        total += c.member_count();
    }
    if (total != state.points_seen) {
        fail("member counts sum to " + std::to_string(total) + " but points_seen is " +
             std::to_string(state.points_seen));
    }
}

}  // namespace strictclust
