#include "properties.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <vector>

#include "generators.hpp"
#include "reference.hpp"
#include "strictclust/cli.hpp"
#include "strictclust/engine.hpp"
#include "strictclust/ingest.hpp"
#include "strictclust/snapshot.hpp"

namespace strictclust::testing {

namespace {

bool close_relative(double a, double b, double rel) {
    if (a == b) return true;
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) {
            return false;
        }
    }
    return true;
}

bool bit_equal(const ClusterState& a, const ClusterState& b) {
    if (a.config != b.config || a.points_seen != b.points_seen ||
        a.clusters.size() != b.clusters.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.clusters.size(); ++i) {
        const Cluster& x = a.clusters[i];
        const Cluster& y = b.clusters[i];
        if (x.id() != y.id() || x.member_seqs() != y.member_seqs() ||
            !bit_equal(x.feature_sums(), y.feature_sums()) ||
            !bit_equal(x.sum_residuals(), y.sum_residuals())) {
            return false;
        }
    }
    return true;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string describe(std::size_t stream, const RandomStream& s) {
    std::ostringstream os;
    os << "stream " << stream << " (strictness " << s.strictness << ", n_features "
       << s.n_features << ", length " << s.rows.size() << ")";
    return os.str();
}

void fail(CheckResult& r, const std::string& what) {
    if (r.ok) r.detail = what;
    r.ok = false;
}

}  // namespace

CheckResult check_replay_invariant(std::size_t streams, std::uint64_t seed) {
    CheckResult r;
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < streams && r.ok; ++t, ++r.cases) {
        const RandomStream s = random_stream(rng);
        const Config config = validate_config(s.strictness, s.n_features);
        const std::size_t need = should_match_features(config);
        ClusterState state(config);
        for (const DataPoint& p : to_points(s.rows)) {
            const AssignmentOutcome out = assign(state, p);
            try {
                audit(state);
            } catch (const Error& e) {
                fail(r, describe(t, s) + ": audit failed after point " + std::to_string(p.seq) +
                            ": " + e.what());
                break;
            }
            if (!out.created_new &&
                out.profiles[out.assigned_cluster_id - 1].matched_count < need) {
                fail(r, describe(t, s) + ": point " + std::to_string(p.seq) +
                            " joined a cluster below should_match");
                break;
            }
        }
        for (const Cluster& c : state.clusters) {
            for (std::size_t j = 0; j < s.n_features && r.ok; ++j) {
                double replay = 0.0;
                for (std::uint64_t seq : c.member_seqs()) replay += s.rows[seq][j];
                if (!close_relative(replay, c.feature_sums()[j], 1e-9)) {
                    fail(r, describe(t, s) + ": cluster " + std::to_string(c.id()) + " feature " +
                                std::to_string(j) + " replay mismatch");
                }
                const double mean = replay / static_cast<double>(c.member_count());
                if (!close_relative(mean, centroid(c)[j], 1e-9)) {
                    fail(r, describe(t, s) + ": centroid is not the member mean");
                }
            }
        }
    }
    return r;
}

CheckResult check_scaling_equivariance(std::size_t streams, std::uint64_t seed) {
    CheckResult r;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> exponent(-4, 6);
    for (std::size_t t = 0; t < streams && r.ok; ++t, ++r.cases) {
        const RandomStream s = random_stream(rng);
        std::vector<double> k(s.n_features);
        for (double& v : k) v = std::ldexp(1.0, exponent(rng));
        Rows scaled = s.rows;
        for (auto& row : scaled) {
            for (std::size_t j = 0; j < row.size(); ++j) row[j] *= k[j];
        }
        const Config config = validate_config(s.strictness, s.n_features);
        const auto a = run_stream(config, to_points(s.rows));
        const auto b = run_stream(config, to_points(scaled));

        if (a.state.clusters.size() != b.state.clusters.size()) {
            fail(r, describe(t, s) + ": cluster counts differ under scaling");
            break;
        }
        for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
            const auto& x = a.outcomes[i];
            const auto& y = b.outcomes[i];
            bool same = x.assigned_cluster_id == y.assigned_cluster_id &&
                        x.decision_path == y.decision_path &&
                        x.profiles.size() == y.profiles.size();
            for (std::size_t c = 0; same && c < x.profiles.size(); ++c) {
                same = x.profiles[c].matched_count == y.profiles[c].matched_count;
            }
            if (!same) {
                fail(r, describe(t, s) + ": outcome differs at point " + std::to_string(i));
                break;
            }
        }
        for (std::size_t c = 0; c < a.state.clusters.size() && r.ok; ++c) {
            if (a.state.clusters[c].member_seqs() != b.state.clusters[c].member_seqs()) {
                fail(r, describe(t, s) + ": memberships differ under scaling");
                break;
            }
            const auto ca = centroid(a.state.clusters[c]);
            const auto cb = centroid(b.state.clusters[c]);
            for (std::size_t j = 0; j < ca.size(); ++j) {
                if (!close_relative(ca[j] * k[j], cb[j], 1e-9)) {
                    fail(r, describe(t, s) + ": centroid did not scale");
                    break;
                }
            }
        }
    }
    return r;
}

CheckResult check_oracle_equivalence(std::size_t streams, std::uint64_t seed) {
    CheckResult r;
    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < streams && r.ok; ++t, ++r.cases) {
        const RandomStream s = random_stream(rng);
        const auto ref = reference_cluster(s.strictness, s.n_features, s.rows);
        const auto got = run_stream(validate_config(s.strictness, s.n_features), to_points(s.rows));
        if (ref.members.size() != got.state.clusters.size()) {
            fail(r, describe(t, s) + ": cluster count " +
                        std::to_string(got.state.clusters.size()) + " vs reference " +
                        std::to_string(ref.members.size()));
            break;
        }
        for (std::size_t c = 0; c < ref.members.size(); ++c) {
            const auto& seqs = got.state.clusters[c].member_seqs();
            if (!std::equal(seqs.begin(), seqs.end(), ref.members[c].begin(),
                            ref.members[c].end())) {
                fail(r, describe(t, s) + ": membership of cluster " + std::to_string(c + 1) +
                            " differs from reference");
                break;
            }
        }
        for (std::size_t i = 0; i < ref.paths.size() && r.ok; ++i) {
            if (ref.paths[i] != to_string(got.outcomes[i].decision_path)) {
                fail(r, describe(t, s) + ": decision path differs at point " + std::to_string(i));
            }
        }
    }
    return r;
}

CheckResult check_suffix_resume(std::size_t splits, std::uint64_t seed,
                                const std::filesystem::path& scratch_dir) {
    CheckResult r;
    std::mt19937_64 rng(seed);
    const auto snap = scratch_dir / "resume.snapshot";
    for (std::size_t t = 0; t < splits && r.ok; ++t, ++r.cases) {
        RandomStream s = random_stream(rng);
        if (s.rows.empty()) s = random_stream(rng);
        const Config config = validate_config(s.strictness, s.n_features);
        const auto points = to_points(s.rows);
        const auto whole = run_stream(config, points);

        std::uniform_int_distribution<std::size_t> pick_split(0, points.size());
        const std::size_t k = pick_split(rng);
        auto prefix = run_stream(config, std::span(points).first(k));
        save_snapshot(prefix.state, snap);
        ClusterState resumed = load_snapshot(snap);
        std::vector<AssignmentOutcome> suffix;
        for (std::size_t i = k; i < points.size(); ++i) suffix.push_back(assign(resumed, points[i]));

        if (!bit_equal(resumed, whole.state)) {
            fail(r, describe(t, s) + ": resumed state differs (split " + std::to_string(k) + ")");
            break;
        }
        if (!std::equal(suffix.begin(), suffix.end(), whole.outcomes.begin() + k,
                        whole.outcomes.end())) {
            fail(r, describe(t, s) + ": resumed outcomes differ (split " + std::to_string(k) + ")");
        }
    }
    std::filesystem::remove(snap);
    return r;
}

CheckResult check_determinism(std::size_t streams, std::uint64_t seed,
                              const std::filesystem::path& scratch_dir) {
    CheckResult r;
    std::mt19937_64 rng(seed);
    const auto snap_a = scratch_dir / "det_a.snapshot";
    const auto snap_b = scratch_dir / "det_b.snapshot";
    for (std::size_t t = 0; t < streams && r.ok; ++t, ++r.cases) {
        const RandomStream s = random_stream(rng);
        const auto points = to_points(s.rows);
        std::string csv;
        for (const auto& p : points) csv += format_csv_line(p) + "\n";

        std::ostringstream strictness;
        strictness << s.strictness;
        auto run_once = [&](const std::filesystem::path& snap) {
            std::istringstream in(csv);
            std::ostringstream out, err;
            const int code = cli::run_cli({"strictclust", "run", "--strictness", strictness.str(),
                                           "--features", std::to_string(s.n_features),
                                           "--summary", "--snapshot-out", snap.string()},
                                          in, out, err);
            return std::make_pair(code, out.str());
        };
        const auto [code_a, out_a] = run_once(snap_a);
        const auto [code_b, out_b] = run_once(snap_b);
        if (code_a != 0 || code_b != 0) {
            fail(r, describe(t, s) + ": CLI run failed");
            break;
        }
        if (out_a != out_b || read_file(snap_a) != read_file(snap_b)) {
            fail(r, describe(t, s) + ": CLI outputs are not byte-identical");
            break;
        }
        const Config config = validate_config(s.strictness, s.n_features);
        const auto a = run_stream(config, points);
        const auto b = run_stream(config, points);
        if (a.outcomes != b.outcomes || !bit_equal(a.state, b.state)) {
            fail(r, describe(t, s) + ": library runs differ");
        }
    }
    std::filesystem::remove(snap_a);
    std::filesystem::remove(snap_b);
    return r;
}

CheckResult check_snapshot_roundtrip(std::size_t states, std::uint64_t seed,
                                     const std::filesystem::path& scratch_dir) {
    CheckResult r;
    std::mt19937_64 rng(seed);
    const auto snap = scratch_dir / "roundtrip.snapshot";
    for (std::size_t t = 0; t < states && r.ok; ++t, ++r.cases) {
        const RandomStream s = random_stream(rng);
        const auto result =
            run_stream(validate_config(s.strictness, s.n_features), to_points(s.rows));
        save_snapshot(result.state, snap);
        if (!bit_equal(load_snapshot(snap), result.state)) {
            fail(r, describe(t, s) + ": snapshot round trip is not bit-identical");
        }
    }
    std::filesystem::remove(snap);
    return r;
}

}  // namespace strictclust::testing
