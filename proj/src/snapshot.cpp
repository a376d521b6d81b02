#include "strictclust/snapshot.hpp"

#include <unistd.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace strictclust {

namespace {

constexpr std::string_view kMagic = "strictclust-snapshot";

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 0xF]);
    }
    return hex;
}

[[noreturn]] void inconsistent(const std::string& what) {
    throw Error(ErrorCode::InvariantViolation, "snapshot is inconsistent: " + what);
}

nlohmann::json to_json(const ClusterState& state) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const Cluster& c : state.clusters) {
        clusters.push_back({{"id", c.id()},
                            {"member_count", c.member_count()},
                            {"feature_sums", c.feature_sums()},
                            {"sum_residuals", c.sum_residuals()},
                            {"member_seqs", c.member_seqs()}});
    }
    return {{"format_version", kSnapshotFormatVersion},
            {"config",
             {{"strictness", state.config.strictness}, {"n_features", state.config.n_features}}},
            {"points_seen", state.points_seen},
            {"clusters", std::move(clusters)}};
}

ClusterState from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("format_version").get<int>() != kSnapshotFormatVersion) {
            inconsistent("payload format_version disagrees with header");
        }
        const auto& cfg = doc.at("config");
        Config config;
        try {
            config = validate_config(cfg.at("strictness").get<double>(),
                                     cfg.at("n_features").get<std::size_t>());
        } catch (const Error& e) {
            inconsistent(e.what());
        }
        ClusterState state(config);
        state.points_seen = doc.at("points_seen").get<std::uint64_t>();
        for (const auto& item : doc.at("clusters")) {
            Cluster c(item.at("id").get<std::uint64_t>(),
                      item.at("feature_sums").get<std::vector<double>>(),
                      item.at("member_seqs").get<std::vector<std::uint64_t>>(),
                      item.at("sum_residuals").get<std::vector<double>>());
            if (item.at("member_count").get<std::uint64_t>() != c.member_count()) {
                inconsistent("cluster " + std::to_string(c.id()) +
                             " member_count disagrees with member_seqs");
            }
            state.clusters.push_back(std::move(c));
        }
        return state;
    } catch (const nlohmann::json::exception& e) {
        inconsistent(e.what());
    }
}

}  // namespace

std::string encode_snapshot(const ClusterState& state) {
    const std::string payload = to_json(state).dump() + "\n";
    std::string out;
    out += kMagic;
    out += " " + std::to_string(kSnapshotFormatVersion) + " sha256:" + sha256_hex(payload) + "\n";
    out += payload;
    return out;
}

ClusterState decode_snapshot(std::string_view text) {
    const auto eol = text.find('\n');
    if (eol == std::string_view::npos) {
        throw Error(ErrorCode::ChecksumMismatch, "snapshot header is truncated");
    }
    std::istringstream header{std::string(text.substr(0, eol))};
    std::string magic, digest_field;
    int version = 0;
    if (!(header >> magic >> version >> digest_field) || magic != kMagic ||
        !digest_field.starts_with("sha256:")) {
        throw Error(ErrorCode::ChecksumMismatch, "snapshot header is malformed");
    }
    if (version != kSnapshotFormatVersion) {
        throw Error(ErrorCode::VersionUnsupported,
                    "snapshot format version " + std::to_string(version) +
                        " is not supported (expected " +
                        std::to_string(kSnapshotFormatVersion) + ")");
    }
    const std::string_view payload = text.substr(eol + 1);
    if (sha256_hex(payload) != std::string_view(digest_field).substr(7)) {
        throw Error(ErrorCode::ChecksumMismatch, "snapshot checksum does not match its content");
    }

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(payload);
    } catch (const nlohmann::json::parse_error& e) {
        inconsistent(e.what());
    }
    ClusterState state = from_json(doc);
    audit(state);
    return state;
}

void save_snapshot(const ClusterState& state, const std::filesystem::path& destination) {
    const std::string text = encode_snapshot(state);
    std::filesystem::path tmp = destination;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
        }
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.close();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw Error(ErrorCode::IoError, "failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, destination, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw Error(ErrorCode::IoError,
                    "cannot replace " + destination.string() + ": " + ec.message());
    }
}

ClusterState load_snapshot(const std::filesystem::path& source) {
    std::ifstream in(source, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open snapshot " + source.string());
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw Error(ErrorCode::IoError, "failed reading " + source.string());
    return decode_snapshot(text);
}

}  // namespace strictclust
