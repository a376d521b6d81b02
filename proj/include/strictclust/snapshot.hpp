#ifndef STRICTCLUST_SNAPSHOT_HPP
#define STRICTCLUST_SNAPSHOT_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "strictclust/model.hpp"

namespace strictclust {

inline constexpr int kSnapshotFormatVersion = 1;

// Snapshot layout (see docs/formats.md):
//   line 1: "strictclust-snapshot <version> sha256:<hex digest of the rest>"
//   line 2: one JSON object holding config, points_seen and clusters
// Floats are written as shortest round-trip decimals, so decode(encode(s))
// reproduces every sum bit for bit.
std::string encode_snapshot(const ClusterState& state);
ClusterState decode_snapshot(std::string_view text);

/// Writes to a sibling temporary file and renames it over destination.
void save_snapshot(const ClusterState& state, const std::filesystem::path& destination);
ClusterState load_snapshot(const std::filesystem::path& source);

}  // namespace strictclust

#endif  // STRICTCLUST_SNAPSHOT_HPP
