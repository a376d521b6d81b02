#ifndef STRICTCLUST_INGEST_HPP
#define STRICTCLUST_INGEST_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "strictclust/model.hpp"

namespace strictclust {

enum class InputFormat { Csv, Jsonl };
enum class ErrorPolicy { Halt, Skip };

/// One physical input line. parsed is filled only when the line parsed.
struct InputRecord {
    std::size_t line_number = 0;  // 1-based
    std::string raw;
    std::vector<double> parsed;
};

/// Comma-separated decimal reals (scientific notation allowed), whitespace
/// around fields ignored. column in a ParseError is the 1-based field index.
std::vector<double> parse_csv_fields(std::string_view line, std::size_t line_number = 0);

struct JsonlFields {
    std::vector<double> features;
    std::optional<std::string> id;
};

/// {"features": [numbers...], "id": "optional label"}
JsonlFields parse_jsonl_fields(std::string_view line, std::size_t line_number = 0);

DataPoint parse_csv_line(std::string_view line, const Config& config,
                         std::uint64_t seq = 0, std::size_t line_number = 0);
DataPoint parse_jsonl_line(std::string_view line, const Config& config,
                           std::uint64_t seq = 0, std::size_t line_number = 0);

/// Shortest round-trip decimal rendering of the features, comma separated.
std::string format_csv_line(const DataPoint& point);

struct Diagnostic {
    std::size_t line_number = 0;
    ErrorCode code = ErrorCode::ParseError;
    std::string message;
};

/// Pull-style reader over a text stream. Blank lines are ignored; in CSV mode
/// the first non-blank line is treated as a header when its first field is not
/// a number. When n_features is not given it is taken from the first valid
/// record and enforced afterwards. Under ErrorPolicy::Halt the first bad line
/// throws (with its line number in the message); under Skip it is recorded in
/// diagnostics() and reading continues.
class PointReader {
public:
    PointReader(std::istream& in, InputFormat format, std::optional<std::size_t> n_features,
                ErrorPolicy policy, std::uint64_t first_seq = 0);

    std::optional<DataPoint> next();

    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }
    std::optional<std::size_t> n_features() const noexcept { return n_features_; }
    /// The most recently read physical line.
    const InputRecord& last_record() const noexcept { return record_; }

private:
    std::istream& in_;
    InputFormat format_;
    std::optional<std::size_t> n_features_;
    ErrorPolicy policy_;
    std::uint64_t next_seq_;
    InputRecord record_;
    bool seen_content_ = false;
    std::vector<Diagnostic> diagnostics_;
};

struct StreamReadResult {
    std::vector<DataPoint> points;
    std::vector<Diagnostic> diagnostics;
    std::optional<std::size_t> n_features;
};

StreamReadResult stream_points(std::istream& in, InputFormat format,
                               std::optional<std::size_t> n_features, ErrorPolicy policy,
                               std::uint64_t first_seq = 0);

}  // namespace strictclust

#endif  // STRICTCLUST_INGEST_HPP
