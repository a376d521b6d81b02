#include "strictclust/ingest.hpp"

#include <charconv>
#include <system_error>

#include <nlohmann/json.hpp>

namespace strictclust {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
    return value;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

std::string with_line(std::size_t line_number, const std::string& message) {
    if (line_number == 0) return message;
    return "line " + std::to_string(line_number) + ": " + message;
}

}  // namespace

std::vector<double> parse_csv_fields(std::string_view line, std::size_t line_number) {
    std::vector<double> values;
    std::size_t column = 1;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        const auto field = trim(line.substr(
            start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        const auto value = parse_real(field);
        if (!value) {
            throw ParseError(line_number, column,
                             field.empty() ? "empty field"
                                           : "not a number: '" + std::string(field) + "'");
        }
        values.push_back(*value);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
        ++column;
    }
    return values;
}

JsonlFields parse_jsonl_fields(std::string_view line, std::size_t line_number) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(line_number, 0, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError(line_number, 0, "expected a JSON object");
    const auto features = doc.find("features");
    if (features == doc.end()) throw ParseError(line_number, 0, "missing key \"features\"");
    if (!features->is_array()) throw ParseError(line_number, 0, "\"features\" is not an array");

    JsonlFields out;
    out.features.reserve(features->size());
    for (std::size_t j = 0; j < features->size(); ++j) {
        const auto& v = (*features)[j];
        if (!v.is_number()) {
            throw ParseError(line_number, 0,
                             "features[" + std::to_string(j) + "] is not a number");
        }
        out.features.push_back(v.get<double>());
    }
    if (const auto id = doc.find("id"); id != doc.end()) {
        if (!id->is_string()) throw ParseError(line_number, 0, "\"id\" is not a string");
        out.id = id->get<std::string>();
    }
    return out;
}

DataPoint parse_csv_line(std::string_view line, const Config& config, std::uint64_t seq,
                         std::size_t line_number) {
    return validate_point(parse_csv_fields(line, line_number), config, seq);
}

DataPoint parse_jsonl_line(std::string_view line, const Config& config, std::uint64_t seq,
                           std::size_t line_number) {
    auto fields = parse_jsonl_fields(line, line_number);
    auto point = validate_point(std::move(fields.features), config, seq);
    point.label = std::move(fields.id);
    return point;
}

std::string format_csv_line(const DataPoint& point) {
    std::string out;
    char buf[32];
    for (std::size_t j = 0; j < point.features.size(); ++j) {
        if (j > 0) out.push_back(',');
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, point.features[j]);
        out.append(buf, ptr);
    }
    return out;
}

PointReader::PointReader(std::istream& in, InputFormat format,
                         std::optional<std::size_t> n_features, ErrorPolicy policy,
                         std::uint64_t first_seq)
    : in_(in), format_(format), n_features_(n_features), policy_(policy), next_seq_(first_seq) {}

std::optional<DataPoint> PointReader::next() {
    while (std::getline(in_, record_.raw)) {
        ++record_.line_number;
        record_.parsed.clear();
        std::string_view line = record_.raw;
        if (record_.line_number == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (is_blank(line)) continue;

        const bool first_content = !seen_content_;
        seen_content_ = true;
        if (first_content && format_ == InputFormat::Csv) {
            const auto first_field = trim(line.substr(0, line.find(',')));
            if (!parse_real(first_field)) continue;  // header row
        }

        try {
            std::vector<double> values;
            std::optional<std::string> label;
            if (format_ == InputFormat::Csv) {
                values = parse_csv_fields(line, record_.line_number);
            } else {
                auto fields = parse_jsonl_fields(line, record_.line_number);
                values = std::move(fields.features);
                label = std::move(fields.id);
            }
            record_.parsed = values;
            const std::size_t expected = n_features_.value_or(values.size());
            DataPoint point = validate_point(std::move(values), expected, next_seq_);
            point.label = std::move(label);
            if (!n_features_) n_features_ = expected;
            ++next_seq_;
            return point;
        } catch (const ParseError& e) {
            if (policy_ == ErrorPolicy::Halt) throw;
            diagnostics_.push_back({record_.line_number, e.code(), e.what()});
        } catch (const Error& e) {
            if (policy_ == ErrorPolicy::Halt) {
                throw Error(e.code(), with_line(record_.line_number, e.what()));
            }
            diagnostics_.push_back(
                {record_.line_number, e.code(), with_line(record_.line_number, e.what())});
        }
    }
    return std::nullopt;
}

StreamReadResult stream_points(std::istream& in, InputFormat format,
                               std::optional<std::size_t> n_features, ErrorPolicy policy,
                               std::uint64_t first_seq) {
    PointReader reader(in, format, n_features, policy, first_seq);
    StreamReadResult result;
    while (auto p = reader.next()) result.points.push_back(std::move(*p));
    result.diagnostics = reader.diagnostics();
    result.n_features = reader.n_features();
    return result;
}

}  // namespace strictclust
