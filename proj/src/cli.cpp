#include "strictclust/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "strictclust/engine.hpp"
#include "strictclust/similarity.hpp"
#include "strictclust/snapshot.hpp"

namespace strictclust::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

InputFormat resolve_format(const CliOptions& options) {
    if (options.format) return *options.format;
    const std::string& in = options.input;
    if (in.ends_with(".jsonl") || in.ends_with(".ndjson")) return InputFormat::Jsonl;
    return InputFormat::Csv;
}

// Owns a file stream when the path is not "-".
template <typename Stream, typename Base>
class MaybeFile {
public:
    MaybeFile(const std::string& path, Base& fallback) {
        if (path == "-") {
            stream_ = &fallback;
            return;
        }
        file_ = std::make_unique<Stream>(path, std::ios::binary);
        if (!*file_) throw Error(ErrorCode::IoError, "cannot open " + path);
        stream_ = file_.get();
    }
    Base& get() { return *stream_; }

private:
    std::unique_ptr<Stream> file_;
    Base* stream_ = nullptr;
};

std::string join_display(const std::vector<double>& values) {
    std::string s;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (j > 0) s += ' ';
        s += display_number(values[j]);
    }
    return s;
}

void trace_point(std::ostream& err, const ClusterState& before, const DataPoint& point,
                 const AssignmentOutcome& outcome, const ClusterState& after) {
    const std::size_t need = should_match_features(before.config);
    err << "Data-point " << point.seq + 1 << " (seq " << point.seq
        << "): " << join_display(point.features) << '\n';
    for (std::size_t i = 0; i < before.clusters.size(); ++i) {
        const Cluster& c = before.clusters[i];
        const MatchProfile& p = outcome.profiles[i];
        err << "  S(C" << c.id() << ",Fi):";
        for (const auto& s : similarity_row(point, c)) {
            err << ' ' << (s ? display_number(*s) : std::string("undef"));
        }
        err << "  matched " << p.matched_count << '/' << before.config.n_features << " (need "
            << need << ')';
        if (p.qualifying_avg) err << " avg " << display_number(*p.qualifying_avg);
        err << '\n';
    }
    const Cluster& target = after.clusters[outcome.assigned_cluster_id - 1];
    err << "  -> C" << target.id() << ' ' << (outcome.created_new ? "created" : "joined") << " ("
        << to_string(outcome.decision_path) << "); centroid: " << join_display(centroid(target))
        << '\n';
}

ordered_json assignment_record(const DataPoint& point, const AssignmentOutcome& outcome) {
    ordered_json rec;
    rec["seq"] = outcome.point_seq;
    if (point.label) rec["id"] = *point.label;
    rec["cluster_id"] = outcome.assigned_cluster_id;
    rec["created_new"] = outcome.created_new;
    if (outcome.created_new) {
        rec["matched_count"] = nullptr;
    } else {
        rec["matched_count"] = outcome.profiles[outcome.assigned_cluster_id - 1].matched_count;
    }
    rec["decision_path"] = std::string(to_string(outcome.decision_path));
    return rec;
}

ordered_json summary_record(const std::optional<ClusterState>& state, std::size_t skipped) {
    ordered_json s;
    ordered_json sizes = ordered_json::array();
    ordered_json centroids = ordered_json::array();
    if (state) {
        for (const Cluster& c : state->clusters) {
            sizes.push_back(c.member_count());
            centroids.push_back(centroid(c));
        }
    }
    s["clusters"] = state ? state->clusters.size() : 0;
    s["points_seen"] = state ? state->points_seen : 0;
    s["strictness"] = state ? ordered_json(state->config.strictness) : ordered_json(nullptr);
    s["n_features"] = state ? ordered_json(state->config.n_features) : ordered_json(nullptr);
    s["skipped_lines"] = skipped;
    s["sizes"] = std::move(sizes);
    s["centroids"] = std::move(centroids);
    return ordered_json{{"summary", std::move(s)}};
}

// Shared by run and resume. state is empty on a fresh run until the feature
// count is known.
int process_stream(std::optional<ClusterState> state, double strictness,
                   const CliOptions& options, std::istream& in, std::ostream& out,
                   std::ostream& err) {
    MaybeFile<std::ifstream, std::istream> input(options.input, in);
    MaybeFile<std::ofstream, std::ostream> output(options.output, out);
    std::ostream& records = output.get();

    std::optional<std::size_t> n_features = options.n_features;
    if (state) n_features = state->config.n_features;
    const std::uint64_t first_seq = state ? state->points_seen : 0;
    PointReader reader(input.get(), resolve_format(options), n_features, options.on_error,
                       first_seq);

    std::size_t reported = 0;
    auto report_skipped = [&] {
        for (; reported < reader.diagnostics().size(); ++reported) {
            err << "skipped " << reader.diagnostics()[reported].message << '\n';
        }
    };

    std::size_t traced = 0;
    while (auto point = reader.next()) {
        report_skipped();
        if (!state) state.emplace(validate_config(strictness, point->features.size()));
        const bool tracing = options.trace && traced < kTraceLimit;
        std::optional<ClusterState> before;
        if (tracing) before = *state;
        const AssignmentOutcome outcome = assign(*state, *point);
        if (tracing) {
            trace_point(err, *before, *point, outcome, *state);
            if (++traced == kTraceLimit) {
                err << "trace limit of " << kTraceLimit << " points reached; tracing stopped\n";
            }
        }
        records << assignment_record(*point, outcome).dump() << '\n';
    }
    report_skipped();

    if (options.summary) records << summary_record(state, reader.diagnostics().size()).dump() << '\n';
    records.flush();
    if (!records) throw Error(ErrorCode::IoError, "failed writing output " + options.output);

    if (options.snapshot_out) {
        if (!state) {
            if (!reader.n_features()) {
                throw Error(ErrorCode::DimensionMismatch,
                            "no points read and --features not given; cannot snapshot "
                            "an empty run without a feature count");
            }
            state.emplace(validate_config(strictness, *reader.n_features()));
        }
        save_snapshot(*state, *options.snapshot_out);
    }
    return kExitOk;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return kExitDataError;
    }
}

}  // namespace

std::string display_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", value);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

int cmd_run(const CliOptions& options, std::istream& in, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!options.strictness) throw UsageError("run requires --strictness");
        try {
            validate_config(*options.strictness, options.n_features.value_or(1));
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
        return process_stream(std::nullopt, *options.strictness, options, in, out, err);
    });
}

int cmd_resume(const CliOptions& options, std::istream& in, std::ostream& out,
               std::ostream& err) {
    return guarded(err, [&] {
        if (!options.snapshot_in) throw UsageError("resume requires --snapshot-in");
        if (options.strictness) {
            throw UsageError("--strictness is not accepted by resume; it comes from the snapshot");
        }
        if (options.n_features) {
            throw UsageError("--features is not accepted by resume; it comes from the snapshot");
        }
        ClusterState state = load_snapshot(*options.snapshot_in);
        const double strictness = state.config.strictness;
        return process_stream(std::move(state), strictness, options, in, out, err);
    });
}

int cmd_inspect(const CliOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (!options.snapshot_in) throw UsageError("inspect requires --snapshot-in");
        const ClusterState state = load_snapshot(*options.snapshot_in);
        out << "strictness: " << display_number(state.config.strictness) << '\n'
            << "n_features: " << state.config.n_features << '\n'
            << "should_match_features: " << should_match_features(state.config) << '\n'
            << "points_seen: " << state.points_seen << '\n'
            << state.clusters.size() << " clusters\n";
        for (const Cluster& c : state.clusters) {
            out << "C" << c.id() << " size " << c.member_count() << " centroid "
                << join_display(centroid(c)) << '\n';
        }
        return kExitOk;
    });
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"Single-pass streaming clustering with a fixed similarity strictness",
                 "strictclust"};
    app.require_subcommand(1);

    CliOptions opt;
    std::string format;
    std::string on_error = "halt";
    double strictness = 0.0;
    std::size_t features = 0;

    auto add_stream_options = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "Input format (default: by extension, else csv)")
            ->check(CLI::IsMember({"csv", "jsonl"}));
        cmd->add_option("--input", opt.input, "Input path, - for stdin");
        cmd->add_option("--output", opt.output, "Assignment records path, - for stdout");
        cmd->add_option("--snapshot-out", opt.snapshot_out, "Write final state here");
        cmd->add_option("--on-error", on_error, "halt or skip bad input lines")
            ->check(CLI::IsMember({"halt", "skip"}));
        cmd->add_flag("--trace", opt.trace, "Per-point similarity tables on stderr");
        cmd->add_flag("--summary", opt.summary, "Append a summary record");
    };

    auto* run = app.add_subcommand("run", "Cluster a stream from scratch");
    run->add_option("--strictness", strictness, "Minimum similarity percent, (0, 100]")
        ->required();
    auto* features_opt =
        run->add_option("--features", features, "Feature count (default: from first record)");
    add_stream_options(run);

    auto* resume = app.add_subcommand("resume", "Continue clustering from a snapshot");
    auto* resume_strictness = resume->add_option("--strictness", strictness);
    auto* resume_features = resume->add_option("--features", features);
    resume_strictness->group("");
    resume_features->group("");
    resume->add_option("--snapshot-in", opt.snapshot_in, "Snapshot to resume from")->required();
    add_stream_options(resume);

    auto* inspect = app.add_subcommand("inspect", "Describe a snapshot");
    inspect->add_option("--snapshot-in", opt.snapshot_in, "Snapshot to describe")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (!format.empty()) opt.format = format == "jsonl" ? InputFormat::Jsonl : InputFormat::Csv;
    opt.on_error = on_error == "skip" ? ErrorPolicy::Skip : ErrorPolicy::Halt;

    if (run->parsed()) {
        opt.command = Command::Run;
        opt.strictness = strictness;
        if (features_opt->count() > 0) {
            if (features < 1) {
                err << "error: --features must be at least 1\n";
                return kExitUsage;
            }
            opt.n_features = features;
        }
        return cmd_run(opt, in, out, err);
    }
    if (resume->parsed()) {
        opt.command = Command::Resume;
        if (resume_strictness->count() > 0) opt.strictness = strictness;
        if (resume_features->count() > 0) opt.n_features = features;
        return cmd_resume(opt, in, out, err);
    }
    opt.command = Command::Inspect;
    return cmd_inspect(opt, out, err);
}

}  // namespace strictclust::cli
