#ifndef STRICTCLUST_CLI_HPP
#define STRICTCLUST_CLI_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "strictclust/ingest.hpp"

namespace strictclust::cli {

enum class Command { Run, Resume, Inspect };

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// Points beyond this many are not traced.
inline constexpr std::size_t kTraceLimit = 1000;

struct CliOptions {
    Command command = Command::Run;
    std::optional<double> strictness;
    std::optional<std::size_t> n_features;
    std::optional<InputFormat> format;  // unset: by input extension, else csv
    std::string input = "-";
    std::string output = "-";
    std::optional<std::string> snapshot_out;
    std::optional<std::string> snapshot_in;
    ErrorPolicy on_error = ErrorPolicy::Halt;
    bool trace = false;
    bool summary = false;
};

/// Parses argv (argv[0] is the program name) and dispatches. "-" as --input
/// or --output means the given in/out streams. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err);

int cmd_run(const CliOptions& options, std::istream& in, std::ostream& out, std::ostream& err);
int cmd_resume(const CliOptions& options, std::istream& in, std::ostream& out,
               std::ostream& err);
int cmd_inspect(const CliOptions& options, std::ostream& out, std::ostream& err);

/// Two-decimal display with trailing zeros dropped: 36.50 -> "36.5", 19.00 -> "19".
std::string display_number(double value);

}  // namespace strictclust::cli

#endif  // STRICTCLUST_CLI_HPP
