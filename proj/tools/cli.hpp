#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace triconv::cli {

enum class Command { check_regime, surface, hessian, oracle_compare, ratio_sweep, constants, identities };

inline constexpr std::string_view kCommandNames[] = {"check-regime", "surface",   "hessian",   "oracle-compare",
                                                     "ratio-sweep",  "constants", "identities"};

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view name);

/// Process exit statuses. Every failure class has its own value.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kBadInput = 2,  ///< parameter file, override or argument rejected
  kMonotonicity = 3,
  kNoConvergence = 4,
  kGridUnresolved = 5,
  kIo = 6,
  kCheckFailed = 7,  ///< identities table contains a FAIL row
};

struct RunSpec {
  Command command = Command::check_regime;
  std::filesystem::path params_path;
  std::optional<std::filesystem::path> output_path;  ///< stdout when empty
  std::vector<std::pair<std::string, std::string>> overrides;
};

/// Splits "key=value"; returns nullopt when there is no '=' or the key is empty.
std::optional<std::pair<std::string, std::string>> split_override(std::string_view text);

/// The accepted override keys, sorted.
const std::vector<std::string>& override_keys();

/// Runs one command. The artifact goes to spec.output_path or `out`; the
/// one-line diagnostic of a failure goes to `err`. Output is assembled in
/// memory and only written once the command has succeeded.
int run(const RunSpec& spec, std::ostream& out, std::ostream& err);

}  // namespace triconv::cli
