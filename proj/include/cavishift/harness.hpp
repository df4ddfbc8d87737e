#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cavishift/common.hpp"

/// Scenario configuration (JSON), task dispatch and CSV output.
namespace cavishift::harness {

using json = nlohmann::json;

/// "re+imj" text form of complex numbers ("1.5", "-2j", "0.2-1e-3j").
/// Throws ConfigError on malformed text.
cplx parse_complex(std::string_view text);
std::string format_complex(cplx z);

using Cell = std::variant<double, long long, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Written as `# key: value` lines ahead of the header row.
  std::vector<std::pair<std::string, std::string>> provenance;

  void write_csv(std::ostream& out) const;
  /// Column index by name; throws std::out_of_range.
  std::size_t column(std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

inline constexpr std::string_view kTasks[] = {"modes", "shift",       "oracle",      "sweep",
                                              "pt",    "invert-size", "invert-count"};

struct RunOptions {
  unsigned threads = 1;
};

json load_config(const std::string& path);

/// FNV-1a over the canonical (sorted-key, compact) serialization.
std::uint64_t config_hash(const json& config);

std::string version();

/// Validates the config for `task` and runs it. Throws ConfigError (with the
/// offending field path) or any numerical Error from the modules.
ResultTable run(const json& config, std::string_view task, const RunOptions& opts = {});

/// Process exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

}  // namespace cavishift::harness
