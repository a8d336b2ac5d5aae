#pragma once

// Batch experiment runner behind the orbitlab command line.

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace orbitlab::cli {

using Json = nlohmann::json;

enum class Status { Ok, Certified, Failed, Indeterminate };
std::string to_string(Status s);
/// 0 on OK/CERTIFIED, 2 on FAILED, 3 on INDETERMINATE.
int exit_code(Status s);

/// Config rejected by the schema check (exit code 1).
class ConfigInvalid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Column-oriented table; every row has one cell per column.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct RunReport {
  Json config;
  Status status = Status::Ok;
  Json summary;
  std::map<std::string, Table> tables;
  std::vector<std::string> artifacts;
  double wall_seconds = 0;
  unsigned precision_retries = 0;

  Json to_json() const;
};

const std::vector<std::string>& experiment_kinds();

/// Checks field names and types for the declared experiment kind.
void validate_config(const Json& config);

/// Dispatches to the module operation and writes the artifacts requested
/// under "output" ({"dir": ..., "prefix": ...}).
RunReport run(const Json& config);

/// Writes the requested columns of a report table as CSV (header row, rows in
/// table order). Throws ConfigInvalid ("missing-column") for unknown columns.
void emit_plot_data(const RunReport& report, const std::string& table, const std::vector<std::string>& columns,
                    const std::string& path);

}  // namespace orbitlab::cli
