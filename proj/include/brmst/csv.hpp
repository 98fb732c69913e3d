#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "brmst/dataset.hpp"

namespace brmst {

enum class NaPolicy { Error, Drop };

/// Accepts "error" and "drop".
NaPolicy parse_na_policy(std::string_view name);

/// Column mapping for CSV ingestion. The design is built as intercept,
/// group, then `covariates` in the order given. A covariate is one-hot
/// encoded when it is listed in `categorical` or any of its values is not
/// numeric; the first level (numeric-aware order) is the reference and the
/// dummy columns are named "column:level".
struct CsvSchema {
  std::string time_column = "time";
  std::string event_column = "event";
  std::string group_column = "group";
  /// Empty means a single cluster.
  std::string cluster_column = "cluster";
  std::vector<std::string> covariates;
  std::vector<std::string> categorical;
  NaPolicy na_policy = NaPolicy::Error;
};

struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SurvivalDataset parse_csv(std::string_view text, const CsvSchema& schema);
SurvivalDataset ingest_csv(const std::string& path, const CsvSchema& schema);

/// Columns time, event, cluster, then design columns 1.. under their
/// covariate names, with values printed to round-trip exactly.
std::string to_csv(const SurvivalDataset& data);
void write_csv(const SurvivalDataset& data, const std::string& path);

/// Schema that re-reads the output of to_csv for `data`.
CsvSchema schema_for(const SurvivalDataset& data);

}  // namespace brmst
