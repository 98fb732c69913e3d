#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "brmst/draws.hpp"
#include "brmst/simulation.hpp"
#include "brmst/summaries.hpp"
#include "brmst/waic.hpp"
#include "json.hpp"

namespace report {

using Json = nlohmann::ordered_json;

struct ParameterRow {
  std::string name;
  brmst::RmstSummary summary;
  double rhat;
  double ess;
};

std::vector<ParameterRow> parameter_rows(const brmst::PosteriorDraws& draws, double level);

Json to_json(const brmst::RmstSummary& s);
Json to_json(const ParameterRow& row);
Json to_json(const brmst::Histogram& h);
Json to_json(const brmst::ForestRow& row);
Json to_json(const brmst::WaicResult& w);
Json to_json(const brmst::ReplicationRecord& r);
Json to_json(const brmst::SimMetrics& m);

void print_parameter_table(std::ostream& out, const std::vector<ParameterRow>& rows);
void print_rmst_table(std::ostream& out, const std::vector<std::pair<std::string, brmst::RmstSummary>>& rows);
void print_exceedance(std::ostream& out, const brmst::RmstSummary& difference);
void print_forest(std::ostream& out, const std::vector<brmst::ForestRow>& rows);

/// Writes `doc` to `path` through a temporary file renamed into place, so
/// a failed run never leaves a partial document.
void write_atomically(const Json& doc, const std::string& path);

}  // namespace report
