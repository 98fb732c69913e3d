#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "brmst/diagnostics.hpp"

namespace report {

namespace {

std::string fmt(double x, int precision = 3) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

// Non-finite values have no JSON spelling; they become null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

std::vector<ParameterRow> parameter_rows(const brmst::PosteriorDraws& draws, double level) {
  std::vector<ParameterRow> rows;
  for (Eigen::Index j = 0; j < draws.dim(); ++j) {
    ParameterRow row;
    row.name = draws.columns[static_cast<std::size_t>(j)];
    row.summary = brmst::summarize(draws.column(j), level);
    row.rhat = brmst::split_rhat(draws, j);
    row.ess = brmst::effective_sample_size(draws, j);
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const brmst::RmstSummary& s) {
  Json j;
  j["mode"] = number(s.mode);
  j["median"] = number(s.median);
  j["mean"] = number(s.mean);
  j["se"] = number(s.sd);
  j["ci"] = {{"level", s.interval.level}, {"lo", number(s.interval.lo)}, {"hi", number(s.interval.hi)}};
  Json probs = Json::array();
  for (const auto& e : s.exceedance) probs.push_back({{"threshold", e.threshold}, {"probability", e.probability}});
  j["below_threshold"] = probs;
  return j;
}

Json to_json(const ParameterRow& row) {
  Json j;
  j["name"] = row.name;
  j["mode"] = number(row.summary.mode);
  j["median"] = number(row.summary.median);
  j["mean"] = number(row.summary.mean);
  j["se"] = number(row.summary.sd);
  j["lo"] = number(row.summary.interval.lo);
  j["hi"] = number(row.summary.interval.hi);
  j["rhat"] = number(row.rhat);
  j["ess"] = number(row.ess);
  return j;
}

Json to_json(const brmst::Histogram& h) { return {{"edges", h.edges}, {"counts", h.counts}}; }

Json to_json(const brmst::ForestRow& row) {
  return {{"label", row.label}, {"mean", number(row.mean)}, {"lo", number(row.lo)}, {"hi", number(row.hi)}};
}

Json to_json(const brmst::WaicResult& w) {
  Json j;
  j["waic"] = number(w.waic);
  j["lppd"] = number(w.lppd);
  j["p_waic"] = number(w.p_waic);
  j["degenerate"] = w.degenerate;
  return j;
}

Json to_json(const brmst::ReplicationRecord& r) {
  Json j;
  j["replicate"] = r.replicate;
  j["ok"] = r.ok;
  if (!r.ok) {
    j["error"] = r.error;
    return j;
  }
  j["mean"] = number(r.mean);
  j["median"] = number(r.median);
  j["mode"] = number(r.mode);
  j["lo"] = number(r.lo);
  j["hi"] = number(r.hi);
  j["max_rhat"] = number(r.max_rhat);
  j["min_ess"] = number(r.min_ess);
  return j;
}

Json to_json(const brmst::SimMetrics& m) {
  Json j;
  j["bias"] = number(m.bias);
  j["mse"] = number(m.mse);
  j["mode"] = number(m.mode_diff);
  j["median"] = number(m.median_diff);
  j["coverage"] = number(m.coverage);
  j["succeeded"] = m.succeeded;
  j["failed"] = m.failed;
  return j;
}

void print_parameter_table(std::ostream& out, const std::vector<ParameterRow>& rows) {
  std::size_t width = 9;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  out << pad_right("parameter", width) << pad("mode", 10) << pad("median", 10) << pad("mean", 10) << pad("se", 10)
      << pad("ci", 22) << pad("rhat", 7) << pad("ess", 8) << '\n';
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out << pad_right(r.name, width) << pad(fmt(s.mode), 10) << pad(fmt(s.median), 10) << pad(fmt(s.mean), 10)
        << pad(fmt(s.sd), 10) << pad("(" + fmt(s.interval.lo) + ", " + fmt(s.interval.hi) + ")", 22)
        << pad(fmt(r.rhat, 2), 7) << pad(fmt(r.ess, 0), 8) << '\n';
  }
}

void print_rmst_table(std::ostream& out, const std::vector<std::pair<std::string, brmst::RmstSummary>>& rows) {
  out << pad_right("rmst", 12) << pad("mode", 10) << pad("median", 10) << pad("mean", 10) << pad("se", 10)
      << pad("ci", 22) << '\n';
  for (const auto& [name, s] : rows)
    out << pad_right(name, 12) << pad(fmt(s.mode), 10) << pad(fmt(s.median), 10) << pad(fmt(s.mean), 10)
        << pad(fmt(s.sd), 10) << pad("(" + fmt(s.interval.lo) + ", " + fmt(s.interval.hi) + ")", 22) << '\n';
}

void print_exceedance(std::ostream& out, const brmst::RmstSummary& difference) {
  for (const auto& e : difference.exceedance)
    out << "P(difference < " << fmt(e.threshold, 2) << ") = " << fmt(e.probability) << '\n';
}

void print_forest(std::ostream& out, const std::vector<brmst::ForestRow>& rows) {
  out << pad_right("cluster", 12) << pad("mean", 10) << pad("ci", 22) << '\n';
  for (const auto& r : rows)
    out << pad_right(r.label, 12) << pad(fmt(r.mean), 10) << pad("(" + fmt(r.lo) + ", " + fmt(r.hi) + ")", 22) << '\n';
}

void write_atomically(const Json& doc, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw std::runtime_error("failed writing '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target);
}

}  // namespace report
