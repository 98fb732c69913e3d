#include "brmst/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace brmst {

namespace {

using Row = std::vector<std::string>;

std::vector<Row> split_records(std::string_view text) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw CsvError("unterminated quoted field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool is_na(const std::string& s) { return s.empty() || s == "NA" || s == "na" || s == "NaN" || s == "."; }

std::optional<double> parse_number(const std::string& s) {
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

// Numeric labels sort by value, anything else lexicographically after them.
bool label_less(const std::string& a, const std::string& b) {
  const auto x = parse_number(a);
  const auto y = parse_number(b);
  if (x && y) return *x < *y || (*x == *y && a < b);
  if (x != y) return x.has_value();
  return a < b;
}

std::string list_rows(const std::vector<std::size_t>& rows) {
  std::ostringstream out;
  const std::size_t shown = std::min<std::size_t>(rows.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) out << (i ? ", " : "") << rows[i];
  if (rows.size() > shown) out << ", ... (" << rows.size() << " rows)";
  return out.str();
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

NaPolicy parse_na_policy(std::string_view name) {
  if (name == "error") return NaPolicy::Error;
  if (name == "drop") return NaPolicy::Drop;
  throw std::invalid_argument("unknown NA policy '" + std::string(name) + "' (expected error or drop)");
}

SurvivalDataset parse_csv(std::string_view text, const CsvSchema& schema) {
  std::vector<Row> records = split_records(text);
  if (records.empty()) throw CsvError("CSV input is empty; a header row is required");
  Row header = records.front();
  for (auto& h : header) h = trim(h);
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  auto find = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw CsvError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t time_col = find(schema.time_column);
  const std::size_t event_col = find(schema.event_column);
  const std::size_t group_col = find(schema.group_column);
  const std::optional<std::size_t> cluster_col =
      schema.cluster_column.empty() ? std::nullopt : std::optional<std::size_t>(find(schema.cluster_column));
  std::vector<std::size_t> cov_cols;
  for (const auto& name : schema.covariates) cov_cols.push_back(find(name));
  for (const auto& name : schema.categorical)
    if (std::find(schema.covariates.begin(), schema.covariates.end(), name) == schema.covariates.end())
      throw CsvError("categorical column '" + name + "' is not among the covariates");

  std::vector<std::size_t> used{time_col, event_col, group_col};
  if (cluster_col) used.push_back(*cluster_col);
  used.insert(used.end(), cov_cols.begin(), cov_cols.end());

  // Row numbers in messages count the header as line 1.
  std::vector<Row> kept;
  std::vector<std::size_t> kept_line;
  std::vector<std::size_t> short_rows, na_rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    Row row = records[r];
    for (auto& f : row) f = trim(f);
    if (row.size() != header.size()) {
      short_rows.push_back(r + 1);
      continue;
    }
    const bool has_na = std::any_of(used.begin(), used.end(), [&](std::size_t c) { return is_na(row[c]); });
    if (has_na) {
      na_rows.push_back(r + 1);
      if (schema.na_policy == NaPolicy::Drop) continue;
    }
    kept.push_back(std::move(row));
    kept_line.push_back(r + 1);
  }
  if (!short_rows.empty()) throw CsvError("wrong number of fields on line(s) " + list_rows(short_rows));
  if (!na_rows.empty() && schema.na_policy == NaPolicy::Error)
    throw CsvError("missing values on line(s) " + list_rows(na_rows));
  if (kept.empty()) throw CsvError("no data rows");

  const auto n = static_cast<Eigen::Index>(kept.size());
  SurvivalDataset data;
  data.time.resize(n);
  data.event.resize(n);
  std::vector<std::size_t> bad_time, bad_event, bad_group;
  Eigen::VectorXd group(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Row& row = kept[static_cast<std::size_t>(i)];
    const auto line = kept_line[static_cast<std::size_t>(i)];
    const auto t = parse_number(row[time_col]);
    if (!t || !(*t > 0.0)) bad_time.push_back(line);
    data.time(i) = t.value_or(0.0);
    const auto e = parse_number(row[event_col]);
    if (!e || (*e != 0.0 && *e != 1.0)) bad_event.push_back(line);
    data.event(i) = e && *e == 1.0 ? 1 : 0;
    const auto g = parse_number(row[group_col]);
    if (!g || (*g != 0.0 && *g != 1.0)) bad_group.push_back(line);
    group(i) = g.value_or(0.0);
  }
  if (!bad_time.empty()) throw CsvError("time must be a positive number on line(s) " + list_rows(bad_time));
  if (!bad_event.empty()) throw CsvError("event must be 0 or 1 on line(s) " + list_rows(bad_event));
  if (!bad_group.empty()) throw CsvError("group must be 0 or 1 on line(s) " + list_rows(bad_group));

  std::vector<Eigen::VectorXd> columns{Eigen::VectorXd::Ones(n), group};
  data.covariate_names = {"intercept", schema.group_column};
  for (std::size_t k = 0; k < cov_cols.size(); ++k) {
    const std::string& name = schema.covariates[k];
    const std::size_t col = cov_cols[k];
    bool categorical =
        std::find(schema.categorical.begin(), schema.categorical.end(), name) != schema.categorical.end();
    for (const Row& row : kept)
      if (!parse_number(row[col])) categorical = true;
    if (!categorical) {
      Eigen::VectorXd values(n);
      for (Eigen::Index i = 0; i < n; ++i) values(i) = *parse_number(kept[static_cast<std::size_t>(i)][col]);
      columns.push_back(values);
      data.covariate_names.push_back(name);
      continue;
    }
    std::vector<std::string> levels;
    for (const Row& row : kept) levels.push_back(row[col]);
    std::sort(levels.begin(), levels.end(), label_less);
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (std::size_t l = 1; l < levels.size(); ++l) {
      Eigen::VectorXd dummy(n);
      for (Eigen::Index i = 0; i < n; ++i) dummy(i) = kept[static_cast<std::size_t>(i)][col] == levels[l] ? 1.0 : 0.0;
      columns.push_back(dummy);
      data.covariate_names.push_back(name + ":" + levels[l]);
    }
  }
  data.design.resize(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) data.design.col(static_cast<Eigen::Index>(j)) = columns[j];

  data.cluster.resize(n);
  if (!cluster_col) {
    data.cluster_labels = {"1"};
    data.cluster.setZero();
  } else {
    std::vector<std::string> labels;
    for (const Row& row : kept) labels.push_back(row[*cluster_col]);
    std::sort(labels.begin(), labels.end(), label_less);
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    std::map<std::string, int> index;
    for (std::size_t l = 0; l < labels.size(); ++l) index[labels[l]] = static_cast<int>(l);
    for (Eigen::Index i = 0; i < n; ++i) data.cluster(i) = index.at(kept[static_cast<std::size_t>(i)][*cluster_col]);
    data.cluster_labels = std::move(labels);
  }
  data.validate();
  return data;
}

SurvivalDataset ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), schema);
}

std::string to_csv(const SurvivalDataset& data) {
  data.validate();
  if (data.covariates() < 2) throw std::invalid_argument("to_csv: design lacks a group column");
  std::ostringstream out;
  out << "time,event,cluster";
  for (Eigen::Index j = 1; j < data.covariates(); ++j) out << ',' << quote(data.covariate_names[static_cast<std::size_t>(j)]);
  out << '\n';
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    out << format_double(data.time(i)) << ',' << data.event(i) << ','
        << quote(data.cluster_labels[static_cast<std::size_t>(data.cluster(i))]);
    for (Eigen::Index j = 1; j < data.covariates(); ++j) out << ',' << format_double(data.design(i, j));
    out << '\n';
  }
  return out.str();
}

void write_csv(const SurvivalDataset& data, const std::string& path) {
  const std::string text = to_csv(data);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CsvError("cannot write '" + path + "'");
  out << text;
  if (!out) throw CsvError("failed writing '" + path + "'");
}

CsvSchema schema_for(const SurvivalDataset& data) {
  CsvSchema schema;
  schema.group_column = data.covariate_names.at(1);
  for (std::size_t j = 2; j < data.covariate_names.size(); ++j) schema.covariates.push_back(data.covariate_names[j]);
  return schema;
}

}  // namespace brmst
