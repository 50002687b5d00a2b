#include "hyperagg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace hyperagg {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string cell(std::size_t row, std::size_t col) {
  return " (row " + std::to_string(row) + ", column " + std::to_string(col) + ")";
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (!have_header) {
      for (auto f : fields) t.header.emplace_back(f);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size())
      throw ValidationError("csv row " + std::to_string(data_row) + " has " + std::to_string(fields.size()) +
                                " fields, header has " + std::to_string(t.header.size()),
                            data_row, fields.size());
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[c]);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw ValidationError("csv: cannot parse '" + std::string(f) + "'" + cell(data_row, c), data_row, c);
      if (!std::isfinite(row[c]))
        throw ValidationError("csv: non-finite value" + cell(data_row, c), data_row, c);
    }
    t.rows.push_back(std::move(row));
    ++data_row;
  }
  if (!have_header) throw ValidationError("csv: missing header row");
  return t;
}

CsvTable read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

DictionaryData dictionary_from_csv(const CsvTable& table) {
  const bool has_split = !table.header.empty() && table.header.back() == "split";
  const std::size_t cols = table.header.size();
  const std::size_t m = cols - 1 - (has_split ? 1 : 0);
  if (cols < 1 || m < 2) throw ValidationError("dictionary csv needs a y column and at least 2 predictors");
  const auto n = static_cast<Eigen::Index>(table.rows.size());

  Vector y(n);
  PredMatrix preds(static_cast<Eigen::Index>(m), n);
  IndexSet idx1, idx2;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    y(i) = row[0];
    for (std::size_t j = 0; j < m; ++j) preds(static_cast<Eigen::Index>(j), i) = row[j + 1];
    if (has_split) {
      const double s = row[cols - 1];
      if (s == 1.0) idx1.push_back(static_cast<std::size_t>(i));
      else if (s == 2.0) idx2.push_back(static_cast<std::size_t>(i));
      else throw ValidationError("split column must hold 1 or 2" + cell(static_cast<std::size_t>(i), cols - 1),
                                 static_cast<std::size_t>(i), cols - 1);
    }
  }
  std::vector<std::string> labels(table.header.begin() + 1, table.header.begin() + 1 + static_cast<std::ptrdiff_t>(m));
  auto sample = std::make_shared<const Sample>(std::move(y));
  DictionaryData out{sample, dictionary_from_predictions(std::move(preds), std::move(labels)), std::nullopt};
  if (has_split) out.pinned_split.emplace(sample, std::move(idx1), std::move(idx2));
  return out;
}

RegressionData regression_from_csv(const CsvTable& table) {
  if (table.header.size() < 2) throw ValidationError("regression csv needs y and at least one feature");
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const auto p = static_cast<Eigen::Index>(table.header.size() - 1);
  RegressionData out{Matrix(n, p), Vector(n), {table.header.begin() + 1, table.header.end()}};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    out.y(i) = row[0];
    for (Eigen::Index j = 0; j < p; ++j) out.x(i, j) = row[static_cast<std::size_t>(j + 1)];
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move output into '" + path + "': " + ec.message());
  }
}

nlohmann::json to_json(const PreselectResult& r, const Dictionary& dict) {
  nlohmann::json predictors = nlohmann::json::array();
  std::size_t next_kept = 0;
  for (std::size_t j = 0; j < r.risks.size(); ++j) {
    const bool kept = next_kept < r.kept.size() && r.kept[next_kept] == j;
    if (kept) ++next_kept;
    predictors.push_back({{"index", j},
                          {"label", dict.labels()[j]},
                          {"risk", r.risks[j]},
                          {"threshold", r.thresholds[j]},
                          {"kept", kept}});
  }
  return {{"kept", r.kept}, {"erm_index", r.erm_index}, {"phi", r.phi}, {"predictors", predictors}};
}

nlohmann::json to_json(const AggregateResult& r, const Dictionary& dict) {
  nlohmann::json weights = nlohmann::json::array();
  for (std::size_t j : r.weights.support())
    weights.push_back({{"index", j}, {"label", dict.labels()[j]},
                       {"value", r.weights.theta()(static_cast<Eigen::Index>(j))}});
  nlohmann::json out{{"variant", std::string(to_string(r.variant))},
                     {"weights", weights},
                     {"converged", r.converged}};
  out["lambda"] = r.lambda ? nlohmann::json(*r.lambda) : nlohmann::json();
  out["pair"] = r.pair ? nlohmann::json::array({r.pair->first, r.pair->second}) : nlohmann::json();
  out["validation_risk"] = r.validation_risk ? nlohmann::json(*r.validation_risk) : nlohmann::json();
  if (r.variant != Variant::aew && r.variant != Variant::acew) {
    out["kept"] = r.kept;
    out["erm_index"] = r.erm_index ? nlohmann::json(*r.erm_index) : nlohmann::json();
  }
  if (r.variant == Variant::convex_hull) {
    out["duality_gap"] = r.duality_gap ? nlohmann::json(*r.duality_gap) : nlohmann::json();
    out["iterations"] = r.iterations;
  }
  return out;
}

nlohmann::json to_json(const std::map<std::string, MethodSummary>& summary) {
  auto stats = [](const ErrorSummary& s) {
    return nlohmann::json{{"count", s.count}, {"mean", s.mean}, {"median", s.median}, {"q1", s.q1}, {"q3", s.q3}};
  };
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [method, s] : summary)
    out[method] = {{"beta_err", stats(s.beta_err)}, {"pred_err", stats(s.pred_err)}};
  return out;
}

std::string knots_csv(const LassoPath& path, const std::vector<std::string>& feature_names) {
  std::ostringstream out;
  out << "step,penalty_level,df,rss";
  for (const auto& name : feature_names) out << ',' << name;
  out << '\n';
  for (std::size_t k = 0; k < path.knots.size(); ++k) {
    const auto& knot = path.knots[k];
    out << k << ',' << format_double(knot.penalty_level) << ',' << knot.active_set.size() << ','
        << format_double(knot.rss);
    for (Eigen::Index j = 0; j < knot.coefs.size(); ++j) out << ',' << format_double(knot.coefs(j));
    out << '\n';
  }
  return out.str();
}

}  // namespace hyperagg
