#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperagg/adversarial.hpp"
#include "hyperagg/aggregate.hpp"
#include "hyperagg/core.hpp"
#include "hyperagg/experiments.hpp"
#include "hyperagg/lars.hpp"
#include "hyperagg/preselect.hpp"

namespace hyperagg {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Header row plus numeric rows with a consistent column count. Parse
/// failures raise ValidationError carrying the 0-based data row and column.
CsvTable parse_csv(const std::string& text);
CsvTable read_csv_file(const std::string& path);

/// A dictionary file: columns `y,f_1,...,f_M[,split]`. A trailing `split`
/// column with values 1/2 pins the training/validation partition.
struct DictionaryData {
  std::shared_ptr<const Sample> sample;
  Dictionary dict;
  std::optional<SplitSample> pinned_split;
};

DictionaryData dictionary_from_csv(const CsvTable& table);

/// A regression file: first column y, remaining columns features.
struct RegressionData {
  Matrix x;
  Vector y;
  std::vector<std::string> feature_names;
};

RegressionData regression_from_csv(const CsvTable& table);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// Writes via a temporary file in the same directory and renames it over
/// `path`, so readers never observe a partial file.
void write_file_atomic(const std::string& path, const std::string& content);

nlohmann::json to_json(const PreselectResult& r, const Dictionary& dict);
nlohmann::json to_json(const AggregateResult& r, const Dictionary& dict);
nlohmann::json to_json(const std::map<std::string, MethodSummary>& summary);

std::string knots_csv(const LassoPath& path, const std::vector<std::string>& feature_names);

}  // namespace hyperagg
