#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "hyperagg/cli.hpp"

namespace fixture {

struct Run {
  int code;
  std::string out;
  std::string err;
};

inline Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = hyperagg::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// A scratch directory holding a dictionary CSV and a regression CSV.
struct Files {
  std::filesystem::path dir;
  std::string dict;
  std::string dict_split;
  std::string reg;

  explicit Files(const std::string& tag) {
    dir = std::filesystem::temp_directory_path() / ("hyperagg_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    dict = (dir / "dict.csv").string();
    dict_split = (dir / "dict_split.csv").string();
    reg = (dir / "reg.csv").string();
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    std::ofstream d(dict), ds(dict_split), r(reg);
    d << "y,f_1,f_2,f_3,f_4,f_5,f_6\n";
    ds << "y,f_1,f_2,f_3,f_4,f_5,f_6,split\n";
    for (int i = 0; i < 60; ++i) {
      const double y = g(rng);
      std::ostringstream row;
      row.precision(17);
      row << y;
      for (int j = 0; j < 6; ++j) row << ',' << (0.2 * j * y + 0.6 * g(rng));
      d << row.str() << '\n';
      ds << row.str() << ',' << (i % 3 == 0 ? 2 : 1) << '\n';
    }
    r.precision(17);
    r << "y,x1,x2,x3,x4,x5\n";
    for (int i = 0; i < 40; ++i) {
      double x[5], y = 0.3;
      for (int j = 0; j < 5; ++j) x[j] = g(rng);
      y += 2 * x[0] - x[3] + 0.5 * x[4] + 0.4 * g(rng);
      r << y;
      for (double v : x) r << ',' << v;
      r << '\n';
    }
  }
  ~Files() {
    std::error_code ec;
    std::filesystem::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

// One small invocation of every subcommand.
inline std::vector<std::vector<std::string>> every_subcommand(const Files& f) {
  return {
      {"aggregate", "--input", f.dict, "--variant", "star", "--split", "random"},
      {"aggregate", "--input", f.dict, "--variant", "segment"},
      {"aggregate", "--input", f.dict, "--variant", "convex", "--split", "random"},
      {"aggregate", "--input", f.dict_split, "--variant", "aew", "--temperature", "2"},
      {"aggregate", "--input", f.dict, "--variant", "acew", "--temperature", "2", "--format", "csv"},
      {"preselect", "--input", f.dict, "--split", "random"},
      {"preselect", "--input", f.dict_split, "--format", "csv"},
      {"adversarial-demo", "--M", "16", "--M", "64", "--n", "100", "--reps", "200", "--star"},
      {"lasso-experiment", "--n", "70", "--sigma", "2", "--reps", "4", "--jackknife", "2"},
      {"lasso-experiment", "--n", "70", "--sigma", "5", "--reps", "3", "--jackknife", "2", "--dictionary", "full",
       "--format", "json"},
      {"lars-path", "--input", f.reg},
      {"lars-path", "--input", f.reg, "--no-standardize", "--format", "json"},
  };
}

}  // namespace fixture
