#pragma once

#include "thick/complex.hpp"
#include "thick/geometry.hpp"
#include "thick/stats.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace thick {

// Experiment description. Text form: one "key = value" per line, '#'
// comments, lists separated by commas.
struct SweepConfig {
  std::string generator = "random_bipartite";
  std::string construction = "random";
  std::vector<std::string> measures{"thickness"};
  std::vector<int> sizes;  // key "N"
  int seeds = 1;
  std::uint64_t seed = 1;
  int n = 3;
  int k = 1;
  int D = 2;
  int degree = 6;
  double R = 10.0;
  double T = 1.0;
  int retries = 1000;
  int jobs = 1;
};

SweepConfig parse_config(const std::string& text);
std::vector<std::string> generator_names();
std::vector<std::string> construction_names();
std::vector<std::string> measure_names();

SimplicialComplex generate(const std::string& name, int N, const SweepConfig& cfg, std::uint64_t seed);
EmbeddedComplex construct(const std::string& name, const SimplicialComplex& X, int N, const SweepConfig& cfg,
                          std::uint64_t seed);
double measure(const std::string& name, const EmbeddedComplex& E, const SweepConfig& cfg, std::uint64_t seed);

struct SweepRow {
  int N = 0;
  int seed = 0;
  std::string measure;
  double value = 0.0;
};

struct SweepFit {
  std::string measure;
  std::vector<int> sizes;
  std::vector<double> medians;
  LineFit fit;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by (measure, N, seed)
  std::vector<SweepFit> fits;  // one per measure with at least two sizes
};

SweepTable run_sweep(const SweepConfig& cfg);
std::string rows_csv(const SweepTable& t);
std::string fits_csv(const SweepTable& t);

// Generic CSV table of strings.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
Table parse_csv(const std::string& text);

struct PlotOptions {
  std::string x = "N";
  std::string y = "value";
  std::string measure;  // when set, keep rows whose "measure" column matches
  bool median_by_x = true;
};
// Log-log scatter with a least-squares line, as a standalone SVG document.
// Returns the fit that is drawn and annotated.
LineFit render_scaling_plot(const Table& t, const std::string& out_path, const PlotOptions& opt = {});
std::string scaling_plot_svg(const Table& t, const PlotOptions& opt, LineFit* fit = nullptr);

}  // namespace thick
