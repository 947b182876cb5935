#include "thick/sweep.hpp"

#include "thick/construct.hpp"
#include "thick/error.hpp"
#include "thick/io.hpp"
#include "thick/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace thick {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

void require_known(const std::string& what, const std::string& name, const std::vector<std::string>& valid) {
  if (std::find(valid.begin(), valid.end(), name) == valid.end())
    throw ConfigError("unknown " + what + " '" + name + "'; valid: " + join(valid));
}

long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' needs an integer, got '" + v + "'");
  }
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "' needs a number, got '" + v + "'");
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::vector<std::string> generator_names() {
  return {"cycle", "path", "complete", "grid", "random_bipartite", "simplex_skeleton", "cubical"};
}
std::vector<std::string> construction_names() {
  return {"random", "two_scale", "two_scale_strong", "folded_grid", "kb_sphere", "retraction"};
}
std::vector<std::string> measure_names() {
  return {"thickness", "strong_thickness", "radius", "bisect", "bisect_total", "vertices", "simplices", "volume"};
}

SweepConfig parse_config(const std::string& text) {
  SweepConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_sizes = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "generator") cfg.generator = value;
    else if (key == "construction") cfg.construction = value;
    else if (key == "measures") cfg.measures = split(value, ',');
    else if (key == "N") {
      have_sizes = true;
      cfg.sizes.clear();
      if (!value.empty())
        for (const auto& v : split(value, ',')) cfg.sizes.push_back(static_cast<int>(parse_int(key, v)));
    } else if (key == "seeds") cfg.seeds = static_cast<int>(parse_int(key, value));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "n") cfg.n = static_cast<int>(parse_int(key, value));
    else if (key == "k") cfg.k = static_cast<int>(parse_int(key, value));
    else if (key == "D") cfg.D = static_cast<int>(parse_int(key, value));
    else if (key == "degree") cfg.degree = static_cast<int>(parse_int(key, value));
    else if (key == "R") cfg.R = parse_double(key, value);
    else if (key == "T") cfg.T = parse_double(key, value);
    else if (key == "retries") cfg.retries = static_cast<int>(parse_int(key, value));
    else if (key == "jobs") cfg.jobs = static_cast<int>(parse_int(key, value));
    else throw ConfigError("unknown key '" + key + "'");
  }
  if (!have_sizes) throw ConfigError("config needs an N grid");
  return cfg;
}

static void validate(const SweepConfig& cfg) {
  require_known("generator", cfg.generator, generator_names());
  require_known("construction", cfg.construction, construction_names());
  if (cfg.measures.empty()) throw ConfigError("config needs at least one measure");
  for (const auto& m : cfg.measures) require_known("measure", m, measure_names());
  if (cfg.sizes.empty()) throw ConfigError("empty N grid");
  if (cfg.seeds < 1) throw ConfigError("seeds must be at least 1");
  if (cfg.jobs < 1) throw ConfigError("jobs must be at least 1");
}

SimplicialComplex generate(const std::string& name, int N, const SweepConfig& cfg, std::uint64_t seed) {
  if (name == "cycle") return cycle_graph(N);
  if (name == "path") return path_graph(N);
  if (name == "complete") return simplex_skeleton(1, N - 1);
  if (name == "grid") return grid_graph(N);
  if (name == "random_bipartite") return random_bipartite_graph(N, cfg.degree, seed);
  if (name == "simplex_skeleton") return simplex_skeleton(cfg.k, N);
  if (name == "cubical") return triangulate_cubical(grid_skeleton(cfg.k, cfg.D, N)).first;
  require_known("generator", name, generator_names());
  return {};
}

EmbeddedComplex construct(const std::string& name, const SimplicialComplex& X, int N, const SweepConfig& cfg,
                          std::uint64_t seed) {
  if (name == "random") return random_facewise_linear(X, cfg.n, cfg.R, seed);
  if (name == "two_scale") return two_scale_embedding(X, cfg.n, seed, false).embedding;
  if (name == "two_scale_strong") return two_scale_embedding(X, cfg.n, seed, true).embedding;
  if (name == "folded_grid") return folded_grid_embedding(N, cfg.n).embedding;
  if (name == "kb_sphere") return kb_sphere_embedding(X, seed, cfg.retries);
  if (name == "retraction") return retraction_embed_graph(X, cfg.n).embedding;
  require_known("construction", name, construction_names());
  return {};
}

double measure(const std::string& name, const EmbeddedComplex& E, const SweepConfig& cfg, std::uint64_t seed) {
  if (name == "thickness") return combinatorial_thickness(E);
  if (name == "strong_thickness") return strong_combinatorial_thickness(E);
  if (name == "radius") return enclosing_radius(E);
  if (name == "bisect") return bisecting_sweep(E, axis_directions(E.ambient_n())).best;
  if (name == "bisect_total") return bisecting_sweep(E, axis_directions(E.ambient_n())).best_total;
  if (name == "vertices") return E.complex.vertex_count();
  if (name == "simplices") return static_cast<double>(E.complex.total());
  if (name == "volume") return neighborhood_volume(E, cfg.T, 4000, seed).estimate;
  require_known("measure", name, measure_names());
  return 0.0;
}

SweepTable run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  struct Cell {
    int N, s;
  };
  std::vector<Cell> cells;
  for (int N : cfg.sizes)
    for (int s = 0; s < cfg.seeds; ++s) cells.push_back({N, s});
  std::vector<std::vector<SweepRow>> out(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cells.size();) {
      try {
        const auto [N, s] = cells[i];
        const std::uint64_t base = mix_seed(cfg.seed, static_cast<std::uint64_t>(N) * 1000003u + s);
        const SimplicialComplex X = generate(cfg.generator, N, cfg, mix_seed(base, 1));
        const EmbeddedComplex E = construct(cfg.construction, X, N, cfg, mix_seed(base, 2));
        for (const auto& m : cfg.measures) out[i].push_back({N, s, m, measure(m, E, cfg, mix_seed(base, 3))});
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < cfg.jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  SweepTable table;
  for (auto& v : out)
    for (auto& r : v) table.rows.push_back(std::move(r));
  std::sort(table.rows.begin(), table.rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.measure, a.N, a.seed) < std::tie(b.measure, b.N, b.seed);
  });
  std::vector<std::string> names = cfg.measures;
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  for (const auto& m : names) {
    SweepFit f;
    f.measure = m;
    std::map<int, std::vector<double>> by_n;
    for (const auto& r : table.rows)
      if (r.measure == m) by_n[r.N].push_back(r.value);
    std::vector<double> xs;
    for (const auto& [N, vals] : by_n) {
      f.sizes.push_back(N);
      f.medians.push_back(median(vals));
      xs.push_back(N);
    }
    if (f.sizes.size() >= 2) {
      try {
        f.fit = fit_loglog(xs, f.medians);
      } catch (const DataError&) {
        f.fit.slope = std::nan("");
      }
    }
    table.fits.push_back(f);
  }
  return table;
}

std::string rows_csv(const SweepTable& t) {
  std::string s = "N,seed,measure,value\n";
  for (const auto& r : t.rows) s += std::to_string(r.N) + "," + std::to_string(r.seed) + "," + r.measure + "," + fmt(r.value) + "\n";
  return s;
}

std::string fits_csv(const SweepTable& t) {
  std::string s = "measure,slope,slope_stderr,intercept\n";
  for (const auto& f : t.fits)
    s += f.measure + "," + fmt(f.fit.slope) + "," + fmt(f.fit.slope_stderr) + "," + fmt(f.fit.intercept) + "\n";
  return s;
}

// ------------------------------------------------------------ plotting

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (first) {
      t.header = cells;
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw DataError("CSV row has " + std::to_string(cells.size()) + " cells");
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

namespace {

std::size_t column(const Table& t, const std::string& name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  if (it == t.header.end()) throw DataError("table has no column '" + name + "'");
  return static_cast<std::size_t>(it - t.header.begin());
}

double numeric(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(x)) throw std::invalid_argument(s);
    return x;
  } catch (const std::exception&) {
    throw DataError("non-numeric value '" + s + "'");
  }
}

}  // namespace

std::string scaling_plot_svg(const Table& t, const PlotOptions& opt, LineFit* fit_out) {
  if (t.rows.empty()) throw DataError("cannot plot an empty table");
  const std::size_t cx = column(t, opt.x), cy = column(t, opt.y);
  std::map<double, std::vector<double>> groups;
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : t.rows) {
    if (!opt.measure.empty() && r[column(t, "measure")] != opt.measure) continue;
    const double x = numeric(r[cx]), y = numeric(r[cy]);
    if (opt.median_by_x) groups[x].push_back(y);
    else pts.push_back({x, y});
  }
  for (const auto& [x, ys] : groups) pts.push_back({x, median(ys)});
  if (pts.empty()) throw DataError("no rows left to plot");
  std::vector<double> px, py, xs, ys;
  for (const auto& [x, y] : pts) {
    if (!(x > 0 && y > 0)) throw DataError("log-log plot needs positive values");
    px.push_back(x);
    py.push_back(y);
    xs.push_back(std::log(x));
    ys.push_back(std::log(y));
  }
  LineFit fit;
  if (pts.size() >= 2) fit = fit_loglog(px, py);
  if (fit_out) *fit_out = fit;

  const double W = 640, H = 480, M = 60;
  double x0 = *std::min_element(xs.begin(), xs.end()), x1 = *std::max_element(xs.begin(), xs.end());
  double y0 = *std::min_element(ys.begin(), ys.end()), y1 = *std::max_element(ys.begin(), ys.end());
  if (x1 - x0 < 1e-12) { x0 -= 1; x1 += 1; }
  if (y1 - y0 < 1e-12) { y0 -= 1; y1 += 1; }
  auto X = [&](double lx) { return M + (lx - x0) / (x1 - x0) * (W - 2 * M); };
  auto Y = [&](double ly) { return H - M - (ly - y0) / (y1 - y0) * (H - 2 * M); };
  char buf[256];
  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" viewBox=\"0 0 %g %g\">\n", W, H, W, H);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<g class=\"axes\" stroke=\"black\"><line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\"/>"
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\"/></g>\n",
                M, H - M, W - M, H - M, M, H - M, M, M);
  svg += buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">log %s</text>\n", W / 2, H - 15, opt.x.c_str());
  svg += buf;
  std::snprintf(buf, sizeof buf, "<text x=\"15\" y=\"%g\" transform=\"rotate(-90 15 %g)\" text-anchor=\"middle\">log %s</text>\n",
                H / 2, H / 2, opt.y.c_str());
  svg += buf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof buf, "<circle class=\"marker\" cx=\"%.3f\" cy=\"%.3f\" r=\"4\" fill=\"steelblue\"/>\n",
                  X(xs[i]), Y(ys[i]));
    svg += buf;
  }
  if (pts.size() >= 2) {
    const double ya = fit.intercept + fit.slope * x0, yb = fit.intercept + fit.slope * x1;
    std::snprintf(buf, sizeof buf,
                  "<line class=\"fit\" x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"firebrick\"/>\n", X(x0),
                  Y(ya), X(x1), Y(yb));
    svg += buf;
    std::snprintf(buf, sizeof buf, "<text class=\"slope\" x=\"%g\" y=\"%g\">slope = %.3f &#177; %.3f</text>\n", M + 10,
                  M - 20, fit.slope, fit.slope_stderr);
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

LineFit render_scaling_plot(const Table& t, const std::string& out_path, const PlotOptions& opt) {
  LineFit fit;
  const std::string svg = scaling_plot_svg(t, opt, &fit);
  write_text_file(out_path, svg);
  return fit;
}

}  // namespace thick
