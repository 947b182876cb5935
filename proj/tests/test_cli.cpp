#include "doctest.h"

#include "thick/error.hpp"
#include "thick/io.hpp"
#include "thick/sweep.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace thick;

namespace {

int count_of(const std::string& s, const std::string& needle) {
  int n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

const char* kThicknessSweep = R"(# thickness of random embeddings of sparse graphs
generator = random_bipartite
construction = random
measures = thickness, vertices
N = 8, 16, 32
seeds = 2
seed = 3
n = 3
degree = 3
)";

}  // namespace

TEST_CASE("parse_config reads keys, lists and comments") {
  const SweepConfig c = parse_config(kThicknessSweep);
  CHECK(c.generator == "random_bipartite");
  CHECK(c.measures == std::vector<std::string>{"thickness", "vertices"});
  CHECK(c.sizes == std::vector<int>{8, 16, 32});
  CHECK(c.seeds == 2);
  CHECK(c.seed == 3);
  CHECK(c.degree == 3);
  CHECK(c.R == 10.0);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("generator = cycle\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N = 8\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N = 8, x\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("N 8\n"), ConfigError);
  CHECK_THROWS_AS(run_sweep(parse_config("N =\n")), ConfigError);
  try {
    run_sweep(parse_config("N = 8\ngenerator = mystery\n"));
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    for (const auto& name : generator_names()) CHECK(what.find(name) != std::string::npos);
  }
  CHECK_THROWS_AS(run_sweep(parse_config("N = 8\nmeasures = girth\n")), ConfigError);
}

TEST_CASE("generators build the advertised complexes") {
  SweepConfig cfg;
  CHECK(generate("cycle", 7, cfg, 1).count(1) == 7);
  CHECK(generate("path", 7, cfg, 1).count(1) == 6);
  CHECK(generate("complete", 5, cfg, 1).count(1) == 10);
  cfg.degree = 3;
  const auto G = generate("random_bipartite", 10, cfg, 1);
  CHECK(G.dim() == 1);
  CHECK(G.max_degree() <= 3);
}

TEST_CASE("run_sweep rows are sorted and deterministic") {
  SweepConfig cfg = parse_config(kThicknessSweep);
  const SweepTable a = run_sweep(cfg);
  CHECK(a.rows.size() == 3 * 2 * 2);
  for (std::size_t i = 1; i < a.rows.size(); ++i) {
    const auto& p = a.rows[i - 1];
    const auto& q = a.rows[i];
    CHECK(std::tie(p.measure, p.N, p.seed) < std::tie(q.measure, q.N, q.seed));
  }
  CHECK(rows_csv(run_sweep(cfg)) == rows_csv(a));
  cfg.jobs = 3;
  CHECK(rows_csv(run_sweep(cfg)) == rows_csv(a));
  REQUIRE(a.fits.size() == 2);
  CHECK(a.fits[0].measure == "thickness");
  CHECK(a.fits[0].sizes == std::vector<int>{8, 16, 32});
  CHECK(a.fits[0].fit.slope < 0);
}

TEST_CASE("csv tables round trip through parse_csv") {
  const SweepTable t = run_sweep(parse_config(kThicknessSweep));
  const Table p = parse_csv(rows_csv(t));
  CHECK(p.header == std::vector<std::string>{"N", "seed", "measure", "value"});
  CHECK(p.rows.size() == t.rows.size());
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), DataError);
}

TEST_CASE("scaling plot of a synthetic table") {
  const Table t = parse_csv("N,value\n2,8\n4,32\n8,128\n");
  LineFit fit;
  const std::string svg = scaling_plot_svg(t, {}, &fit);
  CHECK(count_of(svg, "class=\"marker\"") == 3);
  CHECK(count_of(svg, "class=\"fit\"") == 1);
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(svg.find("slope = 2.000") != std::string::npos);

  const auto path = std::filesystem::temp_directory_path() / "thick_plot_test.svg";
  const LineFit drawn = render_scaling_plot(t, path.string());
  CHECK(std::filesystem::exists(path));
  CHECK(drawn.slope == doctest::Approx(fit.slope));
  std::filesystem::remove(path);
}

TEST_CASE("plot slope matches the sweep fit") {
  const SweepTable t = run_sweep(parse_config(kThicknessSweep));
  PlotOptions opt;
  opt.measure = "thickness";
  LineFit fit;
  const std::string svg = scaling_plot_svg(parse_csv(rows_csv(t)), opt, &fit);
  char want[64];
  std::snprintf(want, sizeof want, "slope = %.3f", t.fits[0].fit.slope);
  CHECK(svg.find(want) != std::string::npos);
}

TEST_CASE("plot data errors") {
  CHECK_THROWS_AS(scaling_plot_svg(parse_csv("N,value\n"), {}), DataError);
  CHECK_THROWS_AS(scaling_plot_svg(parse_csv("N,value\n2,abc\n"), {}), DataError);
  CHECK_THROWS_AS(scaling_plot_svg(parse_csv("N,value\n2,-1\n4,3\n"), {}), DataError);
  CHECK_THROWS_AS(scaling_plot_svg(parse_csv("N,other\n2,1\n"), {}), DataError);
}

TEST_CASE("json round trips") {
  const auto X = random_bipartite_graph(6, 3, 4);
  CHECK(simplicial_from_json(to_json(X)) == X);
  const CubicalComplex Q(1, 2, 3);
  CHECK(cubical_from_json(to_json(Q)).count(1) == Q.count(1));
  EmbeddedComplex E{cycle_graph(4), Eigen::MatrixXd::Random(3, 4)};
  const auto F = embedding_from_json(Json::parse(dump(to_json(E))));
  CHECK(F.complex == E.complex);
  CHECK(F.coords == E.coords);
  const Gf2Chain c{1, {0, 3, 7}};
  CHECK(chain_from_json(to_json(c)) == c);

  Json bad = to_json(X);
  bad["format_version"] = 99;
  CHECK_THROWS_AS(simplicial_from_json(bad), InputError);
  CHECK_THROWS_AS(embedding_from_json(to_json(X)), InputError);
}

TEST_CASE("knot files round trip") {
  const PLKnot K({{0, 0, 0}, {1, 0.2, 0.3}, {0.5, 1, 0.7}});
  std::stringstream ss;
  write_knot(ss, K);
  const PLKnot L = read_knot(ss);
  REQUIRE(L.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK((L.vertex(i) - K.vertex(i)).norm() <= 1e-12);
  std::stringstream bad("# header\n1 2 3\n4 5\n");
  CHECK_THROWS_AS(read_knot(bad), InputError);
}
