// Command-line front end: gen, embed, measure, width, nerve, knot, sweep, plot.
#include "thick/blocks.hpp"
#include "thick/construct.hpp"
#include "thick/error.hpp"
#include "thick/io.hpp"
#include "thick/knot.hpp"
#include "thick/nerve.hpp"
#include "thick/sweep.hpp"
#include "thick/width.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace thick;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string out;  // empty: stdout
  std::string format = "json";
  int jobs = 1;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) std::cout << text;
  else write_text_file(g.out, text);
}

// Flat key/value reports come out either as JSON or as a two-column CSV.
void emit_report(const Globals& g, const Json& j) {
  if (g.format == "csv") {
    std::string s = "key,value\n";
    for (const auto& [k, v] : j.items()) s += k + "," + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    emit(g, s);
  } else {
    emit(g, dump(j));
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PLKnot knot_from(const std::string& file, const std::vector<int>& torus, int points) {
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open " + file);
    return read_knot(in);
  }
  if (torus.size() == 2) return torus_knot(torus[0], torus[1], 10.0, 2.0, points);
  throw ParameterError("knot needs --in FILE or --torus P,Q");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thickbench: thick embeddings, width and knot geometry workbench"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--out", g.out, "output file (default stdout)");
  app.add_option("--format", g.format, "csv or json (structured-text is an alias for json)")
      ->check(CLI::IsMember({"csv", "json", "structured-text"}));
  app.add_option("--jobs", g.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a complex");
  std::string gen_type = "cycle";
  int gen_N = 8;
  SweepConfig gen_cfg;
  gen->add_option("--type", gen_type, "generator")->check(CLI::IsMember(generator_names()));
  gen->add_option("--N", gen_N, "size parameter");
  gen->add_option("--k", gen_cfg.k, "skeleton dimension");
  gen->add_option("--D", gen_cfg.D, "lattice dimension");
  gen->add_option("--degree", gen_cfg.degree, "matchings in random_bipartite");

  // embed
  auto* embed = app.add_subcommand("embed", "embed a complex");
  std::string embed_in, embed_method = "random";
  SweepConfig embed_cfg;
  int embed_N = 0;
  embed->add_option("--in", embed_in, "complex JSON")->required();
  embed->add_option("--method", embed_method, "construction")->check(CLI::IsMember(construction_names()));
  embed->add_option("--n", embed_cfg.n, "ambient dimension");
  embed->add_option("--R", embed_cfg.R, "ball radius for random");
  embed->add_option("--retries", embed_cfg.retries, "edge retries for kb_sphere");
  embed->add_option("--N", embed_N, "grid side for folded_grid");

  // measure
  auto* meas = app.add_subcommand("measure", "measure an embedding");
  std::string meas_in;
  std::vector<std::string> meas_what{"thickness"};
  double meas_T = 1.0;
  meas->add_option("--in", meas_in, "embedding JSON")->required();
  meas->add_option("--what", meas_what, "measures")->delimiter(',')->check(CLI::IsMember(measure_names()));
  meas->add_option("--T", meas_T, "neighbourhood radius for volume");

  // width
  auto* width = app.add_subcommand("width", "filling estimates and width bounds on X^{k,D}(S)");
  int w_D = 2, w_k = 1, w_S = 8, w_samples = 20, w_res = 64;
  width->add_option("--D", w_D);
  width->add_option("--k", w_k);
  width->add_option("--S", w_S);
  width->add_option("--samples", w_samples);
  width->add_option("--resolution", w_res);

  // nerve
  auto* nerve = app.add_subcommand("nerve", "ball-cover nerve report");
  std::string nerve_in;
  double nerve_T = 0.5;
  nerve->add_option("--in", nerve_in, "embedding JSON")->required();
  nerve->add_option("--T", nerve_T, "cover scale");

  // knot
  auto* knot = app.add_subcommand("knot", "knot geometry");
  std::string knot_in;
  std::vector<int> knot_torus;
  int knot_points = 200;
  std::vector<std::string> knot_what{"distortion", "convol"};
  double knot_tol = 1e-3;
  std::size_t knot_budget = 10'000'000, convol_budget = 20000;
  knot->add_option("--in", knot_in, "knot file (x y z per line)");
  knot->add_option("--torus", knot_torus, "torus knot P,Q")->delimiter(',')->expected(2);
  knot->add_option("--points", knot_points, "torus knot vertex count");
  knot->add_option("--what", knot_what, "distortion, convol, lemma, blocks, tree")
      ->delimiter(',')
      ->check(CLI::IsMember({"distortion", "convol", "lemma", "blocks", "tree"}));
  knot->add_option("--tol", knot_tol, "distortion relative tolerance");
  knot->add_option("--budget", knot_budget, "distortion evaluation budget");
  knot->add_option("--convol-budget", convol_budget, "conformal length evaluation budget");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run an N sweep from a config file");
  std::string sweep_cfg;
  std::string fits_out;
  sweep->add_option("--config", sweep_cfg, "config file")->required();
  sweep->add_option("--fits", fits_out, "also write the slope fits CSV here");

  // plot
  auto* plot = app.add_subcommand("plot", "log-log SVG of a CSV table");
  std::string plot_in;
  PlotOptions plot_opt;
  plot->add_option("--in", plot_in, "CSV file")->required();
  plot->add_option("--x", plot_opt.x);
  plot->add_option("--y", plot_opt.y);
  plot->add_option("--measure", plot_opt.measure);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (g.format == "structured-text") g.format = "json";

  try {
    if (gen->parsed()) {
      const SimplicialComplex X = generate(gen_type, gen_N, gen_cfg, g.seed);
      emit(g, dump(to_json(X)));
    } else if (embed->parsed()) {
      const SimplicialComplex X = simplicial_from_json(read_json_file(embed_in));
      if (embed_method == "folded_grid" && embed_N == 0) {
        int s = 1;
        while (s * s < X.vertex_count()) ++s;
        embed_N = s;
      }
      emit(g, dump(to_json(construct(embed_method, X, embed_N, embed_cfg, g.seed))));
    } else if (meas->parsed()) {
      const EmbeddedComplex E = embedding_from_json(read_json_file(meas_in));
      SweepConfig cfg;
      cfg.T = meas_T;
      Json r = {{"kind", "measures"}};
      for (const auto& m : meas_what) r[m] = measure(m, E, cfg, g.seed);
      emit_report(g, r);
    } else if (width->parsed()) {
      const CubicalComplex X = grid_skeleton(w_k, w_D, w_S);
      std::vector<double> fills;
      for (int j = 1; j <= w_k; ++j) fills.push_back(fill_constant_estimate(w_D, w_k, w_S, j, w_samples, g.seed));
      const WidthBound lo = width_lower_bound_filling(X, fills);
      Eigen::MatrixXd F = lattice_coordinates(X).topRows(w_k);
      Json r = {{"kind", "width_report"}, {"D", w_D}, {"k", w_k}, {"S", w_S}, {"fills", fills},
                {"lower_bound", lo.value}, {"lower_source", lo.source},
                {"coordinate_map_upper", pl_map_width_upper(X, F, w_res)}};
      if (g.format == "csv") {
        emit(g, "mode,bound,witness\nfilling," + std::to_string(lo.value) + "," +
                    std::to_string(r["coordinate_map_upper"].get<int>()) + "\n");
      } else {
        emit(g, dump(r));
      }
    } else if (nerve->parsed()) {
      const EmbeddedComplex E = embedding_from_json(read_json_file(nerve_in));
      const NerveReport R = homotopy_invariant_report(E, nerve_T, g.seed);
      if (g.format == "csv") {
        std::string betti;
        for (int b : R.betti) betti += (betti.empty() ? "" : " ") + std::to_string(b);
        emit(g, "ball_count,nerve_simplex_count,betti,volume,ratio\n" + std::to_string(R.ball_count) + "," +
                    std::to_string(R.nerve_simplex_count) + "," + betti + "," + std::to_string(R.volume.estimate) +
                    "," + std::to_string(R.ratio) + "\n");
      } else {
        emit(g, dump(to_json(R)));
      }
    } else if (knot->parsed()) {
      const PLKnot K = knot_from(knot_in, knot_torus, knot_points);
      Json r = {{"kind", "knot_report"}, {"points", K.size()}, {"length", K.total_length()}};
      for (const auto& w : knot_what) {
        if (w == "distortion") {
          const auto d = distortion(K, knot_tol, knot_budget);
          r["distortion_lo"] = d.lo;
          r["distortion_hi"] = d.hi;
        } else if (w == "convol") {
          const auto c = conformal_length(K, convol_budget, g.seed);
          r["convol_lower"] = c.lower;
          r["convol_center"] = {c.center.x(), c.center.y(), c.center.z()};
          r["convol_radius"] = c.radius;
        } else if (w == "lemma") {
          const auto c = check_lemma41(K, knot_tol, convol_budget);
          r["lemma_holds"] = c.holds;
          r["lemma_convol_lower"] = c.convol_lower;
          r["lemma_distortion_hi"] = c.distor.hi;
        } else if (w == "blocks") {
          const double bound = 1.2 * conformal_length(K, convol_budget, g.seed).lower;
          Eigen::Vector3d lo = K.vertex(0), hi = K.vertex(0);
          for (const auto& p : K.points()) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
          }
          const Eigen::Vector3d c = 0.5 * (lo + hi);
          const double half = 0.6 * (hi - lo).maxCoeff();
          const Block Q{c - Eigen::Vector3d::Constant(half), c + Eigen::Vector3d::Constant(half)};
          const Decomposition dec = block_decompose(Q, K, bound, g.seed, 100);
          r["blocks"] = dec.blocks.size();
          r["blocks_attempts"] = dec.attempts;
        } else if (w == "tree") {
          const BlockTree T = nested_block_tree(K, g.seed);
          if (knot_what.size() == 1) {
            emit(g, dump(to_json(T)));
            return 0;
          }
          r["tree_nodes"] = T.nodes.size();
          r["tree_properties_hold"] = T.properties_hold();
          r["tree_partition_error"] = T.partition_error();
        }
      }
      emit_report(g, r);
    } else if (sweep->parsed()) {
      SweepConfig cfg = parse_config(read_file(sweep_cfg));
      if (app.get_option("--jobs")->count() > 0) cfg.jobs = g.jobs;
      if (app.get_option("--seed")->count() > 0) cfg.seed = g.seed;
      const SweepTable t = run_sweep(cfg);
      if (g.format == "csv") {
        emit(g, rows_csv(t));
      } else {
        Json rows = Json::array(), fits = Json::array();
        for (const auto& r : t.rows) rows.push_back({{"N", r.N}, {"seed", r.seed}, {"measure", r.measure}, {"value", r.value}});
        for (const auto& f : t.fits)
          fits.push_back({{"measure", f.measure}, {"sizes", f.sizes}, {"medians", f.medians},
                          {"slope", f.fit.slope}, {"slope_stderr", f.fit.slope_stderr}});
        emit(g, dump({{"format_version", kFormatVersion}, {"kind", "sweep"}, {"rows", rows}, {"fits", fits}}));
      }
      if (!fits_out.empty()) write_text_file(fits_out, fits_csv(t));
    } else if (plot->parsed()) {
      if (g.out.empty()) throw ParameterError("plot needs --out");
      const LineFit f = render_scaling_plot(parse_csv(read_file(plot_in)), g.out, plot_opt);
      std::printf("slope %.3f +- %.3f\n", f.slope, f.slope_stderr);
    }
  } catch (const BudgetError& e) {
    std::fprintf(stderr, "budget error: %s (best interval [%.12g, %.12g])\n", e.what(), e.lo, e.hi);
    return 4;
  } catch (const ConstructionError& e) {
    std::fprintf(stderr, "construction error: %s\n", e.what());
    return 3;
  } catch (const DecompositionError& e) {
    std::fprintf(stderr, "decomposition error: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
