#include "thick/io.hpp"

#include "thick/error.hpp"

#include <fstream>
#include <sstream>

namespace thick {

namespace {

void check_header(const Json& j, const char* kind) {
  if (!j.is_object()) throw InputError("expected a JSON object");
  if (j.value("format_version", 0) != kFormatVersion)
    throw InputError("unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");
  if (j.value("kind", std::string()) != kind) throw InputError(std::string("expected kind '") + kind + "'");
}

Json vec(const Eigen::Vector3d& v) { return Json::array({v.x(), v.y(), v.z()}); }

Json block_json(const Block& b) { return {{"lo", vec(b.lo)}, {"hi", vec(b.hi)}}; }

}  // namespace

Json to_json(const SimplicialComplex& X) {
  Json faces = Json::array();
  for (int j = 0; j <= X.dim(); ++j) faces.push_back(X.simplices(j));
  return {{"format_version", kFormatVersion}, {"kind", "simplicial"}, {"dim", X.dim()},
          {"vertex_count", X.vertex_count()}, {"faces_by_dim", faces}};
}

Json to_json(const CubicalComplex& X) {
  Json faces = Json::array();
  for (int j = 0; j <= X.dim(); ++j) {
    Json layer = Json::array();
    for (std::size_t id = 0; id < X.count(j); ++id) {
      const Cube c = X.face(j, static_cast<int>(id));
      layer.push_back({{"base", c.base}, {"dirs", c.dirs}});
    }
    faces.push_back(layer);
  }
  return {{"format_version", kFormatVersion}, {"kind", "cubical"}, {"dim", X.dim()},
          {"ambient_dim", X.ambient_dim()}, {"side", X.side()}, {"vertex_count", X.vertex_count()},
          {"faces_by_dim", faces}};
}

Json to_json(const EmbeddedComplex& E) {
  Json coords = Json::array();
  for (Eigen::Index v = 0; v < E.coords.cols(); ++v) {
    Json p = Json::array();
    for (Eigen::Index i = 0; i < E.coords.rows(); ++i) p.push_back(E.coords(i, v));
    coords.push_back(p);
  }
  return {{"format_version", kFormatVersion}, {"kind", "embedding"}, {"ambient_n", E.ambient_n()},
          {"complex", to_json(E.complex)}, {"coords", coords}};
}

Json to_json(const Gf2Chain& c) {
  return {{"format_version", kFormatVersion}, {"kind", "chain"}, {"dim", c.dim}, {"support", c.support}};
}

Json to_json(const BlockTree& T) {
  Json nodes = Json::array();
  for (const auto& n : T.nodes) {
    nodes.push_back({{"B", block_json(n.B)},
                     {"Q", block_json(n.Q)},
                     {"parent", n.parent},
                     {"children", n.children},
                     {"depth", n.depth},
                     {"terminal", n.terminal},
                     {"meets_knot", n.meets_knot},
                     {"crossings_B", n.crossings_B},
                     {"crossings_Q", n.crossings_Q},
                     {"shrink", n.shrink},
                     {"properties", {n.property[0], n.property[1], n.property[2], n.property[3]}}});
  }
  return {{"format_version", kFormatVersion}, {"kind", "block_tree"}, {"root", block_json(T.root)},
          {"target_depth", T.target_depth}, {"convol_bound", T.convol_bound}, {"eps", T.eps},
          {"properties_hold", T.properties_hold()}, {"max_degree", T.max_degree()},
          {"partition_error", T.partition_error()}, {"nodes", nodes}};
}

Json to_json(const NerveReport& R) {
  return {{"format_version", kFormatVersion},
          {"kind", "nerve_report"},
          {"ball_count", R.ball_count},
          {"nerve_simplex_count", R.nerve_simplex_count},
          {"betti", R.betti},
          {"volume", {{"estimate", R.volume.estimate}, {"lo", R.volume.lo}, {"hi", R.volume.hi}}},
          {"ratio", R.ratio}};
}

SimplicialComplex simplicial_from_json(const Json& j) {
  check_header(j, "simplicial");
  try {
    const int vc = j.at("vertex_count").get<int>();
    std::vector<Simplex> all;
    for (const auto& layer : j.at("faces_by_dim"))
      for (const auto& s : layer) all.push_back(s.get<Simplex>());
    for (const auto& s : all) {
      if (s.empty() || !std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
        throw InputError("simplex vertex lists must be strictly increasing");
      if (s.front() < 0 || s.back() >= vc) throw InputError("simplex vertex id out of range");
    }
    SimplicialComplex X = SimplicialComplex::from_simplices(vc, all);
    if (X.dim() != j.at("dim").get<int>()) throw InputError("dim does not match the faces");
    return X;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed complex: ") + e.what());
  }
}

CubicalComplex cubical_from_json(const Json& j) {
  check_header(j, "cubical");
  try {
    CubicalComplex X(j.at("dim").get<int>(), j.at("ambient_dim").get<int>(), j.at("side").get<int>());
    const auto& faces = j.at("faces_by_dim");
    if (static_cast<int>(faces.size()) != X.dim() + 1) throw InputError("faces_by_dim has the wrong length");
    for (int d = 0; d <= X.dim(); ++d)
      if (faces[d].size() != X.count(d)) throw InputError("cubical face count mismatch");
    return X;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed cubical complex: ") + e.what());
  }
}

EmbeddedComplex embedding_from_json(const Json& j) {
  check_header(j, "embedding");
  try {
    EmbeddedComplex E;
    E.complex = simplicial_from_json(j.at("complex"));
    const int n = j.at("ambient_n").get<int>();
    const auto& coords = j.at("coords");
    E.coords.resize(n, static_cast<Eigen::Index>(coords.size()));
    for (std::size_t v = 0; v < coords.size(); ++v) {
      if (static_cast<int>(coords[v].size()) != n) throw InputError("coordinate length differs from ambient_n");
      for (int i = 0; i < n; ++i) E.coords(i, static_cast<Eigen::Index>(v)) = coords[v][i].get<double>();
    }
    E.validate();
    return E;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed embedding: ") + e.what());
  }
}

Gf2Chain chain_from_json(const Json& j) {
  check_header(j, "chain");
  Gf2Chain c{j.at("dim").get<int>(), j.at("support").get<std::vector<int>>()};
  std::sort(c.support.begin(), c.support.end());
  if (std::adjacent_find(c.support.begin(), c.support.end()) != c.support.end())
    throw InputError("chain support has duplicates");
  return c;
}

PLKnot read_knot(std::istream& in) {
  std::vector<Eigen::Vector3d> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ss(line);
    double x, y, z;
    if (!(ss >> x)) continue;
    if (!(ss >> y >> z)) throw InputError("knot file line " + std::to_string(lineno) + ": expected 3 numbers");
    std::string extra;
    if (ss >> extra) throw InputError("knot file line " + std::to_string(lineno) + ": trailing text");
    pts.emplace_back(x, y, z);
  }
  return PLKnot(std::move(pts));
}

void write_knot(std::ostream& out, const PLKnot& K) {
  char buf[128];
  for (const auto& p : K.points()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace thick
