#pragma once

#include "thick/blocks.hpp"
#include "thick/complex.hpp"
#include "thick/geometry.hpp"
#include "thick/knot.hpp"
#include "thick/nerve.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>

namespace thick {

using Json = nlohmann::json;

constexpr int kFormatVersion = 1;

Json to_json(const SimplicialComplex& X);
Json to_json(const CubicalComplex& X);
Json to_json(const EmbeddedComplex& E);
Json to_json(const Gf2Chain& c);
Json to_json(const BlockTree& T);
Json to_json(const NerveReport& R);

SimplicialComplex simplicial_from_json(const Json& j);
CubicalComplex cubical_from_json(const Json& j);
EmbeddedComplex embedding_from_json(const Json& j);
Gf2Chain chain_from_json(const Json& j);

// Knot files: one "x y z" line per vertex, closed implicitly; '#' starts a comment.
PLKnot read_knot(std::istream& in);
void write_knot(std::ostream& out, const PLKnot& K);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
// Two-space indent with a trailing newline; keys come out sorted.
std::string dump(const Json& j);

}  // namespace thick
