#pragma once

#include "calibra/groups.hpp"
#include "calibra/linalg.hpp"
#include "calibra/multivector.hpp"
#include "calibra/torus.hpp"

#include <json.hpp>
#include <string>

namespace calibra {

using json = nlohmann::json;

// {"dim": m, "terms": [{"indices": [1, 2], "coeff": 1.0}, ...]}, indices 1-based.
json to_json(const Multivector& a);
Multivector multivector_from_json(const json& j);
// Coefficients are numbers or [re, im] pairs.
json to_json(const ComplexMultivector& a);
ComplexMultivector complex_multivector_from_json(const json& j);

// {"dim": m, "frame": [[...], ...], "orientation": 1}, one inner array per basis vector.
json to_json(const Subspace& c);
Subspace subspace_from_json(const json& j);

// {"dim": m, "rank": r, "terms": [{"form": <multivector>, "coeff": [c, ...]}]}, r*r entries row-major;
// "matrix": [[c, ...], ...] is also accepted.
json to_json(const CurvatureTensor& f);
CurvatureTensor curvature_from_json(const json& j);

// Multivector format over 3n symbols plus "n" and a "variables" header.
json to_json(const MixedForm& f);
MixedForm mixed_form_from_json(const json& j);

// {"lattice": [[...], ...]} with one inner array per generator.
json to_json(const FlatTorus& t);
FlatTorus torus_from_json(const json& j);

json to_json(const Eigen::MatrixXd& m);
json complex_to_json(cd c);

json read_json_file(const std::string& path);
json parse_json(const std::string& text);

// Sign and orientation conventions fixed by this build.
json convention_ledger();

} // namespace calibra
