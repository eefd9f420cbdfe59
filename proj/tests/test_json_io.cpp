#include "doctest.h"

#include "calibra/error.hpp"
#include "calibra/forms.hpp"
#include "calibra/json_io.hpp"

using namespace calibra;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error raised");
    return ErrorKind::invalid_argument;
}

} // namespace

TEST_CASE("multivector round trip") {
    const Multivector theta = form_set(octonions, 1).at("spin7_four");
    const Multivector back = multivector_from_json(to_json(theta));
    CHECK(back.dim() == 8);
    CHECK(max_abs_diff(back, theta) == 0.0);
}

TEST_CASE("unsorted indices pick up the ordering sign") {
    const json j = parse_json(R"({"dim": 4, "terms": [{"indices": [2, 1], "coeff": 3}]})");
    const Multivector a = multivector_from_json(j);
    CHECK(a.coeff(indices_mask({0, 1})) == -3.0);
}

TEST_CASE("multivector errors") {
    CHECK(kind_of([] { multivector_from_json(parse_json(R"({"dim": 4, "terms": [{"indices": [5], "coeff": 1}]})")); }) !=
          ErrorKind::invalid_argument);
    CHECK(kind_of([] { multivector_from_json(parse_json(R"({"dim": 4, "terms": [{"indices": [1, 1], "coeff": 1}]})")); }) ==
          ErrorKind::malformed_input);
    CHECK(kind_of([] { multivector_from_json(parse_json(R"({"terms": []})")); }) == ErrorKind::malformed_input);
    CHECK(kind_of([] { parse_json("{not json"); }) == ErrorKind::malformed_input);
}

TEST_CASE("complex coefficients accept numbers, pairs and objects") {
    const json j = parse_json(R"({"dim": 2, "terms": [{"indices": [], "coeff": 2},
                                                      {"indices": [1], "coeff": [0, 1]},
                                                      {"indices": [2], "coeff": {"re": 1, "im": -1}}]})");
    const ComplexMultivector a = complex_multivector_from_json(j);
    CHECK(a.coeff(0) == cd(2, 0));
    CHECK(a.coeff(1) == cd(0, 1));
    CHECK(a.coeff(2) == cd(1, -1));
    CHECK(max_abs_diff(complex_multivector_from_json(to_json(a)), a) == 0.0);
}

TEST_CASE("subspace round trip and errors") {
    const Subspace c = Subspace::coordinate(6, {0, 2, 4}, -1);
    const Subspace back = subspace_from_json(to_json(c));
    CHECK(back.orientation() == -1);
    CHECK((back.oriented_frame() - c.oriented_frame()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(kind_of([] { subspace_from_json(parse_json(R"({"dim": 6, "frame": []})")); }) == ErrorKind::malformed_input);
    CHECK(kind_of([] { subspace_from_json(parse_json(R"({"dim": 3, "frame": [[1, 0]]})")); }) == ErrorKind::dimension_mismatch);
    CHECK(kind_of([] { subspace_from_json(parse_json(R"({"dim": 2, "frame": [[1, 0], [2, 0]]})")); }) !=
          ErrorKind::dimension_mismatch);
    CHECK(kind_of([] { subspace_from_json(parse_json(R"({"dim": 2, "frame": [[1, 0]], "orientation": 2})")); }) ==
          ErrorKind::malformed_input);
}

TEST_CASE("curvature accepts flat coeff lists and nested matrices") {
    const json flat = parse_json(R"({"dim": 4, "rank": 2, "terms": [{"form": {"terms": [{"indices": [1, 2], "coeff": 1}]},
                                     "coeff": [[0, 1], 0, 0, [0, -1]]}]})");
    const json nested = parse_json(R"({"dim": 4, "rank": 2, "terms": [{"form": {"terms": [{"indices": [1, 2], "coeff": 1}]},
                                       "matrix": [[[0, 1], 0], [0, [0, -1]]]}]})");
    const CurvatureTensor a = curvature_from_json(flat);
    const CurvatureTensor b = curvature_from_json(nested);
    REQUIRE(a.terms.size() == 1);
    CHECK((a.terms[0].second - b.terms[0].second).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.terms[0].second(1, 1) == cd(0, -1));
    const CurvatureTensor c = curvature_from_json(to_json(a));
    CHECK((c.terms[0].second - a.terms[0].second).cwiseAbs().maxCoeff() == 0.0);
    CHECK(max_abs_diff(c.terms[0].first, a.terms[0].first) == 0.0);
    const json short_coeff = parse_json(R"({"dim": 4, "rank": 2, "terms": [{"form": {"terms": [{"indices": [1, 2], "coeff": 1}]},
                                           "coeff": [[0, 1]]}]})");
    CHECK(kind_of([&] { curvature_from_json(short_coeff); }) == ErrorKind::dimension_mismatch);
}

TEST_CASE("mixed form header and torus") {
    const MixedForm f = symplectic_exponential(Eigen::MatrixXd::Identity(2, 2));
    const MixedForm back = mixed_form_from_json(to_json(f));
    CHECK(max_abs_diff(back, f) == 0.0);
    json bad = to_json(f);
    bad["variables"][0] = "q";
    CHECK(kind_of([&] { mixed_form_from_json(bad); }) == ErrorKind::malformed_input);
    json wrong_dim = to_json(f);
    wrong_dim["dim"] = 7;
    CHECK(kind_of([&] { mixed_form_from_json(wrong_dim); }) == ErrorKind::dimension_mismatch);

    Eigen::MatrixXd lat(2, 2);
    lat << 1, 0.5, 0, 2;
    const FlatTorus t(lat);
    const FlatTorus tb = torus_from_json(to_json(t));
    CHECK((tb.lattice() - lat).cwiseAbs().maxCoeff() == 0.0);
    CHECK(kind_of([] { torus_from_json(parse_json(R"({"lattice": [[1, 0], [0]]})")); }) == ErrorKind::dimension_mismatch);
}

TEST_CASE("convention ledger is a flat object") {
    const json c = convention_ledger();
    REQUIRE(c.is_object());
    CHECK(c.size() > 5);
    for (auto it = c.begin(); it != c.end(); ++it) CHECK((it.value().is_string() || it.value().is_number()));
}
