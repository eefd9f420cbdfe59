#include "calibra/json_io.hpp"
#include "calibra/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace calibra {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        fail(ErrorKind::malformed_input, std::string("malformed ") + what + ": " + e.what());
    }
}

const json& field(const json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key))
        fail(ErrorKind::malformed_input, std::string("malformed ") + what + ": missing \"" + key + "\"");
    return j.at(key);
}

cd complex_from_json(const json& c) {
    if (c.is_number()) return {c.get<double>(), 0.0};
    if (c.is_array() && c.size() == 2) return {c[0].get<double>(), c[1].get<double>()};
    if (c.is_object()) return {c.value("re", 0.0), c.value("im", 0.0)};
    fail(ErrorKind::malformed_input, "coefficient must be a number or [re, im]");
}

double finite(double v) {
    if (!std::isfinite(v)) fail(ErrorKind::malformed_input, "non-finite number");
    return v;
}

int checked_dim(const json& j, const char* what) {
    const int m = field(j, "dim", what).get<int>();
    if (m < 0 || m > max_form_dim) fail(ErrorKind::dimension_mismatch, "dimension out of range");
    return m;
}

Mask mask_from_indices(const json& idx, int m) {
    Mask mask = 0;
    for (const auto& v : idx) {
        const int i = v.get<int>();
        if (i < 1 || i > m) fail(ErrorKind::dimension_mismatch, "index " + std::to_string(i) + " outside 1.." + std::to_string(m));
        const Mask bit = Mask{1} << (i - 1);
        if (mask & bit) fail(ErrorKind::malformed_input, "repeated index in monomial");
        mask |= bit;
    }
    return mask;
}

// Sign of sorting the listed indices into increasing order.
double ordering_sign(const json& idx) {
    std::vector<int> v;
    for (const auto& x : idx) v.push_back(x.get<int>());
    int swaps = 0;
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b)
            if (v[a] > v[b]) ++swaps;
    return swaps % 2 ? -1.0 : 1.0;
}

json indices_json(Mask m) {
    json idx = json::array();
    for (int i : mask_indices(m)) idx.push_back(i + 1);
    return idx;
}

template <class T, class Coeff>
BasicMultivector<T> read_terms(const json& j, int m, Coeff coeff) {
    BasicMultivector<T> a(m);
    const json& terms = field(j, "terms", "multivector");
    if (!terms.is_array()) fail(ErrorKind::malformed_input, "\"terms\" must be an array");
    for (const auto& t : terms) {
        const json& idx = field(t, "indices", "term");
        if (!idx.is_array()) fail(ErrorKind::malformed_input, "\"indices\" must be an array");
        a.add(mask_from_indices(idx, m), coeff(field(t, "coeff", "term")) * ordering_sign(idx));
    }
    return a;
}

} // namespace

json to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (int k = 0; k < m.cols(); ++k) r.push_back(m(i, k));
        rows.push_back(r);
    }
    return rows;
}

json complex_to_json(cd c) { return json::array({c.real(), c.imag()}); }

json to_json(const Multivector& a) {
    json terms = json::array();
    for (const auto& [m, c] : a.terms()) terms.push_back({{"indices", indices_json(m)}, {"coeff", c}});
    return {{"dim", a.dim()}, {"terms", terms}};
}

Multivector multivector_from_json(const json& j) {
    return guarded("multivector", [&] {
        const int m = checked_dim(j, "multivector");
        return read_terms<double>(j, m, [](const json& c) {
            if (!c.is_number()) fail(ErrorKind::malformed_input, "real coefficient expected");
            return finite(c.get<double>());
        });
    });
}

json to_json(const ComplexMultivector& a) {
    json terms = json::array();
    for (const auto& [m, c] : a.terms()) terms.push_back({{"indices", indices_json(m)}, {"coeff", complex_to_json(c)}});
    return {{"dim", a.dim()}, {"terms", terms}};
}

ComplexMultivector complex_multivector_from_json(const json& j) {
    return guarded("multivector", [&] {
        const int m = checked_dim(j, "multivector");
        return read_terms<cd>(j, m, [](const json& c) {
            const cd v = complex_from_json(c);
            finite(v.real());
            finite(v.imag());
            return v;
        });
    });
}

json to_json(const Subspace& c) {
    json frame = json::array();
    for (int k = 0; k < c.k(); ++k) {
        json col = json::array();
        for (int i = 0; i < c.ambient_dim(); ++i) col.push_back(c.frame()(i, k));
        frame.push_back(col);
    }
    return {{"dim", c.ambient_dim()}, {"frame", frame}, {"orientation", c.orientation()}};
}

Subspace subspace_from_json(const json& j) {
    return guarded("subspace", [&] {
        const int m = field(j, "dim", "subspace").get<int>();
        if (m < 1) fail(ErrorKind::malformed_input, "subspace dimension must be positive");
        const json& frame = field(j, "frame", "subspace");
        if (!frame.is_array() || frame.empty()) fail(ErrorKind::malformed_input, "empty frame");
        Eigen::MatrixXd f(m, frame.size());
        for (std::size_t k = 0; k < frame.size(); ++k) {
            if (!frame[k].is_array()) fail(ErrorKind::malformed_input, "frame vectors must be arrays");
            if (static_cast<int>(frame[k].size()) != m)
                fail(ErrorKind::dimension_mismatch, "frame vector length differs from dim");
            for (int i = 0; i < m; ++i) f(i, k) = finite(frame[k][i].get<double>());
        }
        if (frame.size() > static_cast<std::size_t>(m)) fail(ErrorKind::dimension_mismatch, "more frame vectors than dim");
        const int o = j.value("orientation", 1);
        if (o != 1 && o != -1) fail(ErrorKind::malformed_input, "orientation must be 1 or -1");
        return Subspace(f, o);
    });
}

json to_json(const CurvatureTensor& f) {
    json terms = json::array();
    for (const auto& [phi, a] : f.terms) {
        json entries = json::array();
        for (int i = 0; i < a.rows(); ++i)
            for (int k = 0; k < a.cols(); ++k) entries.push_back(complex_to_json(a(i, k)));
        terms.push_back({{"form", to_json(phi)}, {"coeff", entries}});
    }
    return {{"dim", f.dim}, {"rank", f.rank}, {"terms", terms}};
}

CurvatureTensor curvature_from_json(const json& j) {
    return guarded("curvature", [&] {
        CurvatureTensor f;
        f.dim = checked_dim(j, "curvature");
        f.rank = j.value("rank", 1);
        if (f.rank < 1) fail(ErrorKind::malformed_input, "rank must be positive");
        const json& terms = field(j, "terms", "curvature");
        if (!terms.is_array()) fail(ErrorKind::malformed_input, "\"terms\" must be an array");
        for (const auto& t : terms) {
            json form = field(t, "form", "curvature term");
            if (!form.contains("dim")) form["dim"] = f.dim;
            const Multivector phi = multivector_from_json(form);
            if (phi.dim() != f.dim) fail(ErrorKind::dimension_mismatch, "curvature form dimension mismatch");
            Eigen::MatrixXcd a(f.rank, f.rank);
            if (t.contains("matrix")) {
                const json& rows = t.at("matrix");
                if (!rows.is_array() || static_cast<int>(rows.size()) != f.rank)
                    fail(ErrorKind::dimension_mismatch, "coefficient matrix has wrong rank");
                for (int r = 0; r < f.rank; ++r) {
                    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != f.rank)
                        fail(ErrorKind::dimension_mismatch, "coefficient matrix has wrong rank");
                    for (int c = 0; c < f.rank; ++c) a(r, c) = complex_from_json(rows[r][c]);
                }
            } else if (t.contains("coeff")) {
                const json& c = t.at("coeff");
                const bool flat = c.is_array() && !c.empty() && (c[0].is_array() || c[0].is_object());
                if (!flat && f.rank == 1) {
                    a(0, 0) = complex_from_json(c);
                } else {
                    if (!flat || static_cast<int>(c.size()) != f.rank * f.rank)
                        fail(ErrorKind::dimension_mismatch, "\"coeff\" needs rank^2 complex entries");
                    for (int r = 0; r < f.rank; ++r)
                        for (int k = 0; k < f.rank; ++k) a(r, k) = complex_from_json(c[r * f.rank + k]);
                }
            } else {
                fail(ErrorKind::malformed_input, "curvature term needs \"coeff\" or \"matrix\"");
            }
            f.terms.emplace_back(phi, a);
        }
        f.validate();
        return f;
    });
}

json to_json(const MixedForm& f) {
    json j = to_json(f.form());
    j["n"] = f.n();
    j["variables"] = f.variables();
    return j;
}

MixedForm mixed_form_from_json(const json& j) {
    return guarded("mixed form", [&] {
        const int n = field(j, "n", "mixed form").get<int>();
        if (n < 1 || 3 * n > max_form_dim) fail(ErrorKind::dimension_mismatch, "torus rank must be 1..5");
        json body = j;
        if (!body.contains("dim")) body["dim"] = 3 * n;
        if (body.at("dim").get<int>() != 3 * n) fail(ErrorKind::dimension_mismatch, "mixed form must live on 3n variables");
        if (j.contains("variables")) {
            const MixedForm probe(n);
            if (j.at("variables").get<std::vector<std::string>>() != probe.variables())
                fail(ErrorKind::malformed_input, "variables header does not match (x^i; y^j; y_j) order");
        }
        return MixedForm(n, complex_multivector_from_json(body));
    });
}

json to_json(const FlatTorus& t) {
    return {{"lattice", to_json(Eigen::MatrixXd(t.lattice().transpose()))}};
}

FlatTorus torus_from_json(const json& j) {
    return guarded("torus", [&] {
        const json& rows = field(j, "lattice", "torus");
        if (!rows.is_array() || rows.empty()) fail(ErrorKind::malformed_input, "empty lattice");
        const int n = static_cast<int>(rows.size());
        Eigen::MatrixXd lat(n, n);
        for (int k = 0; k < n; ++k) {
            if (!rows[k].is_array() || static_cast<int>(rows[k].size()) != n)
                fail(ErrorKind::dimension_mismatch, "lattice must be square");
            for (int i = 0; i < n; ++i) lat(i, k) = finite(rows[k][i].get<double>());
        }
        return FlatTorus(lat);
    });
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::malformed_input, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorKind::malformed_input, std::string("invalid JSON: ") + e.what());
    }
}

json convention_ledger() {
    return {
        {"division_algebra", "Cayley-Dickson (a,b)(c,d) = (ac - d b*, a* d + c b); second half of the coefficient vector stores b*; e1 e2 = e3"},
        {"complex_structure", "J_u(y) = y u (right multiplication); omega_u(x, y) = <x, y u>"},
        {"cross_product", "x × y = Im(conj(y) x)"},
        {"g2_three_form", "+123 +145 -167 +246 +257 +347 -356"},
        {"g2_four_form", "star of the three-form for e1..e7: +4567 +2367 -2345 +1357 +1346 +1256 -1247"},
        {"spin7_four_form", "Omega ^ dx0 - star Omega on (e0, e1..e7), orientation e0..e7, self-dual"},
        {"cayley_model", "H x {0} with frame (e1, e2, e3, e0)"},
        {"complex_orientation", "coordinates (x1, y1, ...), omega = sum dx ^ dy, nu = omega^n / n!"},
        {"quaternionic_orientation", "nu = omega_I^(2n) / (2n)! = (-1)^n e^{0..4n-1}"},
        {"g2_two_forms", "star(Omega ^ phi) = +1 on Lambda^2_14, -2 on Lambda^2_7 (orientation e1..e7)"},
        {"yang_mills", "q(phi) = phi ^ phi ^ Phi / nu; on skew-Hermitian coefficients the bundle form is -Q; calibrated iff slack |F|^2 - q_Phi(F) = 0"},
        {"yang_mills_g2_orientation", -1},
        {"chern_pairing", "int Tr exp((i / 2 pi) F) ^ Phi, orthonormal coordinates, times covolume"},
        {"fiber_integration", "alpha ^ dy^n ^ ... ^ dy^1 -> alpha, then y_j -> -y_j"},
        {"mirror_constant", "Omega_M -> kappa_n exp(omega_W), kappa_n = i^n (-1)^(n(n-1)/2)"},
        {"inverse_transform", "dual-fiber extraction against the same kernel divided by c^n"},
        {"cohomology_kernel", "exp((i / 2 pi) F) = exp(-sum dy^j ^ dy_j); F o F = (-1)^(n(n+1)/2) id"},
        {"rank_threshold", rank_tolerance},
    };
}

} // namespace calibra
