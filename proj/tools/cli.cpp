#include "acceptance.hpp"

#include "calibra/calibration.hpp"
#include "calibra/error.hpp"
#include "calibra/forms.hpp"
#include "calibra/json_io.hpp"
#include "calibra/subspaces.hpp"
#include "calibra/torus.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

using namespace calibra;

namespace {

struct RunConfig {
    std::uint64_t seed = 20240611;
    int restarts = 64;
    std::string format = "text";
    std::string output;
    std::vector<std::string> tol_overrides;
    std::map<std::string, double> tolerances = {{"calibrated", 1e-8}, {"ym", 1e-10}, {"connection", 1e-8}};
};

struct Report {
    json data = json::object();
    std::vector<std::string> lines;
    int exit_code = 0;
};

struct FormSpec {
    std::string algebra;
    int rank = 1;
    std::string name;
    std::string input;
    int power = 1;
};

std::string fmt(double v, int digits = 6) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string monomial(Mask m, int dim) {
    std::string s = "e";
    const auto idx = mask_indices(m);
    if (idx.empty()) return "1";
    if (dim <= 9) {
        for (int i : idx) s += std::to_string(i + 1);
        return s;
    }
    s += "(";
    for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "," : "") + std::to_string(idx[k] + 1);
    return s + ")";
}

std::string expression(const Multivector& a) {
    if (a.terms().empty()) return "0";
    std::string s;
    for (const auto& [m, c] : a.terms()) {
        if (!s.empty()) s += " ";
        s += c < 0 ? "-" : "+";
        if (std::abs(std::abs(c) - 1.0) > 1e-12 || m == 0) s += fmt(std::abs(c)) + (m ? "*" : "");
        if (m) s += monomial(m, a.dim());
    }
    return s;
}

std::string signed_term(cd c, bool first, bool bare) {
    const bool imag = std::abs(c.real()) < 1e-15 && std::abs(c.imag()) > 0;
    const bool real = std::abs(c.imag()) < 1e-15;
    std::string sign = first ? "" : " + ";
    std::string body;
    if (real || imag) {
        const double v = real ? c.real() : c.imag();
        sign = v < 0 ? (first ? "-" : " - ") : sign;
        body = std::abs(std::abs(v) - 1.0) < 1e-15 && !(bare && real) ? "" : fmt(std::abs(v));
        if (imag) body += "i";
    } else {
        body = "(" + fmt(c.real()) + (c.imag() < 0 ? "-" : "+") + fmt(std::abs(c.imag())) + "i)";
    }
    return sign + body;
}

std::string mixed_expression(const MixedForm& f) {
    const auto vars = f.variables();
    if (f.form().terms().empty()) return "0";
    std::string s;
    for (const auto& [m, c] : f.form().terms()) {
        std::string t = signed_term(c, s.empty(), m == 0);
        std::string word;
        for (int i : mask_indices(m)) word += (word.empty() ? "d" : " d") + vars[i];
        const bool bare_sign = t.empty() || t.back() == ' ' || t.back() == '-';
        s += t + (bare_sign || word.empty() ? "" : " ") + word;
    }
    return s;
}

std::string csv_escape(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char ch : v) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return out + "\"";
}

void flatten(const json& j, const std::string& path, std::vector<std::string>& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    } else {
        out.push_back(csv_escape(path) + "," + csv_escape(j.is_string() ? j.get<std::string>() : j.dump()));
    }
}

json tolerance_json(const RunConfig& cfg) {
    json t = cfg.tolerances;
    t["classify"] = classify_tolerance;
    t["rank"] = rank_tolerance;
    return t;
}

void emit(Report& r, const RunConfig& cfg) {
    r.data["seed"] = cfg.seed;
    r.data["tolerances"] = tolerance_json(cfg);
    r.data["conventions"] = convention_ledger();
    std::ostringstream os;
    if (cfg.format == "json") {
        os << r.data.dump(2) << "\n";
    } else if (cfg.format == "csv") {
        std::vector<std::string> rows;
        flatten(r.data, "", rows);
        os << "key,value\n";
        for (const auto& row : rows) os << row << "\n";
    } else {
        for (const auto& l : r.lines) os << l << "\n";
        os << "# seed " << cfg.seed << "; tolerances " << tolerance_json(cfg).dump() << "\n";
        const json c = convention_ledger();
        for (auto it = c.begin(); it != c.end(); ++it)
            os << "# " << it.key() << ": " << (it.value().is_string() ? it.value().get<std::string>() : it.value().dump()) << "\n";
    }
    if (cfg.output.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream out(cfg.output);
        if (!out) fail(ErrorKind::malformed_input, "cannot write " + cfg.output);
        out << os.str();
    }
}

json load(const std::string& path) {
    if (path.empty()) fail(ErrorKind::malformed_input, "missing --input");
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return parse_json(ss.str());
    }
    return read_json_file(path);
}

bool is_g2(const std::string& algebra) { return algebra == "G2" || algebra == "g2" || algebra == "O-special"; }

const CanonicalFormSet& forms_for(const std::string& algebra, int rank) {
    if (is_g2(algebra)) return g2_form_set();
    return form_set(AlgebraLevel::parse(algebra), rank);
}

Multivector resolve_form(const FormSpec& f) {
    Multivector base;
    if (!f.input.empty()) {
        base = multivector_from_json(load(f.input));
    } else {
        if (f.algebra.empty() || f.name.empty()) fail(ErrorKind::malformed_input, "give --input or --algebra with --form");
        const CanonicalFormSet& set = forms_for(f.algebra, f.rank);
        if (!set.forms.count(f.name)) {
            std::string names;
            for (const auto& [n, form] : set.forms) names += (names.empty() ? "" : ", ") + n;
            fail(ErrorKind::invalid_argument, "form '" + f.name + "' not defined for " + set.label() + " (available: " + names + ")");
        }
        base = set.at(f.name);
    }
    if (f.power < 0) fail(ErrorKind::invalid_argument, "power must be non-negative");
    double fact = 1;
    for (int k = 2; k <= f.power; ++k) fact *= k;
    return base.power(f.power) * (1.0 / fact);
}

void add_form_options(CLI::App* sub, FormSpec& f) {
    sub->add_option("--algebra", f.algebra, "R, C, H, O or G2");
    sub->add_option("--rank", f.rank, "rank n of A^n");
    sub->add_option("--form", f.name, "canonical form name (see the forms command)");
    sub->add_option("--power", f.power, "use form^k / k!");
    sub->add_option("--input", f.input, "form JSON file ('-' for stdin)");
}

std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

Report cmd_forms(const std::string& algebra, int rank, const std::vector<std::string>& only) {
    const CanonicalFormSet& s = forms_for(algebra, rank);
    Report r;
    r.data["algebra"] = s.label();
    r.data["orientation"] = s.orientation();
    r.lines.push_back("forms on " + s.label() + " (orientation " + std::to_string(s.orientation()) + ")");
    for (const auto& [name, f] : s.forms) {
        if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
        r.data["forms"][name] = to_json(f);
        r.lines.push_back(pad(name, 16) + " degree " + std::to_string(f.max_grade()) + "  " + expression(f));
    }
    if (!only.empty() && !r.data.contains("forms")) fail(ErrorKind::invalid_argument, "no form matches --only");
    return r;
}

Report cmd_decompose(const std::string& algebra, int rank) {
    const TwoFormDecomposition d = is_g2(algebra) ? decompose_g2_two_forms() : decompose_two_forms(AlgebraLevel::parse(algebra), rank);
    Report r;
    r.data["algebra"] = d.label();
    r.data["special_split"] = d.has_special_split();
    r.lines.push_back("two-forms on " + d.label());
    r.lines.push_back(pad("component", 16) + pad("role", 12) + pad("dim", 6) + "eigenvalue");
    for (const auto& c : d.components) {
        json cj = {{"name", c.name}, {"role", role_name(c.role)}, {"dim", c.dim()}, {"basis", to_json(c.basis)}};
        if (c.eigenvalue) cj["eigenvalue"] = *c.eigenvalue;
        r.data["components"].push_back(cj);
        r.lines.push_back(pad(c.name, 16) + pad(role_name(c.role), 12) + pad(std::to_string(c.dim()), 6) +
                          (c.eigenvalue ? fmt(*c.eigenvalue) : "-"));
    }
    return r;
}

Report cmd_classify_subspace(const std::string& algebra, const std::string& input) {
    const Subspace c = subspace_from_json(load(input));
    Report r;
    r.data["subspace"] = to_json(c);
    if (is_g2(algebra) && c.ambient_dim() == 7) {
        const SpecialClassification s = classify_special_lagrangian(c, g2_form_set());
        r.data["class"] = class_name(s.cls);
        r.lines.push_back(class_name(s.cls));
        for (const auto& [k, v] : s.residuals) {
            r.data["residuals"][k] = v;
            r.lines.push_back("  residual " + pad(k, 20) + fmt(v, 3));
        }
        return r;
    }
    const AlgebraLevel a = is_g2(algebra) ? octonions : AlgebraLevel::parse(algebra);
    const int n = ambient_rank(c, a);
    const CanonicalFormSet& forms = form_set(a, n);
    const ASubspaceCheck as = check_a_subspace(c, a);
    r.data["algebra"] = forms.label();
    r.data["a_subspace"] = {{"value", as.value}, {"residual", as.residual}};
    std::vector<std::string> head;
    std::vector<std::string> detail;
    detail.push_back("  A-subspace        " + std::string(as.value ? "yes" : "no") + " (residual " + fmt(as.residual, 3) + ")");
    if (2 * c.k() == c.ambient_dim()) {
        const WitnessKernel kernel = lagrangian_kernel(c, a);
        r.data["witness_kernel_dim"] = kernel.dimension;
        const auto w = find_lagrangian_witness(c, a);
        head.push_back(w ? "Lagrangian" : "not Lagrangian");
        r.data["lagrangian"] = w.has_value();
        detail.push_back("  witness kernel    " + std::to_string(kernel.dimension) + " (half-Lagrangian needs " +
                         std::to_string(a.dim() / 2) + ")");
        if (w) {
            json gens = json::array();
            for (const auto& g : w->generators) gens.push_back(std::vector<double>(g.coeffs().data(), g.coeffs().data() + g.dim()));
            r.data["witness"] = gens;
            double worst = 0;
            for (const auto& rs : residual_complex_structure(c, *w)) worst = std::max(worst, rs.residual);
            r.data["residual_complex_structure"] = worst;
            detail.push_back("  J_v residual      " + fmt(worst, 3));
        }
        if (w && !(a == reals)) {
            const LambdaDeterminant ld = lambda_determinant(c, a, forms);
            r.data["special_type"] = type_name(ld.type);
            r.data["type_residual"] = ld.type_residual;
            if (ld.type == SpecialType::none) head.push_back("not special");
            else if (ld.type == SpecialType::both) head.push_back("special type I and II");
            else head.push_back("special " + type_name(ld.type));
            if (a == complexes) {
                r.data["phase"] = ld.phase;
                r.data["lagrangian_angle"] = ld.lagrangian_angle;
                head.push_back("phase " + fixed3(ld.phase));
            }
            if (ld.line) r.data["lambda_line"] = std::vector<double>(ld.line->coeffs().data(), ld.line->coeffs().data() + ld.line->dim());
        }
    } else {
        head.push_back("not middle dimensional");
    }
    const SpecialClassification s = classify_special_lagrangian(c, forms);
    r.data["class"] = class_name(s.cls);
    if ((a == quaternions || a == octonions) && s.cls != SpecialClass::lagrangian && s.cls != SpecialClass::not_lagrangian &&
        s.cls != SpecialClass::not_applicable && s.cls != SpecialClass::not_calibrated)
        head.push_back(class_name(s.cls));
    for (const auto& [k, v] : s.residuals) {
        r.data["residuals"][k] = v;
        detail.push_back("  residual " + pad(k, 9) + fmt(v, 3));
    }
    std::string line;
    for (std::size_t i = 0; i < head.size(); ++i) line += (i ? "; " : "") + head[i];
    r.lines.push_back(line);
    r.lines.insert(r.lines.end(), detail.begin(), detail.end());
    return r;
}

Report cmd_classify_connection(const std::string& algebra, int rank, const std::string& input, const RunConfig& cfg) {
    const CurvatureTensor f = curvature_from_json(load(input));
    const TwoFormDecomposition d = is_g2(algebra) ? decompose_g2_two_forms() : decompose_two_forms(AlgebraLevel::parse(algebra), rank);
    const ConnectionClass cc = classify_connection(f, d, cfg.tolerances.at("connection"));
    Report r;
    r.data["algebra"] = d.label();
    r.data["is_a_connection"] = cc.is_a_connection;
    if (cc.is_special) r.data["is_special"] = *cc.is_special;
    std::string head = cc.is_a_connection ? "A-connection" : "not an A-connection";
    if (cc.is_special) head += *cc.is_special ? "; special" : "; not special";
    r.lines.push_back(head);
    for (const auto& [k, v] : cc.residuals) {
        r.data["residuals"][k] = v;
        r.lines.push_back("  residual " + pad(k, 14) + fmt(v, 3));
    }
    return r;
}

Report cmd_comass(const FormSpec& spec, int k, const RunConfig& cfg) {
    const Multivector f = resolve_form(spec);
    if (k <= 0) k = f.max_grade();
    ComassOptions o;
    o.seed = cfg.seed;
    o.restarts = cfg.restarts;
    const ComassReport rep = comass_estimate(f, k, o);
    Report r;
    r.data["estimate"] = rep.estimate;
    r.data["plane"] = to_json(rep.argmax_plane);
    r.data["restarts"] = rep.restarts;
    r.data["converged"] = rep.converged;
    r.data["k"] = k;
    r.lines.push_back("comass estimate " + fmt(rep.estimate, 12) + " (k=" + std::to_string(k) + ", restarts " +
                      std::to_string(rep.restarts) + ", " + (rep.converged ? "converged" : "not converged") + ")");
    for (int j = 0; j < rep.argmax_plane.k(); ++j) {
        std::string col = "  v" + std::to_string(j + 1) + " =";
        for (int i = 0; i < rep.argmax_plane.ambient_dim(); ++i) col += " " + fixed3(rep.argmax_plane.oriented_frame()(i, j));
        r.lines.push_back(col);
    }
    return r;
}

Report cmd_ym_check(const FormSpec& spec, std::optional<int> orientation, const std::string& curvature, bool normalize,
                    const RunConfig& cfg) {
    Multivector phi = resolve_form(spec);
    int o = 1;
    if (orientation) o = *orientation;
    else if (is_g2(spec.algebra)) o = -1;
    else if (!spec.algebra.empty() && spec.input.empty()) o = forms_for(spec.algebra, spec.rank).orientation();
    const YangMillsQuadratic raw = ym_quadratic(phi, o);
    const YangMillsQuadratic y = normalize ? ym_quadratic(raw.normalized(), o) : raw;
    Report r;
    r.data["orientation"] = o;
    r.data["normalization"] = raw.normalization;
    r.data["normalized"] = normalize;
    json spec_json = json::array();
    std::string spectrum;
    for (const auto& c : cluster_eigen(y.matrix)) {
        spec_json.push_back({{"eigenvalue", c.value}, {"multiplicity", c.basis.cols()}});
        spectrum += (spectrum.empty() ? "" : ", ") + fmt(c.value) + ": " + std::to_string(c.basis.cols());
    }
    r.data["raw_q_spectrum"] = spec_json;
    r.data["top_eigenvalue"] = y.top_eigenvalue;
    r.data["bundle_top"] = y.bundle_top;
    r.data["is_calibrating"] = y.is_calibrating();
    r.data["extremal_dim"] = y.extremal.cols();
    r.lines.push_back(std::string(y.is_calibrating() ? "Yang-Mills calibrating" : "not Yang-Mills calibrating") +
                      " (bundle top eigenvalue " + fmt(y.bundle_top) + ")");
    r.lines.push_back("  raw q spectrum    {" + spectrum + "}");
    r.lines.push_back("  orientation       " + std::to_string(o));
    r.lines.push_back("  normalization     " + fmt(raw.normalization) + (normalize ? " (applied)" : ""));
    r.lines.push_back("  extremal dim      " + std::to_string(y.extremal.cols()));
    if (!curvature.empty()) {
        const CurvatureTensor f = curvature_from_json(load(curvature));
        const YmVerdict v = classify_ym_calibrated(f, y.phi, o, cfg.tolerances.at("ym"));
        r.data["curvature"] = {{"is_calibrated", v.is_calibrated}, {"energy", v.energy}, {"q", v.q}, {"slack", v.slack}};
        r.lines.push_back(std::string("  curvature         ") + (v.is_calibrated ? "calibrated" : "not calibrated") +
                          " (slack " + fmt(v.slack) + ", |F|^2 " + fmt(v.energy) + ")");
    }
    return r;
}

Report cmd_chern(const std::string& curvature, const FormSpec& spec, const std::string& torus, int orientation) {
    const CurvatureTensor f = curvature_from_json(load(curvature));
    const Multivector phi = spec.input.empty() && spec.name.empty() ? Multivector::scalar(f.dim, 1.0) : resolve_form(spec);
    const FlatTorus t = torus.empty() ? FlatTorus::standard(f.dim) : torus_from_json(load(torus));
    const double v = chern_pairing(f, phi, t, orientation);
    Report r;
    r.data["chern_pairing"] = v;
    r.data["covolume"] = t.covolume();
    r.data["orientation"] = orientation;
    r.lines.push_back("chern pairing " + fmt(v, 12) + " (covolume " + fmt(t.covolume()) + ")");
    return r;
}

Report cmd_fourier(const std::string& input, const std::string& kernel, bool inverse) {
    const json j = load(input);
    const Kernel k = parse_kernel(kernel);
    Report r;
    r.data["kernel"] = kernel_name(k);
    if (j.contains("classes")) {
        if (k != Kernel::cohomology) fail(ErrorKind::invalid_argument, "cohomology classes need --kernel=cohomology");
        const FlatTorus t = j.contains("lattice") ? torus_from_json(j) : FlatTorus::standard(j.value("n", 0) > 0 ? j.at("n").get<int>() : 1);
        std::vector<CohomologyClass> in;
        try {
            for (const auto& c : j.at("classes")) {
                CohomologyClass cc;
                cc.grade = c.at("grade").get<int>();
                const auto v = c.at("coeffs").get<std::vector<double>>();
                cc.coeffs = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
                in.push_back(cc);
            }
        } catch (const json::exception& e) {
            fail(ErrorKind::malformed_input, std::string("malformed classes: ") + e.what());
        }
        const auto out = cohomology_fourier(in, t);
        r.data["n"] = t.n();
        r.lines.push_back("cohomology transform on T^" + std::to_string(t.n()));
        for (const auto& c : out) {
            r.data["classes"].push_back({{"grade", c.grade}, {"coeffs", std::vector<double>(c.coeffs.data(), c.coeffs.data() + c.coeffs.size())}});
            std::string line = "  degree " + std::to_string(c.grade) + ":";
            for (Eigen::Index i = 0; i < c.coeffs.size(); ++i) line += " " + fmt(c.coeffs[i]);
            r.lines.push_back(line);
        }
        return r;
    }
    const MixedForm f = mixed_form_from_json(j);
    const MixedForm out = inverse ? inverse_fiberwise_fourier(f, k) : fiberwise_fourier(f, k);
    r.data.update(to_json(out));
    r.data["kernel"] = kernel_name(k);
    r.data["inverse"] = inverse;
    r.lines.push_back(mixed_expression(out));
    return r;
}

Report cmd_selftest(const std::vector<std::string>& only, bool corrupt, const RunConfig& cfg) {
    if (corrupt) set_form_cache_perturbation(1e-3);
    acceptance::Options o;
    o.seed = cfg.seed;
    o.only = only;
    const auto results = acceptance::run(o);
    Report r;
    bool all = true;
    r.lines.push_back(pad("criterion", 36) + pad("status", 8) + pad("tolerance", 26) + "observed (expected)");
    for (const auto& res : results) {
        all = all && res.passed;
        r.data["criteria"].push_back({{"id", res.criterion.id},
                                      {"key", res.criterion.key},
                                      {"title", res.criterion.title},
                                      {"expected", res.expected},
                                      {"observed", res.observed},
                                      {"tolerance", res.tolerance},
                                      {"seconds", res.seconds},
                                      {"limit_seconds", res.criterion.limit_seconds},
                                      {"passed", res.passed}});
        r.lines.push_back(pad(std::to_string(res.criterion.id) + ". " + res.criterion.title, 36) +
                          pad(res.passed ? "PASS" : "FAIL", 8) + pad(res.tolerance, 26) + res.observed + " (" + res.expected + ")");
    }
    r.data["passed"] = all;
    std::string failing;
    for (const auto& res : results)
        if (!res.passed) failing += (failing.empty() ? "" : ", ") + res.criterion.key;
    r.lines.push_back(all ? "all criteria passed" : "failing: " + failing);
    r.exit_code = all ? 0 : 1;
    return r;
}

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::dimension_mismatch: return 3;
    default: return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"calibrated geometry over the normed division algebras"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--format", cfg.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--output", cfg.output, "write the report to a file");
    app.add_option("--seed", cfg.seed, "random seed");
    app.add_option("--restarts", cfg.restarts, "comass restarts");
    app.add_option("--tol", cfg.tol_overrides, "tolerance override key=value (calibrated, ym, connection)");

    std::string algebra;
    int rank = 1;
    std::vector<std::string> only;
    std::string input;

    auto* forms = app.add_subcommand("forms", "canonical calibrating forms");
    forms->add_option("--algebra", algebra, "R, C, H, O or G2")->required();
    forms->add_option("--rank", rank, "rank n of A^n");
    forms->add_option("--only", only, "form names")->delimiter(',');

    auto* decompose = app.add_subcommand("decompose", "irreducible decomposition of two-forms");
    decompose->add_option("--algebra", algebra, "R, C, H, O or G2")->required();
    decompose->add_option("--rank", rank, "rank n of A^n");

    auto* subspace = app.add_subcommand("classify-subspace", "classify an oriented subspace");
    subspace->add_option("--algebra", algebra, "R, C, H, O or O-special")->required();
    subspace->add_option("--input", input, "subspace JSON ('-' for stdin)")->required();

    auto* connection = app.add_subcommand("classify-connection", "classify constant curvature");
    connection->add_option("--algebra", algebra, "R, C, H, O or G2")->required();
    connection->add_option("--rank", rank, "rank n of A^n");
    connection->add_option("--input", input, "curvature JSON ('-' for stdin)")->required();

    FormSpec spec;
    int k = 0;
    auto* comass = app.add_subcommand("comass", "comass estimate of a form");
    add_form_options(comass, spec);
    comass->add_option("--k", k, "plane dimension (default: form degree)");

    std::optional<int> orientation;
    std::string curvature;
    bool normalize = false;
    auto* ym = app.add_subcommand("ym-check", "Yang-Mills quadratic form and calibrated curvature");
    add_form_options(ym, spec);
    ym->add_option("--orientation", orientation, "volume orientation +1 or -1")->check(CLI::IsMember({-1, 1}));
    ym->add_option("--curvature", curvature, "curvature JSON to test");
    ym->add_flag("--normalize", normalize, "rescale the form by the recorded normalization");

    std::string torus;
    int chern_orientation = 1;
    auto* chern = app.add_subcommand("chern", "Chern pairing on a flat torus");
    add_form_options(chern, spec);
    chern->add_option("--curvature", curvature, "curvature JSON")->required();
    chern->add_option("--torus", torus, "torus JSON (default: standard lattice)");
    chern->add_option("--orientation", chern_orientation, "volume orientation +1 or -1")->check(CLI::IsMember({-1, 1}));

    std::string kernel = "syz";
    bool inverse = false;
    auto* fourier = app.add_subcommand("fourier", "fiberwise or cohomology-level Fourier transform");
    fourier->add_option("--input", input, "mixed form or class JSON ('-' for stdin)")->required();
    fourier->add_option("--kernel", kernel, "syz or cohomology")->check(CLI::IsMember({"syz", "cohomology"}));
    fourier->add_flag("--inverse", inverse, "integrate over the dual fiber instead");

    bool corrupt = false;
    auto* selftest = app.add_subcommand("selftest", "run the acceptance criteria");
    selftest->add_option("--only", only, "criterion keys or ids")->delimiter(',');
    selftest->add_flag("--corrupt-forms", corrupt, "perturb the canonical form cache before running");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (const auto& t : cfg.tol_overrides) {
            const auto eq = t.find('=');
            if (eq == std::string::npos) fail(ErrorKind::malformed_input, "tolerance override must be key=value");
            const std::string key = t.substr(0, eq);
            if (!cfg.tolerances.count(key)) fail(ErrorKind::invalid_argument, "unknown tolerance '" + key + "'");
            try {
                cfg.tolerances[key] = std::stod(t.substr(eq + 1));
            } catch (const std::exception&) {
                fail(ErrorKind::malformed_input, "bad tolerance value in '" + t + "'");
            }
        }
        if (cfg.restarts < 1) fail(ErrorKind::invalid_argument, "restarts must be positive");
        Report r;
        if (*forms) r = cmd_forms(algebra, rank, only);
        else if (*decompose) r = cmd_decompose(algebra, rank);
        else if (*subspace) r = cmd_classify_subspace(algebra, input);
        else if (*connection) r = cmd_classify_connection(algebra, rank, input, cfg);
        else if (*comass) r = cmd_comass(spec, k, cfg);
        else if (*ym) r = cmd_ym_check(spec, orientation, curvature, normalize, cfg);
        else if (*chern) r = cmd_chern(curvature, spec, torus, chern_orientation);
        else if (*fourier) r = cmd_fourier(input, kernel, inverse);
        else if (*selftest) r = cmd_selftest(only, corrupt, cfg);
        emit(r, cfg);
        return r.exit_code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
