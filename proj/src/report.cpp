#include "osclab/report.hpp"

#include <cmath>
#include <cstdio>

namespace osclab {

Json to_json(const Rational& r) { return Json{{"num", r.num().get_str()}, {"den", r.den().get_str()}}; }

Rational rational_from_json(const Json& j) {
    return Rational(mpz_class(j.at("num").get<std::string>()), mpz_class(j.at("den").get<std::string>()));
}

Json to_json(const BivarPoly& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms())
        terms.push_back({{"j", e.j}, {"k", e.k}, {"num", c.num().get_str()}, {"den", c.den().get_str()}});
    return Json{{"terms", terms}};
}

BivarPoly poly_from_json(const Json& j) {
    BivarPoly p;
    for (const auto& t : j.at("terms")) {
        const int a = t.at("j").get<int>(), b = t.at("k").get<int>();
        if (a < 0 || b < 0) throw std::invalid_argument("negative exponent in polynomial JSON");
        p.add_term(rational_from_json(t), a, b);
    }
    return p;
}

namespace {

Json upoly_json(const UPoly& p) {
    Json c = Json::array();
    for (const auto& x : p.coeffs()) c.push_back(x.str());
    return c;
}

Json opt_rational(const std::optional<Rational>& r) { return r ? Json(r->str()) : Json(nullptr); }

}  // namespace

Json to_json(const AlgebraicNumber& a) {
    if (a.is_rational()) {
        const Rational r = a.rational();
        return Json{{"kind", "rational"}, {"num", r.num().get_str()}, {"den", r.den().get_str()}};
    }
    const RealRoot& g = a.field()->generator();
    return Json{{"kind", "algebraic"},
                {"representative", upoly_json(a.representative())},
                {"generator_minimal_polynomial", upoly_json(a.field()->modulus())},
                {"generator_interval", {g.lo().str(), g.hi().str()}},
                {"approx", a.to_double()},
                {"text", a.str()}};
}

Json to_json(const AlgPoly& p) {
    Json terms = Json::array();
    for (const auto& [e, c] : p.terms()) {
        Json t{{"j", e.j}, {"k", e.k}};
        if (c.is_rational()) {
            t["num"] = c.rational().num().get_str();
            t["den"] = c.rational().den().get_str();
        } else {
            t["value"] = to_json(c);
        }
        terms.push_back(t);
    }
    return Json{{"terms", terms}};
}

Json to_json(const Weight& w) {
    return Json{{"kappa1", w.k1.str()}, {"kappa2", w.k2.str()}, {"swapped", w.swapped}};
}

Json to_json(const NewtonPolyhedron& np, const PrincipalData& pd) {
    Json v = Json::array();
    for (const auto& e : np.vertices) v.push_back({e.j, e.k});
    Json edges = Json::array();
    for (const auto& e : np.edges)
        edges.push_back({{"from", e.from},
                         {"to", e.to},
                         {"kappa1", e.kappa.k1.str()},
                         {"kappa2", e.kappa.k2.str()},
                         {"ratio", e.ratio().str()}});
    Json out{{"vertices", v},
             {"edges", edges},
             {"vertical_ray", np.has_vertical_ray},
             {"horizontal_ray", np.has_horizontal_ray},
             {"d", pd.distance.str()},
             {"principal_face", {{"kind", face_kind_name(pd.face.kind)}, {"index", pd.face.index}}}};
    if (pd.weight) out["principal_weight"] = to_json(*pd.weight);
    return out;
}

Json to_json(const ShearStep& s) {
    return Json{{"c", to_json(s.c)}, {"m", s.m}, {"over", s.transposed ? "x1 in x2" : "x2 in x1"},
                {"substitution", s.transposed ? "y1 = x1 - c*x2^m" : "y2 = x2 - c*x1^m"}};
}

Json to_json(const AdaptednessVerdict& v) {
    Json out{{"adapted", v.adapted},
             {"condition", v.condition ? Json(std::string(1, v.condition)) : Json(nullptr)},
             {"description", v.describe()}};
    out["circle_order"] = v.circle_order ? Json(*v.circle_order) : Json(nullptr);
    out["m1"] = opt_rational(v.m1);
    return out;
}

Json to_json(const AdaptedResult& r) {
    Json steps = Json::array();
    for (const auto& s : r.psi_jet) steps.push_back(to_json(s));
    Json trace = Json::array();
    for (const auto& d : r.distance_trace) trace.push_back(d.str());
    Json out{{"transposed", r.transposed},
             {"linear_step", r.linear_step ? to_json(*r.linear_step) : Json(nullptr)},
             {"psi_jet", steps},
             {"steps", r.steps},
             {"distance_trace", trace},
             {"vertex_normalized", r.normalized_vertex},
             {"phi_adapted", to_json(r.phi_adapted)},
             {"phi_adapted_text", r.phi_adapted.str()},
             {"phi_a", to_json(r.phi_a)},
             {"phi_a_text", r.phi_a.str()},
             {"polyhedron", to_json(r.polyhedron, r.principal)},
             {"height", r.height.str()},
             {"nu", r.nu}};
    return out;
}

Json complex_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const LimitConstant& c) {
    Json out{{"kind", limit_kind_name(c.kind)}};
    if (c.kind != LimitConstant::Kind::ClosedForm) {
        out["note"] = c.note;
        return out;
    }
    out["re"] = c.value.real();
    out["im"] = c.value.imag();
    out["formula"] = c.formula;
    out["components"] = {{"d", c.d},
                         {"C_d", complex_json(c.c_d)},
                         {"a", opt_rational(c.a)},
                         {"b", opt_rational(c.b)},
                         {"f", c.f},
                         {"parity", c.parity}};
    out["minus"] = complex_json(c.minus());
    out["conjugated"] = c.conjugated;
    out["scale"] = c.scale;
    out["corrected"] = {{"re", c.corrected.real()},
                        {"im", c.corrected.imag()},
                        {"f", c.f_corrected},
                        {"formula", c.parity == "even" ? "c_+ = 4 f C_d / d, f = (b-a)/((1+a)(1+b))"
                                                       : "c_+ = 2 f (C_d + conj(C_d)) / d, f = (b-a)/((1+a)(1+b))"}};
    return out;
}

Json to_json(const DecayFit& f) {
    return Json{{"alpha", f.alpha},
                {"beta", f.beta},
                {"c_hat", f.c_hat},
                {"residual_rms", f.residual_rms},
                {"model_selection_score", f.model_selection_score},
                {"alpha_beta0", f.alpha_beta0},
                {"alpha_beta1", f.alpha_beta1},
                {"rms_beta0", f.rms_beta0},
                {"rms_beta1", f.rms_beta1}};
}

Json to_json(const QuadratureConfig& c) {
    return Json{{"points_per_wavelength", c.points_per_wavelength},
                {"max_subdivision_depth", c.max_subdivision_depth},
                {"dyadic_base", c.dyadic_base},
                {"target_rel_error", c.target_rel_error},
                {"abs_error_floor", c.abs_error_floor},
                {"max_cells", c.max_cells},
                {"deform", c.deform},
                {"cell_rule", c.cell_rule}};
}

Json to_json(const BumpSpec& b) {
    return Json{{"kind", bump_kind_name(b.kind)}, {"radius", b.radius}, {"eta0", b.eta0}};
}

Json to_json(const LambdaLadder& l) { return Json{{"lambda_min", l.lambda_min}, {"growth", l.growth}, {"n", l.n}}; }

// ---------------------------------------------------------------- RunConfig

void RunConfig::validate() const {
    ladder.validate();
    quadrature.validate();
    bump.validate();
    if (sweep.shell_min_exp < 0 || sweep.shell_max_exp < sweep.shell_min_exp || sweep.shell_max_exp > 23)
        throw std::invalid_argument("sweep shells must satisfy 0 <= min <= max <= 23");
    if (sweep.directions < 1) throw std::invalid_argument("sweep needs at least one direction");
    if (!(sweep.target_rel_error > 0 && sweep.target_rel_error < 1))
        throw std::invalid_argument("sweep.target_rel_error must lie in (0, 1)");
    if (knapp.delta_min_exp < 1 || knapp.delta_max_exp <= knapp.delta_min_exp)
        throw std::invalid_argument("knapp scales must satisfy 1 <= min < max");
    const auto& t = tolerances;
    if (!(t.alpha_abs > 0 && t.limit_modulus_rel > 0 && t.limit_arg_deg > 0 && t.sweep_max_over_median >= 1))
        throw std::invalid_argument("tolerances must be positive");
}

Json RunConfig::to_json() const {
    return Json{{"ladder", osclab::to_json(ladder)},
                {"quadrature", osclab::to_json(quadrature)},
                {"bump", osclab::to_json(bump)},
                {"sweep",
                 {{"shell_min_exp", sweep.shell_min_exp},
                  {"shell_max_exp", sweep.shell_max_exp},
                  {"directions", sweep.directions},
                  {"surface_factor", sweep.surface_factor},
                  {"target_rel_error", sweep.target_rel_error}}},
                {"knapp", {{"delta_min_exp", knapp.delta_min_exp}, {"delta_max_exp", knapp.delta_max_exp}}},
                {"tolerances",
                 {{"alpha_abs", tolerances.alpha_abs},
                  {"limit_modulus_rel", tolerances.limit_modulus_rel},
                  {"limit_arg_deg", tolerances.limit_arg_deg},
                  {"sweep_slope", tolerances.sweep_slope},
                  {"sweep_max_over_median", tolerances.sweep_max_over_median}}},
                {"seed", seed},
                {"out", out}};
}

namespace {

template <class T>
void take(const Json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

void check_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        bool ok = false;
        for (const char* key : keys) ok = ok || k == key;
        if (!ok) throw std::invalid_argument("unknown config key '" + where + "." + k + "'");
    }
}

}  // namespace

void RunConfig::merge(const Json& j) {
    check_keys(j, {"ladder", "quadrature", "bump", "sweep", "knapp", "tolerances", "seed", "out"}, "config");
    if (j.contains("ladder")) {
        const Json& l = j["ladder"];
        check_keys(l, {"lambda_min", "growth", "n", "lambda_max", "points"}, "ladder");
        if (l.contains("lambda_max")) {
            const int pts = l.value("points", ladder.n + 1);
            ladder = LambdaLadder::spanning(l.value("lambda_min", ladder.lambda_min), l["lambda_max"].get<double>(), pts);
        } else {
            take(l, "lambda_min", ladder.lambda_min);
            take(l, "growth", ladder.growth);
            take(l, "n", ladder.n);
        }
    }
    if (j.contains("quadrature")) {
        const Json& q = j["quadrature"];
        check_keys(q, {"points_per_wavelength", "max_subdivision_depth", "dyadic_base", "target_rel_error",
                       "abs_error_floor", "max_cells", "deform", "cell_rule"},
                   "quadrature");
        take(q, "points_per_wavelength", quadrature.points_per_wavelength);
        take(q, "max_subdivision_depth", quadrature.max_subdivision_depth);
        take(q, "dyadic_base", quadrature.dyadic_base);
        take(q, "target_rel_error", quadrature.target_rel_error);
        take(q, "abs_error_floor", quadrature.abs_error_floor);
        take(q, "max_cells", quadrature.max_cells);
        take(q, "deform", quadrature.deform);
        if (q.contains("cell_rule") && q["cell_rule"].get<std::string>() != quadrature.cell_rule)
            throw std::invalid_argument("only the cell rule '" + quadrature.cell_rule + "' is available");
    }
    if (j.contains("bump")) {
        const Json& b = j["bump"];
        check_keys(b, {"kind", "radius", "eta0"}, "bump");
        if (b.contains("kind")) bump.kind = parse_bump_kind(b["kind"].get<std::string>());
        take(b, "radius", bump.radius);
        take(b, "eta0", bump.eta0);
    }
    if (j.contains("sweep")) {
        const Json& s = j["sweep"];
        check_keys(s, {"shell_min_exp", "shell_max_exp", "directions", "surface_factor", "target_rel_error"}, "sweep");
        take(s, "shell_min_exp", sweep.shell_min_exp);
        take(s, "shell_max_exp", sweep.shell_max_exp);
        take(s, "directions", sweep.directions);
        take(s, "surface_factor", sweep.surface_factor);
        take(s, "target_rel_error", sweep.target_rel_error);
    }
    if (j.contains("knapp")) {
        const Json& k = j["knapp"];
        check_keys(k, {"delta_min_exp", "delta_max_exp"}, "knapp");
        take(k, "delta_min_exp", knapp.delta_min_exp);
        take(k, "delta_max_exp", knapp.delta_max_exp);
    }
    if (j.contains("tolerances")) {
        const Json& t = j["tolerances"];
        check_keys(t, {"alpha_abs", "limit_modulus_rel", "limit_arg_deg", "sweep_slope", "sweep_max_over_median"},
                   "tolerances");
        take(t, "alpha_abs", tolerances.alpha_abs);
        take(t, "limit_modulus_rel", tolerances.limit_modulus_rel);
        take(t, "limit_arg_deg", tolerances.limit_arg_deg);
        take(t, "sweep_slope", tolerances.sweep_slope);
        take(t, "sweep_max_over_median", tolerances.sweep_max_over_median);
    }
    take(j, "seed", seed);
    take(j, "out", out);
    validate();
}

std::string RunConfig::hash() const {
    Json j = to_json();
    j.erase("out");
    const std::string s = j.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json provenance(const RunConfig& cfg) {
    return Json{{"tool", kToolName},
                {"tool_version", kToolVersion},
                {"schema_version", kSchemaVersion},
                {"config_hash", cfg.hash()},
                {"seed", cfg.seed}};
}

// ---------------------------------------------------------------- analysis

LayoutWeight AnalysisReport::layout() const {
    if (!layout_weight) return std::nullopt;
    const Weight& w = *layout_weight;
    return std::make_pair(w.k1.to_double(), w.k2.to_double());
}

AnalysisReport analyze_phase(const std::string& src) {
    AnalysisReport r;
    r.phase_source = src;
    const PhaseExpr e = parse_phase(src);
    const PhaseExpr::Taylor t = e.taylor();
    r.taylor = t.polynomial;
    r.has_flat_part = t.has_flat_part;
    r.analysis = compute_height_nu(r.taylor);
    const AdaptedResult& ad = r.analysis.adapted;
    if (ad.principal.face.kind == FaceKind::Vertex) {
        r.super_adapted = super_adapt(ad.phi_a);
        r.limit = limit_constant(ad, r.super_adapted->phi);
    } else {
        r.limit = limit_constant(ad, ad.phi_a);
    }
    if (r.has_flat_part && r.limit.kind == LimitConstant::Kind::ClosedForm) {
        r.limit.note = "a flat part is present; the constant refers to the Taylor polynomial";
    }
    r.prediction = predict_decay(r.analysis.h, r.analysis.nu);
    r.restriction = restriction_exponent(r.analysis.h);

    // layout weight in input coordinates
    const PrincipalData& pd = r.analysis.principal;
    std::optional<Weight> w;
    if (pd.weight) w = *pd.weight;
    else if (pd.face.kind == FaceKind::Vertex && pd.distance.sign() > 0)
        w = supporting_weight_for_vertex(r.analysis.polyhedron, pd.face.index);
    if (w && w->swapped) w = Weight(w->k2, w->k1);
    r.layout_weight = w;
    return r;
}

Json AnalysisReport::to_json(const RunConfig& cfg) const {
    const HeightAnalysis& a = analysis;
    Json support = Json::array();
    for (const auto& e : taylor.support()) support.push_back({e.j, e.k});
    Json j{{"schema_version", kSchemaVersion},
           {"phase_source", phase_source},
           {"taylor_polynomial", osclab::to_json(taylor)},
           {"taylor_text", taylor.str()},
           {"has_flat_part", has_flat_part},
           {"support", support},
           {"polyhedron", osclab::to_json(a.polyhedron, a.principal)},
           {"d", a.d.str()},
           {"h", a.h.str()},
           {"nu", a.nu},
           {"adapted", a.verdict.adapted},
           {"verdict", osclab::to_json(a.verdict)},
           {"principal_weight", a.principal.weight ? osclab::to_json(*a.principal.weight) : Json(nullptr)},
           {"adapted_coordinates", osclab::to_json(a.adapted)}};
    if (super_adapted) {
        Json sh = Json::array();
        for (const auto& s : super_adapted->shears) sh.push_back(osclab::to_json(s));
        j["super_adapted"] = {{"phi", osclab::to_json(super_adapted->phi)},
                              {"phi_text", super_adapted->phi.str()},
                              {"shears", sh},
                              {"transposed", super_adapted->transposed}};
    }
    j["p_c"] = restriction.p_c.str();
    j["p_c_dual"] = restriction.p_c_dual.str();
    j["decay_prediction"] = {{"exponent", prediction.exponent.str()},
                             {"log_power", prediction.log_power},
                             {"statement", prediction.statement}};
    j["limit_constant"] = osclab::to_json(limit);
    j["provenance"] = provenance(cfg);
    return j;
}

}  // namespace osclab
