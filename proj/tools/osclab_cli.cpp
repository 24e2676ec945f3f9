// osclab: exact Newton-polyhedron analysis and oscillatory-integral experiments for
// phases of two variables.

#include "osclab/report.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace osclab;

namespace {

enum Exit { kPass = 0, kUsage = 1, kPrecondition = 2, kUnreliable = 3, kToleranceFail = 4 };

struct Options {
    std::string command;
    std::string phase;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "json";
    std::optional<double> alpha_tol, limit_mod_tol, limit_arg_tol, sweep_slope_tol, sweep_ratio_tol;
    std::string reference = "stated";
    bool no_probe = false;
    bool synthetic = false;
};

struct Emitted {
    Json report;
    std::string csv;             ///< main table, when the command produces one
    std::string csv_name;        ///< file name used under --out
    std::string plot;            ///< gnuplot script text
    int code = kPass;
};

Json error_object(const std::string& kind, const std::string& message, int code) {
    return Json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}},
                {"tool", kToolName},
                {"tool_version", kToolVersion},
                {"schema_version", kSchemaVersion}};
}

RunConfig load_config(const Options& o) {
    RunConfig cfg;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw std::invalid_argument("cannot open config file " + o.config_path);
        cfg.merge(Json::parse(in, nullptr, true, true));
    }
    if (o.seed) cfg.seed = *o.seed;
    if (!o.out.empty()) cfg.out = o.out;
    if (o.alpha_tol) cfg.tolerances.alpha_abs = *o.alpha_tol;
    if (o.limit_mod_tol) cfg.tolerances.limit_modulus_rel = *o.limit_mod_tol;
    if (o.limit_arg_tol) cfg.tolerances.limit_arg_deg = *o.limit_arg_tol;
    if (o.sweep_slope_tol) cfg.tolerances.sweep_slope = *o.sweep_slope_tol;
    if (o.sweep_ratio_tol) cfg.tolerances.sweep_max_over_median = *o.sweep_ratio_tol;
    cfg.validate();
    return cfg;
}

std::string verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

double arg_deg(std::complex<double> a, std::complex<double> b) {
    return std::abs(std::arg(a / b)) * 180.0 / std::acos(-1.0);
}

// ------------------------------------------------------------------ analyze

Emitted cmd_analyze(const AnalysisReport& rep, const RunConfig& cfg) {
    Emitted e;
    e.report = rep.to_json(cfg);
    std::ostringstream csv;
    csv << "key,value\n";
    csv << "d," << rep.analysis.d.str() << "\n";
    csv << "h," << rep.analysis.h.str() << "\n";
    csv << "nu," << rep.analysis.nu << "\n";
    csv << "adapted," << (rep.analysis.verdict.adapted ? "true" : "false") << "\n";
    csv << "p_c," << rep.restriction.p_c.str() << "\n";
    csv << "p_c_dual," << rep.restriction.p_c_dual.str() << "\n";
    e.csv = csv.str();
    e.csv_name = "analysis.csv";
    return e;
}

// ------------------------------------------------------------------ decay

std::vector<JSample> synthetic_samples(const std::vector<double>& lambdas, double alpha, int beta) {
    std::vector<JSample> s;
    for (double l : lambdas) {
        const double m = std::pow(l, -alpha) * std::pow(std::log(l), beta);
        s.push_back({l, std::polar(m, 0.3 + 0.1 * std::log(l)), 1e-12 * m, true});
    }
    return s;
}

Emitted cmd_decay(const AnalysisReport& rep, const RunConfig& cfg, bool synthetic) {
    const double alpha_pred = 1.0 / rep.analysis.h.to_double();
    const int beta_pred = rep.analysis.nu;
    const std::vector<double> lambdas = cfg.ladder.points();
    std::vector<JSample> samples =
        synthetic ? synthetic_samples(lambdas, alpha_pred, beta_pred)
                  : sample_ladder(parse_phase(rep.phase_source), cfg.bump, lambdas, +1, cfg.quadrature, rep.layout());
    const DecayFit fit = fit_decay(samples);
    bool reliable = true;
    for (const auto& s : samples) reliable = reliable && s.reliable;

    Emitted e;
    e.report = Json{{"schema_version", kSchemaVersion},
                    {"command", "decay"},
                    {"phase_source", rep.phase_source},
                    {"synthetic", synthetic},
                    {"h", rep.analysis.h.str()},
                    {"nu", rep.analysis.nu},
                    {"predicted", {{"alpha", alpha_pred}, {"beta", beta_pred}}},
                    {"fit", to_json(fit)}};
    bool ok;
    if (rep.has_flat_part) {
        // the flat part only adds logarithmic losses: require at least the Taylor rate
        const double r0 = std::sqrt(samples.front().lambda) * std::abs(samples.front().J);
        const double r1 = std::sqrt(samples.back().lambda) * std::abs(samples.back().J);
        e.report["flat_diagnostic"] = {{"ratio_lambda_min", r0},
                                       {"ratio_lambda_max", r1},
                                       {"ratio_decay", r1 / r0},
                                       {"decreasing", r1 < r0}};
        ok = fit.alpha >= alpha_pred - cfg.tolerances.alpha_abs;
        e.report["criterion"] = "alpha >= 1/h - tol (flat part present)";
    } else {
        ok = std::abs(fit.alpha - alpha_pred) <= cfg.tolerances.alpha_abs && fit.beta == beta_pred;
        e.report["criterion"] = "|alpha - 1/h| <= tol and beta = nu";
    }
    e.report["tolerance"] = cfg.tolerances.alpha_abs;
    e.report["reliable"] = reliable;
    e.report["verdict"] = verdict(ok);
    Json rows = Json::array();
    for (const auto& s : samples)
        rows.push_back({{"lambda", s.lambda}, {"re_J", s.J.real()}, {"im_J", s.J.imag()}, {"err", s.err}});
    e.report["samples"] = rows;
    e.report["provenance"] = provenance(cfg);

    std::ostringstream csv;
    write_samples_csv(csv, samples);
    e.csv = csv.str();
    e.csv_name = "samples.csv";
    e.plot = "set logscale xy\nset xlabel 'lambda'\nset ylabel '|J|'\nset datafile separator ','\n"
             "plot 'samples.csv' using 1:4 skip 1 with linespoints title '|J|'\n";
    e.code = !reliable ? kUnreliable : ok ? kPass : kToleranceFail;
    return e;
}

// ------------------------------------------------------------------ limit

Emitted cmd_limit(const AnalysisReport& rep, const RunConfig& cfg, const std::string& reference) {
    Emitted e;
    const LimitConstant& lc = rep.limit;
    e.report = Json{{"schema_version", kSchemaVersion},
                    {"command", "limit"},
                    {"phase_source", rep.phase_source},
                    {"h", rep.analysis.h.str()},
                    {"nu", rep.analysis.nu},
                    {"principal_face", face_kind_name(rep.analysis.adapted.principal.face.kind)}};
    if (lc.kind == LimitConstant::Kind::NotApplicable) {
        e.report["status"] = "not-applicable";
        e.report["reason"] = "the principal face in adapted coordinates is unbounded; the limit theorem "
                             "requires the principal face to be a compact set";
        e.report["note"] = lc.note;
        e.report["provenance"] = provenance(cfg);
        e.code = kPrecondition;
        return e;
    }
    const LimitSeries s = limit_ratio_series(parse_phase(rep.phase_source), cfg.bump, cfg.ladder, rep.analysis.h,
                                             rep.analysis.nu, cfg.quadrature, rep.layout());
    // closed forms are for eta(0) = 1
    const std::complex<double> est = s.estimate.value / cfg.bump.eta0;
    e.report["status"] = "computed";
    e.report["estimate"] = {{"re", est.real()},
                            {"im", est.imag()},
                            {"uncertainty", s.estimate.uncertainty / cfg.bump.eta0},
                            {"model", s.estimate.model},
                            {"epsilon", s.estimate.epsilon}};
    e.report["closed_form"] = to_json(lc);
    bool ok = true;
    if (lc.kind == LimitConstant::Kind::ClosedForm) {
        auto dev = [&](std::complex<double> ref) {
            return Json{{"modulus_rel", std::abs(std::abs(est) - std::abs(ref)) / std::abs(ref)},
                        {"arg_deg", arg_deg(est, ref)},
                        {"complex_rel", std::abs(est - ref) / std::abs(ref)}};
        };
        e.report["deviation_stated"] = dev(lc.value);
        e.report["deviation_corrected"] = dev(lc.corrected);
        const Json& d = reference == "corrected" ? e.report["deviation_corrected"] : e.report["deviation_stated"];
        ok = d["modulus_rel"].get<double>() <= cfg.tolerances.limit_modulus_rel &&
             d["arg_deg"].get<double>() <= cfg.tolerances.limit_arg_deg;
        e.report["reference"] = reference;
        e.report["tolerances"] = {{"modulus_rel", cfg.tolerances.limit_modulus_rel},
                                  {"arg_deg", cfg.tolerances.limit_arg_deg}};
        e.report["verdict"] = verdict(ok);
    } else {
        e.report["verdict"] = "NUMERIC-ONLY";
    }
    e.report["reliable"] = s.reliable;
    e.report["provenance"] = provenance(cfg);

    std::ostringstream csv;
    write_limit_csv(csv, s.points);
    e.csv = csv.str();
    e.csv_name = "limit.csv";
    e.plot = "set logscale x\nset xlabel 'lambda'\nset datafile separator ','\n"
             "plot 'limit.csv' using 1:5 skip 1 with linespoints title 'Re ratio', "
             "'' using 1:6 skip 1 with linespoints title 'Im ratio'\n";
    e.code = !s.reliable ? kUnreliable : ok ? kPass : kToleranceFail;
    return e;
}

// ------------------------------------------------------------------ sweep

Emitted cmd_sweep(const AnalysisReport& rep, const RunConfig& cfg) {
    std::vector<double> radii;
    for (int k = cfg.sweep.shell_min_exp; k <= cfg.sweep.shell_max_exp; ++k) radii.push_back(std::ldexp(1.0, k));
    QuadratureConfig q = cfg.quadrature;
    q.target_rel_error = cfg.sweep.target_rel_error;
    const SweepResult r = uniform_sweep(parse_phase(rep.phase_source), cfg.bump, radii,
                                        sphere_directions(cfg.sweep.directions, cfg.seed), rep.analysis.h,
                                        rep.analysis.nu, q, cfg.sweep.surface_factor);
    const bool ok = r.slope <= cfg.tolerances.sweep_slope && r.max_over_median <= cfg.tolerances.sweep_max_over_median;
    Emitted e;
    Json shells = Json::array();
    for (const auto& s : r.shells)
        shells.push_back({{"radius", s.radius}, {"max_normalized", s.max_normalized}, {"argmax", s.argmax}});
    e.report = Json{{"schema_version", kSchemaVersion},
                    {"command", "sweep"},
                    {"phase_source", rep.phase_source},
                    {"h", rep.analysis.h.str()},
                    {"nu", rep.analysis.nu},
                    {"directions", cfg.sweep.directions},
                    {"shells", shells},
                    {"slope", r.slope},
                    {"max_over_median", r.max_over_median},
                    {"tolerances",
                     {{"slope", cfg.tolerances.sweep_slope}, {"max_over_median", cfg.tolerances.sweep_max_over_median}}},
                    {"reliable", r.reliable},
                    {"verdict", verdict(ok)},
                    {"provenance", provenance(cfg)}};
    std::ostringstream csv;
    write_sweep_csv(csv, r);
    e.csv = csv.str();
    e.csv_name = "sweep.csv";
    e.plot = "set logscale x\nset xlabel '|xi|'\nset ylabel 'normalized |mu^|'\nset datafile separator ','\n"
             "plot 'sweep.csv' using (sqrt($2**2+$3**2+$4**2)):5 skip 1 with points title 'samples'\n";
    e.code = !r.reliable ? kUnreliable : ok ? kPass : kToleranceFail;
    return e;
}

// ------------------------------------------------------------------ restriction

Emitted cmd_restriction(const AnalysisReport& rep, const RunConfig& cfg, bool no_probe) {
    Emitted e;
    const double pc = rep.restriction.p_c.to_double();
    e.report = Json{{"schema_version", kSchemaVersion},
                    {"command", "restriction"},
                    {"phase_source", rep.phase_source},
                    {"h", rep.analysis.h.str()},
                    {"p_c", rep.restriction.p_c.str()},
                    {"p_c_dual", rep.restriction.p_c_dual.str()},
                    {"p_c_approx", pc}};
    if (no_probe) {
        e.report["probe"] = nullptr;
        e.report["provenance"] = provenance(cfg);
        return e;
    }
    if (!rep.layout_weight)
        throw PreconditionError("the Knapp probe needs a principal weight (compact principal face)");
    std::vector<double> deltas;
    for (int k = cfg.knapp.delta_min_exp; k <= cfg.knapp.delta_max_exp; ++k) deltas.push_back(std::ldexp(1.0, -k));
    const PhaseExpr ph = parse_phase(rep.phase_source);
    const double h = rep.analysis.h.to_double();
    Json probe = Json::array();
    std::ostringstream csv;
    bool ok = true;
    const std::pair<double, const char*> cases[] = {{0.9, "decreasing"}, {1.0, "flat"}, {1.1, "increasing"}};
    for (const auto& [factor, expected] : cases) {
        const double p = pc * factor;
        const auto pts = knapp_ratio(ph, cfg.bump, *rep.layout(), p, deltas, cfg.quadrature);
        const KnappTrend t = classify_knapp(pts);
        ok = ok && t.trend == expected;
        Json rows = Json::array();
        for (const auto& k : pts)
            rows.push_back({{"delta", k.delta}, {"cap", k.cap}, {"lp_norm", k.lp_norm}, {"ratio", k.ratio}});
        probe.push_back({{"p", p},
                         {"p_over_p_c", factor},
                         {"predicted_exponent", knapp_exponent(h, p)},
                         {"fitted_exponent", t.fitted_exponent},
                         {"spread", t.spread},
                         {"trend", t.trend},
                         {"expected_trend", expected},
                         {"points", rows}});
        write_knapp_csv(csv, p, pts);
    }
    e.report["kappa"] = {rep.layout()->first, rep.layout()->second};
    e.report["probe"] = probe;
    e.report["verdict"] = verdict(ok);
    e.report["provenance"] = provenance(cfg);
    e.csv = csv.str();
    e.csv_name = "knapp.csv";
    e.code = ok ? kPass : kToleranceFail;
    return e;
}

// ------------------------------------------------------------------ selftest

Emitted cmd_selftest(const RunConfig& cfg) {
    Json checks = Json::array();
    bool ok = true;
    auto add = [&](const std::string& name, bool pass, Json detail) {
        ok = ok && pass;
        checks.push_back({{"check", name}, {"verdict", verdict(pass)}, {"detail", detail}});
    };

    const AnalysisReport g = analyze_phase("(x2-2*x1^2)^2*(x2-x1^2)");
    add("golden analysis",
        g.analysis.d == Rational(2) && g.analysis.h == Rational(2) && g.analysis.nu == 1 && g.analysis.verdict.adapted &&
            g.restriction.p_c_dual == Rational(6),
        {{"d", g.analysis.d.str()}, {"h", g.analysis.h.str()}, {"nu", g.analysis.nu}});

    const AnalysisReport t1 = analyze_phase("x1^3*x2+x2^5"), t2 = analyze_phase("x2^3*x1+x1^5");
    add("transposition invariance",
        t1.analysis.d == t2.analysis.d && t1.analysis.h == t2.analysis.h && t1.analysis.nu == t2.analysis.nu,
        {{"h", t1.analysis.h.str()}});

    const auto lambdas = LambdaLadder::spanning(1e2, 1e6, 13).points();
    const DecayFit f = fit_decay(synthetic_samples(lambdas, 0.5, 1));
    add("synthetic decay fit", std::abs(f.alpha - 0.5) < 1e-9 && f.beta == 1, to_json(f));

    const QuadResult q = eval_J(parse_phase("x1^2+x2^2"), BumpSpec{}, 1e4, +1, cfg.quadrature);
    const std::complex<double> anchor = 1e4 * q.value;
    const double pi = std::acos(-1.0);
    const double rel = std::abs(anchor - std::complex<double>(0, pi)) / pi;
    add("stationary phase anchor", rel <= 0.01, {{"re", anchor.real()}, {"im", anchor.imag()}, {"rel", rel}});

    Emitted e;
    e.report = Json{{"schema_version", kSchemaVersion},
                    {"command", "selftest"},
                    {"checks", checks},
                    {"verdict", verdict(ok)},
                    {"provenance", provenance(cfg)}};
    e.code = ok ? kPass : kToleranceFail;
    return e;
}

int emit(const Emitted& e, const Options& o) {
    if (!o.out.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(o.out);
        std::ofstream(fs::path(o.out) / "report.json") << e.report.dump(2) << "\n";
        if (!e.csv.empty()) std::ofstream(fs::path(o.out) / e.csv_name) << e.csv;
        if (!e.plot.empty()) std::ofstream(fs::path(o.out) / "plot.gp") << e.plot;
    }
    if (o.format == "csv" && !e.csv.empty())
        std::cout << e.csv;
    else
        std::cout << e.report.dump(2) << "\n";
    return e.code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"osclab: Newton polyhedra, heights and oscillatory integrals of two-variable phases"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool needs_phase) {
        auto* ph = sub->add_option("phase,--phase", o.phase, "phase expression in x1, x2");
        if (needs_phase) ph->required();
        sub->add_option("--config", o.config_path, "JSON config file (keys as printed in provenance)")
            ->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--out", o.out, "directory for report.json, tables and plot script");
        sub->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--alpha-tol", o.alpha_tol, "tolerance on |alpha - 1/h|");
        sub->add_option("--limit-modulus-tol", o.limit_mod_tol, "relative modulus tolerance for limits");
        sub->add_option("--limit-arg-tol", o.limit_arg_tol, "argument tolerance for limits, degrees");
        sub->add_option("--sweep-slope-tol", o.sweep_slope_tol, "maximal log-log slope of shell suprema");
        sub->add_option("--sweep-ratio-tol", o.sweep_ratio_tol, "maximal shell max / median");
    };
    auto* analyze = app.add_subcommand("analyze", "exact analysis: d, h, nu, adapted coordinates, constants");
    auto* decay = app.add_subcommand("decay", "lambda ladder and decay-law fit");
    auto* limit = app.add_subcommand("limit", "limit ratio series against the closed-form constant");
    auto* sweep = app.add_subcommand("sweep", "normalized Fourier transform of the surface measure over shells");
    auto* restriction = app.add_subcommand("restriction", "critical restriction exponent and Knapp probe");
    auto* selftest = app.add_subcommand("selftest", "quick internal consistency checks");
    for (auto* s : {analyze, decay, limit, sweep, restriction}) common(s, true);
    common(selftest, false);
    decay->add_flag("--synthetic", o.synthetic, "fit generated samples instead of quadrature output");
    limit->add_option("--reference", o.reference, "closed form used for the verdict")
        ->check(CLI::IsMember({"stated", "corrected"}));
    restriction->add_flag("--no-probe", o.no_probe, "formula only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cout << error_object("usage", e.what(), kUsage).dump(2) << "\n";
        return kUsage;
    }
    o.command = app.get_subcommands().front()->get_name();

    auto fail = [](const std::string& kind, const std::string& msg, int code) {
        std::cout << error_object(kind, msg, code).dump(2) << "\n";
        return code;
    };
    try {
        const RunConfig cfg = load_config(o);
        if (o.command == "selftest") return emit(cmd_selftest(cfg), o);
        const AnalysisReport rep = analyze_phase(o.phase);
        if (o.command == "analyze") return emit(cmd_analyze(rep, cfg), o);
        if (o.command == "decay") return emit(cmd_decay(rep, cfg, o.synthetic), o);
        if (o.command == "limit") return emit(cmd_limit(rep, cfg, o.reference), o);
        if (o.command == "sweep") return emit(cmd_sweep(rep, cfg), o);
        return emit(cmd_restriction(rep, cfg, o.no_probe), o);
    } catch (const ParseError& e) {
        return fail("parse", e.what(), kUsage);
    } catch (const NotPolynomialError& e) {
        return fail("not-polynomial", e.what(), kUsage);
    } catch (const Json::exception& e) {
        return fail("config", e.what(), kUsage);
    } catch (const PreconditionError& e) {
        return fail("precondition", e.what(), kPrecondition);
    } catch (const FiniteTypeError& e) {
        return fail("precondition", e.what(), kPrecondition);
    } catch (const FitError& e) {
        return fail("numeric", e.what(), kUnreliable);
    } catch (const IterationCapError& e) {
        return fail("numeric", e.what(), kUnreliable);
    } catch (const EvaluationError& e) {
        return fail("numeric", e.what(), kUnreliable);
    } catch (const std::invalid_argument& e) {
        return fail("config", e.what(), kUsage);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kUnreliable);
    }
}
