#pragma once

#include "osclab/adapt.hpp"
#include "osclab/asymptotics.hpp"
#include "osclab/osc_engine.hpp"
#include "osclab/phase_expr.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace osclab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "osclab";
inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr int kSchemaVersion = 1;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);
/// {"terms":[{"j","k","num","den"}]}
Json to_json(const BivarPoly& p);
BivarPoly poly_from_json(const Json& j);
/// Rational: {"num","den"}; otherwise the representative in the generator a, a's minimal
/// polynomial and an isolating interval.
Json to_json(const AlgebraicNumber& a);
Json to_json(const AlgPoly& p);
Json to_json(const Weight& w);
Json to_json(const NewtonPolyhedron& np, const PrincipalData& pd);
Json to_json(const ShearStep& s);
Json to_json(const AdaptednessVerdict& v);
Json to_json(const AdaptedResult& r);
Json to_json(const LimitConstant& c);
Json to_json(const DecayFit& f);
Json to_json(const QuadratureConfig& c);
Json to_json(const BumpSpec& b);
Json to_json(const LambdaLadder& l);
Json complex_json(std::complex<double> z);

struct Tolerances {
    double alpha_abs = 0.05;         ///< |alpha - 1/h|
    double limit_modulus_rel = 0.15;
    double limit_arg_deg = 10.0;
    double sweep_slope = 0.02;
    double sweep_max_over_median = 3.0;
};

struct SweepSpec {
    int shell_min_exp = 4;  ///< shells 2^shell_min_exp .. 2^shell_max_exp
    int shell_max_exp = 12;
    int directions = 128;
    bool surface_factor = true;
    double target_rel_error = 1e-4;  ///< replaces the quadrature target during sweeps
};

struct KnappSpec {
    int delta_min_exp = 4;  ///< delta = 2^-delta_min_exp .. 2^-delta_max_exp
    int delta_max_exp = 10;
};

struct RunConfig {
    LambdaLadder ladder{100.0, std::cbrt(10.0), 12};
    QuadratureConfig quadrature;
    BumpSpec bump;
    SweepSpec sweep;
    KnappSpec knapp;
    Tolerances tolerances;
    std::uint64_t seed = 1;
    std::string out;

    void validate() const;
    Json to_json() const;
    /// Keys absent from `j` keep their current values; unknown keys are rejected.
    void merge(const Json& j);
    /// FNV-1a of the canonical JSON dump (output path excluded).
    std::string hash() const;
};

struct AnalysisReport {
    std::string phase_source;
    BivarPoly taylor;
    bool has_flat_part = false;
    HeightAnalysis analysis;
    std::optional<SuperAdaptResult> super_adapted;
    LimitConstant limit;
    DecayPrediction prediction;
    RestrictionExponent restriction;
    /// Principal (or supporting) weight in the input coordinates, for quadrature layout.
    std::optional<Weight> layout_weight;

    LayoutWeight layout() const;
    Json to_json(const RunConfig& cfg) const;
};

/// Exact analysis of a phase (its Taylor polynomial when a flat part is present).
/// Throws ParseError, NotPolynomialError, PreconditionError or FiniteTypeError.
AnalysisReport analyze_phase(const std::string& src);

Json provenance(const RunConfig& cfg);

}  // namespace osclab
