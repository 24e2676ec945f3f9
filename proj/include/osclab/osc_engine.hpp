#pragma once

#include "osclab/cubature.hpp"
#include "osclab/phase_expr.hpp"
#include "osclab/phase_program.hpp"
#include "osclab/rational.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace osclab {

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// eta(x) = eta0 * exp(1 - 1/(1 - (|x|/r)^2)) on |x| < r (radial), or the product of the
/// one-dimensional profiles on the box |x_i| < r (tensor).
struct BumpSpec {
    enum class Kind { Radial, Tensor };
    Kind kind = Kind::Radial;
    double radius = 1.0;
    double eta0 = 1.0;

    void validate() const;
    bool inside(double x1, double x2) const;
    double value(double x1, double x2) const;
    /// Analytic continuation used on the deformed contour.
    std::complex<double> value(std::complex<double> z1, std::complex<double> z2) const;
};

std::string bump_kind_name(BumpSpec::Kind k);
BumpSpec::Kind parse_bump_kind(const std::string& s);

/// Integral of eta by plain (non-oscillatory) cubature.
double bump_mass(const BumpSpec& eta);

struct LambdaLadder {
    double lambda_min = 100.0;
    double growth = 2.0;
    int n = 12;  ///< points lambda_min * growth^i for i = 0..n

    void validate() const;
    std::vector<double> points() const;
    /// count >= 2 points from lo to hi inclusive.
    static LambdaLadder spanning(double lo, double hi, int count);
};

struct QuadratureConfig {
    int points_per_wavelength = 8;
    int max_subdivision_depth = 48;
    int dyadic_base = 2;
    double target_rel_error = 1e-6;
    double abs_error_floor = 1e-14;
    long max_cells = 200000;
    /// Shift the integration surface into the complex domain where the phase is analytic.
    bool deform = true;
    std::string cell_rule = "tensor Gauss-Kronrod 7/15";

    void validate() const;
};

struct QuadResult {
    std::complex<double> value;
    double error = 0.0;
    bool reliable = true;
    long cells = 0;
    long evaluations = 0;
    double deformation = 0.0;  ///< contour shift scale actually used (0: real contour)
    std::string note;
};

/// Optional dilation weight (k1, k2) for the dyadic annulus layout.
using LayoutWeight = std::optional<std::pair<double, double>>;

/// Integral of exp(i sign lambda Phi) * (sum of amplitude bumps) [* sqrt(1 + |grad phi|^2)]
/// with Phi = w1 x1 + w2 x2 + w3 phi(x).
struct OscillatoryProblem {
    std::array<double, 3> direction{0.0, 0.0, 1.0};
    double lambda = 1.0;
    int sign = +1;
    bool surface_factor = false;
    std::vector<BumpSpec> amplitude;
    LayoutWeight weight;
};

QuadResult integrate_oscillatory(const PhaseProgram& phase, const OscillatoryProblem& prob, const QuadratureConfig& cfg);

/// J_sign(lambda) = integral of exp(sign i lambda phi) eta.
QuadResult eval_J(const PhaseExpr& phase, const BumpSpec& eta, double lambda, int sign, const QuadratureConfig& cfg,
                  LayoutWeight weight = {});

/// Integral of exp(-i xi.(x1, x2, phi(x))) eta(x) [sqrt(1 + |grad phi|^2)] dx.
QuadResult eval_mu_hat(const PhaseExpr& phase, const BumpSpec& eta, const std::array<double, 3>& xi,
                       const QuadratureConfig& cfg, bool surface_factor = true, LayoutWeight weight = {});

struct JSample {
    double lambda;
    std::complex<double> J;
    double err;
    bool reliable = true;
};

std::vector<JSample> sample_ladder(const PhaseExpr& phase, const BumpSpec& eta, const std::vector<double>& lambdas,
                                   int sign, const QuadratureConfig& cfg, LayoutWeight weight = {});

struct DecayFit {
    double alpha = 0.0;
    int beta = 0;
    double c_hat = 0.0;  ///< modulus amplitude: |J| ~ c_hat lambda^-alpha (log lambda)^beta
    double residual_rms = 0.0;
    double model_selection_score = 0.0;  ///< n log(RSS0/RSS1); beta = 1 needs >= 6
    double alpha_beta0 = 0.0, alpha_beta1 = 0.0;
    double rms_beta0 = 0.0, rms_beta1 = 0.0;
};

/// Least squares of log|J| against -alpha log(lambda) [+ log log(lambda)].
/// Needs >= 8 samples spanning >= 3 decades.
DecayFit fit_decay(const std::vector<JSample>& samples);

struct LimitPoint {
    double lambda;
    std::complex<double> J;
    double err;
    std::complex<double> ratio;  ///< lambda^(1/h) / (log lambda)^nu * J
};

struct LimitEstimate {
    std::complex<double> value;
    double uncertainty = 0.0;
    std::string model;
    double epsilon = 0.0;  ///< fitted decay of the correction term (nu = 0 model)
};

/// c + c'/log(lambda) for nu = 1; c + c' lambda^-eps with eps scanned for nu = 0.
/// Uncertainty is the spread between the full fit and the fit on the upper half.
LimitEstimate extrapolate_limit(const std::vector<LimitPoint>& pts, int nu);

struct LimitSeries {
    std::vector<LimitPoint> points;
    LimitEstimate estimate;
    bool reliable = true;
};

LimitSeries limit_ratio_series(const PhaseExpr& phase, const BumpSpec& eta, const LambdaLadder& ladder, const Rational& h,
                               int nu, const QuadratureConfig& cfg, LayoutWeight weight = {});

/// n quasi-uniform unit vectors (Fibonacci lattice) under a rotation drawn from `seed`.
std::vector<std::array<double, 3>> sphere_directions(int n, std::uint64_t seed);

struct SweepRow {
    int shell;
    std::array<double, 3> xi;
    double normalized;  ///< |mu^(xi)| (1+|xi|)^(1/h) (log(2+|xi|))^-nu
};

struct SweepShell {
    double radius;
    double max_normalized;
    std::array<double, 3> argmax;
};

struct SweepResult {
    std::vector<SweepShell> shells;
    std::vector<SweepRow> rows;
    double slope = 0.0;            ///< of log(shell max) against log(radius)
    double max_over_median = 1.0;  ///< largest shell max / median shell max
    bool reliable = true;
};

SweepResult uniform_sweep(const PhaseExpr& phase, const BumpSpec& eta, const std::vector<double>& radii,
                          const std::vector<std::array<double, 3>>& directions, const Rational& h, int nu,
                          const QuadratureConfig& cfg, bool surface_factor = true);

struct KnappPoint {
    double delta;
    double cap;      ///< integral of |f^_delta|^2 over the surface (eta-weighted)
    double lp_norm;  ///< ||f_delta||_p
    double ratio;    ///< sqrt(cap) / lp_norm
};

/// Predicted exponent e with ratio ~ delta^e: 1/(2h) - (h+1)/(h p').
double knapp_exponent(double h, double p);

std::vector<KnappPoint> knapp_ratio(const PhaseExpr& phase, const BumpSpec& eta, std::pair<double, double> kappa,
                                    double p, const std::vector<double>& deltas, const QuadratureConfig& cfg);

struct KnappTrend {
    double fitted_exponent;  ///< slope of log ratio against log delta
    double spread;           ///< max ratio / min ratio
    std::string trend;       ///< as delta decreases: "increasing", "flat" or "decreasing"
};

KnappTrend classify_knapp(const std::vector<KnappPoint>& pts);

/// L^p norm of x -> exp(-w^2 x^2 / 2) on the line, by quadrature.
double gaussian_lp_norm_1d(double w, double p);

/// Round-trip (%.17g) formatting.
std::string fmt_double(double v);

void write_samples_csv(std::ostream& os, const std::vector<JSample>& samples);
void write_limit_csv(std::ostream& os, const std::vector<LimitPoint>& pts);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
void write_knapp_csv(std::ostream& os, double p, const std::vector<KnappPoint>& pts);

}  // namespace osclab
