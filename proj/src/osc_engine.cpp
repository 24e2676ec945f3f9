#include "osclab/osc_engine.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

namespace osclab {

using C = std::complex<double>;

// ---------------------------------------------------------------- bumps

void BumpSpec::validate() const {
    if (!(radius > 0) || !std::isfinite(radius)) throw std::invalid_argument("bump radius must be positive");
    if (!std::isfinite(eta0)) throw std::invalid_argument("bump normalization must be finite");
}

bool BumpSpec::inside(double x1, double x2) const {
    if (kind == Kind::Radial) return x1 * x1 + x2 * x2 < radius * radius;
    return std::abs(x1) < radius && std::abs(x2) < radius;
}

double BumpSpec::value(double x1, double x2) const {
    if (!inside(x1, x2)) return 0.0;
    const double r2 = radius * radius;
    if (kind == Kind::Radial) return eta0 * std::exp(1.0 - r2 / (r2 - x1 * x1 - x2 * x2));
    return eta0 * std::exp(2.0 - r2 / (r2 - x1 * x1) - r2 / (r2 - x2 * x2));
}

C BumpSpec::value(C z1, C z2) const {
    if (!inside(z1.real(), z2.real())) return 0.0;
    const double r2 = radius * radius;
    if (kind == Kind::Radial) return eta0 * std::exp(1.0 - r2 / (r2 - z1 * z1 - z2 * z2));
    return eta0 * std::exp(2.0 - r2 / (r2 - z1 * z1) - r2 / (r2 - z2 * z2));
}

std::string bump_kind_name(BumpSpec::Kind k) { return k == BumpSpec::Kind::Radial ? "radial-smooth" : "tensor-smooth"; }

BumpSpec::Kind parse_bump_kind(const std::string& s) {
    if (s == "radial-smooth" || s == "radial") return BumpSpec::Kind::Radial;
    if (s == "tensor-smooth" || s == "tensor") return BumpSpec::Kind::Tensor;
    throw std::invalid_argument("unknown bump kind '" + s + "'");
}

namespace {

std::vector<Rect> grid_cells(double R, int n) {
    std::vector<Rect> out;
    const double h = 2 * R / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.push_back({-R + i * h, -R + (i + 1) * h, -R + j * h, -R + (j + 1) * h});
    return out;
}

}  // namespace

double bump_mass(const BumpSpec& eta) {
    eta.validate();
    CubatureOptions opt;
    opt.target_rel = 1e-12;
    opt.abs_floor = 1e-300;
    auto r = adaptive_cubature([&](double x1, double x2) { return C(eta.value(x1, x2)); }, grid_cells(eta.radius, 4), opt);
    return r.value.real();
}

// ---------------------------------------------------------------- ladder / config

void LambdaLadder::validate() const {
    if (!(lambda_min >= 10)) throw std::invalid_argument("ladder lambda_min must be >= 10");
    if (!(growth > 1 && growth <= 4)) throw std::invalid_argument("ladder growth must lie in (1, 4]");
    if (n < 0) throw std::invalid_argument("ladder size must be >= 0");
}

std::vector<double> LambdaLadder::points() const {
    validate();
    std::vector<double> out;
    for (int i = 0; i <= n; ++i) out.push_back(lambda_min * std::pow(growth, i));
    return out;
}

LambdaLadder LambdaLadder::spanning(double lo, double hi, int count) {
    if (count < 2 || !(hi > lo)) throw std::invalid_argument("ladder needs count >= 2 and hi > lo");
    LambdaLadder l{lo, std::pow(hi / lo, 1.0 / (count - 1)), count - 1};
    l.validate();
    return l;
}

void QuadratureConfig::validate() const {
    if (points_per_wavelength < 6) throw std::invalid_argument("points_per_wavelength must be >= 6");
    if (max_subdivision_depth < 1 || max_subdivision_depth > 60)
        throw std::invalid_argument("max_subdivision_depth must lie in [1, 60]");
    if (dyadic_base != 2) throw std::invalid_argument("dyadic_base must be 2");
    if (!(target_rel_error > 0 && target_rel_error <= 1e-2))
        throw std::invalid_argument("target_rel_error must lie in (0, 1e-2]");
    if (!(abs_error_floor >= 0)) throw std::invalid_argument("abs_error_floor must be >= 0");
    if (max_cells < 16) throw std::invalid_argument("max_cells must be >= 16");
}

// ---------------------------------------------------------------- oscillatory integrand

namespace {

constexpr double kFlatCut = 0.05;  // s_v vanishes like x_v^2 across a flat atom's singular line

struct Geometry {
    double R;  // half-width of the bounding box
};

// Contour shift s(x) = sign * delta * W(x) * g / sqrt(1 + |g|^2), g = grad Phi(x).
class Integrand {
public:
    Integrand(const PhaseProgram& ph, const OscillatoryProblem& pb, Geometry geo, double delta)
        : ph_(ph), pb_(pb), geo_(geo), delta_(delta), sigma_(pb.sign >= 0 ? 1.0 : -1.0) {}

    struct Shift {
        double s1, s2;
        double a, b, c, d;  // Ds
        double damping;     // lambda * (g.s) sigma, the linear decay predictor
        double g1, g2;
    };

    // Window vanishing on every bump's support boundary: product of |w_b|.
    void window(double x1, double x2, double& w, double& w1, double& w2) const {
        w = 1, w1 = 0, w2 = 0;
        for (const auto& b : pb_.amplitude) {
            const double r2 = b.radius * b.radius;
            double v, v1, v2;
            if (b.kind == BumpSpec::Kind::Radial) {
                v = (r2 - x1 * x1 - x2 * x2) / r2, v1 = -2 * x1 / r2, v2 = -2 * x2 / r2;
            } else {
                const double u = 1 - x1 * x1 / r2, t = 1 - x2 * x2 / r2;
                const double su = u < 0 ? -1 : 1, st = t < 0 ? -1 : 1;
                v = std::abs(u) * std::abs(t), v1 = su * (-2 * x1 / r2) * std::abs(t), v2 = st * (-2 * x2 / r2) * std::abs(u);
            }
            if (v < 0) v = -v, v1 = -v1, v2 = -v2;
            w1 = w1 * v + w * v1;
            w2 = w2 * v + w * v2;
            w *= v;
        }
        if (!inside_support(x1, x2)) w = w1 = w2 = 0;
    }

    static void cut(double x, double& m, double& dm) {
        const double c2 = kFlatCut * kFlatCut, x2 = x * x;
        m = x2 / (x2 + c2);
        dm = 2 * x * c2 / ((x2 + c2) * (x2 + c2));
    }

    Shift shift(double x1, double x2, double delta) const {
        const auto& dir = pb_.direction;
        const Jet<double> j = ph_.jet(x1, x2);
        const double g1 = dir[0] + dir[2] * j.g1, g2 = dir[1] + dir[2] * j.g2;
        const double H11 = dir[2] * j.h11, H12 = dir[2] * j.h12, H22 = dir[2] * j.h22;
        double w, w1, w2;
        window(x1, x2, w, w1, w2);
        Shift s{0, 0, 0, 0, 0, 0, 0, g1, g2};
        if (delta == 0.0 || w == 0.0) return s;
        double m1 = 1, dm1 = 0, m2 = 1, dm2 = 0;
        if (ph_.flat_in(1)) cut(x1, m1, dm1);
        if (ph_.flat_in(2)) cut(x2, m2, dm2);
        // W_i = w m_i
        const double W1 = w * m1, W2 = w * m2;
        const double W1_1 = w1 * m1 + w * dm1, W1_2 = w2 * m1;
        const double W2_1 = w1 * m2, W2_2 = w2 * m2 + w * dm2;
        const double q = std::sqrt(1 + g1 * g1 + g2 * g2);
        const double u1 = g1 / q, u2 = g2 / q;
        const double q3 = q * q * q;
        const double D11 = 1 / q - g1 * g1 / q3, D12 = -g1 * g2 / q3, D22 = 1 / q - g2 * g2 / q3;
        // du/dx = Du * H
        const double U11 = D11 * H11 + D12 * H12, U12 = D11 * H12 + D12 * H22;
        const double U21 = D12 * H11 + D22 * H12, U22 = D12 * H12 + D22 * H22;
        const double k = sigma_ * delta;
        s.s1 = k * W1 * u1;
        s.s2 = k * W2 * u2;
        s.a = k * (W1_1 * u1 + W1 * U11);
        s.b = k * (W1_2 * u1 + W1 * U12);
        s.c = k * (W2_1 * u2 + W2 * U21);
        s.d = k * (W2_2 * u2 + W2 * U22);
        s.damping = pb_.lambda * delta * (W1 * g1 * u1 + W2 * g2 * u2);
        return s;
    }

    C phi_complex(C z1, C z2, C* grad) const {
        const auto& dir = pb_.direction;
        if (grad) {
            const Jet<C> j = ph_.jet(z1, z2);
            grad[0] = j.g1, grad[1] = j.g2;
            return dir[0] * z1 + dir[1] * z2 + dir[2] * j.v;
        }
        return dir[0] * z1 + dir[1] * z2 + dir[2] * ph_.value(z1, z2);
    }

    C operator()(double x1, double x2) {
        if (!inside_support(x1, x2)) return 0.0;
        const Shift s = shift(x1, x2, delta_);
        const C z1(x1, s.s1), z2(x2, s.s2);
        C grad[2];
        const C Phi = phi_complex(z1, z2, pb_.surface_factor ? grad : nullptr);
        const C e = sigma_ * pb_.lambda * Phi;  // exponent i*e
        min_decay_ = std::min(min_decay_, e.imag());
        C amp = 0.0;
        for (const auto& b : pb_.amplitude) amp += b.value(z1, z2);
        if (amp == 0.0) return 0.0;
        const C det = (1.0 + C(0, s.a)) * (1.0 + C(0, s.d)) + s.b * s.c;
        C v = std::exp(C(-e.imag(), e.real())) * amp * det;
        if (pb_.surface_factor) v *= std::sqrt(1.0 + grad[0] * grad[0] + grad[1] * grad[1]);
        return v;
    }

    bool inside_support(double x1, double x2) const {
        for (const auto& b : pb_.amplitude)
            if (b.inside(x1, x2)) return true;
        return false;
    }

    double min_decay() const { return min_decay_; }

private:
    const PhaseProgram& ph_;
    const OscillatoryProblem& pb_;
    Geometry geo_;
    double delta_;
    double sigma_;
    double min_decay_ = 0.0;
};

Geometry geometry_of(const std::vector<BumpSpec>& amp) {
    Geometry g{0.0};
    for (const auto& b : amp) g.R = std::max(g.R, b.radius);
    return g;
}

// Largest delta in {1/4, 1/8, ...} for which the continued phase keeps at least half of the
// linear decay predictor on a 41 x 41 scan of the support.
double choose_delta(const PhaseProgram& ph, const OscillatoryProblem& pb, Geometry geo) {
    if (!ph.analytic()) return 0.0;
    const double sigma = pb.sign >= 0 ? 1.0 : -1.0;
    Integrand in(ph, pb, geo, 0.0);
    const int n = 41;
    for (double delta = 0.25; delta > 1e-4; delta *= 0.5) {
        bool ok = true;
        for (int i = 1; i < n && ok; ++i) {
            for (int j = 1; j < n && ok; ++j) {
                const double x1 = geo.R * (-1 + 2.0 * i / n), x2 = geo.R * (-1 + 2.0 * j / n);
                if (!in.inside_support(x1, x2)) continue;
                const auto s = in.shift(x1, x2, delta);
                const double lin = sigma * (s.g1 * s.s1 + s.g2 * s.s2);
                C grad[2];
                const C Phi = in.phi_complex(C(x1, s.s1), C(x2, s.s2), pb.surface_factor ? grad : nullptr);
                const double im = sigma * Phi.imag();
                if (!std::isfinite(im) || im < 0.5 * lin - 1e-15) ok = false;
                if (pb.surface_factor) {
                    const C q = 1.0 + grad[0] * grad[0] + grad[1] * grad[1];
                    if (!(q.real() > 0)) ok = false;
                }
            }
        }
        if (ok) return delta;
    }
    return 0.0;
}

std::vector<Rect> annulus_layout(double R, std::pair<double, double> w, double lambda) {
    const double e2 = w.second / w.first;
    const int levels =
        std::clamp(static_cast<int>(std::ceil(w.first * std::log2(std::max(lambda, 2.0)))) + 4, 1, 40);
    std::vector<Rect> out;
    for (int k = 0; k < levels; ++k) {
        const double a = R * std::pow(2.0, -k), b = R * std::pow(2.0, -k * e2);
        const double a2 = R * std::pow(2.0, -(k + 1)), b2 = R * std::pow(2.0, -(k + 1) * e2);
        const double xs[4] = {-a, -a2, a2, a}, ys[4] = {-b, -b2, b2, b};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != 1 || j != 1) out.push_back({xs[i], xs[i + 1], ys[j], ys[j + 1]});
    }
    const double a = R * std::pow(2.0, -levels), b = R * std::pow(2.0, -levels * e2);
    out.push_back({-a, a, -b, b});
    return out;
}

// Split cells until the phase turns by at most 2 pi (15 / ppw) per cell wherever the
// contour does not already damp the integrand.
std::vector<Rect> presplit(const std::vector<Rect>& cells, Integrand& in, double delta, const OscillatoryProblem& pb,
                           const QuadratureConfig& cfg) {
    const double budget = 2 * std::numbers::pi * 15.0 / cfg.points_per_wavelength;
    const int depth_cap = cfg.max_subdivision_depth / 2;
    const std::size_t cell_cap = static_cast<std::size_t>(cfg.max_cells / 4);
    std::vector<std::pair<Rect, int>> work;
    for (const auto& c : cells) work.push_back({c, 0});
    std::vector<Rect> out;
    while (!work.empty()) {
        auto [r, depth] = work.back();
        work.pop_back();
        double rate = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double x1 = r.x0 + 0.5 * i * r.width(), x2 = r.y0 + 0.5 * j * r.height();
                if (!in.inside_support(x1, x2)) continue;
                const auto s = in.shift(x1, x2, delta);
                if (s.damping > 10.0) continue;
                rate = std::max(rate, pb.lambda * std::hypot(s.g1, s.g2));
            }
        const double wdt = r.width(), hgt = r.height();
        if (rate * std::max(wdt, hgt) <= budget || depth >= depth_cap || out.size() + work.size() > cell_cap) {
            out.push_back(r);
            continue;
        }
        const double mx = 0.5 * (r.x0 + r.x1), my = 0.5 * (r.y0 + r.y1);
        if (wdt > 2 * hgt) {
            work.push_back({{mx, r.x1, r.y0, r.y1}, depth + 1});
            work.push_back({{r.x0, mx, r.y0, r.y1}, depth + 1});
        } else if (hgt > 2 * wdt) {
            work.push_back({{r.x0, r.x1, my, r.y1}, depth + 1});
            work.push_back({{r.x0, r.x1, r.y0, my}, depth + 1});
        } else {
            work.push_back({{mx, r.x1, my, r.y1}, depth + 1});
            work.push_back({{r.x0, mx, my, r.y1}, depth + 1});
            work.push_back({{mx, r.x1, r.y0, my}, depth + 1});
            work.push_back({{r.x0, mx, r.y0, my}, depth + 1});
        }
    }
    return out;
}

}  // namespace

QuadResult integrate_oscillatory(const PhaseProgram& phase, const OscillatoryProblem& prob, const QuadratureConfig& cfg) {
    cfg.validate();
    if (prob.amplitude.empty()) throw std::invalid_argument("empty amplitude");
    for (const auto& b : prob.amplitude) b.validate();
    if (!(prob.lambda >= 0) || !std::isfinite(prob.lambda)) throw std::invalid_argument("lambda must be >= 0");
    if (prob.lambda > 1e7) throw std::invalid_argument("lambda beyond 1e7 is outside the supported range");
    const Geometry geo = geometry_of(prob.amplitude);

    double delta = cfg.deform && prob.lambda > 0 ? choose_delta(phase, prob, geo) : 0.0;
    CubatureOptions opt{cfg.target_rel_error, cfg.abs_error_floor, cfg.max_subdivision_depth, cfg.max_cells};
    for (int attempt = 0;; ++attempt) {
        Integrand in(phase, prob, geo, delta);
        std::vector<Rect> init = prob.weight ? annulus_layout(geo.R, *prob.weight, prob.lambda) : grid_cells(geo.R, 4);
        init = presplit(init, in, delta, prob, cfg);
        const CubatureResult cr = adaptive_cubature(std::ref(in), init, opt);
        QuadResult q{cr.value, cr.error, cr.reliable, cr.cells, cr.evaluations, delta, cr.note};
        // exp(-min_decay) is the largest growth factor met on the contour
        if (in.min_decay() < -1.0 && delta > 0) {
            if (attempt < 2) {
                delta *= 0.25;
                continue;
            }
            if (attempt == 2) {
                delta = 0.0;
                continue;
            }
        }
        if (in.min_decay() < -1.0) {
            q.reliable = false;
            q.note = "integrand grows on the contour";
        }
        return q;
    }
}

QuadResult eval_J(const PhaseExpr& phase, const BumpSpec& eta, double lambda, int sign, const QuadratureConfig& cfg,
                  LayoutWeight weight) {
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be positive");
    const PhaseProgram prog(phase);
    OscillatoryProblem pb;
    pb.lambda = lambda;
    pb.sign = sign >= 0 ? 1 : -1;
    pb.amplitude = {eta};
    pb.weight = weight;
    return integrate_oscillatory(prog, pb, cfg);
}

QuadResult eval_mu_hat(const PhaseExpr& phase, const BumpSpec& eta, const std::array<double, 3>& xi,
                       const QuadratureConfig& cfg, bool surface_factor, LayoutWeight weight) {
    const PhaseProgram prog(phase);
    OscillatoryProblem pb;
    const double n = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    pb.lambda = n;
    if (n > 0) pb.direction = {xi[0] / n, xi[1] / n, xi[2] / n};
    pb.sign = -1;
    pb.surface_factor = surface_factor;
    pb.amplitude = {eta};
    pb.weight = weight;
    return integrate_oscillatory(prog, pb, cfg);
}

std::vector<JSample> sample_ladder(const PhaseExpr& phase, const BumpSpec& eta, const std::vector<double>& lambdas,
                                   int sign, const QuadratureConfig& cfg, LayoutWeight weight) {
    std::vector<JSample> out;
    for (double l : lambdas) {
        const QuadResult q = eval_J(phase, eta, l, sign, cfg, weight);
        out.push_back({l, q.value, q.error, q.reliable});
    }
    return out;
}

// ---------------------------------------------------------------- fits

namespace {

struct LineFit {
    double intercept, slope, rss;
};

LineFit weighted_line(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& w) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = std::sqrt(w[static_cast<std::size_t>(i)]);
        A(i, 0) = s;
        A(i, 1) = s * x[static_cast<std::size_t>(i)];
        b(i) = s * y[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
    return {c(0), c(1), (A * c - b).squaredNorm()};
}

}  // namespace

DecayFit fit_decay(const std::vector<JSample>& samples) {
    if (samples.size() < 8) throw FitError("decay fit needs at least 8 samples");
    double lo = samples.front().lambda, hi = lo;
    for (const auto& s : samples) {
        lo = std::min(lo, s.lambda), hi = std::max(hi, s.lambda);
        if (!(s.lambda > std::numbers::e) || !(std::abs(s.J) > 0) || !std::isfinite(std::abs(s.J)))
            throw FitError("decay fit needs lambda > e and finite nonzero |J|");
    }
    if (std::log10(hi / lo) < 3.0 - 1e-9) throw FitError("decay fit needs samples spanning 3 decades");

    std::vector<double> x, y0, y1, w;
    for (const auto& s : samples) {
        const double L = std::log(s.lambda);
        x.push_back(-L);
        y0.push_back(std::log(std::abs(s.J)));
        y1.push_back(y0.back() - std::log(L));
        const double rel = std::max(s.err / std::abs(s.J), 1e-3);
        w.push_back(1.0 / (rel * rel) * 1e-6);  // 1 for well-resolved samples
    }
    const LineFit f0 = weighted_line(x, y0, w), f1 = weighted_line(x, y1, w);
    const double n = static_cast<double>(samples.size());
    const double floor = n * 1e-12;
    DecayFit fit;
    fit.alpha_beta0 = f0.slope;
    fit.alpha_beta1 = f1.slope;
    fit.rms_beta0 = std::sqrt(f0.rss / n);
    fit.rms_beta1 = std::sqrt(f1.rss / n);
    fit.model_selection_score = n * std::log(std::max(f0.rss, floor) / std::max(f1.rss, floor));
    fit.beta = fit.model_selection_score >= 6.0 ? 1 : 0;
    const LineFit& f = fit.beta ? f1 : f0;
    fit.alpha = f.slope;
    fit.c_hat = std::exp(f.intercept);
    fit.residual_rms = std::sqrt(f.rss / n);
    if (!std::isfinite(fit.alpha) || !std::isfinite(fit.residual_rms)) throw FitError("ill-conditioned decay fit");
    return fit;
}

namespace {

// complex least squares c + c' t with real abscissae t
std::pair<C, double> complex_line(const std::vector<double>& t, const std::vector<C>& y) {
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd A(n, 2);
    Eigen::MatrixXd b(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        A(i, 1) = t[static_cast<std::size_t>(i)];
        b(i, 0) = y[static_cast<std::size_t>(i)].real();
        b(i, 1) = y[static_cast<std::size_t>(i)].imag();
    }
    const Eigen::MatrixXd c = A.colPivHouseholderQr().solve(b);
    return {C(c(0, 0), c(0, 1)), (A * c - b).squaredNorm()};
}

LimitEstimate fit_limit(const std::vector<LimitPoint>& pts, int nu) {
    std::vector<C> y;
    for (const auto& p : pts) y.push_back(p.ratio);
    LimitEstimate e;
    if (pts.size() < 3) {
        e.value = pts.back().ratio;
        e.model = "last ratio";
        return e;
    }
    if (nu == 1) {
        std::vector<double> t;
        for (const auto& p : pts) t.push_back(1.0 / std::log(p.lambda));
        e.value = complex_line(t, y).first;
        e.model = "c + c'/log(lambda)";
        return e;
    }
    double best = INFINITY;
    for (int k = 1; k <= 100; ++k) {
        const double eps = 0.02 * k;
        std::vector<double> t;
        for (const auto& p : pts) t.push_back(std::pow(p.lambda, -eps));
        const auto [c, rss] = complex_line(t, y);
        if (rss < best * (1 - 1e-12)) best = rss, e.value = c, e.epsilon = eps;
    }
    e.model = "c + c' lambda^-eps";
    return e;
}

}  // namespace

LimitEstimate extrapolate_limit(const std::vector<LimitPoint>& pts, int nu) {
    if (pts.empty()) throw FitError("no ratio samples");
    LimitEstimate full = fit_limit(pts, nu);
    const std::vector<LimitPoint> upper(pts.begin() + static_cast<std::ptrdiff_t>(pts.size() / 2), pts.end());
    const LimitEstimate half = fit_limit(upper, nu);
    full.uncertainty = std::abs(full.value - half.value);
    return full;
}

LimitSeries limit_ratio_series(const PhaseExpr& phase, const BumpSpec& eta, const LambdaLadder& ladder, const Rational& h,
                               int nu, const QuadratureConfig& cfg, LayoutWeight weight) {
    LimitSeries out;
    const double inv_h = h.inverse().to_double();
    for (double l : ladder.points()) {
        const QuadResult q = eval_J(phase, eta, l, +1, cfg, weight);
        out.reliable = out.reliable && q.reliable;
        const C ratio = std::pow(l, inv_h) / std::pow(std::log(l), nu) * q.value;
        out.points.push_back({l, q.value, q.error, ratio});
    }
    out.estimate = extrapolate_limit(out.points, nu);
    return out;
}

// ---------------------------------------------------------------- sweep

std::vector<std::array<double, 3>> sphere_directions(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one direction");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    double q[4];
    double norm = 0;
    for (double& v : q) v = nd(rng), norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : q) v /= norm;
    const double w = q[0], x = q[1], y = q[2], z = q[3];
    const double Rm[3][3] = {{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
                             {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
                             {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};
    const double golden = std::numbers::pi * (3 - std::sqrt(5.0));
    std::vector<std::array<double, 3>> out;
    for (int k = 0; k < n; ++k) {
        const double zz = 1 - (2.0 * k + 1) / n, r = std::sqrt(std::max(0.0, 1 - zz * zz)), t = golden * k;
        const double v[3] = {r * std::cos(t), r * std::sin(t), zz};
        std::array<double, 3> d{};
        for (int i = 0; i < 3; ++i) d[i] = Rm[i][0] * v[0] + Rm[i][1] * v[1] + Rm[i][2] * v[2];
        out.push_back(d);
    }
    return out;
}

SweepResult uniform_sweep(const PhaseExpr& phase, const BumpSpec& eta, const std::vector<double>& radii,
                          const std::vector<std::array<double, 3>>& directions, const Rational& h, int nu,
                          const QuadratureConfig& cfg, bool surface_factor) {
    if (radii.empty() || directions.empty()) throw std::invalid_argument("sweep needs shells and directions");
    const double inv_h = h.inverse().to_double();
    const PhaseProgram prog(phase);
    SweepResult res;
    for (std::size_t s = 0; s < radii.size(); ++s) {
        const double R = radii[s];
        SweepShell shell{R, -1.0, {}};
        for (const auto& d : directions) {
            OscillatoryProblem pb;
            pb.lambda = R;
            pb.direction = d;
            pb.sign = -1;
            pb.surface_factor = surface_factor;
            pb.amplitude = {eta};
            const QuadResult q = integrate_oscillatory(prog, pb, cfg);
            res.reliable = res.reliable && q.reliable;
            const double v = std::abs(q.value) * std::pow(1 + R, inv_h) / std::pow(std::log(2 + R), nu);
            const std::array<double, 3> xi{R * d[0], R * d[1], R * d[2]};
            res.rows.push_back({static_cast<int>(s), xi, v});
            if (v > shell.max_normalized) shell.max_normalized = v, shell.argmax = d;
        }
        res.shells.push_back(shell);
    }
    std::vector<double> maxima;
    for (const auto& sh : res.shells) maxima.push_back(sh.max_normalized);
    if (res.shells.size() >= 2) {
        std::vector<double> x, y, w(res.shells.size(), 1.0);
        for (const auto& sh : res.shells) x.push_back(std::log(sh.radius)), y.push_back(std::log(sh.max_normalized));
        res.slope = weighted_line(x, y, w).slope;
    }
    std::vector<double> sorted = maxima;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    const double median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
    res.max_over_median = sorted.back() / median;
    return res;
}

// ---------------------------------------------------------------- Knapp probe

double knapp_exponent(double h, double p) {
    const double pd = p / (p - 1);
    return 1 / (2 * h) - (h + 1) / (h * pd);
}

double gaussian_lp_norm_1d(double w, double p) {
    using boost::math::quadrature::gauss_kronrod;
    const double I = gauss_kronrod<double, 61>::integrate([&](double t) { return std::exp(-0.5 * p * t * t); },
                                                          -INFINITY, INFINITY, 15, 1e-14);
    return std::pow(I / w, 1.0 / p);
}

std::vector<KnappPoint> knapp_ratio(const PhaseExpr& phase, const BumpSpec& eta, std::pair<double, double> kappa,
                                    double p, const std::vector<double>& deltas, const QuadratureConfig& cfg) {
    if (!(p > 1)) throw std::invalid_argument("knapp_ratio needs p > 1");
    if (!(kappa.first > 0 && kappa.second > 0)) throw std::invalid_argument("weight must be positive");
    const PhaseProgram prog(phase);
    std::vector<KnappPoint> out;
    CubatureOptions opt{std::min(cfg.target_rel_error, 1e-8), 1e-300, cfg.max_subdivision_depth, cfg.max_cells};
    for (double delta : deltas) {
        const double w1 = std::pow(delta, kappa.first), w2 = std::pow(delta, kappa.second);
        const double a = std::min(eta.radius, 8 * w1), b = std::min(eta.radius, 8 * w2);
        auto f = [&](double x1, double x2) -> C {
            const double e = eta.value(x1, x2);
            if (e == 0.0) return 0.0;
            const Jet<double> j = prog.jet(x1, x2);
            const double t = x1 * x1 / (w1 * w1) + x2 * x2 / (w2 * w2) + j.v * j.v / (delta * delta);
            return std::exp(-t) * e * std::sqrt(1 + j.g1 * j.g1 + j.g2 * j.g2);
        };
        std::vector<Rect> init;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k)
                init.push_back({-a + i * a / 2, -a + (i + 1) * a / 2, -b + k * b / 2, -b + (k + 1) * b / 2});
        const double cap = adaptive_cubature(f, init, opt).value.real();
        // f_delta = inverse transform of exp(-(y1^2/w1^2 + y2^2/w2^2 + y3^2/delta^2)/2)
        const double amp = std::pow(2 * std::numbers::pi, 1.5) * w1 * w2 * delta;
        const double lp = amp * gaussian_lp_norm_1d(w1, p) * gaussian_lp_norm_1d(w2, p) * gaussian_lp_norm_1d(delta, p);
        out.push_back({delta, cap, lp, std::sqrt(cap) / lp});
    }
    return out;
}

KnappTrend classify_knapp(const std::vector<KnappPoint>& pts) {
    if (pts.size() < 2) throw std::invalid_argument("trend needs two scales");
    std::vector<double> x, y, w(pts.size(), 1.0);
    double lo = INFINITY, hi = 0;
    for (const auto& p : pts) {
        x.push_back(std::log(p.delta));
        y.push_back(std::log(p.ratio));
        lo = std::min(lo, p.ratio), hi = std::max(hi, p.ratio);
    }
    KnappTrend t;
    t.fitted_exponent = weighted_line(x, y, w).slope;
    t.spread = hi / lo;
    if (t.fitted_exponent < -0.03) t.trend = "increasing";
    else if (t.fitted_exponent > 0.03) t.trend = "decreasing";
    else t.trend = "flat";
    return t;
}

// ---------------------------------------------------------------- CSV

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_samples_csv(std::ostream& os, const std::vector<JSample>& samples) {
    os << "lambda,re_J,im_J,abs_J,err_est\n";
    for (const auto& s : samples)
        os << fmt_double(s.lambda) << ',' << fmt_double(s.J.real()) << ',' << fmt_double(s.J.imag()) << ','
           << fmt_double(std::abs(s.J)) << ',' << fmt_double(s.err) << '\n';
}

void write_limit_csv(std::ostream& os, const std::vector<LimitPoint>& pts) {
    os << "lambda,re_J,im_J,abs_J,err_est,re_ratio,im_ratio\n";
    for (const auto& p : pts)
        os << fmt_double(p.lambda) << ',' << fmt_double(p.J.real()) << ',' << fmt_double(p.J.imag()) << ','
           << fmt_double(std::abs(p.J)) << ',' << fmt_double(p.err) << ',' << fmt_double(p.ratio.real()) << ','
           << fmt_double(p.ratio.imag()) << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    os << "shell,xi1,xi2,xi3,normalized_value\n";
    for (const auto& r : sweep.rows)
        os << r.shell << ',' << fmt_double(r.xi[0]) << ',' << fmt_double(r.xi[1]) << ',' << fmt_double(r.xi[2]) << ','
           << fmt_double(r.normalized) << '\n';
}

void write_knapp_csv(std::ostream& os, double p, const std::vector<KnappPoint>& pts) {
    os << "p,delta,cap,lp_norm,ratio\n";
    for (const auto& k : pts)
        os << fmt_double(p) << ',' << fmt_double(k.delta) << ',' << fmt_double(k.cap) << ',' << fmt_double(k.lp_norm)
           << ',' << fmt_double(k.ratio) << '\n';
}

}  // namespace osclab
