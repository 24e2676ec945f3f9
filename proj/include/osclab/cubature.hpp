#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace osclab {

struct Rect {
    double x0, x1, y0, y1;
    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double diameter() const;
};

struct CubatureOptions {
    double target_rel = 1e-6;
    double abs_floor = 1e-14;
    int max_depth = 48;
    long max_cells = 200000;
};

struct CubatureResult {
    std::complex<double> value;
    double error = 0.0;
    bool reliable = true;
    long cells = 0;
    long evaluations = 0;
    std::string note;
};

using Integrand2 = std::function<std::complex<double>(double, double)>;

/// Globally adaptive tensor Gauss-Kronrod 7/15 cubature. Each cell's error is
/// |K15xK15 - G7xK15| + |K15xK15 - K15xG7|; the worst cell is bisected along the
/// direction(s) carrying its error. Summation is compensated and runs over cells in
/// creation order, so results are reproducible bit for bit.
CubatureResult adaptive_cubature(const Integrand2& f, const std::vector<Rect>& initial, const CubatureOptions& opt);

/// Fixed composite Gauss-Legendre rule (order 20) on an n x m grid of equal cells.
std::complex<double> composite_gauss(const Integrand2& f, const Rect& r, int nx, int ny);

/// Compensated (Neumaier) sum of complex values.
class ComplexSum {
public:
    void add(std::complex<double> v);
    std::complex<double> value() const { return {re_ + cre_, im_ + cim_}; }

private:
    static void step(double& s, double& c, double x);
    double re_ = 0, cre_ = 0, im_ = 0, cim_ = 0;
};

}  // namespace osclab
