#pragma once

#include "osclab/phase_expr.hpp"

#include <complex>
#include <vector>

namespace osclab {

/// Value, gradient and Hessian at a point.
template <class S>
struct Jet {
    S v{}, g1{}, g2{}, h11{}, h12{}, h22{};
};

/// PhaseExpr flattened to a postfix program for fast repeated evaluation, in real or
/// complex arithmetic. Flat atoms and abs() continue into the complex domain by the
/// analytic branch on the side of Re(z).
class PhaseProgram {
public:
    explicit PhaseProgram(const PhaseExpr& e);

    double value(double x1, double x2) const;
    std::complex<double> value(std::complex<double> z1, std::complex<double> z2) const;
    Jet<double> jet(double x1, double x2) const;
    Jet<std::complex<double>> jet(std::complex<double> z1, std::complex<double> z2) const;

    /// False when abs() occurs outside a flat atom (no contour deformation allowed).
    bool analytic() const { return analytic_; }
    /// flat_in(v): some flat atom depends on x_v (v = 1, 2).
    bool flat_in(int v) const { return v == 1 ? flat1_ : flat2_; }

    enum class Op { Var, Const, Add, Mul, Pow, Neg, Abs, Exp, Flat };
    struct Instr {
        Op op;
        int var = 0;
        unsigned n = 0;  ///< operand count (Add, Mul) or exponent (Pow)
        double c = 0.0;  ///< constant, or alpha for Flat
    };

private:
    template <class T, class S>
    T run(const T& x1, const T& x2) const;

    std::vector<Instr> code_;
    bool analytic_ = true;
    bool flat1_ = false, flat2_ = false;
};

}  // namespace osclab
