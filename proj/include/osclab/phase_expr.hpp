#pragma once

#include "osclab/bivar_poly.hpp"
#include "osclab/rational.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace osclab {

/// Raised by parse_phase; carries the 0-based character offset of the problem.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Raised when an expression cannot be evaluated (non-finite result).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when an expression has no polynomial Taylor expansion at the origin.
class NotPolynomialError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Forward-mode value with one derivative.
struct Dual {
    double v = 0.0;
    double d = 0.0;
};

/// Value and gradient of a phase at a point.
struct ValueGradient {
    double value;
    double d1;
    double d2;
};

/// Flat function exp(-1/|x_var|^alpha), extended by 0 at x_var = 0.
struct FlatAtom {
    int var;  // 1 or 2
    Rational alpha;
};

/// Immutable expression tree for a real phase in x1, x2.
class PhaseExpr {
public:
    enum class Kind { Variable, Constant, Sum, Product, Power, Abs, Exp, Negate, Flat };

    struct Node {
        Kind kind;
        int var = 0;              // Variable, Flat
        Rational value;           // Constant; alpha for Flat
        unsigned exponent = 0;    // Power
        std::vector<std::shared_ptr<const Node>> kids;
    };
    using NodePtr = std::shared_ptr<const Node>;

    PhaseExpr() = default;
    explicit PhaseExpr(NodePtr root);
    static PhaseExpr from_polynomial(const BivarPoly& p);

    const NodePtr& root() const { return root_; }
    std::string str() const;

    double eval(double x1, double x2) const;
    ValueGradient eval_with_gradient(double x1, double x2) const;

    /// True when, for every fixed value of the other variable, the expression is a
    /// polynomial in x_var.
    bool polynomial_in(int var) const;
    /// Coefficients (constant term first) of the polynomial in x_var obtained by fixing the
    /// other variable at `other`, together with their derivatives in that other variable.
    /// Requires polynomial_in(var).
    std::vector<Dual> coefficients_in(int var, double other) const;

    /// Flat atoms occurring anywhere in the tree.
    std::vector<FlatAtom> flat_atoms() const;

    struct Taylor {
        BivarPoly polynomial;  ///< Taylor polynomial at the origin (finite)
        bool has_flat_part;    ///< the expression differs from it by a flat function
    };
    /// Exact Taylor expansion at the origin; throws NotPolynomialError when it is infinite
    /// or not rational.
    Taylor taylor() const;

private:
    NodePtr root_;
};

/// Parses an arithmetic expression over x1, x2 with rational literals, + - * / ^,
/// parentheses, abs() and exp(). Division by a non-constant is accepted only in the
/// flat pattern exp(-1/abs(x)^alpha).
PhaseExpr parse_phase(const std::string& src);

/// Numeric evaluation; flat atoms take the value 0 on their singular line.
inline double eval_phase(const PhaseExpr& e, double x1, double x2) { return e.eval(x1, x2); }

}  // namespace osclab
