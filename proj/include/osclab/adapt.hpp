#pragma once

#include "osclab/algebraic.hpp"
#include "osclab/bivar_poly.hpp"
#include "osclab/newton.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace osclab {

/// Input violates an operation's precondition (value or gradient nonzero at the origin,
/// wrong face kind, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Shear iteration did not terminate within the step cap.
class IterationCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One shear y2 = x2 - c*x1^m (or x1 over x2 when `transposed`).
struct ShearStep {
    AlgebraicNumber c;
    int m;
    bool transposed = false;
};

struct AdaptednessVerdict {
    bool adapted;
    /// 'a' compact edge with m <= d, 'b' vertex, 'c' unbounded edge, 0 when not adapted.
    char condition;
    PrincipalData principal;
    std::optional<int> circle_order;  ///< m(phi_pr) for compact-edge faces
    std::optional<Rational> m1;       ///< kappa2/kappa1 when not adapted
    std::string describe() const;
};

struct AdaptedResult {
    std::optional<ShearStep> linear_step;  ///< m = 1 step, kept out of psi_jet
    std::vector<ShearStep> psi_jet;        ///< nonlinear terms, strictly increasing m
    bool transposed = false;               ///< coordinates exchanged before shearing
    int steps = 0;                         ///< Varchenko steps (normalization excluded)
    std::vector<Rational> distance_trace;  ///< Newton distance before and after each step
    AlgPoly phi_adapted;                   ///< output of the Varchenko iteration
    AlgPoly phi_a;                         ///< phi_adapted, vertex-normalized when applicable
    NewtonPolyhedron polyhedron;           ///< of phi_a
    PrincipalData principal;               ///< of phi_a
    Rational height;
    int nu = 0;
    bool normalized_vertex = false;
};

/// Maximal vanishing order of a kappa-homogeneous polynomial on the unit circle.
int circle_order(const AlgPoly& p);
int circle_order(const BivarPoly& p);

AdaptednessVerdict is_adapted(const AlgPoly& p);
AdaptednessVerdict is_adapted(const BivarPoly& p);

/// Shear by the multiplicity-d root of the principal part so that the principal face
/// becomes the vertex (d,d). Returns the sheared polynomial and the step taken.
std::pair<AlgPoly, ShearStep> normalize_vertex(const AlgPoly& p);

AdaptedResult varchenko_run(const BivarPoly& p);

struct SuperAdaptResult {
    AlgPoly phi;
    std::vector<ShearStep> shears;
    bool transposed = false;  ///< the output is expressed in exchanged coordinates
};

/// Extra shears along the edges adjacent to the principal vertex until neither edge part
/// has a real root of multiplicity >= d off the axes.
SuperAdaptResult super_adapt(const AlgPoly& p);

struct HeightAnalysis {
    NewtonPolyhedron polyhedron;  ///< of the input
    PrincipalData principal;      ///< of the input
    AdaptednessVerdict verdict;
    AdaptedResult adapted;
    Rational d;
    Rational h;
    int nu;
};

HeightAnalysis compute_height_nu(const BivarPoly& p);

/// Step cap for the shear iterations: 4 * (total degree)^2.
int shear_iteration_cap(int total_degree);

/// Real roots (with multiplicity >= min_mult) of a polynomial with real algebraic
/// coefficients, sorted by decreasing multiplicity, then |c|, then c. Irrational roots of
/// rational polynomials live in a fresh number field.
struct AlgebraicRoot {
    AlgebraicNumber value;
    int multiplicity;
};
std::vector<AlgebraicRoot> real_roots_at_least(const UPolyT<AlgebraicNumber>& q, int min_mult);

}  // namespace osclab
