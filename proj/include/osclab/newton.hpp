#pragma once

#include "osclab/bivar_poly.hpp"
#include "osclab/rational.hpp"
#include "osclab/weight.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace osclab {

/// Raised when the Taylor support is empty (phase of infinite type at the origin).
class FiniteTypeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct NewtonEdge {
    int from;  ///< index of the left vertex
    int to;    ///< from + 1
    Weight kappa;  ///< the edge lies on kappa1*t1 + kappa2*t2 = 1
    Rational ratio() const { return kappa.ratio(); }
};

/// Lower-left hull of the union of the quadrants (j,k)+R^2_+ over the support.
/// Both unbounded rays are always present for such a polyhedron.
struct NewtonPolyhedron {
    std::vector<Exponent> vertices;  ///< increasing j, strictly decreasing k
    std::vector<NewtonEdge> edges;   ///< compact edges, edges[i] joins vertices i and i+1
    bool has_vertical_ray = true;    ///< t1 = A_0, t2 >= B_0
    bool has_horizontal_ray = true;  ///< t2 = B_n, t1 >= A_n

    /// True iff the point lies in the polyhedron.
    bool contains(const Rational& t1, const Rational& t2) const;
};

enum class FaceKind { Vertex, CompactEdge, UnboundedVertical, UnboundedHorizontal };

std::string face_kind_name(FaceKind k);

struct Face {
    FaceKind kind;
    int index;  ///< vertex index (vertex / unbounded anchors) or edge index
    bool is_compact() const { return kind == FaceKind::Vertex || kind == FaceKind::CompactEdge; }
};

struct PrincipalData {
    Rational distance;
    Face face;
    std::optional<Weight> weight;  ///< compact-edge faces only, oriented so k1 <= k2
};

NewtonPolyhedron build_polyhedron(const Support& support);

PrincipalData newton_distance_and_face(const NewtonPolyhedron& np);

/// Canonical weight whose line kappa1*t1 + kappa2*t2 = 1 touches np only at the
/// bisectrix vertex with the given index.
Weight supporting_weight_for_vertex(const NewtonPolyhedron& np, int vertex_index);

/// Terms of p lying on the face.
template <class K>
Poly2<K> face_part(const Poly2<K>& p, const NewtonPolyhedron& np, const Face& f) {
    switch (f.kind) {
        case FaceKind::Vertex: {
            const Exponent v = np.vertices[static_cast<std::size_t>(f.index)];
            return p.filtered([&](const Exponent& e) { return e == v; });
        }
        case FaceKind::CompactEdge: {
            const Weight& w = np.edges[static_cast<std::size_t>(f.index)].kappa;
            return p.filtered([&](const Exponent& e) { return w.degree_of(e) == Rational(1); });
        }
        case FaceKind::UnboundedVertical: {
            const int a = np.vertices.front().j;
            return p.filtered([&](const Exponent& e) { return e.j == a; });
        }
        case FaceKind::UnboundedHorizontal: {
            const int b = np.vertices.back().k;
            return p.filtered([&](const Exponent& e) { return e.k == b; });
        }
    }
    return {};
}

}  // namespace osclab
