#include "osclab/newton.hpp"

#include <algorithm>
#include <map>

namespace osclab {

std::string face_kind_name(FaceKind k) {
    switch (k) {
        case FaceKind::Vertex: return "vertex";
        case FaceKind::CompactEdge: return "compact-edge";
        case FaceKind::UnboundedVertical: return "unbounded-vertical-edge";
        case FaceKind::UnboundedHorizontal: return "unbounded-horizontal-edge";
    }
    return "?";
}

namespace {

// Cross product of (b - a) and (c - a); integer points, so 64-bit is plenty.
long long cross(const Exponent& a, const Exponent& b, const Exponent& c) {
    return static_cast<long long>(b.j - a.j) * (c.k - a.k) - static_cast<long long>(b.k - a.k) * (c.j - a.j);
}

Weight edge_weight(const Exponent& a, const Exponent& b) {
    const long long dA = b.j - a.j, dB = a.k - b.k;
    const Rational s = Rational(1) / Rational(static_cast<long>(dB * a.j + dA * a.k));
    return Weight(Rational(static_cast<long>(dB)) * s, Rational(static_cast<long>(dA)) * s);
}

}  // namespace

bool NewtonPolyhedron::contains(const Rational& t1, const Rational& t2) const {
    if (t1 < Rational(vertices.front().j) || t2 < Rational(vertices.back().k)) return false;
    for (const auto& e : edges)
        if (e.kappa.k1 * t1 + e.kappa.k2 * t2 < Rational(1)) return false;
    return true;
}

NewtonPolyhedron build_polyhedron(const Support& support) {
    if (support.empty()) throw FiniteTypeError("empty Taylor support: phase is not of finite type");
    std::map<int, int> lowest;
    for (const auto& e : support) {
        auto [it, inserted] = lowest.try_emplace(e.j, e.k);
        if (!inserted) it->second = std::min(it->second, e.k);
    }
    // Minimal elements form a staircase; the lower convex chain of it is the diagram.
    std::vector<Exponent> stair;
    for (const auto& [j, k] : lowest)
        if (stair.empty() || k < stair.back().k) stair.push_back({j, k});

    NewtonPolyhedron np;
    for (const auto& p : stair) {
        while (np.vertices.size() >= 2 &&
               cross(np.vertices[np.vertices.size() - 2], np.vertices.back(), p) <= 0)
            np.vertices.pop_back();
        np.vertices.push_back(p);
    }
    for (std::size_t i = 0; i + 1 < np.vertices.size(); ++i)
        np.edges.push_back({static_cast<int>(i), static_cast<int>(i + 1),
                            edge_weight(np.vertices[i], np.vertices[i + 1])});
    return np;
}

PrincipalData newton_distance_and_face(const NewtonPolyhedron& np) {
    const Exponent& first = np.vertices.front();
    const Exponent& last = np.vertices.back();
    if (first.j >= first.k) {
        const FaceKind kind = first.j == first.k ? FaceKind::Vertex : FaceKind::UnboundedVertical;
        return {Rational(first.j), {kind, 0}, std::nullopt};
    }
    if (last.k >= last.j) {
        const int n = static_cast<int>(np.vertices.size()) - 1;
        const FaceKind kind = last.j == last.k ? FaceKind::Vertex : FaceKind::UnboundedHorizontal;
        return {Rational(last.k), {kind, n}, std::nullopt};
    }
    for (std::size_t i = 1; i + 1 < np.vertices.size(); ++i)
        if (np.vertices[i].j == np.vertices[i].k)
            return {Rational(np.vertices[i].j), {FaceKind::Vertex, static_cast<int>(i)}, std::nullopt};
    for (std::size_t i = 0; i < np.edges.size(); ++i) {
        const Exponent& a = np.vertices[i];
        const Exponent& b = np.vertices[i + 1];
        if (a.j < a.k && b.j > b.k) {
            const Weight& w = np.edges[i].kappa;
            return {Rational(1) / w.norm(), {FaceKind::CompactEdge, static_cast<int>(i)}, w.oriented()};
        }
    }
    throw std::logic_error("bisectrix does not meet the Newton diagram");
}

Weight supporting_weight_for_vertex(const NewtonPolyhedron& np, int vertex_index) {
    if (vertex_index < 0 || vertex_index >= static_cast<int>(np.vertices.size()))
        throw std::invalid_argument("vertex index out of range");
    const Exponent v = np.vertices[static_cast<std::size_t>(vertex_index)];
    if (v.j != v.k) throw std::invalid_argument("vertex is not on the bisectrix");
    if (v.j == 0) throw std::invalid_argument("vertex at the origin has no supporting weight");

    const bool left = vertex_index > 0;
    const bool right = vertex_index + 1 < static_cast<int>(np.vertices.size());
    Rational ratio(1);
    if (left || right) {
        // Supporting lines through v touching only v have kappa2/kappa1 in (lower, upper).
        Rational lower = left ? np.edges[static_cast<std::size_t>(vertex_index - 1)].ratio() : Rational(1);
        Rational upper = right ? np.edges[static_cast<std::size_t>(vertex_index)].ratio() : lower * Rational(2);
        if (!left && upper <= lower) lower = upper / Rational(2);
        if (!(lower < Rational(1) && Rational(1) < upper)) ratio = (lower + upper) / Rational(2);
    }
    // kappa1 * d + kappa2 * d = 1 with kappa2 = ratio * kappa1.
    const Rational k1 = Rational(1) / (Rational(v.j) * (Rational(1) + ratio));
    Weight w(k1, k1 * ratio);
    return w.oriented();
}

}  // namespace osclab
