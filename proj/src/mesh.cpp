#include "fembem/mesh.hpp"

#include "fembem/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

namespace fembem {

namespace {

double cross(const Point& u, const Point& v) { return u.x() * v.y() - u.y() * v.x(); }

}  // namespace

Triangulation::Triangulation(Coordinates coordinates, Elements elements)
    : coordinates_(std::move(coordinates)), elements_(std::move(elements)) {
    const int nv = num_vertices();
    for (int e = 0; e < num_elements(); ++e) {
        for (int k = 0; k < 3; ++k) {
            if (elements_(e, k) < 0 || elements_(e, k) >= nv)
                throw InputError("element " + std::to_string(e) + " references vertex out of range");
        }
        if (elements_(e, 0) == elements_(e, 1) || elements_(e, 1) == elements_(e, 2) ||
            elements_(e, 0) == elements_(e, 2))
            throw StructuralError("element " + std::to_string(e) + " repeats a vertex");
        if (!(area(e) > 0.0))
            throw StructuralError("element " + std::to_string(e) + " has non-positive signed area");
    }
    build_topology();
}

Triangulation Triangulation::with_longest_edge_reference(Coordinates coordinates, Elements elements) {
    for (int e = 0; e < elements.rows(); ++e) {
        int best = 0;
        double best_length = -1.0;
        for (int k = 0; k < 3; ++k) {
            const Eigen::Vector2d d =
                coordinates.row(elements(e, (k + 1) % 3)).transpose() - coordinates.row(elements(e, k)).transpose();
            const double len = d.squaredNorm();
            if (len > best_length * (1.0 + 1e-12)) {
                best_length = len;
                best = k;
            }
        }
        const Eigen::RowVector3i v = elements.row(e);
        for (int k = 0; k < 3; ++k) elements(e, k) = v((k + best) % 3);
    }
    return Triangulation(std::move(coordinates), std::move(elements));
}

double Triangulation::area(int e) const {
    const Point p0 = vertex(elements_(e, 0));
    const Point p1 = vertex(elements_(e, 1));
    const Point p2 = vertex(elements_(e, 2));
    return 0.5 * cross(p1 - p0, p2 - p0);
}

void Triangulation::build_topology() {
    const int ne = num_elements();
    // (min vertex, max vertex, element, local edge)
    std::vector<std::tuple<int, int, int, int>> half_edges;
    half_edges.reserve(3 * static_cast<std::size_t>(ne));
    for (int e = 0; e < ne; ++e) {
        for (int k = 0; k < 3; ++k) {
            const int a = elements_(e, k);
            const int b = elements_(e, (k + 1) % 3);
            half_edges.emplace_back(std::min(a, b), std::max(a, b), e, k);
        }
    }
    std::sort(half_edges.begin(), half_edges.end());

    std::vector<std::array<int, 2>> edges;
    std::vector<std::array<int, 2>> adjacency;
    element_edges_.resize(ne, 3);
    for (std::size_t i = 0; i < half_edges.size();) {
        std::size_t j = i;
        while (j < half_edges.size() && std::get<0>(half_edges[j]) == std::get<0>(half_edges[i]) &&
               std::get<1>(half_edges[j]) == std::get<1>(half_edges[i]))
            ++j;
        const auto [lo, hi, e0, k0] = half_edges[i];
        if (j - i > 2)
            throw StructuralError("edge (" + std::to_string(lo) + ", " + std::to_string(hi) +
                                  ") is shared by more than two elements");
        const int id = static_cast<int>(edges.size());
        edges.push_back({lo, hi});
        element_edges_(e0, k0) = id;
        if (j - i == 2) {
            const auto [lo1, hi1, e1, k1] = half_edges[i + 1];
            // Neighbours of a consistently oriented mesh traverse the shared edge in opposite directions.
            if (elements_(e0, k0) == elements_(e1, k1))
                throw StructuralError("elements " + std::to_string(e0) + " and " + std::to_string(e1) +
                                      " traverse a shared edge in the same direction");
            element_edges_(e1, k1) = id;
            adjacency.push_back({e0, e1});
        } else {
            adjacency.push_back({e0, -1});
        }
        i = j;
    }

    edges_.resize(static_cast<Eigen::Index>(edges.size()), 2);
    edge_elements_.resize(static_cast<Eigen::Index>(edges.size()), 2);
    boundary_edges_.clear();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        edges_(i, 0) = edges[i][0];
        edges_(i, 1) = edges[i][1];
        edge_elements_(i, 0) = adjacency[i][0];
        edge_elements_(i, 1) = adjacency[i][1];
    }
    for (int e = 0; e < ne; ++e) {
        for (int k = 0; k < 3; ++k) {
            if (edge_elements_(element_edges_(e, k), 1) < 0)
                boundary_edges_.push_back({{elements_(e, k), elements_(e, (k + 1) % 3)}, e, k});
        }
    }
}

ElementGeometry element_geometry(const Triangulation& mesh, int e) {
    const auto v = mesh.element(e);
    const std::array<Point, 3> p = {mesh.vertex(v[0]), mesh.vertex(v[1]), mesh.vertex(v[2])};
    ElementGeometry g;
    const double twice_area = cross(p[1] - p[0], p[2] - p[0]);
    if (!(twice_area > 0.0)) throw StructuralError("degenerate element " + std::to_string(e));
    g.area = 0.5 * twice_area;
    g.h = std::sqrt(g.area);
    for (int i = 0; i < 3; ++i) {
        const Point& q1 = p[(i + 1) % 3];
        const Point& q2 = p[(i + 2) % 3];
        g.gradients.row(i) << (q1.y() - q2.y()) / twice_area, (q2.x() - q1.x()) / twice_area;
        const Point d = p[(i + 1) % 3] - p[i];
        g.edge_lengths(i) = d.norm();
        g.normals.row(i) << d.y() / g.edge_lengths(i), -d.x() / g.edge_lengths(i);
    }
    return g;
}

std::vector<ElementGeometry> element_geometry(const Triangulation& mesh) {
    std::vector<ElementGeometry> out;
    out.reserve(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) out.push_back(element_geometry(mesh, e));
    return out;
}

int BoundaryMesh::next(int k) const {
    const int l = segments[k].loop;
    return k + 1 < loop_offsets[l + 1] ? k + 1 : loop_offsets[l];
}

int BoundaryMesh::prev(int k) const {
    const int l = segments[k].loop;
    return k > loop_offsets[l] ? k - 1 : loop_offsets[l + 1] - 1;
}

double BoundaryMesh::length() const {
    double sum = 0.0;
    for (const auto& s : segments) sum += s.length;
    return sum;
}

BoundaryMesh boundary_of(const Triangulation& mesh) {
    const auto& bedges = mesh.boundary_edges();
    std::vector<int> outgoing(mesh.num_vertices(), -1);
    for (std::size_t i = 0; i < bedges.size(); ++i) {
        int& slot = outgoing[bedges[i].vertices[0]];
        if (slot >= 0)
            throw StructuralError("non-manifold boundary at vertex " + std::to_string(bedges[i].vertices[0]));
        slot = static_cast<int>(i);
    }

    BoundaryMesh out;
    out.vertex_to_node.assign(mesh.num_vertices(), -1);
    out.loop_offsets.push_back(0);
    std::vector<char> visited(bedges.size(), 0);
    for (std::size_t first = 0; first < bedges.size(); ++first) {
        if (visited[first]) continue;
        const int loop = out.num_loops();
        int current = static_cast<int>(first);
        while (!visited[current]) {
            visited[current] = 1;
            const BoundaryEdge& be = bedges[current];
            BoundarySegment s;
            s.a = mesh.vertex(be.vertices[0]);
            s.b = mesh.vertex(be.vertices[1]);
            const Point d = s.b - s.a;
            s.length = d.norm();
            s.tangent = d / s.length;
            s.normal = Point(s.tangent.y(), -s.tangent.x());
            s.element = be.element;
            s.local_edge = be.local_edge;
            s.loop = loop;
            s.start_node = out.num_segments();
            out.vertex_to_node[be.vertices[0]] = s.start_node;
            out.node_to_vertex.push_back(be.vertices[0]);
            out.segments.push_back(s);
            current = outgoing[be.vertices[1]];
            if (current < 0)
                throw StructuralError("boundary is not closed at vertex " + std::to_string(be.vertices[1]));
        }
        if (current != static_cast<int>(first))
            throw StructuralError("boundary loop does not close on its first edge");
        out.loop_offsets.push_back(out.num_segments());
    }
    for (auto& s : out.segments) s.end_node = out.next(s.start_node);
    return out;
}

double turning_angle(const BoundaryMesh& boundary, int loop) {
    double total = 0.0;
    for (int k = boundary.loop_offsets[loop]; k < boundary.loop_offsets[loop + 1]; ++k) {
        const Point& t0 = boundary.segments[k].tangent;
        const Point& t1 = boundary.segments[boundary.next(k)].tangent;
        total += std::atan2(cross(t0, t1), t0.dot(t1));
    }
    return total;
}

bool is_conforming(const Triangulation& mesh) {
    // Interior edges are matched by construction; a hanging vertex shows up as a
    // vertex lying strictly inside an edge that was classified as boundary.
    for (const auto& be : mesh.boundary_edges()) {
        const Point a = mesh.vertex(be.vertices[0]);
        const Point b = mesh.vertex(be.vertices[1]);
        const Point d = b - a;
        const double len2 = d.squaredNorm();
        const Eigen::Array2d lo = a.array().min(b.array());
        const Eigen::Array2d hi = a.array().max(b.array());
        for (int v = 0; v < mesh.num_vertices(); ++v) {
            if (v == be.vertices[0] || v == be.vertices[1]) continue;
            const Point p = mesh.vertex(v);
            if ((p.array() < lo - 1e-14).any() || (p.array() > hi + 1e-14).any()) continue;
            const double t = (p - a).dot(d) / len2;
            if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;
            if (std::abs(cross(d, p - a)) <= 1e-12 * len2) return false;
        }
    }
    return true;
}

}  // namespace fembem
