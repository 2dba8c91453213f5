#pragma once

#include <Eigen/Core>

#include <array>
#include <filesystem>
#include <span>
#include <vector>

namespace fembem {

using Point = Eigen::Vector2d;
using Coordinates = Eigen::Matrix<double, Eigen::Dynamic, 2>;
using Elements = Eigen::Matrix<int, Eigen::Dynamic, 3>;

/// Boundary edge of a triangulation, oriented with the domain on its left.
struct BoundaryEdge {
    std::array<int, 2> vertices;
    int element;
    int local_edge;
};

/**
 * Conforming triangulation of a polygonal domain.
 *
 * Elements are counterclockwise vertex triples. Local edge k of an element runs
 * from vertex k to vertex k+1 (mod 3); local edge 0 is the reference edge used
 * by newest vertex bisection. The value is immutable; refinement builds a new one.
 */
class Triangulation {
public:
    Triangulation() = default;

    /// Validates orientation and edge topology. Element vertex order is kept as given.
    Triangulation(Coordinates coordinates, Elements elements);

    /// Rotates each element so that its longest edge becomes the reference edge.
    static Triangulation with_longest_edge_reference(Coordinates coordinates, Elements elements);

    const Coordinates& coordinates() const { return coordinates_; }
    const Elements& elements() const { return elements_; }

    int num_vertices() const { return static_cast<int>(coordinates_.rows()); }
    int num_elements() const { return static_cast<int>(elements_.rows()); }
    int num_edges() const { return static_cast<int>(edges_.rows()); }

    Point vertex(int i) const { return coordinates_.row(i).transpose(); }
    std::array<int, 3> element(int e) const { return {elements_(e, 0), elements_(e, 1), elements_(e, 2)}; }

    /// Unique edges as (min, max) vertex pairs.
    const Eigen::Matrix<int, Eigen::Dynamic, 2>& edges() const { return edges_; }
    /// Global edge index of local edge k of element e.
    int element_edge(int e, int k) const { return element_edges_(e, k); }
    /// The one or two elements adjacent to an edge; second entry is -1 on the boundary.
    std::array<int, 2> edge_elements(int edge) const { return {edge_elements_(edge, 0), edge_elements_(edge, 1)}; }

    const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

    double area(int e) const;

private:
    void build_topology();

    Coordinates coordinates_;
    Elements elements_;
    Eigen::Matrix<int, Eigen::Dynamic, 2> edges_;
    Eigen::Matrix<int, Eigen::Dynamic, 3> element_edges_;
    Eigen::Matrix<int, Eigen::Dynamic, 2> edge_elements_;
    std::vector<BoundaryEdge> boundary_edges_;
};

/// Per-element constants of the P1 discretization.
struct ElementGeometry {
    double area = 0.0;
    double h = 0.0;                        // |T|^{1/2}
    Eigen::Matrix<double, 3, 2> gradients; // row i: gradient of the hat function of local vertex i
    Eigen::Matrix<double, 3, 2> normals;   // row k: outward unit normal of local edge k
    Eigen::Vector3d edge_lengths;
};

ElementGeometry element_geometry(const Triangulation& mesh, int e);
std::vector<ElementGeometry> element_geometry(const Triangulation& mesh);

/// One straight piece of the boundary polygon.
struct BoundarySegment {
    Point a;
    Point b;
    double length = 0.0;
    Point tangent;  // (b - a) / length
    Point normal;   // (t2, -t1), outward for a counterclockwise loop
    int start_node = 0;
    int end_node = 0;
    int element = 0;
    int local_edge = 0;
    int loop = 0;
};

/**
 * Ordered boundary of a triangulation. Boundary node k is the start point of
 * segment k, so nodal densities and segments share one index space.
 */
struct BoundaryMesh {
    std::vector<BoundarySegment> segments;
    std::vector<int> node_to_vertex;
    std::vector<int> vertex_to_node;  // -1 for interior vertices
    std::vector<int> loop_offsets;    // segments of loop l: [loop_offsets[l], loop_offsets[l+1])

    int num_segments() const { return static_cast<int>(segments.size()); }
    int num_nodes() const { return static_cast<int>(node_to_vertex.size()); }
    int num_loops() const { return static_cast<int>(loop_offsets.size()) - 1; }
    int next(int k) const;
    int prev(int k) const;
    double length() const;
    Point point(int segment, double t) const { return segments[segment].a + t * (segments[segment].b - segments[segment].a); }
};

BoundaryMesh boundary_of(const Triangulation& mesh);

/// Signed turning angle sum of one boundary loop (2*pi for a counterclockwise loop).
double turning_angle(const BoundaryMesh& boundary, int loop);

/// True if no mesh vertex lies in the interior of a boundary edge (no hanging nodes).
bool is_conforming(const Triangulation& mesh);

/// Result of one refinement step with the bookkeeping needed to transfer data.
struct Refinement {
    Triangulation mesh;
    std::vector<int> parent;                       // coarse element of each fine element
    Eigen::Matrix<int, Eigen::Dynamic, 2> bisected; // row j: endpoints of the edge whose midpoint is fine vertex (coarse count + j)
};

/**
 * Newest vertex bisection. All edges of marked elements are marked, the marking is
 * closed so that every element with a marked edge has its reference edge marked,
 * and each element is then split by 1, 2 or 3 bisections.
 */
Refinement refine_nvb_tracked(const Triangulation& mesh, std::span<const int> marked);
Triangulation refine_nvb(const Triangulation& mesh, std::span<const int> marked);

/// bisec(3) on every element.
Triangulation refine_uniform(const Triangulation& mesh);

/// Nodal interpolation of a coarse P1 function onto its refinement.
Eigen::VectorXd prolongate(const Refinement& refinement, const Eigen::VectorXd& coarse);

/// Text format: `coordinates` (x y per line) and `elements` (0-based i j k per line).
Triangulation read_mesh(const std::filesystem::path& directory);
void write_mesh(const Triangulation& mesh, const std::filesystem::path& directory);

}  // namespace fembem
