#include "fembem/errors.hpp"
#include "fembem/mesh.hpp"

#include <string>
#include <vector>

namespace fembem {

namespace {

// Splits every element according to the marked edges. Reference edges of all
// elements touching a marked edge must already be marked.
Refinement bisect_marked_edges(const Triangulation& mesh, const std::vector<char>& edge_marked) {
    const int nv = mesh.num_vertices();
    std::vector<int> midpoint(mesh.num_edges(), -1);
    int next_vertex = nv;
    for (int i = 0; i < mesh.num_edges(); ++i)
        if (edge_marked[i]) midpoint[i] = next_vertex++;

    Refinement out;
    Coordinates coordinates(next_vertex, 2);
    coordinates.topRows(nv) = mesh.coordinates();
    out.bisected.resize(next_vertex - nv, 2);
    for (int i = 0; i < mesh.num_edges(); ++i) {
        if (midpoint[i] < 0) continue;
        const int a = mesh.edges()(i, 0);
        const int b = mesh.edges()(i, 1);
        coordinates.row(midpoint[i]) = 0.5 * (mesh.coordinates().row(a) + mesh.coordinates().row(b));
        out.bisected.row(midpoint[i] - nv) << a, b;
    }

    std::vector<std::array<int, 3>> children;
    children.reserve(static_cast<std::size_t>(mesh.num_elements()) * 2);
    out.parent.reserve(children.capacity());
    auto emit = [&](int parent, int a, int b, int c) {
        children.push_back({a, b, c});
        out.parent.push_back(parent);
    };

    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto [a, b, c] = mesh.element(e);
        const int m = midpoint[mesh.element_edge(e, 0)];
        if (m < 0) {
            emit(e, a, b, c);
            continue;
        }
        // Children (c, a, m) and (b, c, m); their reference edges are the parent's edges 2 and 1.
        const int q = midpoint[mesh.element_edge(e, 2)];
        if (q < 0) {
            emit(e, c, a, m);
        } else {
            emit(e, m, c, q);
            emit(e, a, m, q);
        }
        const int r = midpoint[mesh.element_edge(e, 1)];
        if (r < 0) {
            emit(e, b, c, m);
        } else {
            emit(e, m, b, r);
            emit(e, c, m, r);
        }
    }

    Elements elements(static_cast<Eigen::Index>(children.size()), 3);
    for (std::size_t i = 0; i < children.size(); ++i)
        elements.row(static_cast<Eigen::Index>(i)) << children[i][0], children[i][1], children[i][2];
    out.mesh = Triangulation(std::move(coordinates), std::move(elements));
    return out;
}

void close_marking(const Triangulation& mesh, std::vector<char>& edge_marked) {
    std::vector<int> worklist;
    worklist.reserve(mesh.num_elements());
    for (int e = mesh.num_elements() - 1; e >= 0; --e) worklist.push_back(e);
    while (!worklist.empty()) {
        const int e = worklist.back();
        worklist.pop_back();
        const int ref = mesh.element_edge(e, 0);
        if (edge_marked[ref]) continue;
        if (!edge_marked[mesh.element_edge(e, 1)] && !edge_marked[mesh.element_edge(e, 2)]) continue;
        edge_marked[ref] = 1;
        for (int neighbour : mesh.edge_elements(ref))
            if (neighbour >= 0 && neighbour != e) worklist.push_back(neighbour);
    }
}

}  // namespace

Refinement refine_nvb_tracked(const Triangulation& mesh, std::span<const int> marked) {
    std::vector<char> edge_marked(mesh.num_edges(), 0);
    for (int e : marked) {
        if (e < 0 || e >= mesh.num_elements())
            throw InputError("refine_nvb: marked element " + std::to_string(e) + " out of range");
        for (int k = 0; k < 3; ++k) edge_marked[mesh.element_edge(e, k)] = 1;
    }
    close_marking(mesh, edge_marked);
    return bisect_marked_edges(mesh, edge_marked);
}

Triangulation refine_nvb(const Triangulation& mesh, std::span<const int> marked) {
    return refine_nvb_tracked(mesh, marked).mesh;
}

Triangulation refine_uniform(const Triangulation& mesh) {
    return bisect_marked_edges(mesh, std::vector<char>(mesh.num_edges(), 1)).mesh;
}

Eigen::VectorXd prolongate(const Refinement& refinement, const Eigen::VectorXd& coarse) {
    const Eigen::Index nc = coarse.size();
    if (nc + refinement.bisected.rows() != refinement.mesh.num_vertices())
        throw InputError("prolongate: coefficient count does not match the coarse mesh");
    Eigen::VectorXd fine(refinement.mesh.num_vertices());
    fine.head(nc) = coarse;
    for (Eigen::Index j = 0; j < refinement.bisected.rows(); ++j)
        fine(nc + j) = 0.5 * (coarse(refinement.bisected(j, 0)) + coarse(refinement.bisected(j, 1)));
    return fine;
}

}  // namespace fembem
