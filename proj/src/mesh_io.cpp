#include "fembem/errors.hpp"
#include "fembem/mesh.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace fembem {

namespace {

template <int Cols, typename T>
std::vector<std::array<T, Cols>> read_table(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open " + file.string());
    std::vector<std::array<T, Cols>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::array<T, Cols> row{};
        for (auto& v : row) {
            if (!(ls >> v))
                throw InputError(file.string() + ":" + std::to_string(line_no) + ": expected " +
                                 std::to_string(Cols) + " values");
        }
        std::string rest;
        if (ls >> rest) throw InputError(file.string() + ":" + std::to_string(line_no) + ": trailing data");
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

Triangulation read_mesh(const std::filesystem::path& directory) {
    const auto points = read_table<2, double>(directory / "coordinates");
    const auto triples = read_table<3, int>(directory / "elements");
    Coordinates coordinates(static_cast<Eigen::Index>(points.size()), 2);
    for (std::size_t i = 0; i < points.size(); ++i)
        coordinates.row(static_cast<Eigen::Index>(i)) << points[i][0], points[i][1];
    Elements elements(static_cast<Eigen::Index>(triples.size()), 3);
    for (std::size_t i = 0; i < triples.size(); ++i)
        elements.row(static_cast<Eigen::Index>(i)) << triples[i][0], triples[i][1], triples[i][2];
    try {
        return Triangulation(std::move(coordinates), std::move(elements));
    } catch (const StructuralError& e) {
        throw InputError(directory.string() + ": " + e.what());
    }
}

void write_mesh(const Triangulation& mesh, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    std::ofstream coords(directory / "coordinates");
    coords << std::setprecision(17);
    for (int i = 0; i < mesh.num_vertices(); ++i)
        coords << mesh.coordinates()(i, 0) << ' ' << mesh.coordinates()(i, 1) << '\n';
    std::ofstream elems(directory / "elements");
    for (int e = 0; e < mesh.num_elements(); ++e)
        elems << mesh.elements()(e, 0) << ' ' << mesh.elements()(e, 1) << ' ' << mesh.elements()(e, 2) << '\n';
    if (!coords || !elems) throw InputError("failed to write mesh to " + directory.string());
}

}  // namespace fembem
