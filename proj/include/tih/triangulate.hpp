#ifndef TIH_TRIANGULATE_HPP
#define TIH_TRIANGULATE_HPP

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "tih/face_complex.hpp"

namespace tih {

// Ordered simplicial model of a (possibly truncated) complex. Simplices are
// strictly increasing vertex-id tuples; every face of a simplex is present.
// carrier(s) is the cell of the ORIGINAL complex whose relative interior
// contains relint(s). deleted_cells marks a closed subcomplex Z; simplices
// touching |Z| are excluded from the modeled open set X minus |Z|.
class StratifiedTriangulation {
public:
    const FaceComplex* complex = nullptr;
    std::vector<ExtendedPoint> vertex_coords;
    std::vector<int> vertex_carrier;  // original cell id per vertex
    // simplices[q]: sorted list of (q+1)-tuples; carriers[q] parallel
    std::vector<std::vector<std::vector<int>>> simplices;
    std::vector<std::vector<int>> carriers;
    std::set<int> deleted_cells;
    int subdivision_level = 0;

    int dim() const { return static_cast<int>(simplices.size()) - 1; }
    int count(int q) const {
        return q >= 0 && q <= dim() ? static_cast<int>(simplices[q].size()) : 0;
    }
    int index_of(int q, const std::vector<int>& tuple) const;

    bool vertex_alive(int v) const { return !deleted_cells.count(vertex_carrier[v]); }
    bool alive(int q, int idx) const {
        for (int v : simplices[q][idx])
            if (!vertex_alive(v)) return false;
        return true;
    }

    // barycenter; defined for the sedentarity-free models this engine builds
    ExtendedPoint barycenter(int q, int idx) const;
};

// Inductive coning triangulation of the complex; unbounded cells are cut at
// an axis box first (radius chosen past every vertex unless given).
// Requires sedentarity-free cells; throws UnboundedCellWithoutConeStructure.
StratifiedTriangulation stratified_triangulation(const FaceComplex& c,
                                                 std::optional<Rat> truncation_radius = std::nullopt);

StratifiedTriangulation barycentric_subdivide(const StratifiedTriangulation& t);

// Marks the closed cell set Z as deleted, modeling the open complement.
// Requires at least one prior subdivision so the deleted set is full.
StratifiedTriangulation delete_closed(const StratifiedTriangulation& t, const std::set<int>& closed_cells);

}  // namespace tih

#endif
