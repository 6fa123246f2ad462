#ifndef TIH_FACE_COMPLEX_HPP
#define TIH_FACE_COMPLEX_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tih/polyhedron.hpp"

namespace tih {

struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
};

// Finite rational polyhedral complex in T^r: cells indexed by id, closed
// under faces, with the face partial order precomputed.
class FaceComplex {
public:
    // Completes the input cells with all of their faces, deduplicates, and
    // wires up the face relation. Cell ids are deterministic: sorted by
    // (dimension, canonical key).
    static FaceComplex build(int ambient_dim, const std::vector<HPolyhedron>& cells);

    int ambient_dim() const { return r_; }
    int size() const { return static_cast<int>(cells_.size()); }
    const HPolyhedron& cell(int id) const { return cells_.at(id); }
    const std::vector<HPolyhedron>& cells() const { return cells_; }

    // proper faces / cofaces
    const std::vector<int>& faces_of(int id) const { return faces_.at(id); }
    const std::vector<int>& cofaces_of(int id) const { return cofaces_.at(id); }
    // face-or-equal
    bool is_face(int a, int b) const;

    int max_dim() const;
    std::optional<int> cell_by_key(const std::string& key) const;
    // cell whose relative interior contains x; -1 when x is outside the support
    int carrier_of_point(const ExtendedPoint& x) const;

private:
    int r_ = 0;
    std::vector<HPolyhedron> cells_;
    std::vector<std::vector<int>> faces_, cofaces_;
    std::map<std::string, int> by_key_;
};

ValidationReport validate_complex(const FaceComplex& c);

}  // namespace tih

#endif
