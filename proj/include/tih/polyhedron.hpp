#ifndef TIH_POLYHEDRON_HPP
#define TIH_POLYHEDRON_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tih/exact_linalg.hpp"
#include "tih/lp.hpp"
#include "tih/numbers.hpp"

namespace tih {

// Point of T^r = [-inf, oo)^r; nullopt coordinate = -infinity.
struct ExtendedPoint {
    int ambient_dim = 0;
    std::vector<std::optional<Rat>> coords;

    ExtendedPoint() = default;
    ExtendedPoint(int r, std::vector<std::optional<Rat>> c) : ambient_dim(r), coords(std::move(c)) {}
    static ExtendedPoint finite(const std::vector<Rat>& c) {
        ExtendedPoint p;
        p.ambient_dim = static_cast<int>(c.size());
        for (const auto& x : c) p.coords.emplace_back(x);
        return p;
    }
    std::set<int> sedentarity() const;
    bool operator==(const ExtendedPoint&) const = default;
};

// sed(x) = { i : x_i = -infinity }, 0-based coordinate indices
std::set<int> sedentarity(const ExtendedPoint& x);

struct HalfSpace {
    std::vector<Int> normal;  // length r, zero on sedentarity coordinates
    Rat offset;
    bool operator==(const HalfSpace&) const = default;
};

// Closure in T^r of { x in R^r_I : normal.x <= offset, ... }. The stored
// representation is canonical: implicit equalities are moved into eqs,
// redundant inequalities dropped, normals primitive and reduced modulo the
// affine hull. Construction fails on an empty set.
//
// With tropical = false the ambient is plain R^r: no closure is taken and no
// sedentarity faces exist (the classical polyhedron case, used for fans).
class HPolyhedron {
public:
    static HPolyhedron make(int ambient_dim, std::set<int> sed, std::vector<HalfSpace> ineqs,
                            std::vector<HalfSpace> eqs, bool tropical = true);

    int ambient_dim() const { return r_; }
    bool tropical() const { return tropical_; }
    const std::set<int>& sed() const { return sed_; }
    const std::vector<HalfSpace>& ineqs() const { return ineqs_; }
    const std::vector<HalfSpace>& eqs() const { return eqs_; }
    const std::vector<int>& free_coords() const { return free_; }

    int dim() const { return dim_; }

    // canonical form key; equal keys iff equal subsets of T^r
    const std::string& key() const { return key_; }
    bool operator==(const HPolyhedron& o) const { return key_ == o.key_; }
    bool operator<(const HPolyhedron& o) const { return key_ < o.key_; }

    // Part of the closure at sedentarity J (superset of sed()); nullopt when
    // the closure has no points of that sedentarity.
    std::optional<HPolyhedron> sedentarity_limit(const std::set<int>& J) const;

    // All faces, including the polyhedron itself and higher-sedentarity faces.
    std::vector<HPolyhedron> faces() const;

    bool relint_contains(const ExtendedPoint& x) const;
    bool closure_contains(const ExtendedPoint& x) const;
    bool closure_contains(const HPolyhedron& other) const;

    // Saturated lattice L_Z = L(sigma) cap Z^{r minus I} in free coordinates.
    IntegerLattice tangent_lattice() const;

    // Rational point of the relative interior.
    ExtendedPoint interior_point() const;

    // Intersection with extra inequalities at the same sedentarity; nullopt if empty.
    std::optional<HPolyhedron> intersect(const std::vector<HalfSpace>& extra) const;

    // recession cone directions: true if {x + t v : t >= 0} stays in the finite
    // part for some (hence any) x; v given on free coordinates
    bool is_bounded() const;

    // system of all constraints over free coordinates
    LinSystem to_system() const;

private:
    HPolyhedron() = default;
    void canonicalize();  // throws EmptyPolyhedron

    int r_ = 0;
    bool tropical_ = true;
    std::set<int> sed_;
    std::vector<HalfSpace> ineqs_, eqs_;  // canonical
    std::vector<int> free_;
    int dim_ = 0;
    std::string key_;
};

std::vector<HPolyhedron> enumerate_faces(const HPolyhedron& p);

}  // namespace tih

#endif
