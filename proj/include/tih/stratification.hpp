#ifndef TIH_STRATIFICATION_HPP
#define TIH_STRATIFICATION_HPP

#include <map>
#include <set>
#include <vector>

#include "tih/face_complex.hpp"

namespace tih {

// Filtration X^{-1} = {} <= X^0 <= ... <= X^n by closed cell sets.
// levels[i] holds the cell ids of X^i; levels.size() == n+1.
struct Filtration {
    int formal_dim = 0;
    std::vector<std::vector<int>> levels;

    const std::vector<int>& top() const { return levels.back(); }
    bool level_contains(int i, int cell) const;
    // smallest i with cell in X^i
    int slice_of(int cell) const;
};

struct Stratum {
    int id = 0;
    int formal_dim = 0;
    std::vector<int> cells;
    bool regular = false;

    int codim(int n) const { return n - formal_dim; }
};

struct Perversity {
    std::map<int, int> values;  // stratum id -> value, zero on regular strata

    int operator()(int stratum_id) const {
        auto it = values.find(stratum_id);
        return it == values.end() ? 0 : it->second;
    }
};

// throws ValidationError when levels are not nested closed subcomplexes
void check_filtration(const FaceComplex& c, const Filtration& f);

// X^i = union of cells of dimension <= i
Filtration face_filtration(const FaceComplex& c);

// Iteratively strips points with an i-dimensional affine neighborhood.
// Exact star-covering test; throws UnsupportedStarDimension when the normal
// direction of a star has dimension >= 3.
Filtration trop_filtration(const FaceComplex& c);

// X^n = everything, X^k = (X minus U) cap face-filtration level k for k < n,
// where U is an open union of cell relative interiors given by cell ids.
Filtration pair_filtration(const FaceComplex& c, const std::set<int>& u_cells);

// connected components of the filtration slices
std::vector<Stratum> strata(const FaceComplex& c, const Filtration& f);

// cell id -> stratum id table
std::vector<int> stratum_of_cell(const FaceComplex& c, const Filtration& f, const std::vector<Stratum>& s);

// Dp(S) = codim(S) - 2 - p(S) on singular strata, 0 on regular strata
Perversity dual_perversity(const Filtration& f, const std::vector<Stratum>& s, const Perversity& p);

}  // namespace tih

#endif
