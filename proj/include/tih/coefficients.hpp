#ifndef TIH_COEFFICIENTS_HPP
#define TIH_COEFFICIENTS_HPP

#include <map>
#include <mutex>
#include <vector>

#include "tih/face_complex.hpp"

namespace tih {

// Multi-tangent coefficient lattice F_p^Z(sigma) inside wedge^p Z^{free},
// wedge coordinates indexed by lex-ordered p-subsets of the free coordinates.
struct MultiTangent {
    int cell = -1;
    int degree = 0;
    std::vector<std::vector<int>> subsets;  // p-subsets of positions 0..m-1
    IntegerLattice lattice;                 // saturated, HNF basis rows

    int wedge_dim() const { return static_cast<int>(subsets.size()); }
    int rank() const { return lattice.rank(); }
};

std::vector<std::vector<int>> lex_subsets(int m, int p);

MultiTangent multitangent(const FaceComplex& c, int cell, int p);

// Matrix of the restriction F_p(sigma) -> F_p(tau) for tau a face of sigma,
// columns indexed by sigma's lattice basis, rows by tau's. Throws NotAFace /
// ImageNotContained.
IntMatrix restriction(const FaceComplex& c, int sigma, int tau, int p);

// Memoizing wrapper; safe for concurrent lookups.
class MultiTangentCache {
public:
    explicit MultiTangentCache(const FaceComplex& c) : c_(&c) {}

    const MultiTangent& get(int cell, int p) const;
    const IntMatrix& restrict_map(int sigma, int tau, int p) const;

private:
    const FaceComplex* c_;
    mutable std::mutex mu_;
    mutable std::map<std::pair<int, int>, MultiTangent> tangents_;
    mutable std::map<std::tuple<int, int, int>, IntMatrix> restrictions_;
};

}  // namespace tih

#endif
