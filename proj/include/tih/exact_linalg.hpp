#ifndef TIH_EXACT_LINALG_HPP
#define TIH_EXACT_LINALG_HPP

#include <optional>
#include <vector>

#include "tih/int_matrix.hpp"

namespace tih {

// Finitely generated abelian group Z^free_rank + sum Z/d_i with d_i | d_{i+1}.
struct HomologyGroup {
    long free_rank = 0;
    std::vector<Int> torsion;  // entries >= 2, divisibility chain

    bool operator==(const HomologyGroup&) const = default;
    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
};

// Saturated (or arbitrary) sublattice of Z^ambient_rank; basis rows in row HNF.
struct IntegerLattice {
    int ambient_rank = 0;
    IntMatrix basis;  // rank x ambient_rank, rows independent

    int rank() const { return basis.rows(); }
};

struct HnfResult {
    IntMatrix h;  // row Hermite normal form
    IntMatrix u;  // unimodular, u * m == h
};

struct SnfResult {
    IntMatrix d;  // diagonal, d_i | d_{i+1}
    IntMatrix u;  // unimodular
    IntMatrix v;  // unimodular, u * m * v == d
};

enum class Coeff { Z, Q };

// Row Hermite normal form with transformation: h = u*m, pivots positive,
// entries above each pivot reduced into [0, pivot).
HnfResult hnf(const IntMatrix& m);

// Same elimination without the transformation matrix; returns HNF only.
IntMatrix hnf_basis(const IntMatrix& m);

// HNF of `m` while applying identical row operations to `side` (same row count).
// Used to carry lifts through a projection.
std::pair<IntMatrix, IntMatrix> hnf_with_side(const IntMatrix& m, const IntMatrix& side);

SnfResult snf(const IntMatrix& m);

// Diagonal invariant factors only (no transforms); cheap path for homology.
std::vector<Int> snf_invariants(const IntMatrix& m);

// Rank over Q (equivalently the number of nonzero SNF invariants).
int rank(const IntMatrix& m);

// Exact determinant (Bareiss), small dense use.
Int det(const IntMatrix& m);

// Saturated lattice {x in Z^cols : m x = 0}.
IntegerLattice kernel_lattice(const IntMatrix& m);

// Saturation {v in Z^n : k v in span_Z(gens), k != 0} of the span of `gens`.
IntegerLattice saturate(const std::vector<std::vector<Int>>& gens, int ambient_rank);

// Integer coordinates of v in the lattice basis (rows of basis in HNF);
// nullopt if v is not in the lattice.
std::optional<std::vector<Int>> solve_in_lattice(const IntMatrix& hnf_basis, const std::vector<Int>& v);

// Membership test against a lattice given by an HNF basis.
bool lattice_contains(const IntMatrix& hnf_basis, const std::vector<Int>& v);

// Homology of a free chain complex. boundaries[q] is the matrix of
// d_q : C_q -> C_{q-1} for q >= 1; boundaries[0] must be the 0 x dim(C_0)
// zero matrix fixing dim(C_0). Throws NotAComplex when d\circ d != 0.
std::vector<HomologyGroup> homology_of_complex(const std::vector<IntMatrix>& boundaries, Coeff coeff);

// Homology of the dualized complex; over Z cross-checked against the
// universal coefficient theorem.
std::vector<HomologyGroup> cohomology_of_complex(const std::vector<IntMatrix>& boundaries, Coeff coeff);

}  // namespace tih

#endif
