#ifndef TIH_ORACLES_HPP
#define TIH_ORACLES_HPP

#include "tih/ic_engine.hpp"

namespace tih {

enum class ConeCase { VANISH, VERTEX_MULTITANGENT, ALLOWABLE_SUM, PUNCTURED, SHIFTED_PUNCTURED, EXT_TERM };

enum class ConeFlavor { GM, NONGM, NONGM_BM, NONGM_COHOM };

struct ConePrediction {
    ConeFlavor flavor = ConeFlavor::NONGM;
    Coeff coeff = Coeff::Q;
    std::map<std::pair<int, int>, ConeCase> cases;
    HomologyResult groups;
};

// Closed-form prediction for an n-dimensional fan with vertex v, evaluated
// case by case; punctured-fan groups are computed on the deleted model.
// Throws NotAFan when the instance has no conical structure.
ConePrediction cone_formula(Engine& fan, int p_lo, int p_hi, ConeFlavor flavor, Coeff k);

// 1-dimensional non-GM classification: Q^a at q=1 and Q^b at q=0 for p in
// {0,1}, from the edge classes A and B. Requires a pure 1-dimensional
// complex whose tropical filtration is the face filtration.
HomologyResult onedim_nongm(Engine& e, int p_lo, int p_hi, Coeff k);

// 1-dimensional GM prediction: tropical homology of the complement of the
// negative-perversity vertices.
HomologyResult onedim_gm(Engine& e, int p_lo, int p_hi, Coeff k);

// Tropical manifold with singularities (compact 1-dim pair): H(U) for m < 0,
// BM of U (computed as H(X, X minus U)) for m >= 0.
HomologyResult tms_oracle(Engine& e, const std::set<int>& u_cells, int m, int p_lo, int p_hi, Coeff k);

struct DualityReport {
    bool all_equal = true;
    // (p, q, dim IH^{n-p,n-q}, dim IH^{Dp,BM}_{p,q})
    std::vector<std::tuple<int, int, long, long>> mismatches;
};

// Poincare duality check over a field: compares cohomology at (n-p, n-q) and
// perversity p with BM homology at (p, q) and the dual perversity.
DualityReport duality_check(Engine& e, Variant variant, Coeff k);

}  // namespace tih

#endif
