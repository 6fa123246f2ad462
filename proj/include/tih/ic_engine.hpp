#ifndef TIH_IC_ENGINE_HPP
#define TIH_IC_ENGINE_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "tih/coefficients.hpp"
#include "tih/stratification.hpp"
#include "tih/triangulate.hpp"

namespace tih {

enum class Variant { GM, NONGM };

enum class Flavor { PLAIN, IH, IH_BM, IH_REL, COHOM, COHOM_C };

struct HomologyResult {
    Variant variant = Variant::NONGM;
    Coeff coeff = Coeff::Q;
    Flavor flavor = Flavor::IH;
    std::map<std::pair<int, int>, HomologyGroup> groups;  // nonzero groups by (p, q)

    HomologyGroup at(int p, int q) const {
        auto it = groups.find({p, q});
        return it == groups.end() ? HomologyGroup{} : it->second;
    }
    void set(int p, int q, HomologyGroup g) {
        if (!g.is_zero()) groups[{p, q}] = std::move(g);
    }
    bool same_groups(const HomologyResult& o) const { return groups == o.groups; }
};

// Tropical intersection chain complex of one bidegree family (fixed p),
// assembled over a stratified triangulation at a fixed subdivision level.
struct IChainComplex {
    Variant variant = Variant::NONGM;
    int p = 0;
    int top = -1;
    // generators per degree: (simplex index in t.simplices[q], coefficient index)
    std::vector<std::vector<std::pair<int, int>>> gens;
    std::vector<IntMatrix> ic_basis;  // rows span IC_q inside Z^{gens[q]}
    std::vector<IntMatrix> boundary;  // boundary[q] : IC_q -> IC_{q-1}; boundary[0] is the zero map
};

struct EngineOptions {
    int base_level = 2;
    int max_level = 4;
    std::optional<Rat> truncation_radius;
    bool conical = false;
    bool condition_c = false;
    bool check_stability = true;
};

// predicate selecting the sub-chain-group to quotient by, given (q, simplex index)
using GenFilter = std::function<bool(int, int)>;

// Computation front end for one filtered complex. Holds the triangulation
// tower and coefficient caches; all public calls are deterministic.
class Engine {
public:
    Engine(const FaceComplex& c, Filtration f, Perversity pv, EngineOptions opt = {});

    const FaceComplex& complex() const { return *c_; }
    const Filtration& filtration() const { return filt_; }
    const std::vector<Stratum>& strata_list() const { return strata_; }
    const Perversity& perversity() const { return perv_; }
    const EngineOptions& options() const { return opt_; }
    const MultiTangentCache& tangents() const { return *mt_; }
    int formal_dim() const { return filt_.formal_dim; }
    bool compact() const { return compact_; }

    const StratifiedTriangulation& triangulation(int level) const;

    // p-allowability of a simplex of the level triangulation
    bool is_allowable(const StratifiedTriangulation& t, int q, int idx) const;

    // assembled complex; open model excludes simplices meeting |open_z|.
    // Memoized: the reference stays valid for the engine's lifetime.
    const IChainComplex& build_ic_complex(int level, int p, Variant v, const std::set<int>& open_z = {},
                                          bool allow_all = false) const;

    // absolute intersection homology of X (or of the open model X minus |open_z|)
    HomologyResult homology(Variant v, Coeff k, int p_lo, int p_hi, const std::set<int>& open_z = {});

    // IC(X minus z_x) / IC(X minus z_u), z_u containing z_x
    HomologyResult relative_homology(Variant v, Coeff k, int p_lo, int p_hi, const std::set<int>& z_u,
                                     const std::set<int>& z_x = {});

    // quotient by the chains inside a closed subcomplex A
    HomologyResult relative_to_closed(Variant v, Coeff k, int p_lo, int p_hi, const std::set<int>& closed_a,
                                      bool allow_all = false);

    HomologyResult bm_homology(Variant v, Coeff k, int p_lo, int p_hi);

    HomologyResult cohomology(Variant v, Coeff k, int p_lo, int p_hi, bool compact_support = false,
                              const std::set<int>& open_z = {});

    // plain tropical homology H_{p,q}: no allowability filter, full boundary
    HomologyResult tropical_homology(Coeff k, int p_lo, int p_hi, const std::set<int>& open_z = {});

    // cone vertex cell for conical inputs; throws ConicalStructureRequired
    int cone_vertex() const;

    int default_p_hi() const { return c_->ambient_dim(); }

private:
    struct LeveledComplex {
        std::vector<IntMatrix> boundaries;  // per degree, in IC bases
        IChainComplex raw;
    };

    const std::vector<IntMatrix>& complex_boundaries(int level, int p, Variant v,
                                                     const std::set<int>& open_z, bool allow_all) const;
    std::vector<IntMatrix> quotient_boundaries(int level, int p, Variant v, const std::set<int>& z_x,
                                               const GenFilter& in_subgroup, bool allow_all) const;

    // run `compute` at the base level and again one level up until stable
    HomologyResult stabilized(Flavor flavor, Variant v, Coeff k,
                              const std::function<void(int, HomologyResult&)>& compute);

    const FaceComplex* c_;
    Filtration filt_;
    std::vector<Stratum> strata_;
    std::vector<int> cell_stratum_;
    Perversity perv_;
    EngineOptions opt_;
    std::set<int> sigma_cells_;  // X^{n-1}
    bool compact_ = true;
    std::unique_ptr<MultiTangentCache> mt_;
    mutable std::map<int, StratifiedTriangulation> tri_;
    mutable std::map<int, std::vector<std::vector<char>>> allow_cache_;
    mutable std::map<std::string, IChainComplex> ic_cache_;
};

}  // namespace tih

#endif
