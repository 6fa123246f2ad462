#include "tih/oracles.hpp"

#include <algorithm>

#include "tih/errors.hpp"

namespace tih {

namespace {

// rank of the sum over allowed cells of the restriction images inside F_p(v)
long allowable_sum_rank(Engine& e, int vertex, int p) {
    const FaceComplex& c = e.complex();
    const auto& strata = e.strata_list();
    std::vector<int> table = stratum_of_cell(c, e.filtration(), strata);
    std::vector<std::vector<Int>> gens;
    const int target_rank = e.tangents().get(vertex, p).rank();
    for (int id = 0; id < c.size(); ++id) {
        const Stratum& st = strata[table[id]];
        if (e.perversity()(st.id) < st.codim(e.formal_dim())) continue;
        if (!c.is_face(vertex, id)) continue;
        const IntMatrix& rm = e.tangents().restrict_map(id, vertex, p);
        for (int j = 0; j < rm.cols(); ++j) {
            std::vector<Int> col(target_rank, 0);
            for (int i = 0; i < target_rank; ++i) col[i] = rm.get(i, j);
            gens.push_back(std::move(col));
        }
    }
    IntMatrix g(0, target_rank);
    for (const auto& v : gens) g.push_row(v);
    return rank(g);
}

}  // namespace

ConePrediction cone_formula(Engine& fan, int p_lo, int p_hi, ConeFlavor flavor, Coeff k) {
    int vertex;
    try {
        vertex = fan.cone_vertex();
    } catch (const ConicalStructureRequired& ex) {
        throw NotAFan(ex.what());
    }
    const int n = fan.formal_dim();
    const auto& strata = fan.strata_list();
    std::vector<int> table = stratum_of_cell(fan.complex(), fan.filtration(), strata);
    const int pv = fan.perversity()(table[vertex]);

    ConePrediction pred;
    pred.flavor = flavor;
    pred.coeff = k;
    pred.groups.coeff = k;
    pred.groups.variant = flavor == ConeFlavor::GM ? Variant::GM : Variant::NONGM;
    pred.groups.flavor = flavor == ConeFlavor::NONGM_BM    ? Flavor::IH_BM
                         : flavor == ConeFlavor::NONGM_COHOM ? Flavor::COHOM
                                                             : Flavor::IH;

    Variant var = flavor == ConeFlavor::GM ? Variant::GM : Variant::NONGM;
    HomologyResult punct = fan.homology(var, k, p_lo, p_hi, {vertex});
    HomologyResult punct_z;  // for Ext terms
    if (flavor == ConeFlavor::NONGM_COHOM && k == Coeff::Z)
        punct_z = fan.homology(var, Coeff::Z, p_lo, p_hi, {vertex});
    HomologyResult punct_coh;
    if (flavor == ConeFlavor::NONGM_COHOM) punct_coh = fan.cohomology(var, k, p_lo, p_hi, false, {vertex});

    for (int p = p_lo; p <= p_hi; ++p) {
        for (int q = 0; q <= n; ++q) {
            ConeCase cc;
            HomologyGroup g;
            switch (flavor) {
                case ConeFlavor::GM: {
                    // the four guards are disjoint and complete; checked here
                    bool c1 = q >= n - pv - 1 && q != 0;
                    bool c2 = q >= n - pv && q == 0;
                    bool c3 = q == n - pv - 1 && q == 0;
                    bool c4 = q < n - pv - 1;
                    if (int(c1) + int(c2) + int(c3) + int(c4) != 1)
                        throw Error("GM cone formula guards overlap; ambiguous case split");
                    if (c1) {
                        cc = ConeCase::VANISH;
                    } else if (c2) {
                        cc = ConeCase::VERTEX_MULTITANGENT;
                        g.free_rank = fan.tangents().get(vertex, p).rank();
                    } else if (c3) {
                        cc = ConeCase::ALLOWABLE_SUM;
                        g.free_rank = allowable_sum_rank(fan, vertex, p);
                    } else {
                        cc = ConeCase::PUNCTURED;
                        g = punct.at(p, q);
                    }
                    break;
                }
                case ConeFlavor::NONGM: {
                    if (q >= n - pv - 1) {
                        cc = ConeCase::VANISH;
                    } else {
                        cc = ConeCase::PUNCTURED;
                        g = punct.at(p, q);
                    }
                    break;
                }
                case ConeFlavor::NONGM_BM: {
                    if (q >= n - pv) {
                        cc = ConeCase::SHIFTED_PUNCTURED;
                        g = q >= 1 ? punct.at(p, q - 1) : HomologyGroup{};
                    } else {
                        cc = ConeCase::VANISH;
                    }
                    break;
                }
                case ConeFlavor::NONGM_COHOM: {
                    if (q > n - pv - 1) {
                        cc = ConeCase::VANISH;
                    } else if (q == n - pv - 1) {
                        cc = ConeCase::EXT_TERM;
                        if (k == Coeff::Z && q >= 1) {
                            // Ext^1(H, Z) keeps only the torsion part
                            g.torsion = punct_z.at(p, q - 1).torsion;
                        }
                    } else {
                        cc = ConeCase::PUNCTURED;
                        g = punct_coh.at(p, q);
                    }
                    break;
                }
            }
            pred.cases[{p, q}] = cc;
            pred.groups.set(p, q, g);
        }
    }
    return pred;
}

namespace {

void require_onedim_standard(Engine& e) {
    const FaceComplex& c = e.complex();
    int maxd = c.max_dim();
    if (maxd != 1) throw NotOneDimensional("complex is not 1-dimensional");
    // pure: every vertex lies under some edge
    for (int i = 0; i < c.size(); ++i)
        if (c.cell(i).dim() == 0 && c.cofaces_of(i).empty())
            throw NotOneDimensional("isolated vertex: complex is not pure 1-dimensional");
    // standing hypothesis: the tropical filtration equals the face filtration
    Filtration tf = trop_filtration(c);
    Filtration ff = face_filtration(c);
    if (tf.levels != ff.levels)
        throw NotOneDimensional("tropical filtration differs from the face filtration");
    if (e.filtration().levels != ff.levels)
        throw NotOneDimensional("engine filtration is not the 1-dimensional standard one");
}

}  // namespace

HomologyResult onedim_nongm(Engine& e, int p_lo, int p_hi, Coeff k) {
    require_onedim_standard(e);
    const FaceComplex& c = e.complex();
    const auto& strata = e.strata_list();
    std::vector<int> table = stratum_of_cell(c, e.filtration(), strata);

    long a = 0, b = 0;
    for (int id = 0; id < c.size(); ++id) {
        if (c.cell(id).dim() != 1) continue;
        std::vector<int> vertices;
        for (int f : c.faces_of(id))
            if (c.cell(f).dim() == 0) vertices.push_back(f);
        bool all_nonneg = true, all_neg = true;
        for (int v : vertices) {
            int pval = e.perversity()(table[v]);
            if (pval < 0) all_nonneg = false;
            if (pval >= 0) all_neg = false;
        }
        if (vertices.size() == 2 && all_nonneg) ++a;
        if (vertices.empty() || all_neg) ++b;
    }
    HomologyResult res;
    res.variant = Variant::NONGM;
    res.coeff = k;
    res.flavor = Flavor::IH;
    for (int p = p_lo; p <= p_hi; ++p) {
        if (p != 0 && p != 1) continue;  // multitangents vanish on edges beyond p = 1
        res.set(p, 1, HomologyGroup{a, {}});
        res.set(p, 0, HomologyGroup{b, {}});
    }
    return res;
}

HomologyResult onedim_gm(Engine& e, int p_lo, int p_hi, Coeff k) {
    require_onedim_standard(e);
    const FaceComplex& c = e.complex();
    const auto& strata = e.strata_list();
    std::vector<int> table = stratum_of_cell(c, e.filtration(), strata);
    std::set<int> v_neg;
    for (int id = 0; id < c.size(); ++id)
        if (c.cell(id).dim() == 0 && e.perversity()(table[id]) < 0) v_neg.insert(id);
    auto res = e.tropical_homology(k, p_lo, p_hi, v_neg);
    res.flavor = Flavor::IH;
    res.variant = Variant::GM;
    return res;
}

HomologyResult tms_oracle(Engine& e, const std::set<int>& u_cells, int m, int p_lo, int p_hi, Coeff k) {
    const FaceComplex& c = e.complex();
    if (!e.compact()) throw BadPair("tropical manifold with singularities must be compact here");
    if (c.max_dim() != 1) throw BadPair("only 1-dimensional pairs are supported");
    std::set<int> complement;
    for (int id = 0; id < c.size(); ++id)
        if (!u_cells.count(id)) complement.insert(id);
    for (int id : complement)
        for (int f : c.faces_of(id))
            if (!complement.count(f)) throw BadPair("complement of U is not closed");

    HomologyResult res;
    if (m < 0) {
        res = e.tropical_homology(k, p_lo, p_hi, complement);
        res.flavor = Flavor::PLAIN;
    } else {
        // BM of the open U inside compact X: full tropical chains of the pair
        res = e.relative_to_closed(Variant::GM, k, p_lo, p_hi, complement, /*allow_all=*/true);
        res.flavor = Flavor::IH_BM;
    }
    return res;
}

DualityReport duality_check(Engine& e, Variant variant, Coeff k) {
    if (k != Coeff::Q) throw FieldRequired("duality check needs field coefficients");
    if (!e.options().condition_c)
        throw ConditionCNotAsserted("filtration must satisfy condition (C); assert it on the instance");
    const int n = e.formal_dim();

    Engine dual(e.complex(), e.filtration(), dual_perversity(e.filtration(), e.strata_list(), e.perversity()),
                e.options());

    HomologyResult coh = e.cohomology(variant, k, 0, n);
    HomologyResult bm = dual.bm_homology(variant, k, 0, n);

    DualityReport rep;
    for (int p = 0; p <= n; ++p) {
        for (int q = 0; q <= n; ++q) {
            long lhs = coh.at(n - p, n - q).free_rank;
            long rhs = bm.at(p, q).free_rank;
            if (lhs != rhs) {
                rep.all_equal = false;
                rep.mismatches.emplace_back(p, q, lhs, rhs);
            }
        }
    }
    return rep;
}

}  // namespace tih
