#include "tih/ic_engine.hpp"

#include <algorithm>
#include <sstream>

#include "tih/errors.hpp"

namespace tih {

namespace {

std::string set_key(const std::set<int>& s) {
    std::ostringstream os;
    for (int x : s) os << x << ",";
    return os.str();
}

}  // namespace

Engine::Engine(const FaceComplex& c, Filtration f, Perversity pv, EngineOptions opt)
    : c_(&c), filt_(std::move(f)), perv_(std::move(pv)), opt_(opt) {
    check_filtration(c, filt_);
    strata_ = strata(c, filt_);
    cell_stratum_ = stratum_of_cell(c, filt_, strata_);
    for (const auto& st : strata_)
        if (st.regular && perv_(st.id) != 0) throw ValidationError("perversity must vanish on regular strata");
    const int n = filt_.formal_dim;
    if (n >= 1)
        for (int id : filt_.levels[n - 1]) sigma_cells_.insert(id);
    for (int i = 0; i < c.size(); ++i)
        if (!c.cell(i).is_bounded()) compact_ = false;
    mt_ = std::make_unique<MultiTangentCache>(c);
    if (opt_.base_level < 2) opt_.base_level = 2;
    if (opt_.max_level < opt_.base_level + 1) opt_.max_level = opt_.base_level + 1;
}

const StratifiedTriangulation& Engine::triangulation(int level) const {
    auto it = tri_.find(level);
    if (it != tri_.end()) return it->second;
    if (level == 0) {
        auto t = stratified_triangulation(*c_, opt_.truncation_radius);
        return tri_.emplace(0, std::move(t)).first->second;
    }
    const StratifiedTriangulation& prev = triangulation(level - 1);
    auto t = barycentric_subdivide(prev);
    return tri_.emplace(level, std::move(t)).first->second;
}

bool Engine::is_allowable(const StratifiedTriangulation& t, int q, int idx) const {
    const auto& tuple = t.simplices[q][idx];
    const int n = static_cast<int>(tuple.size());
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> sub;
        for (int k = 0; k < n; ++k)
            if (mask & (1u << k)) sub.push_back(tuple[k]);
        int fq = static_cast<int>(sub.size()) - 1;
        int fi = (fq == q) ? idx : t.index_of(fq, sub);
        const Stratum& st = strata_[cell_stratum_[t.carriers[fq][fi]]];
        if (st.regular) continue;  // codim 0, perversity 0: condition is dim f <= q
        int bound = q - st.codim(filt_.formal_dim) + perv_(st.id);
        if (fq > bound) return false;
    }
    return true;
}

const IChainComplex& Engine::build_ic_complex(int level, int p, Variant v, const std::set<int>& open_z,
                                              bool allow_all) const {
    std::ostringstream cache_key;
    cache_key << level << "|" << p << "|" << (v == Variant::GM ? "gm" : "non") << "|" << allow_all << "|"
              << set_key(open_z);
    auto hit = ic_cache_.find(cache_key.str());
    if (hit != ic_cache_.end()) return hit->second;

    const StratifiedTriangulation& t = triangulation(level);
    const int top = t.dim();

    IChainComplex ic;
    ic.variant = v;
    ic.p = p;
    ic.top = top;
    ic.gens.resize(top + 1);
    ic.ic_basis.resize(top + 1);
    ic.boundary.resize(top + 1);

    auto alive = [&](int q, int idx) {
        for (int vx : t.simplices[q][idx])
            if (open_z.count(t.vertex_carrier[vx])) return false;
        return true;
    };

    // allowability is independent of p, variant, and deletions: memoized per level
    auto ac = allow_cache_.find(level);
    if (ac == allow_cache_.end()) {
        std::vector<std::vector<char>> flags(top + 1);
        for (int q = 0; q <= top; ++q) {
            flags[q].resize(t.count(q));
            for (int i = 0; i < t.count(q); ++i) flags[q][i] = is_allowable(t, q, i) ? 1 : 0;
        }
        ac = allow_cache_.emplace(level, std::move(flags)).first;
    }
    const auto& allow_flags = ac->second;

    // full chain generators per degree and the allowable subset
    struct DegreeData {
        std::vector<std::pair<int, int>> full;           // (simplex, coeff index)
        std::vector<int> full_offset;                    // simplex -> first row in full, -1 if absent
        std::vector<char> simplex_allowable;             // per simplex in t
        std::vector<std::pair<int, int>> allow;          // allowable generators
        std::vector<int> allow_offset;                   // simplex -> first col in allow
    };
    std::vector<DegreeData> deg(top + 1);
    for (int q = 0; q <= top; ++q) {
        DegreeData& d = deg[q];
        d.full_offset.assign(t.count(q), -1);
        d.allow_offset.assign(t.count(q), -1);
        d.simplex_allowable.assign(t.count(q), 0);
        for (int i = 0; i < t.count(q); ++i) {
            if (!alive(q, i)) continue;
            int carrier = t.carriers[q][i];
            if (v == Variant::NONGM && sigma_cells_.count(carrier)) continue;
            int rank = mt_->get(carrier, p).rank();
            if (rank == 0) continue;
            d.full_offset[i] = static_cast<int>(d.full.size());
            for (int j = 0; j < rank; ++j) d.full.emplace_back(i, j);
            bool ok = allow_all || allow_flags[q][i];
            d.simplex_allowable[i] = ok ? 1 : 0;
            if (ok) {
                d.allow_offset[i] = static_cast<int>(d.allow.size());
                for (int j = 0; j < rank; ++j) d.allow.emplace_back(i, j);
            }
        }
        ic.gens[q] = d.allow;
    }

    // boundary columns over the full generator space of degree q-1
    // (computed lazily per allowable generator)
    auto boundary_column = [&](int q, int col) {
        std::map<int, Int> out;  // row in deg[q-1].full -> value
        if (q == 0) return out;
        auto [si, j] = deg[q].allow[col];
        const auto& tuple = t.simplices[q][si];
        int carrier = t.carriers[q][si];
        for (size_t drop = 0; drop < tuple.size(); ++drop) {
            std::vector<int> face;
            for (size_t k = 0; k < tuple.size(); ++k)
                if (k != drop) face.push_back(tuple[k]);
            int fi = t.index_of(q - 1, face);
            int fcar = t.carriers[q - 1][fi];
            if (deg[q - 1].full_offset[fi] < 0) continue;  // dropped by non-GM or rank 0
            const IntMatrix& rm = mt_->restrict_map(carrier, fcar, p);
            int sign = (drop % 2 == 0) ? 1 : -1;
            for (int k = 0; k < rm.rows(); ++k) {
                Int val = rm.get(k, j);
                if (val == 0) continue;
                int row = deg[q - 1].full_offset[fi] + k;
                auto [it, ins] = out.emplace(row, sign * val);
                if (!ins) {
                    it->second += sign * val;
                    if (it->second == 0) out.erase(it);
                }
            }
        }
        return out;
    };

    // IC_q = allowable chains whose boundary projects to zero on the
    // non-allowable generators of degree q-1
    struct BasisRow {
        int lead;
        bool unit;      // standard basis vector on an untouched column
        int unit_col;
        std::vector<Int> kernel_row;  // over touched columns otherwise
    };
    std::vector<std::vector<int>> touched_cols(top + 1);
    std::vector<IntMatrix> kernels(top + 1);
    std::vector<std::vector<std::map<int, Int>>> cols(top + 1);  // cached boundary columns

    for (int q = 0; q <= top; ++q) {
        const int ncols = static_cast<int>(deg[q].allow.size());
        cols[q].resize(ncols);
        std::vector<char> touched(ncols, 0);
        std::map<int, int> bad_row_index;  // full row -> W row
        std::vector<std::map<int, Int>> w_cols(ncols);
        for (int col = 0; col < ncols; ++col) {
            cols[q][col] = boundary_column(q, col);
            for (const auto& [row, val] : cols[q][col]) {
                auto [fsi, fj] = deg[q - 1].full[row];
                if (deg[q - 1].simplex_allowable[fsi]) continue;
                touched[col] = 1;
                auto it = bad_row_index.find(row);
                if (it == bad_row_index.end())
                    it = bad_row_index.emplace(row, static_cast<int>(bad_row_index.size())).first;
                w_cols[col][it->second] = val;
            }
        }
        for (int col = 0; col < ncols; ++col)
            if (touched[col]) touched_cols[q].push_back(col);
        const int nt = static_cast<int>(touched_cols[q].size());
        IntMatrix w(static_cast<int>(bad_row_index.size()), nt);
        for (int tc = 0; tc < nt; ++tc)
            for (const auto& [row, val] : w_cols[touched_cols[q][tc]]) w.set(row, tc, val);
        kernels[q] = kernel_lattice(w).basis;  // rows over touched columns

        // assembled HNF basis: unit vectors on untouched columns + kernel rows
        std::vector<std::tuple<int, int, int>> row_plan;  // (lead, type 0 unit / 1 kernel, payload)
        for (int col = 0; col < ncols; ++col)
            if (!touched[col]) row_plan.emplace_back(col, 0, col);
        for (int krow = 0; krow < kernels[q].rows(); ++krow) {
            int lead = ncols;
            if (!kernels[q].row(krow).empty()) lead = touched_cols[q][kernels[q].row(krow).begin()->first];
            row_plan.emplace_back(lead, 1, krow);
        }
        std::sort(row_plan.begin(), row_plan.end());
        IntMatrix basis(static_cast<int>(row_plan.size()), ncols);
        for (size_t r = 0; r < row_plan.size(); ++r) {
            auto [lead, ty, pl] = row_plan[r];
            if (ty == 0) {
                basis.set(static_cast<int>(r), pl, 1);
            } else {
                for (const auto& [tc, val] : kernels[q].row(pl))
                    basis.set(static_cast<int>(r), touched_cols[q][tc], val);
            }
        }
        ic.ic_basis[q] = std::move(basis);
    }

    // express boundaries of IC basis vectors in the IC basis one degree down
    for (int q = 0; q <= top; ++q) {
        const int rank_q = ic.ic_basis[q].rows();
        const int rank_prev = q >= 1 ? ic.ic_basis[q - 1].rows() : 0;
        IntMatrix b(rank_prev, rank_q);
        if (q >= 1) {
            // coordinates of a full-space vector in the (q-1) IC basis
            const auto& prev_touched = touched_cols[q - 1];
            std::map<int, int> touched_pos;
            for (size_t i = 0; i < prev_touched.size(); ++i) touched_pos[prev_touched[i]] = static_cast<int>(i);
            // locate the basis row holding each unit column / kernel row
            std::map<int, int> unit_row_of_col;
            std::map<int, int> kernel_row_of;
            {
                std::vector<std::tuple<int, int, int>> tmp;  // lead, type(0 unit,1 kernel), payload
                std::set<int> touched_set(prev_touched.begin(), prev_touched.end());
                const int ncols_prev = static_cast<int>(deg[q - 1].allow.size());
                for (int col = 0; col < ncols_prev; ++col)
                    if (!touched_set.count(col)) tmp.emplace_back(col, 0, col);
                for (int krow = 0; krow < kernels[q - 1].rows(); ++krow) {
                    int lead = ncols_prev;
                    if (!kernels[q - 1].row(krow).empty())
                        lead = prev_touched[kernels[q - 1].row(krow).begin()->first];
                    tmp.emplace_back(lead, 1, krow);
                }
                std::sort(tmp.begin(), tmp.end());
                for (size_t ri = 0; ri < tmp.size(); ++ri) {
                    auto [lead, ty, pl] = tmp[ri];
                    if (ty == 0)
                        unit_row_of_col[pl] = static_cast<int>(ri);
                    else
                        kernel_row_of[pl] = static_cast<int>(ri);
                }
            }
            for (int col = 0; col < rank_q; ++col) {
                // boundary of the IC basis vector = combination of generator columns
                std::map<int, Int> image;  // over deg[q-1].full rows
                for (const auto& [gcol, coef] : ic.ic_basis[q].row(col)) {
                    for (const auto& [row, val] : cols[q][gcol]) {
                        auto [it, ins] = image.emplace(row, coef * val);
                        if (!ins) {
                            it->second += coef * val;
                            if (it->second == 0) image.erase(it);
                        }
                    }
                }
                // restrict to allowable generators (others must cancel)
                std::map<int, Int> on_allow;  // allow index -> value
                std::vector<Int> w_touched(prev_touched.size(), 0);
                for (const auto& [row, val] : image) {
                    auto [fsi, fj] = deg[q - 1].full[row];
                    if (!deg[q - 1].simplex_allowable[fsi])
                        throw Error("IC boundary leaks onto a non-allowable generator");
                    int acol = deg[q - 1].allow_offset[fsi] + fj;
                    on_allow[acol] = val;
                    auto tp = touched_pos.find(acol);
                    if (tp != touched_pos.end()) w_touched[tp->second] = val;
                }
                // coordinates: unit rows read off, kernel rows solved
                for (const auto& [acol, val] : on_allow) {
                    auto it = unit_row_of_col.find(acol);
                    if (it != unit_row_of_col.end()) b.set(it->second, col, val);
                }
                if (kernels[q - 1].rows() > 0) {
                    auto ksol = solve_in_lattice(kernels[q - 1], w_touched);
                    if (!ksol) throw Error("IC boundary is not integral in the IC basis");
                    for (size_t kr = 0; kr < ksol->size(); ++kr)
                        if ((*ksol)[kr] != 0) b.set(kernel_row_of.at(static_cast<int>(kr)), col, (*ksol)[kr]);
                }
            }
        } else {
            b = IntMatrix(0, rank_q);
        }
        ic.boundary[q] = std::move(b);
    }
    return ic_cache_.emplace(cache_key.str(), std::move(ic)).first->second;
}

const std::vector<IntMatrix>& Engine::complex_boundaries(int level, int p, Variant v,
                                                         const std::set<int>& open_z, bool allow_all) const {
    return build_ic_complex(level, p, v, open_z, allow_all).boundary;
}

std::vector<IntMatrix> Engine::quotient_boundaries(int level, int p, Variant v, const std::set<int>& z_x,
                                                   const GenFilter& in_subgroup, bool allow_all) const {
    const IChainComplex& ic = build_ic_complex(level, p, v, z_x, allow_all);
    const int top = ic.top;

    std::vector<IntMatrix> out(top + 1);
    std::vector<std::vector<int>> kept(top + 1);        // kept generator positions
    std::vector<IntMatrix> qbasis(top + 1), lifts(top + 1);
    for (int q = 0; q <= top; ++q) {
        const auto& gens = ic.gens[q];
        std::vector<int> keep;
        for (size_t i = 0; i < gens.size(); ++i)
            if (!in_subgroup(q, gens[i].first)) keep.push_back(static_cast<int>(i));
        kept[q] = keep;
        std::map<int, int> pos;
        for (size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<int>(i);
        // project the IC basis onto the kept coordinates, carrying lifts
        IntMatrix proj(ic.ic_basis[q].rows(), static_cast<int>(keep.size()));
        for (int r = 0; r < ic.ic_basis[q].rows(); ++r)
            for (const auto& [col, val] : ic.ic_basis[q].row(r)) {
                auto it = pos.find(col);
                if (it != pos.end()) proj.set(r, it->second, val);
            }
        auto [h, side] = hnf_with_side(proj, ic.ic_basis[q]);
        IntMatrix hb(0, h.cols()), lb(0, side.cols());
        for (int r = 0; r < h.rows(); ++r) {
            if (h.row(r).empty()) continue;
            hb.push_row(h.dense_row(r));
            lb.push_row(side.dense_row(r));
        }
        qbasis[q] = std::move(hb);
        lifts[q] = std::move(lb);
    }
    for (int q = 0; q <= top; ++q) {
        const int rank_q = qbasis[q].rows();
        const int rank_prev = q >= 1 ? qbasis[q - 1].rows() : 0;
        IntMatrix b(rank_prev, rank_q);
        if (q >= 1) {
            std::map<int, int> pos_prev;
            for (size_t i = 0; i < kept[q - 1].size(); ++i) pos_prev[kept[q - 1][i]] = static_cast<int>(i);
            // boundary of each lift, expressed in the previous IC basis, then projected
            IntMatrix bt = ic.boundary[q].transpose();
            for (int col = 0; col < rank_q; ++col) {
                // lifts live in generator coordinates; express in the IC basis and
                // push through the assembled boundary
                auto coords = solve_in_lattice(ic.ic_basis[q], lifts[q].dense_row(col));
                if (!coords) throw Error("quotient lift escaped the IC lattice");
                std::map<int, Int> bc;  // boundary in IC_{q-1} coordinates
                for (size_t i = 0; i < coords->size(); ++i) {
                    if ((*coords)[i] == 0) continue;
                    for (const auto& [r, val] : bt.row(static_cast<int>(i))) {
                        auto [it, ins] = bc.emplace(r, (*coords)[i] * val);
                        if (!ins) {
                            it->second += (*coords)[i] * val;
                            if (it->second == 0) bc.erase(it);
                        }
                    }
                }
                // back to generator coordinates of degree q-1
                std::map<int, Int> genvec;
                for (const auto& [r, val] : bc)
                    for (const auto& [g, bval] : ic.ic_basis[q - 1].row(r)) {
                        auto [it, ins] = genvec.emplace(g, val * bval);
                        if (!ins) {
                            it->second += val * bval;
                            if (it->second == 0) genvec.erase(it);
                        }
                    }
                // project and solve in the quotient basis
                std::vector<Int> w(kept[q - 1].size(), 0);
                for (const auto& [g, val] : genvec) {
                    auto it = pos_prev.find(g);
                    if (it != pos_prev.end()) w[it->second] = val;
                }
                auto sol = solve_in_lattice(qbasis[q - 1], w);
                if (!sol) throw Error("quotient boundary is not integral");
                for (int r = 0; r < rank_prev; ++r)
                    if ((*sol)[r] != 0) b.set(r, col, (*sol)[r]);
            }
        } else {
            b = IntMatrix(0, rank_q);
        }
        out[q] = std::move(b);
    }
    return out;
}

HomologyResult Engine::stabilized(Flavor flavor, Variant v, Coeff k,
                                  const std::function<void(int, HomologyResult&)>& compute) {
    if (!opt_.check_stability) {
        HomologyResult res;
        res.flavor = flavor;
        res.variant = v;
        res.coeff = k;
        triangulation(opt_.base_level);
        compute(opt_.base_level, res);
        return res;
    }
    int level = opt_.base_level;
    triangulation(level);
    HomologyResult cur;
    cur.flavor = flavor;
    cur.variant = v;
    cur.coeff = k;
    compute(level, cur);
    while (level + 1 <= opt_.max_level) {
        triangulation(level + 1);
        HomologyResult next;
        next.flavor = flavor;
        next.variant = v;
        next.coeff = k;
        compute(level + 1, next);
        if (cur.same_groups(next)) return cur;
        cur = std::move(next);
        ++level;
    }
    throw StabilizationFailure("homology did not stabilize across subdivision levels");
}

HomologyResult Engine::homology(Variant v, Coeff k, int p_lo, int p_hi, const std::set<int>& open_z) {
    return stabilized(Flavor::IH, v, k, [&](int level, HomologyResult& res) {
        for (int p = p_lo; p <= p_hi; ++p) {
            auto b = complex_boundaries(level, p, v, open_z, false);
            auto h = homology_of_complex(b, k);
            for (size_t q = 0; q < h.size(); ++q) res.set(p, static_cast<int>(q), h[q]);
        }
    });
}

HomologyResult Engine::relative_homology(Variant v, Coeff k, int p_lo, int p_hi, const std::set<int>& z_u,
                                         const std::set<int>& z_x) {
    for (int id : z_x)
        if (!z_u.count(id)) throw ModelMismatch("U must be an open sub-model of X");
    auto res = stabilized(Flavor::IH_REL, v, k, [&](int level, HomologyResult& res) {
        GenFilter in_u = [&](int q, int simplex) {
            const StratifiedTriangulation& t = triangulation(level);
            for (int vx : t.simplices[q][simplex])
                if (z_u.count(t.vertex_carrier[vx])) return false;
            return true;
        };
        for (int p = p_lo; p <= p_hi; ++p) {
            auto b = quotient_boundaries(level, p, v, z_x, in_u, false);
            auto h = homology_of_complex(b, k);
            for (size_t q = 0; q < h.size(); ++q) res.set(p, static_cast<int>(q), h[q]);
        }
    });
    return res;
}

HomologyResult Engine::relative_to_closed(Variant v, Coeff k, int p_lo, int p_hi,
                                          const std::set<int>& closed_a, bool allow_all) {
    for (int id : closed_a)
        for (int fc : c_->faces_of(id))
            if (!closed_a.count(fc)) throw NotClosed("relative subcomplex is not closed");
    auto res = stabilized(Flavor::IH_REL, v, k, [&](int level, HomologyResult& res) {
        GenFilter in_a = [&](int q, int simplex) {
            const StratifiedTriangulation& t = triangulation(level);
            return closed_a.count(t.carriers[q][simplex]) > 0;
        };
        for (int p = p_lo; p <= p_hi; ++p) {
            auto b = quotient_boundaries(level, p, v, {}, in_a, allow_all);
            auto h = homology_of_complex(b, k);
            for (size_t q = 0; q < h.size(); ++q) res.set(p, static_cast<int>(q), h[q]);
        }
    });
    return res;
}

int Engine::cone_vertex() const {
    if (!opt_.conical) throw ConicalStructureRequired("input is not compact and not flagged conical");
    int vertex = -1;
    for (int i = 0; i < c_->size(); ++i) {
        if (c_->cell(i).dim() != 0) continue;
        bool face_of_all = true;
        for (int j = 0; j < c_->size(); ++j)
            if (c_->cell(j).dim() > 0 && !c_->is_face(i, j)) face_of_all = false;
        if (face_of_all) {
            vertex = i;
            break;
        }
    }
    if (vertex < 0) throw ConicalStructureRequired("no cone vertex cell found");
    for (int j = 0; j < c_->size(); ++j) {
        if (c_->cell(j).dim() == 0 && j != vertex)
            throw ConicalStructureRequired("conical input must have the vertex as its only 0-cell");
    }
    return vertex;
}

HomologyResult Engine::bm_homology(Variant v, Coeff k, int p_lo, int p_hi) {
    if (compact_) {
        auto res = homology(v, k, p_lo, p_hi);
        res.flavor = Flavor::IH_BM;
        return res;
    }
    int vertex = cone_vertex();
    auto res = relative_homology(v, k, p_lo, p_hi, {vertex});
    res.flavor = Flavor::IH_BM;
    return res;
}

HomologyResult Engine::cohomology(Variant v, Coeff k, int p_lo, int p_hi, bool compact_support,
                                  const std::set<int>& open_z) {
    Flavor flavor = compact_support ? Flavor::COHOM_C : Flavor::COHOM;
    if (compact_support && !compact_) {
        int vertex = cone_vertex();
        return stabilized(flavor, v, k, [&](int level, HomologyResult& res) {
            GenFilter in_u = [&](int q, int simplex) {
                const StratifiedTriangulation& t = triangulation(level);
                for (int vx : t.simplices[q][simplex])
                    if (t.vertex_carrier[vx] == vertex) return false;
                return true;
            };
            for (int p = p_lo; p <= p_hi; ++p) {
                auto b = quotient_boundaries(level, p, v, {}, in_u, false);
                auto h = cohomology_of_complex(b, k);
                for (size_t q = 0; q < h.size(); ++q) res.set(p, static_cast<int>(q), h[q]);
            }
        });
    }
    return stabilized(flavor, v, k, [&](int level, HomologyResult& res) {
        for (int p = p_lo; p <= p_hi; ++p) {
            auto b = complex_boundaries(level, p, v, open_z, false);
            auto h = cohomology_of_complex(b, k);
            for (size_t q = 0; q < h.size(); ++q) res.set(p, static_cast<int>(q), h[q]);
        }
    });
}

HomologyResult Engine::tropical_homology(Coeff k, int p_lo, int p_hi, const std::set<int>& open_z) {
    auto res = stabilized(Flavor::PLAIN, Variant::GM, k, [&](int level, HomologyResult& res) {
        for (int p = p_lo; p <= p_hi; ++p) {
            auto b = complex_boundaries(level, p, Variant::GM, open_z, true);
            auto h = homology_of_complex(b, k);
            for (size_t q = 0; q < h.size(); ++q) res.set(p, static_cast<int>(q), h[q]);
        }
    });
    return res;
}

}  // namespace tih
