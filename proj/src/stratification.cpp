#include "tih/stratification.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <numeric>

#include "tih/errors.hpp"

namespace tih {

bool Filtration::level_contains(int i, int cell) const {
    if (i < 0) return false;
    if (i > formal_dim) i = formal_dim;
    const auto& l = levels[i];
    return std::binary_search(l.begin(), l.end(), cell);
}

int Filtration::slice_of(int cell) const {
    for (int i = 0; i <= formal_dim; ++i)
        if (level_contains(i, cell)) return i;
    return -1;
}

void check_filtration(const FaceComplex& c, const Filtration& f) {
    if (static_cast<int>(f.levels.size()) != f.formal_dim + 1)
        throw ValidationError("filtration level count does not match formal dimension");
    std::set<int> prev;
    for (int i = 0; i <= f.formal_dim; ++i) {
        std::set<int> cur(f.levels[i].begin(), f.levels[i].end());
        for (int id : cur) {
            if (id < 0 || id >= c.size()) throw ValidationError("filtration refers to unknown cell");
            for (int fc : c.faces_of(id))
                if (!cur.count(fc)) throw ValidationError("filtration level is not closed under faces");
        }
        for (int id : prev)
            if (!cur.count(id)) throw ValidationError("filtration levels are not nested");
        prev = std::move(cur);
    }
    if (static_cast<int>(prev.size()) != c.size()) throw ValidationError("top filtration level must contain every cell");
}

Filtration face_filtration(const FaceComplex& c) {
    Filtration f;
    f.formal_dim = std::max(0, c.max_dim());
    f.levels.assign(f.formal_dim + 1, {});
    for (int i = 0; i <= f.formal_dim; ++i)
        for (int id = 0; id < c.size(); ++id)
            if (c.cell(id).dim() <= i) f.levels[i].push_back(id);
    return f;
}

namespace {

// dense rational gaussian utilities for the small quotient computations
using RatVec = std::vector<Rat>;
using RatRows = std::vector<RatVec>;

int rat_rank(RatRows rows) {
    if (rows.empty()) return 0;
    const int m = static_cast<int>(rows[0].size());
    int r = 0;
    for (int col = 0; col < m && r < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int i = r; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][col] != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(rows[r], rows[pivot]);
        for (int i = r + 1; i < static_cast<int>(rows.size()); ++i) {
            if (rows[i][col] == 0) continue;
            Rat fct = rows[i][col] / rows[r][col];
            for (int j = col; j < m; ++j) rows[i][j] -= fct * rows[r][j];
        }
        ++r;
    }
    return r;
}

// solve basis^T x = v for x (basis rows span containing v); nullopt otherwise
std::optional<RatVec> rat_coords(const RatRows& basis, const RatVec& v) {
    const int m = static_cast<int>(v.size());
    const int k = static_cast<int>(basis.size());
    RatRows aug(m, RatVec(k + 1, Rat(0)));
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < k; ++i) aug[j][i] = basis[i][j];
        aug[j][k] = v[j];
    }
    // gaussian elimination
    std::vector<int> pivot_col(k, -1);
    int r = 0;
    for (int col = 0; col < k && r < m; ++col) {
        int p = -1;
        for (int i = r; i < m; ++i)
            if (aug[i][col] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(aug[r], aug[p]);
        for (int i = 0; i < m; ++i) {
            if (i == r || aug[i][col] == 0) continue;
            Rat fct = aug[i][col] / aug[r][col];
            for (int j = col; j <= k; ++j) aug[i][j] -= fct * aug[r][j];
        }
        pivot_col[col] = r;
        ++r;
    }
    RatVec x(k, Rat(0));
    for (int col = 0; col < k; ++col)
        if (pivot_col[col] >= 0) x[col] = aug[pivot_col[col]][k] / aug[pivot_col[col]][col];
    // verify
    for (int j = 0; j < m; ++j) {
        Rat acc(0);
        for (int i = 0; i < k; ++i) acc += basis[i][j] * x[i];
        if (acc != v[j]) return std::nullopt;
    }
    return x;
}

struct Dir2 {  // primitive integer direction in the plane
    Int x, y;
    bool operator==(const Dir2&) const = default;
    bool operator<(const Dir2& o) const { return std::tie(x, y) < std::tie(o.x, o.y); }
};

Dir2 make_dir(const Rat& a, const Rat& b) {
    auto v = primitive_vector({a, b});
    return {v[0], v[1]};
}

Int cross(const Dir2& a, const Dir2& b) { return a.x * b.y - a.y * b.x; }
Int dot(const Dir2& a, const Dir2& b) { return a.x * b.x + a.y * b.y; }

// closed arc from a counterclockwise to b, of angle <= pi (a != b)
struct Arc {
    Dir2 a, b;
    bool contains(const Dir2& u) const { return cross(a, u) >= 0 && cross(u, b) >= 0; }
};

// 2D cone given by homogeneous inequalities rows . y <= 0
struct PlaneCone {
    std::vector<std::array<Rat, 2>> rows;
};

// true if the union of the cones covers the plane
bool plane_cones_cover(const std::vector<PlaneCone>& cones) {
    std::vector<Arc> arcs;
    for (const auto& cone : cones) {
        std::vector<std::array<Rat, 2>> rows;
        for (const auto& r : cone.rows)
            if (r[0] != 0 || r[1] != 0) rows.push_back(r);
        if (rows.empty()) return true;  // whole plane
        // interior point (strict feasibility) in 2 variables
        LinSystem sys(2);
        for (const auto& r : rows) sys.add_lt({r[0], r[1]}, Rat(0));
        auto pt = sys.point();
        if (!pt) continue;  // cone has empty interior, irrelevant for covering
        Dir2 n = make_dir((*pt)[0], (*pt)[1]);
        // candidate boundary directions: rotations of the constraint normals
        std::set<Dir2> valid;
        for (const auto& r : rows) {
            for (int sgn : {1, -1}) {
                Dir2 d = make_dir(Rat(sgn) * -r[1], Rat(sgn) * r[0]);
                bool ok = true;
                for (const auto& q : rows)
                    if (q[0] * Rat(d.x) + q[1] * Rat(d.y) > 0) ok = false;
                if (ok) valid.insert(d);
            }
        }
        if (valid.empty()) continue;
        // angular position relative to n: class in {-1 cw, 0 aligned, 1 ccw, 2 opposite}
        auto cls = [&](const Dir2& d) {
            Int cr = cross(n, d);
            if (cr > 0) return 1;
            if (cr < 0) return -1;
            return dot(n, d) > 0 ? 0 : 2;
        };
        auto angle_less = [&](const Dir2& p, const Dir2& q) {
            int cp = cls(p), cq = cls(q);
            auto order = [](int cl) { return cl == -1 ? 0 : cl == 0 ? 1 : cl == 1 ? 2 : 3; };
            if (order(cp) != order(cq)) return order(cp) < order(cq);
            if (cp == -1 || cp == 1) return cross(p, q) > 0;
            return false;
        };
        Dir2 u = *valid.begin(), w = *valid.begin();
        for (const auto& d : valid) {
            if (angle_less(d, u)) u = d;
            if (angle_less(w, d)) w = d;
        }
        if (u == w) continue;  // degenerate
        arcs.push_back({u, w});
    }
    if (arcs.empty()) return false;
    // event directions; every gap between adjacent events must lie in an arc
    std::set<Dir2> events;
    for (const auto& a : arcs) {
        events.insert(a.a);
        events.insert(a.b);
    }
    if (events.size() < 2) return false;
    std::vector<Dir2> ev(events.begin(), events.end());
    // sort counterclockwise starting anywhere: quadrant + cross comparator
    auto half = [](const Dir2& d) { return (d.y < 0 || (d.y == 0 && d.x < 0)) ? 1 : 0; };
    std::sort(ev.begin(), ev.end(), [&](const Dir2& p, const Dir2& q) {
        if (half(p) != half(q)) return half(p) < half(q);
        return cross(p, q) > 0;
    });
    const int ne = static_cast<int>(ev.size());
    for (int i = 0; i < ne; ++i) {
        const Dir2& d1 = ev[i];
        const Dir2& d2 = ev[(i + 1) % ne];
        // direction strictly inside the counterclockwise sector d1 -> d2
        Dir2 mid;
        Int cr = cross(d1, d2);
        if (cr > 0) {
            auto v = primitive_vector({Rat(d1.x) + Rat(d2.x), Rat(d1.y) + Rat(d2.y)});
            mid = {v[0], v[1]};
        } else if (cr == 0) {
            mid = {-d1.y, d1.x};  // opposite events: quarter-turn inside the half-gap
        } else {
            // reflex gap (> pi): no arc of angle <= pi can span it
            auto v = primitive_vector({-(Rat(d1.x) + Rat(d2.x)), -(Rat(d1.y) + Rat(d2.y))});
            mid = {v[0], v[1]};
        }
        bool covered = false;
        for (const auto& a : arcs)
            if (a.contains(d1) && a.contains(mid) && a.contains(d2)) covered = true;
        if (!covered) return false;
    }
    return true;
}

// tangent cone of tau at a relative interior point x of one of its faces;
// rows over tau's free coordinates: equalities then tight inequalities
void tangent_cone_rows(const HPolyhedron& tau, const ExtendedPoint& x, RatRows& out_eqs, RatRows& out_ineqs) {
    const auto& fc = tau.free_coords();
    out_eqs.clear();
    out_ineqs.clear();
    for (const auto& h : tau.eqs()) {
        RatVec row;
        for (int c : fc) row.emplace_back(h.normal[c]);
        out_eqs.push_back(std::move(row));
    }
    for (const auto& h : tau.ineqs()) {
        Rat lhs(0);
        for (int c : fc) lhs += Rat(h.normal[c]) * *x.coords[c];
        if (lhs == h.offset) {
            RatVec row;
            for (int c : fc) row.emplace_back(h.normal[c]);
            out_ineqs.push_back(std::move(row));
        }
    }
}

// Affine-neighborhood test: do the relative interior points of cell sigma
// have an idim-dimensional affine neighborhood inside the subcomplex `alive`?
bool has_affine_neighborhood(const FaceComplex& c, int sigma, int idim, const std::set<int>& alive) {
    const HPolyhedron& s = c.cell(sigma);
    std::vector<int> star{sigma};
    for (int cf : c.cofaces_of(sigma))
        if (alive.count(cf)) star.push_back(cf);
    for (int t : star)
        if (c.cell(t).sed() != s.sed()) return false;  // mixed sedentarity: never affine

    const auto& fc = s.free_coords();
    const int m = static_cast<int>(fc.size());
    ExtendedPoint x = s.interior_point();
    RatVec xbar;
    for (int cc : fc) xbar.push_back(*x.coords[cc]);

    // direction space D of the affine hull of the star
    RatRows dirs;
    for (int t : star) {
        const HPolyhedron& tau = c.cell(t);
        auto lat = tau.tangent_lattice();
        for (int i = 0; i < lat.rank(); ++i) {
            auto row = lat.basis.dense_row(i);
            dirs.emplace_back(row.begin(), row.end());
        }
        ExtendedPoint y = tau.interior_point();
        RatVec off(m);
        for (int j = 0; j < m; ++j) off[j] = *y.coords[fc[j]] - xbar[j];
        dirs.push_back(std::move(off));
    }
    if (rat_rank(dirs) != idim) return false;

    auto lat_sigma = s.tangent_lattice();
    const int dsig = lat_sigma.rank();
    const int k = idim - dsig;
    if (k == 0) return true;
    if (k >= 3)
        throw UnsupportedStarDimension(
            "star has normal direction of dimension >= 3; supply the filtration explicitly");

    // basis of D by greedy selection
    RatRows dbasis;
    for (const auto& d : dirs) {
        RatRows test = dbasis;
        test.push_back(d);
        if (rat_rank(test) > static_cast<int>(dbasis.size())) dbasis.push_back(d);
        if (static_cast<int>(dbasis.size()) == idim) break;
    }

    // quotient D / L(sigma): functionals vanishing on L(sigma), restricted to D
    IntegerLattice ortho = kernel_lattice(lat_sigma.basis);
    RatRows o_rows;
    for (int i = 0; i < ortho.rank(); ++i) {
        auto row = ortho.basis.dense_row(i);
        o_rows.emplace_back(row.begin(), row.end());
    }
    auto project_o = [&](const RatVec& v) {
        RatVec out;
        for (const auto& row : o_rows) {
            Rat acc(0);
            for (int j = 0; j < m; ++j) acc += row[j] * v[j];
            out.push_back(acc);
        }
        return out;
    };
    RatRows w_basis;
    for (const auto& d : dbasis) {
        RatVec img = project_o(d);
        RatRows test = w_basis;
        test.push_back(img);
        if (rat_rank(test) > static_cast<int>(w_basis.size())) w_basis.push_back(img);
        if (static_cast<int>(w_basis.size()) == k) break;
    }
    // quotient coordinates of the D basis vectors
    RatRows qc;  // idim rows of k entries
    for (const auto& d : dbasis) {
        auto coords = rat_coords(w_basis, project_o(d));
        if (!coords) return false;
        qc.push_back(*coords);
    }

    // Tangent cone of each star cell, written in the s-coordinates of D
    // (v = sum_a s_a dbasis[a]); quotient image is then linear in s.
    auto cone_in_s = [&](int t, RatRows& eq_s, RatRows& in_s) {
        RatRows eqs, tights;
        tangent_cone_rows(c.cell(t), x, eqs, tights);
        auto convert = [&](const RatVec& row) {
            RatVec out(idim, Rat(0));
            for (int a = 0; a < idim; ++a)
                for (int j = 0; j < m; ++j) out[a] += row[j] * dbasis[a][j];
            return out;
        };
        eq_s.clear();
        in_s.clear();
        for (const auto& r : eqs) eq_s.push_back(convert(r));
        for (const auto& r : tights) in_s.push_back(convert(r));
    };

    if (k == 1) {
        bool plus = false, minus = false;
        for (int t : star) {
            if (t == sigma) continue;
            RatRows eq_s, in_s;
            cone_in_s(t, eq_s, in_s);
            for (int sgn : {1, -1}) {
                LinSystem sys(idim);
                for (const auto& r : eq_s) sys.add_eq(r, Rat(0));
                for (const auto& r : in_s) sys.add_le(r, Rat(0));
                RatVec q(idim);
                for (int a = 0; a < idim; ++a) q[a] = qc[a][0];
                sys.add_eq(q, Rat(sgn));
                if (sys.feasible()) (sgn > 0 ? plus : minus) = true;
            }
            if (plus && minus) return true;
        }
        return plus && minus;
    }

    // k == 2: image cones in the quotient plane via FM elimination of s
    std::vector<PlaneCone> cones;
    for (int t : star) {
        if (t == sigma) continue;
        RatRows eq_s, in_s;
        cone_in_s(t, eq_s, in_s);
        LinSystem sys(idim + 2);
        auto lift = [&](const RatVec& r) {
            RatVec out(r);
            out.push_back(Rat(0));
            out.push_back(Rat(0));
            return out;
        };
        for (const auto& r : eq_s) sys.add_eq(lift(r), Rat(0));
        for (const auto& r : in_s) sys.add_le(lift(r), Rat(0));
        for (int comp = 0; comp < 2; ++comp) {
            RatVec row(idim + 2, Rat(0));
            for (int a = 0; a < idim; ++a) row[a] = -qc[a][comp];
            row[idim + comp] = 1;
            sys.add_eq(row, Rat(0));
        }
        std::set<int> elim;
        for (int a = 0; a < idim; ++a) elim.insert(a);
        auto rows = sys.eliminate(elim);
        PlaneCone cone;
        bool empty = false;
        for (const auto& r : rows) {
            if (r.coef[idim] == 0 && r.coef[idim + 1] == 0) {
                bool holds = r.rel == Rel::LT ? Rat(0) < r.rhs : Rat(0) <= r.rhs;
                if (!holds) empty = true;
                continue;
            }
            cone.rows.push_back({r.coef[idim], r.coef[idim + 1]});
        }
        if (!empty) cones.push_back(std::move(cone));
    }
    return plane_cones_cover(cones);
}

}  // namespace

Filtration trop_filtration(const FaceComplex& c) {
    Filtration f;
    f.formal_dim = std::max(0, c.max_dim());
    f.levels.assign(f.formal_dim + 1, {});
    std::set<int> alive;
    for (int i = 0; i < c.size(); ++i) alive.insert(i);
    for (int i = f.formal_dim; i >= 1; --i) {
        f.levels[i].assign(alive.begin(), alive.end());
        std::vector<int> removable;
        for (int id : alive)
            if (has_affine_neighborhood(c, id, i, alive)) removable.push_back(id);
        for (int id : removable) alive.erase(id);
    }
    f.levels[0].assign(alive.begin(), alive.end());
    check_filtration(c, f);
    return f;
}

Filtration pair_filtration(const FaceComplex& c, const std::set<int>& u_cells) {
    std::set<int> complement;
    for (int i = 0; i < c.size(); ++i)
        if (!u_cells.count(i)) complement.insert(i);
    for (int id : complement)
        for (int fc : c.faces_of(id))
            if (!complement.count(fc))
                throw ComplementNotClosed("complement of U is not closed under faces");
    for (int id : u_cells)
        if (id < 0 || id >= c.size()) throw CellNotFound("unknown cell id in U");

    Filtration f;
    f.formal_dim = std::max(0, c.max_dim());
    f.levels.assign(f.formal_dim + 1, {});
    for (int id = 0; id < c.size(); ++id) f.levels[f.formal_dim].push_back(id);
    for (int k = 0; k < f.formal_dim; ++k)
        for (int id : complement)
            if (c.cell(id).dim() <= k) f.levels[k].push_back(id);
    check_filtration(c, f);
    return f;
}

std::vector<Stratum> strata(const FaceComplex& c, const Filtration& f) {
    check_filtration(c, f);
    std::vector<int> slice(c.size());
    for (int id = 0; id < c.size(); ++id) {
        slice[id] = f.slice_of(id);
        if (slice[id] < 0) throw ValidationError("cell missing from filtration");
    }
    // union-find over cells within a slice, joined along face relations
    std::vector<int> parent(c.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) { return parent[a] == a ? a : parent[a] = find(parent[a]); };
    for (int id = 0; id < c.size(); ++id)
        for (int cf : c.cofaces_of(id))
            if (slice[id] == slice[cf]) parent[find(id)] = find(cf);

    std::map<int, std::vector<int>> groups;
    for (int id = 0; id < c.size(); ++id) groups[find(id)].push_back(id);
    std::vector<Stratum> out;
    for (auto& [root, cells] : groups) {
        Stratum s;
        s.formal_dim = slice[cells.front()];
        std::sort(cells.begin(), cells.end());
        s.cells = cells;
        s.regular = (s.formal_dim == f.formal_dim);
        out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end(), [](const Stratum& a, const Stratum& b) {
        if (a.formal_dim != b.formal_dim) return a.formal_dim < b.formal_dim;
        return a.cells.front() < b.cells.front();
    });
    for (size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
    return out;
}

std::vector<int> stratum_of_cell(const FaceComplex& c, const Filtration& f, const std::vector<Stratum>& s) {
    std::vector<int> out(c.size(), -1);
    for (const auto& st : s)
        for (int id : st.cells) out[id] = st.id;
    for (int id = 0; id < c.size(); ++id)
        if (out[id] < 0) throw ValidationError("cell missing from strata");
    return out;
}

Perversity dual_perversity(const Filtration& f, const std::vector<Stratum>& s, const Perversity& p) {
    Perversity d;
    for (const auto& st : s) {
        if (st.regular) continue;  // stays zero (Definition of a perversity wins over the formula here)
        d.values[st.id] = st.codim(f.formal_dim) - 2 - p(st.id);
    }
    return d;
}

}  // namespace tih
