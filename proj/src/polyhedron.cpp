#include "tih/polyhedron.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "tih/errors.hpp"

namespace tih {

std::set<int> ExtendedPoint::sedentarity() const { return tih::sedentarity(*this); }

std::set<int> sedentarity(const ExtendedPoint& x) {
    std::set<int> s;
    for (int i = 0; i < x.ambient_dim; ++i)
        if (!x.coords[i].has_value()) s.insert(i);
    return s;
}

namespace {

std::vector<Rat> restrict_to(const std::vector<Int>& normal, const std::vector<int>& coords) {
    std::vector<Rat> out;
    out.reserve(coords.size());
    for (int c : coords) out.emplace_back(normal[c]);
    return out;
}

// primitive integer normal from rational coefficients, positive scaling only
HalfSpace make_halfspace(const std::vector<Rat>& coef, const Rat& rhs, const std::vector<int>& coords, int r) {
    std::vector<Int> w = primitive_vector(coef);
    // recover the scale factor applied, to scale the offset consistently
    Rat scale(0);
    for (size_t i = 0; i < coef.size(); ++i)
        if (coef[i] != 0) {
            scale = Rat(w[i]) / coef[i];
            break;
        }
    HalfSpace h;
    h.normal.assign(r, 0);
    for (size_t i = 0; i < coords.size(); ++i) h.normal[coords[i]] = w[i];
    h.offset = scale == 0 ? rhs : rhs * scale;
    return h;
}

std::string halfspace_key(const HalfSpace& h) {
    std::ostringstream os;
    for (const auto& v : h.normal) os << v.str() << ",";
    os << ":" << rat_to_string(h.offset);
    return os.str();
}

}  // namespace

HPolyhedron HPolyhedron::make(int ambient_dim, std::set<int> sed, std::vector<HalfSpace> ineqs,
                              std::vector<HalfSpace> eqs, bool tropical) {
    HPolyhedron p;
    p.r_ = ambient_dim;
    p.tropical_ = tropical;
    if (!tropical && !sed.empty()) throw ValidationError("sedentarity requires a tropical ambient");
    p.sed_ = std::move(sed);
    for (int i : p.sed_)
        if (i < 0 || i >= ambient_dim) throw ValidationError("sedentarity index out of range");
    for (int i = 0; i < ambient_dim; ++i)
        if (!p.sed_.count(i)) p.free_.push_back(i);
    auto check = [&](const HalfSpace& h) {
        if (static_cast<int>(h.normal.size()) != ambient_dim)
            throw DimensionMismatch("halfspace normal arity mismatch");
        for (int i : p.sed_)
            if (h.normal[i] != 0) throw ValidationError("nonzero normal entry on sedentarity coordinate");
    };
    for (auto& h : ineqs) check(h);
    for (auto& h : eqs) check(h);
    p.ineqs_ = std::move(ineqs);
    p.eqs_ = std::move(eqs);
    p.canonicalize();
    return p;
}

LinSystem HPolyhedron::to_system() const {
    const int m = static_cast<int>(free_.size());
    LinSystem sys(m);
    for (const auto& h : ineqs_) sys.add_le(restrict_to(h.normal, free_), h.offset);
    for (const auto& h : eqs_) sys.add_eq(restrict_to(h.normal, free_), h.offset);
    return sys;
}

void HPolyhedron::canonicalize() {
    const int m = static_cast<int>(free_.size());

    // feasibility of the finite part
    {
        LinSystem sys(m);
        for (const auto& h : ineqs_) sys.add_le(restrict_to(h.normal, free_), h.offset);
        for (const auto& h : eqs_) sys.add_eq(restrict_to(h.normal, free_), h.offset);
        if (!sys.feasible()) throw EmptyPolyhedron("polyhedron has empty finite part");
    }

    // implicit equalities: inequality that cannot be strict anywhere
    std::vector<HalfSpace> strict_capable;
    for (size_t k = 0; k < ineqs_.size(); ++k) {
        LinSystem sys(m);
        for (size_t j = 0; j < ineqs_.size(); ++j) {
            auto c = restrict_to(ineqs_[j].normal, free_);
            if (j == k)
                sys.add_lt(c, ineqs_[j].offset);
            else
                sys.add_le(c, ineqs_[j].offset);
        }
        for (const auto& h : eqs_) sys.add_eq(restrict_to(h.normal, free_), h.offset);
        if (sys.feasible())
            strict_capable.push_back(ineqs_[k]);
        else
            eqs_.push_back(ineqs_[k]);
    }
    ineqs_ = std::move(strict_capable);

    // canonical affine hull: rational RREF of the equality rows
    // rows: coefficients over free coords plus offset
    std::vector<std::pair<std::vector<Rat>, Rat>> rref;
    for (const auto& h : eqs_) {
        std::vector<Rat> row = restrict_to(h.normal, free_);
        Rat rhs = h.offset;
        for (const auto& [prow, prhs] : rref) {
            int p = -1;
            for (int i = 0; i < m; ++i)
                if (prow[i] != 0) {
                    p = i;
                    break;
                }
            if (p >= 0 && row[p] != 0) {
                Rat f = row[p] / prow[p];
                for (int i = 0; i < m; ++i) row[i] -= f * prow[i];
                rhs -= f * prhs;
            }
        }
        int p = -1;
        for (int i = 0; i < m; ++i)
            if (row[i] != 0) {
                p = i;
                break;
            }
        if (p < 0) continue;  // dependent row (consistent: feasibility already checked)
        Rat lead = row[p];
        for (int i = 0; i < m; ++i) row[i] /= lead;
        rhs /= lead;
        // reduce earlier rows
        for (auto& [prow, prhs] : rref) {
            if (prow[p] != 0) {
                Rat f = prow[p];
                for (int i = 0; i < m; ++i) prow[i] -= f * row[i];
                prhs -= f * rhs;
            }
        }
        rref.emplace_back(row, rhs);
    }
    auto lead = [m](const std::vector<Rat>& v) {
        for (int i = 0; i < m; ++i)
            if (v[i] != 0) return i;
        return m;
    };
    std::sort(rref.begin(), rref.end(),
              [&](const auto& a, const auto& b) { return lead(a.first) < lead(b.first); });
    eqs_.clear();
    std::vector<int> pivot_col;
    for (const auto& [row, rhs] : rref) {
        eqs_.push_back(make_halfspace(row, rhs, free_, r_));
        for (int i = 0; i < m; ++i)
            if (row[i] != 0) {
                pivot_col.push_back(i);
                break;
            }
    }
    dim_ = m - static_cast<int>(eqs_.size());

    // reduce inequality normals modulo the affine hull, drop duplicates
    std::map<std::string, HalfSpace> reduced;
    for (const auto& h : ineqs_) {
        std::vector<Rat> row = restrict_to(h.normal, free_);
        Rat rhs = h.offset;
        for (size_t t = 0; t < rref.size(); ++t) {
            int p = pivot_col[t];
            if (row[p] != 0) {
                Rat f = row[p] / rref[t].first[p];
                for (int i = 0; i < m; ++i) row[i] -= f * rref[t].first[i];
                rhs -= f * rref[t].second;
            }
        }
        bool zero = true;
        for (int i = 0; i < m; ++i)
            if (row[i] != 0) zero = false;
        if (zero) continue;  // trivial after reduction
        HalfSpace nh = make_halfspace(row, rhs, free_, r_);
        reduced.emplace(halfspace_key(nh), nh);
    }
    ineqs_.clear();
    for (auto& [k, h] : reduced) ineqs_.push_back(h);

    // drop redundant inequalities one at a time
    for (size_t k = 0; k < ineqs_.size();) {
        LinSystem sys(m);
        for (size_t j = 0; j < ineqs_.size(); ++j) {
            if (j == k) continue;
            sys.add_le(restrict_to(ineqs_[j].normal, free_), ineqs_[j].offset);
        }
        for (const auto& h : eqs_) sys.add_eq(restrict_to(h.normal, free_), h.offset);
        // redundant iff normal.x > offset impossible without it
        auto c = restrict_to(ineqs_[k].normal, free_);
        for (auto& v : c) v = -v;
        sys.add_lt(c, -ineqs_[k].offset);
        if (!sys.feasible())
            ineqs_.erase(ineqs_.begin() + static_cast<long>(k));
        else
            ++k;
    }

    std::ostringstream os;
    os << (tropical_ ? "T" : "R") << r_ << "|";
    for (int i : sed_) os << i << ",";
    os << "|";
    for (const auto& h : eqs_) os << "E" << halfspace_key(h) << ";";
    std::vector<std::string> ik;
    for (const auto& h : ineqs_) ik.push_back(halfspace_key(h));
    std::sort(ik.begin(), ik.end());
    for (const auto& s : ik) os << "I" << s << ";";
    key_ = os.str();
}

std::optional<HPolyhedron> HPolyhedron::sedentarity_limit(const std::set<int>& J) const {
    for (int i : sed_)
        if (!J.count(i)) return std::nullopt;
    for (int j : J)
        if (j < 0 || j >= r_) return std::nullopt;
    if (J == sed_) return *this;
    if (!tropical_) return std::nullopt;  // plain R^r ambient: nothing at infinity

    const int m = static_cast<int>(free_.size());
    // variables: free coords (by index in free_) plus the parameter t at slot m
    LinSystem sys(m + 1);
    auto lift = [&](const HalfSpace& h) {
        std::vector<Rat> c(m + 1, Rat(0));
        for (int i = 0; i < m; ++i) c[i] = Rat(h.normal[free_[i]]);
        return c;
    };
    for (const auto& h : ineqs_) sys.add_le(lift(h), h.offset);
    for (const auto& h : eqs_) sys.add_eq(lift(h), h.offset);
    std::set<int> elim;
    for (int i = 0; i < m; ++i) {
        if (J.count(free_[i])) {
            elim.insert(i);
            std::vector<Rat> c(m + 1, Rat(0));
            c[i] = 1;
            c[m] = 1;  // x_i + t <= 0
            sys.add_le(c, Rat(0));
        }
    }
    auto rows = sys.eliminate(elim);

    // rows now involve only kept coords and t; a positive t-coefficient kills
    // the limit, negative rows drop out, zero rows survive
    std::vector<int> kept_coords;
    for (int i = 0; i < m; ++i)
        if (!J.count(free_[i])) kept_coords.push_back(free_[i]);
    std::vector<HalfSpace> ineqs;
    for (const auto& row : rows) {
        const Rat& tc = row.coef[m];
        if (tc < 0) continue;  // relaxes as t grows; no constraint in the limit
        bool zero = true;
        for (int i = 0; i < m; ++i)
            if (row.coef[i] != 0) zero = false;
        if (tc > 0) return std::nullopt;  // cuts everything for large t
        if (zero) {
            if (Rat(0) > row.rhs) return std::nullopt;  // infeasible constant row
            continue;
        }
        std::vector<Rat> coef;
        for (int i = 0; i < m; ++i)
            if (!J.count(free_[i])) coef.push_back(row.coef[i]);
        // rebuild over kept coordinates
        std::vector<int> coords = kept_coords;
        HalfSpace h = make_halfspace(coef, row.rhs, coords, r_);
        ineqs.push_back(std::move(h));
    }
    try {
        return HPolyhedron::make(r_, J, std::move(ineqs), {}, tropical_);
    } catch (const EmptyPolyhedron&) {
        return std::nullopt;
    }
}

std::vector<HPolyhedron> HPolyhedron::faces() const {
    std::vector<HPolyhedron> out;
    std::set<std::string> seen;

    // subsets J of coordinates extending the sedentarity
    const int m = static_cast<int>(free_.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::set<int> J = sed_;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) J.insert(free_[i]);
        auto limit = sedentarity_limit(J);
        if (!limit) continue;

        // ordinary faces of the limit polyhedron by tight-set search
        std::vector<HPolyhedron> queue{*limit};
        std::set<std::string> local;
        local.insert(limit->key());
        while (!queue.empty()) {
            HPolyhedron f = queue.back();
            queue.pop_back();
            if (!seen.count(f.key())) {
                seen.insert(f.key());
                out.push_back(f);
            }
            for (size_t k = 0; k < f.ineqs().size(); ++k) {
                std::vector<HalfSpace> eqs = f.eqs();
                eqs.push_back(f.ineqs()[k]);
                std::vector<HalfSpace> ineqs = f.ineqs();
                ineqs.erase(ineqs.begin() + static_cast<long>(k));
                try {
                    HPolyhedron sub =
                        HPolyhedron::make(r_, f.sed(), std::move(ineqs), std::move(eqs), f.tropical());
                    if (!local.count(sub.key())) {
                        local.insert(sub.key());
                        queue.push_back(std::move(sub));
                    }
                } catch (const EmptyPolyhedron&) {
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<HPolyhedron> enumerate_faces(const HPolyhedron& p) { return p.faces(); }

bool HPolyhedron::relint_contains(const ExtendedPoint& x) const {
    if (x.ambient_dim != r_) throw DimensionMismatch("point/polyhedron ambient dimension mismatch");
    if (tih::sedentarity(x) != sed_) return false;
    for (const auto& h : eqs_) {
        Rat lhs(0);
        for (int i : free_) lhs += Rat(h.normal[i]) * *x.coords[i];
        if (lhs != h.offset) return false;
    }
    for (const auto& h : ineqs_) {
        Rat lhs(0);
        for (int i : free_) lhs += Rat(h.normal[i]) * *x.coords[i];
        if (!(lhs < h.offset)) return false;
    }
    return true;
}

bool HPolyhedron::closure_contains(const ExtendedPoint& x) const {
    if (x.ambient_dim != r_) throw DimensionMismatch("point/polyhedron ambient dimension mismatch");
    auto J = tih::sedentarity(x);
    auto limit = sedentarity_limit(J);
    if (!limit) return false;
    for (const auto& h : limit->eqs()) {
        Rat lhs(0);
        for (int i : limit->free_coords()) lhs += Rat(h.normal[i]) * *x.coords[i];
        if (lhs != h.offset) return false;
    }
    for (const auto& h : limit->ineqs()) {
        Rat lhs(0);
        for (int i : limit->free_coords()) lhs += Rat(h.normal[i]) * *x.coords[i];
        if (!(lhs <= h.offset)) return false;
    }
    return true;
}

bool HPolyhedron::closure_contains(const HPolyhedron& other) const {
    // check every sedentarity piece of other against ours
    const int m = static_cast<int>(other.free_coords().size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::set<int> J = other.sed();
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) J.insert(other.free_coords()[i]);
        auto op = other.sedentarity_limit(J);
        if (!op) continue;
        auto mp = sedentarity_limit(J);
        if (!mp) return false;
        // op subset of mp: no constraint of mp can be violated on op
        LinSystem base = op->to_system();
        const auto& fc = op->free_coords();
        auto test = [&](const HalfSpace& h, bool equality) {
            std::vector<Rat> c = restrict_to(h.normal, fc);
            if (equality) {
                LinSystem s1 = base;
                s1.add_lt(c, h.offset);
                if (s1.feasible()) return false;
                for (auto& v : c) v = -v;
                LinSystem s2 = base;
                s2.add_lt(c, -h.offset);
                return !s2.feasible();
            }
            for (auto& v : c) v = -v;
            LinSystem s = base;
            s.add_lt(c, -h.offset);
            return !s.feasible();
        };
        for (const auto& h : mp->eqs())
            if (!test(h, true)) return false;
        for (const auto& h : mp->ineqs())
            if (!test(h, false)) return false;
    }
    return true;
}

IntegerLattice HPolyhedron::tangent_lattice() const {
    const int m = static_cast<int>(free_.size());
    IntMatrix e(0, m);
    for (const auto& h : eqs_) {
        std::vector<Rat> row = restrict_to(h.normal, free_);
        e.push_row(primitive_vector(row));
    }
    return kernel_lattice(e);
}

ExtendedPoint HPolyhedron::interior_point() const {
    const int m = static_cast<int>(free_.size());
    LinSystem sys(m);
    for (const auto& h : eqs_) sys.add_eq(restrict_to(h.normal, free_), h.offset);
    for (const auto& h : ineqs_) sys.add_lt(restrict_to(h.normal, free_), h.offset);
    auto pt = sys.point();
    if (!pt) throw EmptyPolyhedron("no relative interior point");
    ExtendedPoint x;
    x.ambient_dim = r_;
    x.coords.assign(r_, std::nullopt);
    for (int i = 0; i < m; ++i) x.coords[free_[i]] = (*pt)[i];
    return x;
}

std::optional<HPolyhedron> HPolyhedron::intersect(const std::vector<HalfSpace>& extra) const {
    std::vector<HalfSpace> in = ineqs_;
    for (const auto& h : extra) in.push_back(h);
    try {
        return HPolyhedron::make(r_, sed_, std::move(in), eqs_, tropical_);
    } catch (const EmptyPolyhedron&) {
        return std::nullopt;
    }
}

bool HPolyhedron::is_bounded() const {
    const int m = static_cast<int>(free_.size());
    // recession cone {v : A v <= 0, E v = 0} is {0} iff no +-unit direction
    for (int i = 0; i < m; ++i) {
        for (int sign : {1, -1}) {
            LinSystem sys(m);
            for (const auto& h : ineqs_) sys.add_le(restrict_to(h.normal, free_), Rat(0));
            for (const auto& h : eqs_) sys.add_eq(restrict_to(h.normal, free_), Rat(0));
            std::vector<Rat> c(m, Rat(0));
            c[i] = 1;
            sys.add_eq(c, Rat(sign));
            if (sys.feasible()) return false;
        }
    }
    return true;
}

}  // namespace tih
