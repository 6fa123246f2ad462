#include "tih/lp.hpp"

#include <algorithm>

#include "tih/errors.hpp"

namespace tih {

namespace {

bool is_zero_row(const LinCon& c) {
    for (const auto& a : c.coef)
        if (a != 0) return false;
    return true;
}

// checks a constraint with all-zero coefficients
bool constant_holds(const LinCon& c) {
    switch (c.rel) {
        case Rel::LE: return Rat(0) <= c.rhs;
        case Rel::LT: return Rat(0) < c.rhs;
        case Rel::EQ: return c.rhs == 0;
    }
    return false;
}

// substitute x_j = expr (coefficients over all vars, constant term last slot
// passed separately) into c, eliminating variable j
void substitute(LinCon& c, int j, const std::vector<Rat>& expr_coef, const Rat& expr_const) {
    Rat a = c.coef[j];
    if (a == 0) return;
    c.coef[j] = 0;
    for (size_t k = 0; k < expr_coef.size(); ++k) c.coef[k] += a * expr_coef[k];
    c.rhs -= a * expr_const;
}

// FM elimination of a single variable from pure-inequality constraints
std::vector<LinCon> fm_step(const std::vector<LinCon>& cons, int j) {
    std::vector<const LinCon*> lower, upper;
    std::vector<LinCon> out;
    for (const auto& c : cons) {
        if (c.coef[j] == 0) {
            out.push_back(c);
        } else if (c.coef[j] > 0) {
            upper.push_back(&c);
        } else {
            lower.push_back(&c);
        }
    }
    for (const auto* lo : lower) {
        for (const auto* up : upper) {
            Rat a = -lo->coef[j];  // > 0
            Rat b = up->coef[j];   // > 0
            LinCon nc;
            nc.coef.resize(lo->coef.size());
            for (size_t k = 0; k < nc.coef.size(); ++k) nc.coef[k] = b * lo->coef[k] + a * up->coef[k];
            nc.rhs = b * lo->rhs + a * up->rhs;
            nc.rel = (lo->rel == Rel::LT || up->rel == Rel::LT) ? Rel::LT : Rel::LE;
            nc.coef[j] = 0;
            out.push_back(std::move(nc));
        }
    }
    return out;
}

// splits equalities into <= pairs
std::vector<LinCon> split_equalities(const std::vector<LinCon>& cons) {
    std::vector<LinCon> out;
    for (const auto& c : cons) {
        if (c.rel != Rel::EQ) {
            out.push_back(c);
            continue;
        }
        LinCon le = c;
        le.rel = Rel::LE;
        LinCon ge = c;
        ge.rel = Rel::LE;
        for (auto& a : ge.coef) a = -a;
        ge.rhs = -ge.rhs;
        out.push_back(std::move(le));
        out.push_back(std::move(ge));
    }
    return out;
}

}  // namespace

void LinSystem::add(std::vector<Rat> coef, Rat rhs, Rel rel) {
    if (static_cast<int>(coef.size()) != nvars_) throw DimensionMismatch("constraint arity mismatch");
    cons_.push_back({std::move(coef), std::move(rhs), rel});
}

std::vector<LinCon> LinSystem::eliminate(const std::set<int>& vars) const {
    std::vector<LinCon> work = cons_;
    std::set<int> remaining = vars;

    // use equalities to substitute away target variables where possible
    bool progress = true;
    while (progress) {
        progress = false;
        for (size_t i = 0; i < work.size() && !progress; ++i) {
            if (work[i].rel != Rel::EQ) continue;
            for (int j : remaining) {
                if (work[i].coef[j] == 0) continue;
                // x_j = (rhs - sum_{k != j} coef_k x_k) / coef_j
                Rat a = work[i].coef[j];
                std::vector<Rat> expr(nvars_, Rat(0));
                for (int k = 0; k < nvars_; ++k)
                    if (k != j) expr[k] = -work[i].coef[k] / a;
                Rat cst = work[i].rhs / a;
                LinCon used = work[i];
                work.erase(work.begin() + static_cast<long>(i));
                for (auto& c : work) substitute(c, j, expr, cst);
                remaining.erase(j);
                progress = true;
                break;
            }
        }
    }
    // any equality still involving a target variable: fall back to splitting
    std::vector<LinCon> ineqs = split_equalities(work);
    for (int j : remaining) ineqs = fm_step(ineqs, j);
    // note: equalities among kept variables were split into <=-pairs above;
    // that loses no information for feasibility or projection purposes
    return ineqs;
}

bool LinSystem::feasible() const { return point().has_value(); }

std::optional<std::vector<Rat>> LinSystem::point() const {
    // recursive elimination with back-substitution
    struct Frame {
        int var;
        bool from_equality;
        std::vector<Rat> expr;  // when from_equality: x_var = expr . x + cst
        Rat cst;
        std::vector<LinCon> cons_before;  // when inequality bound
    };
    std::vector<Frame> frames;
    std::vector<LinCon> work = cons_;

    while (true) {
        // constant rows must hold; drop them
        std::vector<LinCon> next;
        for (const auto& c : work) {
            if (is_zero_row(c)) {
                if (!constant_holds(c)) return std::nullopt;
            } else {
                next.push_back(c);
            }
        }
        work = std::move(next);
        if (work.empty()) break;

        // prefer solving an equality
        bool did_eq = false;
        for (size_t i = 0; i < work.size(); ++i) {
            if (work[i].rel != Rel::EQ) continue;
            int j = -1;
            for (int k = 0; k < nvars_; ++k)
                if (work[i].coef[k] != 0) {
                    j = k;
                    break;
                }
            Rat a = work[i].coef[j];
            Frame f;
            f.var = j;
            f.from_equality = true;
            f.expr.assign(nvars_, Rat(0));
            for (int k = 0; k < nvars_; ++k)
                if (k != j) f.expr[k] = -work[i].coef[k] / a;
            f.cst = work[i].rhs / a;
            work.erase(work.begin() + static_cast<long>(i));
            for (auto& c : work) substitute(c, j, f.expr, f.cst);
            frames.push_back(std::move(f));
            did_eq = true;
            break;
        }
        if (did_eq) continue;

        // pick a variable occurring in some inequality and FM-eliminate it
        int j = -1;
        for (const auto& c : work) {
            for (int k = nvars_ - 1; k >= 0; --k)
                if (c.coef[k] != 0) {
                    j = k;
                    break;
                }
            if (j >= 0) break;
        }
        Frame f;
        f.var = j;
        f.from_equality = false;
        f.cons_before = work;
        work = fm_step(work, j);
        frames.push_back(std::move(f));
    }

    // back-substitute
    std::vector<Rat> x(nvars_, Rat(0));
    std::vector<bool> assigned(nvars_, false);
    for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
        const Frame& f = *it;
        if (f.from_equality) {
            Rat v = f.cst;
            for (int k = 0; k < nvars_; ++k) v += f.expr[k] * x[k];
            x[f.var] = v;
        } else {
            // bounds on x_var from cons_before with other vars already fixed
            bool has_lo = false, has_hi = false, lo_strict = false, hi_strict = false;
            Rat lo, hi;
            for (const auto& c : f.cons_before) {
                Rat a = c.coef[f.var];
                if (a == 0) continue;
                Rat rest = c.rhs;
                for (int k = 0; k < nvars_; ++k)
                    if (k != f.var) rest -= c.coef[k] * x[k];
                Rat bound = rest / a;
                if (a > 0) {  // x <= bound
                    if (!has_hi || bound < hi || (bound == hi && c.rel == Rel::LT)) {
                        hi = bound;
                        hi_strict = (c.rel == Rel::LT);
                        has_hi = true;
                    }
                } else {  // x >= bound
                    if (!has_lo || bound > lo || (bound == lo && c.rel == Rel::LT)) {
                        lo = bound;
                        lo_strict = (c.rel == Rel::LT);
                        has_lo = true;
                    }
                }
            }
            Rat v;
            if (has_lo && has_hi) {
                if (lo == hi) {
                    if (lo_strict || hi_strict) return std::nullopt;  // cannot happen when feasible
                    v = lo;
                } else {
                    v = (lo + hi) / 2;
                }
            } else if (has_lo) {
                v = lo_strict ? lo + 1 : lo;
            } else if (has_hi) {
                v = hi_strict ? hi - 1 : hi;
            } else {
                v = 0;
            }
            x[f.var] = v;
        }
        assigned[f.var] = true;
    }
    // verify (cheap; guards the strict-bound corner cases)
    for (const auto& c : cons_) {
        Rat lhs(0);
        for (int k = 0; k < nvars_; ++k) lhs += c.coef[k] * x[k];
        bool ok = c.rel == Rel::EQ ? lhs == c.rhs : (c.rel == Rel::LE ? lhs <= c.rhs : lhs < c.rhs);
        if (!ok) return std::nullopt;
    }
    return x;
}

}  // namespace tih
