#include "tih/exact_linalg.hpp"

#include <algorithm>
#include <utility>

#include "tih/errors.hpp"

namespace tih {

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

// extended gcd: returns g = s*a + t*b with g >= 0
Int xgcd(const Int& a, const Int& b, Int& s, Int& t) {
    Int old_r = a, r = b, old_s = 1, s_ = 0, old_t = 0, t_ = 1;
    while (r != 0) {
        Int q = old_r / r;
        old_r -= q * r;
        std::swap(old_r, r);
        old_s -= q * s_;
        std::swap(old_s, s_);
        old_t -= q * t_;
        std::swap(old_t, t_);
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

// Matrix mirrored in row-major and column-major maps so both row and column
// operations run in time proportional to the entries they touch.
struct DualMat {
    int rows, cols;
    std::vector<std::map<int, Int>> r, c;

    explicit DualMat(const IntMatrix& m) : rows(m.rows()), cols(m.cols()), r(m.rows()), c(m.cols()) {
        for (int i = 0; i < rows; ++i)
            for (const auto& [j, v] : m.row(i)) {
                r[i][j] = v;
                c[j][i] = v;
            }
    }
    IntMatrix to_matrix() const {
        IntMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (const auto& [j, v] : r[i]) m.set(i, j, v);
        return m;
    }
    Int get(int i, int j) const {
        auto it = r[i].find(j);
        return it == r[i].end() ? Int(0) : it->second;
    }
    void put(int i, int j, const Int& v) {
        if (v == 0) {
            r[i].erase(j);
            c[j].erase(i);
        } else {
            r[i][j] = v;
            c[j][i] = v;
        }
    }
    void row_add(int i, int k, const Int& coef) {  // row_i += coef * row_k, i != k
        if (coef == 0) return;
        for (const auto& [j, v] : r[k]) {
            Int nv = get(i, j) + coef * v;
            put(i, j, nv);
        }
    }
    void col_add(int j, int k, const Int& coef) {  // col_j += coef * col_k, j != k
        if (coef == 0) return;
        for (const auto& [i, v] : c[k]) {
            Int nv = get(i, j) + coef * v;
            put(i, j, nv);
        }
    }
    void row_swap(int i, int k) {
        if (i == k) return;
        auto entries_i = r[i], entries_k = r[k];
        for (const auto& [j, v] : entries_i) put(i, j, 0);
        for (const auto& [j, v] : entries_k) put(k, j, 0);
        for (const auto& [j, v] : entries_k) put(i, j, v);
        for (const auto& [j, v] : entries_i) put(k, j, v);
    }
    void col_swap(int j, int k) {
        if (j == k) return;
        auto entries_j = c[j], entries_k = c[k];
        for (const auto& [i, v] : entries_j) put(i, j, 0);
        for (const auto& [i, v] : entries_k) put(i, k, 0);
        for (const auto& [i, v] : entries_k) put(i, j, v);
        for (const auto& [i, v] : entries_j) put(i, k, v);
    }
    void row_negate(int i) {
        for (auto& [j, v] : r[i]) {
            v = -v;
            c[j][i] = v;
        }
    }
};

}  // namespace

// HNF core: columns left to right; in each column the surviving rows are
// reduced against the smallest entry until one remains.
static IntMatrix hnf_impl(const IntMatrix& input, IntMatrix* side, bool reduce_above) {
    DualMat m(input);
    int r = 0;
    for (int col = 0; col < m.cols && r < m.rows; ++col) {
        while (true) {
            int best = -1;
            Int bv;
            int count = 0;
            for (auto it = m.c[col].lower_bound(r); it != m.c[col].end(); ++it) {
                ++count;
                if (best < 0 || abs_int(it->second) < abs_int(bv)) {
                    best = it->first;
                    bv = it->second;
                }
            }
            if (count == 0) break;
            if (count == 1) {
                m.row_swap(r, best);
                if (side) side->swap_rows(r, best);
                break;
            }
            std::vector<std::pair<int, Int>> targets;
            for (auto it = m.c[col].lower_bound(r); it != m.c[col].end(); ++it)
                if (it->first != best) targets.emplace_back(it->first, it->second);
            for (const auto& [i, v] : targets) {
                Int q = v / bv;
                m.row_add(i, best, -q);
                if (side) side->add_row_multiple(i, best, -q);
            }
        }
        Int pivot = m.get(r, col);
        if (pivot == 0) continue;
        if (pivot < 0) {
            m.row_negate(r);
            if (side) side->negate_row(r);
            pivot = -pivot;
        }
        if (reduce_above) {
            std::vector<std::pair<int, Int>> above;
            for (auto it = m.c[col].begin(); it != m.c[col].end() && it->first < r; ++it)
                above.emplace_back(it->first, it->second);
            for (const auto& [i, v] : above) {
                Int q = v / pivot;
                if (v - q * pivot < 0) q -= 1;
                if (q != 0) {
                    m.row_add(i, r, -q);
                    if (side) side->add_row_multiple(i, r, -q);
                }
            }
        }
        ++r;
    }
    return m.to_matrix();
}

HnfResult hnf(const IntMatrix& m) {
    IntMatrix u = IntMatrix::identity(m.rows());
    IntMatrix h = hnf_impl(m, &u, true);
    return {std::move(h), std::move(u)};
}

IntMatrix hnf_basis(const IntMatrix& m) { return hnf_impl(m, nullptr, true); }

std::pair<IntMatrix, IntMatrix> hnf_with_side(const IntMatrix& m, const IntMatrix& side) {
    IntMatrix s = side;
    IntMatrix h = hnf_impl(m, &s, true);
    return {std::move(h), std::move(s)};
}

int rank(const IntMatrix& m) { return static_cast<int>(snf_invariants(m).size()); }

Int det(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw Error("det: matrix not square");
    const int n = m.rows();
    if (n == 0) return 1;
    std::vector<std::vector<Int>> a(n);
    for (int i = 0; i < n; ++i) a[i] = m.dense_row(i);
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (a[i][k] != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            std::swap(a[k], a[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

namespace {

struct SnfState {
    DualMat m;
    IntMatrix* u;   // accumulates row ops
    IntMatrix* vt;  // accumulates column ops as row ops on v^T

    void row_add(int i, int k, const Int& c) {
        m.row_add(i, k, c);
        if (u) u->add_row_multiple(i, k, c);
    }
    void col_add(int j, int k, const Int& c) {
        m.col_add(j, k, c);
        if (vt) vt->add_row_multiple(j, k, c);
    }
    void row_swap(int i, int k) {
        m.row_swap(i, k);
        if (u) u->swap_rows(i, k);
    }
    void col_swap(int j, int k) {
        m.col_swap(j, k);
        if (vt) vt->swap_rows(j, k);
    }
    void row_negate(int i) {
        m.row_negate(i);
        if (u) u->negate_row(i);
    }
    // rows (i,j) <- A * rows (i,j) for unimodular 2x2 A
    void rows_2x2(int i, int j, const Int& a11, const Int& a12, const Int& a21, const Int& a22) {
        auto ri = m.r[i], rj = m.r[j];
        std::map<int, Int> ni, nj;
        auto acc = [](std::map<int, Int>& dst, const std::map<int, Int>& src, const Int& c) {
            if (c == 0) return;
            for (const auto& [k, v] : src) {
                auto [it, ins] = dst.emplace(k, c * v);
                if (!ins) {
                    it->second += c * v;
                    if (it->second == 0) dst.erase(it);
                }
            }
        };
        acc(ni, ri, a11);
        acc(ni, rj, a12);
        acc(nj, ri, a21);
        acc(nj, rj, a22);
        for (const auto& [k, v] : ri) m.put(i, k, 0);
        for (const auto& [k, v] : rj) m.put(j, k, 0);
        for (const auto& [k, v] : ni) m.put(i, k, v);
        for (const auto& [k, v] : nj) m.put(j, k, v);
        if (u) {
            auto ui = u->dense_row(i), uj = u->dense_row(j);
            std::vector<Int> wi(ui.size()), wj(ui.size());
            for (size_t k = 0; k < ui.size(); ++k) {
                wi[k] = a11 * ui[k] + a12 * uj[k];
                wj[k] = a21 * ui[k] + a22 * uj[k];
            }
            u->clear_row(i);
            u->clear_row(j);
            for (size_t k = 0; k < wi.size(); ++k) {
                if (wi[k] != 0) u->set(i, static_cast<int>(k), wi[k]);
                if (wj[k] != 0) u->set(j, static_cast<int>(k), wj[k]);
            }
        }
    }
    // cols (i,j) <- cols (i,j) * V, tracked on v^T as rows <- V^T-combined
    void cols_2x2(int i, int j, const Int& v11, const Int& v12, const Int& v21, const Int& v22) {
        auto ci = m.c[i], cj = m.c[j];
        std::map<int, Int> ni, nj;
        auto acc = [](std::map<int, Int>& dst, const std::map<int, Int>& src, const Int& c) {
            if (c == 0) return;
            for (const auto& [k, v] : src) {
                auto [it, ins] = dst.emplace(k, c * v);
                if (!ins) {
                    it->second += c * v;
                    if (it->second == 0) dst.erase(it);
                }
            }
        };
        acc(ni, ci, v11);
        acc(ni, cj, v21);
        acc(nj, ci, v12);
        acc(nj, cj, v22);
        for (const auto& [k, v] : ci) m.put(k, i, 0);
        for (const auto& [k, v] : cj) m.put(k, j, 0);
        for (const auto& [k, v] : ni) m.put(k, i, v);
        for (const auto& [k, v] : nj) m.put(k, j, v);
        if (vt) {
            auto ti = vt->dense_row(i), tj = vt->dense_row(j);
            std::vector<Int> wi(ti.size()), wj(ti.size());
            for (size_t k = 0; k < ti.size(); ++k) {
                wi[k] = v11 * ti[k] + v21 * tj[k];
                wj[k] = v12 * ti[k] + v22 * tj[k];
            }
            vt->clear_row(i);
            vt->clear_row(j);
            for (size_t k = 0; k < wi.size(); ++k) {
                if (wi[k] != 0) vt->set(i, static_cast<int>(k), wi[k]);
                if (wj[k] != 0) vt->set(j, static_cast<int>(k), wj[k]);
            }
        }
    }
};

std::vector<Int> snf_core(const IntMatrix& input, IntMatrix* u_out, IntMatrix* vt_out) {
    SnfState s{DualMat(input), u_out, vt_out};
    DualMat& m = s.m;
    const int steps = std::min(m.rows, m.cols);
    int t = 0;
    for (; t < steps; ++t) {
        // pivot: sparsest column in the trailing submatrix, then its entry of
        // smallest magnitude / sparsest row; keeps fill-in down on the large
        // incidence-like matrices
        int pc = -1;
        size_t best_col_size = 0;
        for (int j = t; j < m.cols; ++j) {
            size_t sz = m.c[j].size();
            if (sz == 0) continue;
            if (pc < 0 || sz < best_col_size) {
                pc = j;
                best_col_size = sz;
                if (sz == 1) break;
            }
        }
        if (pc < 0) break;
        int pr = -1;
        Int pv;
        size_t best_row_size = 0;
        for (const auto& [i, v] : m.c[pc]) {
            bool unit = abs_int(v) == 1;
            bool cur_unit = pr >= 0 && abs_int(pv) == 1;
            size_t rs = m.r[i].size();
            bool better;
            if (pr < 0)
                better = true;
            else if (unit != cur_unit)
                better = unit;
            else if (unit)
                better = rs < best_row_size;
            else
                better = abs_int(v) < abs_int(pv) || (abs_int(v) == abs_int(pv) && rs < best_row_size);
            if (better) {
                pr = i;
                pv = v;
                best_row_size = rs;
            }
        }
        s.row_swap(t, pr);
        s.col_swap(t, pc);

        bool dirty = true;
        while (dirty) {
            dirty = false;
            // clear column t below the pivot
            while (true) {
                auto it = m.c[t].upper_bound(t);
                if (it == m.c[t].end()) break;
                int i = it->first;
                Int v = it->second, p = m.get(t, t);
                Int q = v / p;
                s.row_add(i, t, -q);
                if (m.get(i, t) != 0) s.row_swap(t, i);  // smaller remainder becomes pivot
            }
            // clear row t right of the pivot
            while (true) {
                auto it = m.r[t].upper_bound(t);
                if (it == m.r[t].end()) break;
                int j = it->first;
                Int v = it->second, p = m.get(t, t);
                Int q = v / p;
                s.col_add(j, t, -q);
                if (m.get(t, j) != 0) {
                    s.col_swap(t, j);
                    dirty = true;  // the swap may repopulate column t
                }
            }
        }
        if (m.get(t, t) < 0) s.row_negate(t);
    }
    const int npiv = t;

    // enforce d_i | d_j via the textbook 2x2 (a,b) -> (gcd, lcm) transform
    std::vector<Int> diag(npiv);
    for (int k = 0; k < npiv; ++k) diag[k] = m.get(k, k);
    for (int i = 0; i < npiv; ++i) {
        if (diag[i] == 1) continue;  // 1 divides everything
        for (int j = i + 1; j < npiv; ++j) {
            const Int& a = diag[i];
            if (diag[j] % a == 0) continue;
            Int x, y;
            Int g = xgcd(a, diag[j], x, y);
            // U = [[x, y], [-b/g, a/g]], V = [[1, -y*b/g], [1, x*a/g]]
            s.rows_2x2(i, j, x, y, -diag[j] / g, a / g);
            s.cols_2x2(i, j, 1, -(y * diag[j]) / g, 1, (x * a) / g);
            if (m.get(i, i) < 0) s.row_negate(i);
            if (m.get(j, j) < 0) s.row_negate(j);
            diag[i] = m.get(i, i);
            diag[j] = m.get(j, j);
            if (diag[i] == 1) break;
        }
    }
    if (u_out || vt_out) {
        // write back the diagonalized matrix through the caller's u/vt only;
        // diag is returned for the caller to rebuild d
    }
    return diag;
}

}  // namespace

SnfResult snf(const IntMatrix& m) {
    IntMatrix u = IntMatrix::identity(m.rows());
    IntMatrix vt = IntMatrix::identity(m.cols());
    std::vector<Int> diag = snf_core(m, &u, &vt);
    IntMatrix d(m.rows(), m.cols());
    for (size_t i = 0; i < diag.size(); ++i) d.set(static_cast<int>(i), static_cast<int>(i), diag[i]);
    return {std::move(d), std::move(u), vt.transpose()};
}

std::vector<Int> snf_invariants(const IntMatrix& m) { return snf_core(m, nullptr, nullptr); }

IntegerLattice kernel_lattice(const IntMatrix& m) {
    const int n = m.cols();
    auto [h, u] = hnf(m.transpose());
    IntMatrix basis(0, n);
    for (int i = 0; i < h.rows(); ++i)
        if (h.row(i).empty()) basis.push_row(u.dense_row(i));
    IntegerLattice out;
    out.ambient_rank = n;
    out.basis = hnf_basis(basis);
    return out;
}

IntegerLattice saturate(const std::vector<std::vector<Int>>& gens, int ambient_rank) {
    IntMatrix g(0, ambient_rank);
    for (const auto& v : gens) g.push_row(v);
    IntegerLattice comp = kernel_lattice(g);
    return kernel_lattice(comp.basis);
}

std::optional<std::vector<Int>> solve_in_lattice(const IntMatrix& basis, const std::vector<Int>& v) {
    std::vector<Int> rem = v;
    std::vector<Int> coeffs(basis.rows(), 0);
    for (int i = 0; i < basis.rows(); ++i) {
        if (basis.row(i).empty()) continue;
        const auto& [pc, pv] = *basis.row(i).begin();
        if (rem[pc] == 0) continue;
        if (rem[pc] % pv != 0) return std::nullopt;
        Int c = rem[pc] / pv;
        coeffs[i] = c;
        for (const auto& [j, w] : basis.row(i)) rem[j] -= c * w;
    }
    for (const auto& x : rem)
        if (x != 0) return std::nullopt;
    return coeffs;
}

bool lattice_contains(const IntMatrix& basis, const std::vector<Int>& v) {
    return solve_in_lattice(basis, v).has_value();
}

std::vector<HomologyGroup> homology_of_complex(const std::vector<IntMatrix>& boundaries, Coeff coeff) {
    const int top = static_cast<int>(boundaries.size()) - 1;
    if (top < 0) return {};
    for (int q = 1; q <= top; ++q) {
        if (boundaries[q - 1].cols() != boundaries[q].rows())
            throw NotAComplex("boundary dimensions do not chain");
        if (boundaries[q - 1].rows() > 0) {
            IntMatrix prod = boundaries[q - 1] * boundaries[q];
            if (!prod.is_zero()) throw NotAComplex("boundary composition is nonzero");
        }
    }
    std::vector<int> dim(top + 2, 0);
    for (int q = 0; q <= top; ++q) dim[q] = boundaries[q].cols();

    std::vector<int> rk(top + 2, 0);
    std::vector<std::vector<Int>> invariants(top + 2);
    for (int q = 1; q <= top; ++q) {
        if (coeff == Coeff::Z)
            invariants[q] = snf_invariants(boundaries[q]);
        else
            invariants[q].assign(rank(boundaries[q]), 1);
        rk[q] = static_cast<int>(invariants[q].size());
    }
    std::vector<HomologyGroup> out(top + 1);
    for (int q = 0; q <= top; ++q) {
        HomologyGroup g;
        g.free_rank = dim[q] - rk[q] - rk[q + 1];
        if (coeff == Coeff::Z && q + 1 <= top)
            for (const auto& d : invariants[q + 1])
                if (d >= 2) g.torsion.push_back(d);
        if (g.free_rank < 0) throw Error("homology rank underflow: inconsistent complex");
        out[q] = std::move(g);
    }
    return out;
}

std::vector<HomologyGroup> cohomology_of_complex(const std::vector<IntMatrix>& boundaries, Coeff coeff) {
    const int top = static_cast<int>(boundaries.size()) - 1;
    if (top < 0) return {};
    std::vector<IntMatrix> rev(top + 1);
    for (int q = 0; q <= top; ++q) {
        int cq = top - q;  // cochain degree placed at position q of the reversed complex
        if (q == 0)
            rev[0] = IntMatrix(0, boundaries[cq].cols());
        else
            rev[q] = boundaries[cq + 1].transpose();
    }
    auto h = homology_of_complex(rev, coeff);
    std::vector<HomologyGroup> out(top + 1);
    for (int q = 0; q <= top; ++q) out[q] = h[top - q];

    if (coeff == Coeff::Z) {
        auto hom = homology_of_complex(boundaries, Coeff::Z);
        for (int q = 0; q <= top; ++q) {
            if (out[q].free_rank != hom[q].free_rank)
                throw Error("UCT violation: cohomology free rank mismatch");
            std::vector<Int> expected = q >= 1 ? hom[q - 1].torsion : std::vector<Int>{};
            if (out[q].torsion != expected) throw Error("UCT violation: cohomology torsion mismatch");
        }
    }
    return out;
}

}  // namespace tih
