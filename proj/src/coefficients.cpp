#include "tih/coefficients.hpp"

#include <algorithm>

#include "tih/errors.hpp"

namespace tih {

std::vector<std::vector<int>> lex_subsets(int m, int p) {
    std::vector<std::vector<int>> out;
    if (p < 0 || p > m) return out;
    std::vector<int> cur(p);
    for (int i = 0; i < p; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int i = p - 1;
        while (i >= 0 && cur[i] == m - p + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < p; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

namespace {

// determinant of the p x p minor of `rows` (selected basis rows) on columns S
Int minor_det(const std::vector<std::vector<Int>>& rows, const std::vector<int>& cols) {
    const int p = static_cast<int>(cols.size());
    if (p == 0) return 1;
    IntMatrix m(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m.set(i, j, rows[i][cols[j]]);
    return det(m);
}

// wedge of p chosen lattice basis rows, in lex-subset coordinates
std::vector<Int> wedge_vector(const std::vector<std::vector<Int>>& rows,
                              const std::vector<std::vector<int>>& subsets) {
    std::vector<Int> out;
    out.reserve(subsets.size());
    for (const auto& s : subsets) out.push_back(minor_det(rows, s));
    return out;
}

}  // namespace

MultiTangent multitangent(const FaceComplex& c, int cell, int p) {
    if (cell < 0 || cell >= c.size()) throw CellNotFound("multitangent: no such cell");
    if (p < 0) throw ValidationError("multitangent: negative degree");
    const HPolyhedron& sigma = c.cell(cell);
    const int m = static_cast<int>(sigma.free_coords().size());

    MultiTangent mt;
    mt.cell = cell;
    mt.degree = p;
    mt.subsets = lex_subsets(m, p);
    const int wd = mt.wedge_dim();

    std::vector<std::vector<Int>> gens;
    std::vector<int> cofaces{cell};
    for (int cf : c.cofaces_of(cell)) cofaces.push_back(cf);
    for (int cf : cofaces) {
        const HPolyhedron& tau = c.cell(cf);
        if (tau.sed() != sigma.sed()) continue;
        auto lat = tau.tangent_lattice();
        if (lat.rank() < p) continue;
        std::vector<std::vector<Int>> basis_rows;
        for (int i = 0; i < lat.rank(); ++i) basis_rows.push_back(lat.basis.dense_row(i));
        for (const auto& pick : lex_subsets(lat.rank(), p)) {
            std::vector<std::vector<Int>> chosen;
            for (int i : pick) chosen.push_back(basis_rows[i]);
            gens.push_back(wedge_vector(chosen, mt.subsets));
        }
    }
    mt.lattice = saturate(gens, wd);
    return mt;
}

IntMatrix restriction(const FaceComplex& c, int sigma, int tau, int p) {
    if (sigma < 0 || sigma >= c.size() || tau < 0 || tau >= c.size())
        throw CellNotFound("restriction: no such cell");
    if (!c.is_face(tau, sigma)) throw NotAFace("restriction: tau is not a face of sigma");
    MultiTangent ms = multitangent(c, sigma, p);
    MultiTangent mt = multitangent(c, tau, p);
    IntMatrix out(mt.rank(), ms.rank());

    const auto& sed_t = c.cell(tau).sed();
    const auto& free_s = c.cell(sigma).free_coords();
    const auto& free_t = c.cell(tau).free_coords();

    // position of each tau-free coordinate within sigma's free coordinates
    std::map<int, int> s_pos, t_pos;
    for (size_t i = 0; i < free_s.size(); ++i) s_pos[free_s[i]] = static_cast<int>(i);
    for (size_t i = 0; i < free_t.size(); ++i) t_pos[free_t[i]] = static_cast<int>(i);

    std::map<std::vector<int>, int> t_subset_index;
    for (size_t i = 0; i < mt.subsets.size(); ++i) t_subset_index[mt.subsets[i]] = static_cast<int>(i);

    for (int j = 0; j < ms.rank(); ++j) {
        std::vector<Int> v = ms.lattice.basis.dense_row(j);
        // coordinate projection on wedge coordinates: subsets using a killed
        // coordinate vanish, others re-index
        std::vector<Int> w(mt.wedge_dim(), 0);
        for (size_t si = 0; si < ms.subsets.size(); ++si) {
            if (v[si] == 0) continue;
            std::vector<int> mapped;
            bool killed = false;
            for (int pos : ms.subsets[si]) {
                int coord = free_s[pos];
                if (sed_t.count(coord)) {
                    killed = true;
                    break;
                }
                mapped.push_back(t_pos.at(coord));
            }
            if (killed) continue;
            std::sort(mapped.begin(), mapped.end());
            w[t_subset_index.at(mapped)] += v[si];
        }
        auto coords = solve_in_lattice(mt.lattice.basis, w);
        if (!coords)
            throw ImageNotContained("restriction image not contained in target multitangent");
        for (int i = 0; i < mt.rank(); ++i) out.set(i, j, (*coords)[i]);
    }
    return out;
}

const MultiTangent& MultiTangentCache::get(int cell, int p) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(cell, p);
    auto it = tangents_.find(key);
    if (it == tangents_.end()) it = tangents_.emplace(key, multitangent(*c_, cell, p)).first;
    return it->second;
}

const IntMatrix& MultiTangentCache::restrict_map(int sigma, int tau, int p) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(sigma, tau, p);
    auto it = restrictions_.find(key);
    if (it == restrictions_.end()) it = restrictions_.emplace(key, restriction(*c_, sigma, tau, p)).first;
    return it->second;
}

}  // namespace tih
