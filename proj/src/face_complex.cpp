#include "tih/face_complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tih/errors.hpp"

namespace tih {

FaceComplex FaceComplex::build(int ambient_dim, const std::vector<HPolyhedron>& cells) {
    FaceComplex c;
    c.r_ = ambient_dim;
    std::map<std::string, HPolyhedron> pool;
    for (const auto& cell : cells) {
        if (cell.ambient_dim() != ambient_dim) throw DimensionMismatch("cell ambient dimension mismatch");
        for (const auto& f : cell.faces()) pool.emplace(f.key(), f);
    }
    std::vector<HPolyhedron> all;
    for (auto& [k, p] : pool) all.push_back(p);
    std::sort(all.begin(), all.end(), [](const HPolyhedron& a, const HPolyhedron& b) {
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        return a.key() < b.key();
    });
    c.cells_ = std::move(all);
    for (int i = 0; i < c.size(); ++i) c.by_key_[c.cells_[i].key()] = i;

    c.faces_.assign(c.size(), {});
    c.cofaces_.assign(c.size(), {});
    for (int i = 0; i < c.size(); ++i) {
        for (const auto& f : c.cells_[i].faces()) {
            auto it = c.by_key_.find(f.key());
            if (it == c.by_key_.end() || it->second == i) continue;
            c.faces_[i].push_back(it->second);
            c.cofaces_[it->second].push_back(i);
        }
        std::sort(c.faces_[i].begin(), c.faces_[i].end());
    }
    for (auto& v : c.cofaces_) std::sort(v.begin(), v.end());
    return c;
}

bool FaceComplex::is_face(int a, int b) const {
    if (a == b) return true;
    const auto& f = faces_.at(b);
    return std::binary_search(f.begin(), f.end(), a);
}

int FaceComplex::max_dim() const {
    int d = -1;
    for (const auto& c : cells_) d = std::max(d, c.dim());
    return d;
}

std::optional<int> FaceComplex::cell_by_key(const std::string& key) const {
    auto it = by_key_.find(key);
    if (it == by_key_.end()) return std::nullopt;
    return it->second;
}

int FaceComplex::carrier_of_point(const ExtendedPoint& x) const {
    for (int i = 0; i < size(); ++i)
        if (cells_[i].relint_contains(x)) return i;
    return -1;
}

namespace {

// All nonempty pieces cl(a) cap cl(b) cap R^r_J, keyed by J.
std::map<std::set<int>, HPolyhedron> intersection_pieces(const HPolyhedron& a, const HPolyhedron& b) {
    std::map<std::set<int>, HPolyhedron> out;
    std::set<int> base = a.sed();
    for (int i : b.sed()) base.insert(i);
    std::vector<int> rest;
    for (int i = 0; i < a.ambient_dim(); ++i)
        if (!base.count(i)) rest.push_back(i);
    const int m = static_cast<int>(rest.size());
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        std::set<int> J = base;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) J.insert(rest[i]);
        auto la = a.sedentarity_limit(J);
        if (!la) continue;
        auto lb = b.sedentarity_limit(J);
        if (!lb) continue;
        std::vector<HalfSpace> ineqs = la->ineqs();
        for (const auto& h : lb->ineqs()) ineqs.push_back(h);
        std::vector<HalfSpace> eqs = la->eqs();
        for (const auto& h : lb->eqs()) eqs.push_back(h);
        try {
            out.emplace(J,
                        HPolyhedron::make(a.ambient_dim(), J, std::move(ineqs), std::move(eqs), a.tropical()));
        } catch (const EmptyPolyhedron&) {
        }
    }
    return out;
}

}  // namespace

ValidationReport validate_complex(const FaceComplex& c) {
    ValidationReport rep;
    auto note = [&](const std::string& s) { rep.violations.push_back(s); };

    // closure under faces
    for (int i = 0; i < c.size(); ++i) {
        for (const auto& f : c.cell(i).faces()) {
            if (!c.cell_by_key(f.key())) {
                std::ostringstream os;
                os << "cell " << i << ": missing face (dim " << f.dim() << ")";
                note(os.str());
            }
        }
    }

    // pairwise intersections are common faces
    for (int i = 0; i < c.size(); ++i) {
        for (int j = i + 1; j < c.size(); ++j) {
            auto pieces = intersection_pieces(c.cell(i), c.cell(j));
            if (pieces.empty()) continue;
            // minimal sedentarity among nonempty pieces must be unique
            std::vector<std::set<int>> minimal;
            for (const auto& [J, piece] : pieces) {
                bool is_min = true;
                for (const auto& [K, other] : pieces) {
                    if (K != J && std::includes(J.begin(), J.end(), K.begin(), K.end())) is_min = false;
                }
                if (is_min) minimal.push_back(J);
            }
            std::ostringstream tag;
            tag << "cells " << i << "," << j << ": ";
            if (minimal.size() != 1) {
                note(tag.str() + "intersection splits across sedentarities");
                continue;
            }
            const HPolyhedron& cand = pieces.at(minimal[0]);
            auto id = c.cell_by_key(cand.key());
            if (!id) {
                note(tag.str() + "intersection is not a cell of the complex");
                continue;
            }
            if (!c.is_face(*id, i) || !c.is_face(*id, j)) {
                note(tag.str() + "intersection is not a common face");
                continue;
            }
            // every sedentarity piece must lie in the candidate's closure
            for (const auto& [J, piece] : pieces) {
                if (!cand.closure_contains(piece)) {
                    note(tag.str() + "intersection exceeds the common face");
                    break;
                }
            }
        }
    }

    // sampled relative interior partition
    for (int i = 0; i < c.size(); ++i) {
        ExtendedPoint x = c.cell(i).interior_point();
        for (int j = 0; j < c.size(); ++j) {
            bool inside = c.cell(j).relint_contains(x);
            if (inside != (i == j)) {
                std::ostringstream os;
                os << "cells " << i << "," << j << ": relative interiors overlap";
                note(os.str());
            }
        }
    }
    return rep;
}

}  // namespace tih
