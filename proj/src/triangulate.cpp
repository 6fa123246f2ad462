#include "tih/triangulate.hpp"

#include <algorithm>

#include "tih/errors.hpp"

namespace tih {

int StratifiedTriangulation::index_of(int q, const std::vector<int>& tuple) const {
    const auto& list = simplices[q];
    auto it = std::lower_bound(list.begin(), list.end(), tuple);
    if (it == list.end() || *it != tuple) return -1;
    return static_cast<int>(it - list.begin());
}

ExtendedPoint StratifiedTriangulation::barycenter(int q, int idx) const {
    const auto& tuple = simplices[q][idx];
    const int r = vertex_coords[tuple[0]].ambient_dim;
    std::vector<Rat> acc(r, Rat(0));
    for (int v : tuple) {
        for (int i = 0; i < r; ++i) {
            if (!vertex_coords[v].coords[i].has_value())
                throw UnsupportedInput("barycenter undefined across sedentarity");
            acc[i] += *vertex_coords[v].coords[i];
        }
    }
    for (auto& x : acc) x /= Rat(static_cast<int>(tuple.size()));
    return ExtendedPoint::finite(acc);
}

namespace {

struct Builder {
    std::vector<ExtendedPoint> coords;
    std::vector<int> vcarrier;
    // per dim: tuple -> carrier (model cell id)
    std::vector<std::map<std::vector<int>, int>> simp;

    int add_vertex(const ExtendedPoint& p, int carrier) {
        coords.push_back(p);
        vcarrier.push_back(carrier);
        return static_cast<int>(coords.size()) - 1;
    }
    void add_simplex(std::vector<int> tuple, int carrier) {
        std::sort(tuple.begin(), tuple.end());
        int q = static_cast<int>(tuple.size()) - 1;
        if (q >= static_cast<int>(simp.size())) simp.resize(q + 1);
        simp[q].emplace(std::move(tuple), carrier);
    }
};

Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

}  // namespace

StratifiedTriangulation stratified_triangulation(const FaceComplex& c, std::optional<Rat> truncation_radius) {
    for (int i = 0; i < c.size(); ++i)
        if (!c.cell(i).sed().empty())
            throw UnboundedCellWithoutConeStructure(
                "triangulation requires sedentarity-free cells (finite part of T^r)");

    const int r = c.ambient_dim();

    // truncate unbounded cells at an axis box
    bool needs_box = false;
    for (int i = 0; i < c.size(); ++i)
        if (!c.cell(i).is_bounded()) needs_box = true;

    FaceComplex model = c;
    std::vector<int> orig_of;  // model cell id -> original cell id
    if (needs_box) {
        Rat radius;
        if (truncation_radius) {
            radius = *truncation_radius;
        } else {
            Rat m(0);
            for (int i = 0; i < c.size(); ++i) {
                ExtendedPoint p = c.cell(i).interior_point();
                for (int j = 0; j < r; ++j) m = std::max(m, abs_rat(*p.coords[j]));
            }
            radius = m + 1;
        }
        std::vector<HalfSpace> box;
        for (int j = 0; j < r; ++j) {
            HalfSpace lo, hi;
            lo.normal.assign(r, 0);
            hi.normal.assign(r, 0);
            lo.normal[j] = -1;
            lo.offset = radius;
            hi.normal[j] = 1;
            hi.offset = radius;
            box.push_back(lo);
            box.push_back(hi);
        }
        std::vector<HPolyhedron> cut;
        for (int i = 0; i < c.size(); ++i) {
            auto t = c.cell(i).intersect(box);
            if (!t) throw UnboundedCellWithoutConeStructure("truncation box misses a cell");
            cut.push_back(*t);
        }
        model = FaceComplex::build(r, cut);
        auto rep = validate_complex(model);
        if (!rep.valid())
            throw UnboundedCellWithoutConeStructure("truncated complex is not a polyhedral complex");
    }
    orig_of.resize(model.size());
    for (int i = 0; i < model.size(); ++i) {
        if (!needs_box) {
            orig_of[i] = i;
            continue;
        }
        int carrier = c.carrier_of_point(model.cell(i).interior_point());
        if (carrier < 0) throw InconsistentStratification("truncated cell escapes the original support");
        orig_of[i] = carrier;
    }

    // inductive triangulation over the model complex
    Builder b;
    std::vector<std::vector<std::vector<int>>> tri(model.size());  // closed triangulation per model cell
    std::vector<bool> trivial(model.size(), false);
    std::vector<int> vertex_of_cell(model.size(), -1);

    std::vector<int> order(model.size());
    for (int i = 0; i < model.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int bb) {
        if (model.cell(a).dim() != model.cell(bb).dim()) return model.cell(a).dim() < model.cell(bb).dim();
        return a < bb;
    });

    for (int id : order) {
        const HPolyhedron& cell = model.cell(id);
        const int d = cell.dim();
        if (d == 0) {
            int v = b.add_vertex(cell.interior_point(), orig_of[id]);
            vertex_of_cell[id] = v;
            tri[id] = {{v}};
            trivial[id] = true;
            b.add_simplex({v}, id);
            continue;
        }
        // gather the triangulated boundary
        std::vector<std::vector<int>> boundary;
        std::set<std::vector<int>> seen;
        int nverts = 0;
        bool faces_trivial = true;
        for (int f : model.faces_of(id)) {
            if (model.cell(f).dim() == 0) ++nverts;
            if (!trivial[f]) faces_trivial = false;
            for (const auto& s : tri[f])
                if (seen.insert(s).second) boundary.push_back(s);
        }
        const size_t nfaces = model.faces_of(id).size();
        bool is_simplex = faces_trivial && nverts == d + 1 && nfaces == (static_cast<size_t>(1) << (d + 1)) - 2;
        tri[id] = boundary;
        if (is_simplex) {
            std::vector<int> top;
            for (int f : model.faces_of(id))
                if (model.cell(f).dim() == 0) top.push_back(vertex_of_cell[f]);
            std::sort(top.begin(), top.end());
            tri[id].push_back(top);
            b.add_simplex(top, id);
            trivial[id] = true;
        } else {
            int v = b.add_vertex(cell.interior_point(), orig_of[id]);
            vertex_of_cell[id] = v;
            tri[id].push_back({v});
            b.add_simplex({v}, id);
            for (const auto& s : boundary) {
                std::vector<int> coned = s;
                coned.push_back(v);
                std::sort(coned.begin(), coned.end());
                tri[id].push_back(coned);
                b.add_simplex(coned, id);
            }
        }
    }

    StratifiedTriangulation t;
    t.complex = &c;
    t.vertex_coords = std::move(b.coords);
    t.vertex_carrier.resize(t.vertex_coords.size());
    for (size_t v = 0; v < t.vertex_carrier.size(); ++v) t.vertex_carrier[v] = b.vcarrier[v];
    t.simplices.resize(b.simp.size());
    t.carriers.resize(b.simp.size());
    for (size_t q = 0; q < b.simp.size(); ++q) {
        for (const auto& [tuple, mcell] : b.simp[q]) {
            t.simplices[q].push_back(tuple);
            t.carriers[q].push_back(orig_of[mcell]);
        }
    }

    // carrier invariant: barycenters sit in their carrier's relative interior
    for (int q = 0; q <= t.dim(); ++q)
        for (int i = 0; i < t.count(q); ++i) {
            ExtendedPoint x = t.barycenter(q, i);
            if (!c.cell(t.carriers[q][i]).relint_contains(x))
                throw InconsistentStratification("simplex barycenter escapes its carrier");
        }
    return t;
}

StratifiedTriangulation barycentric_subdivide(const StratifiedTriangulation& t) {
    StratifiedTriangulation out;
    out.complex = t.complex;
    out.deleted_cells = t.deleted_cells;
    out.subdivision_level = t.subdivision_level + 1;

    // one vertex per old simplex; reuse coordinates for old vertices
    std::vector<std::vector<int>> new_vertex(t.dim() + 1);
    for (int q = 0; q <= t.dim(); ++q) new_vertex[q].assign(t.count(q), -1);
    for (int q = 0; q <= t.dim(); ++q) {
        for (int i = 0; i < t.count(q); ++i) {
            ExtendedPoint p = q == 0 ? t.vertex_coords[t.simplices[0][i][0]] : t.barycenter(q, i);
            out.vertex_coords.push_back(p);
            out.vertex_carrier.push_back(t.carriers[q][i]);
            new_vertex[q][i] = static_cast<int>(out.vertex_coords.size()) - 1;
        }
    }

    // flags of nested simplices become the new simplices
    out.simplices.resize(t.dim() + 1);
    out.carriers.resize(t.dim() + 1);
    std::map<std::vector<int>, int> emitted;  // tuple -> carrier, per dim collected later
    std::vector<std::map<std::vector<int>, int>> coll(t.dim() + 1);

    // chains(q, i): all flags ending at simplex (q, i), as vertex-id tuples
    // enumerate by recursion over proper faces
    std::vector<std::vector<std::vector<std::vector<int>>>> chains(t.dim() + 1);
    for (int q = 0; q <= t.dim(); ++q) chains[q].resize(t.count(q));
    for (int q = 0; q <= t.dim(); ++q) {
        for (int i = 0; i < t.count(q); ++i) {
            const auto& tuple = t.simplices[q][i];
            std::vector<std::vector<int>> mine;
            mine.push_back({new_vertex[q][i]});
            // proper faces: all nonempty proper subsets
            const int n = static_cast<int>(tuple.size());
            for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
                std::vector<int> sub;
                for (int k = 0; k < n; ++k)
                    if (mask & (1u << k)) sub.push_back(tuple[k]);
                int fq = static_cast<int>(sub.size()) - 1;
                int fi = t.index_of(fq, sub);
                for (const auto& ch : chains[fq][fi]) {
                    std::vector<int> ext = ch;
                    ext.push_back(new_vertex[q][i]);
                    mine.push_back(std::move(ext));
                }
            }
            for (const auto& ch : mine) {
                std::vector<int> sorted = ch;
                std::sort(sorted.begin(), sorted.end());
                coll[static_cast<int>(ch.size()) - 1].emplace(std::move(sorted), t.carriers[q][i]);
            }
            chains[q][i] = std::move(mine);
        }
    }
    for (int q = 0; q <= t.dim(); ++q) {
        for (const auto& [tuple, carrier] : coll[q]) {
            out.simplices[q].push_back(tuple);
            out.carriers[q].push_back(carrier);
        }
    }
    return out;
}

StratifiedTriangulation delete_closed(const StratifiedTriangulation& t, const std::set<int>& closed_cells) {
    const FaceComplex& c = *t.complex;
    for (int id : closed_cells) {
        if (id < 0 || id >= c.size()) throw CellNotFound("delete_closed: no such cell");
        for (int f : c.faces_of(id))
            if (!closed_cells.count(f)) throw NotClosed("deleted set is not closed under faces");
    }
    if (!closed_cells.empty() && t.subdivision_level < 1)
        throw NotClosed("delete_closed requires at least one barycentric subdivision");
    StratifiedTriangulation out = t;
    for (int id : closed_cells) out.deleted_cells.insert(id);
    return out;
}

}  // namespace tih
