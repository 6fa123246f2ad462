#include "tih/instance.hpp"

#include <algorithm>

#include "tih/errors.hpp"

namespace tih {

namespace {

Rat rat_from_json(const Json& j) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
    throw ValidationError("expected a rational as \"num/den\" string or integer");
}

Json rat_to_json(const Rat& r) {
    if (denominator(r) == 1 && numerator(r) >= std::numeric_limits<int>::min() &&
        numerator(r) <= std::numeric_limits<int>::max())
        return Json(static_cast<long long>(numerator(r)));
    return Json(rat_to_string(r));
}

Json halfspace_to_json(const HalfSpace& h) {
    Json row = Json::array();
    for (const auto& n : h.normal) row.push_back(static_cast<long long>(n));
    row.push_back(rat_to_json(h.offset));
    return row;
}

HalfSpace halfspace_from_json(const Json& j, int r) {
    if (!j.is_array() || static_cast<int>(j.size()) != r + 1)
        throw ValidationError("halfspace row must be [normal..., offset]");
    HalfSpace h;
    for (int i = 0; i < r; ++i) {
        if (!j[i].is_number_integer()) throw ValidationError("normals must be integers");
        h.normal.emplace_back(j[i].get<long long>());
    }
    h.offset = rat_from_json(j[r]);
    return h;
}

}  // namespace

Json cell_to_json(const HPolyhedron& p) {
    Json j;
    j["ambient_dim"] = p.ambient_dim();
    j["sedentarity"] = Json::array();
    for (int i : p.sed()) j["sedentarity"].push_back(i);
    j["ineqs"] = Json::array();
    for (const auto& h : p.ineqs()) j["ineqs"].push_back(halfspace_to_json(h));
    j["eqs"] = Json::array();
    for (const auto& h : p.eqs()) j["eqs"].push_back(halfspace_to_json(h));
    return j;
}

HPolyhedron cell_from_json(const Json& j, bool tropical) {
    if (!j.contains("ambient_dim")) throw ValidationError("cell missing ambient_dim");
    int r = j.at("ambient_dim").get<int>();
    std::set<int> sed;
    if (j.contains("sedentarity"))
        for (const auto& s : j.at("sedentarity")) sed.insert(s.get<int>());
    std::vector<HalfSpace> ineqs, eqs;
    if (j.contains("ineqs"))
        for (const auto& row : j.at("ineqs")) ineqs.push_back(halfspace_from_json(row, r));
    if (j.contains("eqs"))
        for (const auto& row : j.at("eqs")) eqs.push_back(halfspace_from_json(row, r));
    return HPolyhedron::make(r, std::move(sed), std::move(ineqs), std::move(eqs), tropical);
}

InstanceFile instance_from_json(const Json& j) {
    InstanceFile f;
    f.ambient_dim = j.at("ambient_dim").get<int>();
    f.tropical = j.value("ambient", std::string("T")) == "T";
    for (const auto& c : j.at("cells")) f.cells.push_back(cell_from_json(c, f.tropical));

    const Json& filt = j.contains("filtration") ? j.at("filtration") : Json("trop");
    if (filt.is_string()) {
        std::string s = filt.get<std::string>();
        if (s == "face")
            f.fkind = InstanceFile::FiltKind::FACE;
        else if (s == "trop")
            f.fkind = InstanceFile::FiltKind::TROP;
        else
            throw ValidationError("unknown filtration preset: " + s);
    } else if (filt.contains("levels")) {
        f.fkind = InstanceFile::FiltKind::EXPLICIT;
        for (const auto& lvl : filt.at("levels")) f.levels.push_back(lvl.get<std::vector<int>>());
    } else if (filt.contains("pair")) {
        f.fkind = InstanceFile::FiltKind::PAIR;
        for (const auto& id : filt.at("pair")) f.u_cells.insert(id.get<int>());
    } else {
        throw ValidationError("filtration must be a preset, {levels:...} or {pair:...}");
    }

    const Json& perv = j.contains("perversity") ? j.at("perversity") : Json("zero");
    if (perv.is_string()) {
        std::string s = perv.get<std::string>();
        if (s == "zero") {
            f.pkind = InstanceFile::PervKind::ZERO;
        } else if (s.rfind("constant:", 0) == 0) {
            f.pkind = InstanceFile::PervKind::CONSTANT;
            f.pshift = std::stoi(s.substr(9));
        } else if (s == "codim") {
            f.pkind = InstanceFile::PervKind::CODIM;
        } else if (s.rfind("codim:", 0) == 0) {
            f.pkind = InstanceFile::PervKind::CODIM_SHIFT;
            f.pshift = std::stoi(s.substr(6));
        } else {
            throw ValidationError("unknown perversity preset: " + s);
        }
    } else if (perv.contains("values")) {
        f.pkind = InstanceFile::PervKind::EXPLICIT;
        for (const auto& [k, v] : perv.at("values").items()) f.pvalues[std::stoi(k)] = v.get<int>();
    } else {
        throw ValidationError("perversity must be a preset or {values:...}");
    }

    if (j.contains("flags")) {
        const Json& fl = j.at("flags");
        f.conical = fl.value("conical", false);
        f.condition_c = fl.value("condition_C_asserted", false);
        if (fl.contains("truncation_radius")) f.truncation_radius = rat_from_json(fl.at("truncation_radius"));
    }
    f.name = j.value("name", std::string());
    f.suite = j.value("suite", std::string());
    f.provenance = j.value("provenance", std::string());
    f.expect_gm_mismatch = j.value("expect_gm_mismatch", false);
    if (j.contains("expected")) f.expected = j.at("expected");
    return f;
}

Json instance_to_json(const InstanceFile& f) {
    Json j;
    if (!f.name.empty()) j["name"] = f.name;
    if (!f.suite.empty()) j["suite"] = f.suite;
    if (!f.provenance.empty()) j["provenance"] = f.provenance;
    j["ambient_dim"] = f.ambient_dim;
    j["ambient"] = f.tropical ? "T" : "R";
    j["cells"] = Json::array();
    for (const auto& c : f.cells) j["cells"].push_back(cell_to_json(c));
    switch (f.fkind) {
        case InstanceFile::FiltKind::FACE: j["filtration"] = "face"; break;
        case InstanceFile::FiltKind::TROP: j["filtration"] = "trop"; break;
        case InstanceFile::FiltKind::EXPLICIT: j["filtration"] = Json{{"levels", f.levels}}; break;
        case InstanceFile::FiltKind::PAIR: {
            Json u = Json::array();
            for (int id : f.u_cells) u.push_back(id);
            j["filtration"] = Json{{"pair", u}};
            break;
        }
    }
    switch (f.pkind) {
        case InstanceFile::PervKind::ZERO: j["perversity"] = "zero"; break;
        case InstanceFile::PervKind::CONSTANT: j["perversity"] = "constant:" + std::to_string(f.pshift); break;
        case InstanceFile::PervKind::CODIM: j["perversity"] = "codim"; break;
        case InstanceFile::PervKind::CODIM_SHIFT: j["perversity"] = "codim:" + std::to_string(f.pshift); break;
        case InstanceFile::PervKind::EXPLICIT: {
            Json values;
            for (const auto& [k, v] : f.pvalues) values[std::to_string(k)] = v;
            j["perversity"] = Json{{"values", values}};
            break;
        }
    }
    Json flags;
    if (f.conical) flags["conical"] = true;
    if (f.condition_c) flags["condition_C_asserted"] = true;
    if (f.truncation_radius) flags["truncation_radius"] = rat_to_json(*f.truncation_radius);
    if (!flags.is_null()) j["flags"] = flags;
    if (f.expect_gm_mismatch) j["expect_gm_mismatch"] = true;
    if (!f.expected.is_null()) j["expected"] = f.expected;
    return j;
}

LoadedInstance load_instance(const InstanceFile& f, int base_level, int max_level) {
    LoadedInstance out{f, FaceComplex::build(f.ambient_dim, f.cells), {}, {}, {}};
    auto rep = validate_complex(out.complex);
    if (!rep.valid()) {
        std::string msg = "invalid complex:";
        for (const auto& v : rep.violations) msg += "\n  " + v;
        throw ValidationError(msg);
    }
    switch (f.fkind) {
        case InstanceFile::FiltKind::FACE: out.filtration = face_filtration(out.complex); break;
        case InstanceFile::FiltKind::TROP: out.filtration = trop_filtration(out.complex); break;
        case InstanceFile::FiltKind::PAIR: out.filtration = pair_filtration(out.complex, f.u_cells); break;
        case InstanceFile::FiltKind::EXPLICIT: {
            out.filtration.formal_dim = static_cast<int>(f.levels.size()) - 1;
            out.filtration.levels = f.levels;
            for (auto& lvl : out.filtration.levels) std::sort(lvl.begin(), lvl.end());
            check_filtration(out.complex, out.filtration);
            break;
        }
    }
    auto s = strata(out.complex, out.filtration);
    switch (f.pkind) {
        case InstanceFile::PervKind::ZERO: break;
        case InstanceFile::PervKind::CONSTANT:
            for (const auto& st : s)
                if (!st.regular) out.perversity.values[st.id] = f.pshift;
            break;
        case InstanceFile::PervKind::CODIM:
            for (const auto& st : s)
                if (!st.regular) out.perversity.values[st.id] = st.codim(out.filtration.formal_dim);
            break;
        case InstanceFile::PervKind::CODIM_SHIFT:
            for (const auto& st : s)
                if (!st.regular) out.perversity.values[st.id] = st.codim(out.filtration.formal_dim) + f.pshift;
            break;
        case InstanceFile::PervKind::EXPLICIT:
            for (const auto& [sid, v] : f.pvalues) {
                if (sid < 0 || sid >= static_cast<int>(s.size()))
                    throw ValidationError("perversity refers to unknown stratum");
                if (s[sid].regular && v != 0)
                    throw ValidationError("perversity must vanish on regular strata");
                out.perversity.values[sid] = v;
            }
            break;
    }
    out.options.base_level = base_level;
    out.options.max_level = max_level;
    out.options.conical = f.conical;
    out.options.condition_c = f.condition_c;
    out.options.truncation_radius = f.truncation_radius;
    return out;
}

Json result_to_json(const HomologyResult& r) {
    Json j;
    j["variant"] = variant_tag(r.variant);
    j["coeff"] = coeff_tag(r.coeff);
    j["flavor"] = flavor_tag(r.flavor);
    Json groups;
    for (const auto& [pq, g] : r.groups) {
        Json entry;
        entry["rank"] = g.free_rank;
        entry["torsion"] = Json::array();
        for (const auto& d : g.torsion) entry["torsion"].push_back(d.str());
        groups[std::to_string(pq.first) + "," + std::to_string(pq.second)] = entry;
    }
    j["groups"] = groups.is_null() ? Json::object() : groups;
    return j;
}

bool result_matches(const HomologyResult& r, const Json& expected_groups) {
    std::map<std::pair<int, int>, HomologyGroup> exp;
    for (const auto& [key, entry] : expected_groups.items()) {
        auto comma = key.find(',');
        int p = std::stoi(key.substr(0, comma));
        int q = std::stoi(key.substr(comma + 1));
        HomologyGroup g;
        g.free_rank = entry.at("rank").get<long>();
        if (entry.contains("torsion"))
            for (const auto& d : entry.at("torsion")) g.torsion.emplace_back(d.get<std::string>());
        if (!g.is_zero()) exp[{p, q}] = g;
    }
    return exp == r.groups;
}

Json filtration_to_json(const Filtration& f, const Perversity& p) {
    Json j;
    j["levels"] = f.levels;
    Json perv;
    for (const auto& [sid, v] : p.values) perv[std::to_string(sid)] = v;
    j["perversity"] = perv.is_null() ? Json::object() : perv;
    return j;
}

Json triangulation_to_json(const StratifiedTriangulation& t) {
    Json j;
    Json verts = Json::array();
    for (const auto& v : t.vertex_coords) {
        Json coords = Json::array();
        for (const auto& c : v.coords) coords.push_back(c ? Json(rat_to_string(*c)) : Json(nullptr));
        verts.push_back(coords);
    }
    j["vertices"] = verts;
    j["vertex_carrier"] = t.vertex_carrier;
    Json simps = Json::array();
    for (int q = 0; q <= t.dim(); ++q) {
        Json level = Json::array();
        for (int i = 0; i < t.count(q); ++i)
            level.push_back(Json{{"vertices", t.simplices[q][i]}, {"carrier", t.carriers[q][i]}});
        simps.push_back(level);
    }
    j["simplices"] = simps;
    j["subdivision_level"] = t.subdivision_level;
    if (!t.deleted_cells.empty()) {
        Json d = Json::array();
        for (int id : t.deleted_cells) d.push_back(id);
        j["deleted"] = d;
    }
    return j;
}

std::string flavor_tag(Flavor f) {
    switch (f) {
        case Flavor::PLAIN: return "plain";
        case Flavor::IH: return "ih";
        case Flavor::IH_BM: return "bm";
        case Flavor::IH_REL: return "rel";
        case Flavor::COHOM: return "cohom";
        case Flavor::COHOM_C: return "cohom-c";
    }
    return "?";
}
std::string variant_tag(Variant v) { return v == Variant::GM ? "gm" : "nongm"; }
std::string coeff_tag(Coeff c) { return c == Coeff::Z ? "z" : "q"; }

}  // namespace tih
