#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "tih/errors.hpp"
#include "tih/instance.hpp"
#include "tih/oracles.hpp"

using namespace tih;
namespace fs = std::filesystem;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitStabilization = 3;
constexpr int kExitUnsupported = 4;
constexpr int kExitMismatch = 5;

int env_int(const char* name, int fallback, int minimum) {
    const char* v = std::getenv(name);
    if (!v) return fallback;
    try {
        return std::max(minimum, std::stoi(v));
    } catch (...) {
        return fallback;
    }
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    return j;
}

std::pair<int, int> parse_range(const std::string& s, int lo_default, int hi_default) {
    if (s.empty()) return {lo_default, hi_default};
    auto colon = s.find(':');
    if (colon == std::string::npos) {
        int v = std::stoi(s);
        return {v, v};
    }
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

LoadedInstance load_path(const std::string& path) {
    int base = env_int("TIH_SUBDIV_LEVEL", 2, 2);
    int cap = env_int("TIH_MAX_SUBDIV", 4, base + 1);
    return load_instance(instance_from_json(read_json(path)), base, cap);
}

int cmd_homology(const std::string& path, const std::string& prange, const std::string& qrange,
                 const std::string& variant, const std::string& coeff, const std::string& flavor,
                 const std::vector<int>& rel) {
    LoadedInstance inst = load_path(path);
    Engine e(inst.complex, inst.filtration, inst.perversity, inst.options);
    auto [plo, phi] = parse_range(prange, 0, e.default_p_hi());
    auto [qlo, qhi] = parse_range(qrange, 0, inst.filtration.formal_dim);
    Variant v = variant == "gm" ? Variant::GM : Variant::NONGM;
    Coeff k = coeff == "z" ? Coeff::Z : Coeff::Q;

    HomologyResult res;
    if (!rel.empty()) {
        std::set<int> z(rel.begin(), rel.end());
        res = e.relative_homology(v, k, plo, phi, z);
    } else if (flavor == "bm") {
        res = e.bm_homology(v, k, plo, phi);
    } else if (flavor == "cohom") {
        res = e.cohomology(v, k, plo, phi, false);
    } else if (flavor == "cohom-c") {
        res = e.cohomology(v, k, plo, phi, true);
    } else if (flavor == "plain") {
        res = e.tropical_homology(k, plo, phi);
    } else {
        res = e.homology(v, k, plo, phi);
    }
    // clip to the q range
    for (auto it = res.groups.begin(); it != res.groups.end();)
        it = (it->first.second < qlo || it->first.second > qhi) ? res.groups.erase(it) : ++it;
    std::cout << result_to_json(res).dump(2) << "\n";
    return 0;
}

int cmd_info(const std::string& path) {
    LoadedInstance inst = load_path(path);
    const FaceComplex& c = inst.complex;
    Json j;
    j["ambient_dim"] = c.ambient_dim();
    j["formal_dim"] = inst.filtration.formal_dim;
    Json cells = Json::array();
    MultiTangentCache mt(c);
    for (int i = 0; i < c.size(); ++i) {
        Json e;
        e["id"] = i;
        e["dim"] = c.cell(i).dim();
        Json sed = Json::array();
        for (int s : c.cell(i).sed()) sed.push_back(s);
        e["sedentarity"] = sed;
        Json ranks = Json::array();
        for (int p = 0; p <= c.ambient_dim(); ++p) ranks.push_back(mt.get(i, p).rank());
        e["multitangent_ranks"] = ranks;
        cells.push_back(e);
    }
    j["cells"] = cells;
    auto s = strata(c, inst.filtration);
    Json strata_json = Json::array();
    for (const auto& st : s) {
        Json e;
        e["id"] = st.id;
        e["formal_dim"] = st.formal_dim;
        e["codim"] = st.codim(inst.filtration.formal_dim);
        e["regular"] = st.regular;
        e["cells"] = st.cells;
        e["perversity"] = inst.perversity(st.id);
        strata_json.push_back(e);
    }
    j["strata"] = strata_json;
    j["filtration"] = filtration_to_json(inst.filtration, inst.perversity);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_validate(const std::string& path) {
    Json j = read_json(path);
    InstanceFile f = instance_from_json(j);
    FaceComplex c = FaceComplex::build(f.ambient_dim, f.cells);
    auto rep = validate_complex(c);
    Json out;
    out["cells"] = c.size();
    out["valid"] = rep.valid();
    out["violations"] = rep.violations;
    std::cout << out.dump(2) << "\n";
    return rep.valid() ? 0 : kExitValidation;
}

struct SuiteReport {
    int checked = 0;
    std::vector<std::string> diffs;
    void require(bool ok, const std::string& what) {
        ++checked;
        if (!ok) diffs.push_back(what);
    }
};

void diff_groups(SuiteReport& rep, const std::string& tag, const HomologyResult& expected,
                 const HomologyResult& got) {
    if (expected.groups == got.groups) {
        rep.require(true, tag);
        return;
    }
    std::set<std::pair<int, int>> keys;
    for (const auto& [pq, g] : expected.groups) keys.insert(pq);
    for (const auto& [pq, g] : got.groups) keys.insert(pq);
    for (const auto& pq : keys) {
        auto e = expected.at(pq.first, pq.second);
        auto g = got.at(pq.first, pq.second);
        if (e == g) continue;
        std::ostringstream os;
        os << tag << " (" << pq.first << "," << pq.second << "): expected rank " << e.free_rank
           << ", got rank " << g.free_rank;
        rep.require(false, os.str());
    }
}

void run_instance_oracles(const std::string& name, const LoadedInstance& inst, SuiteReport& rep) {
    Engine e(inst.complex, inst.filtration, inst.perversity, inst.options);
    const std::string& suite = inst.file.suite;
    const int p_hi = 2;
    if (suite == "cone") {
        for (ConeFlavor flavor :
             {ConeFlavor::GM, ConeFlavor::NONGM, ConeFlavor::NONGM_BM, ConeFlavor::NONGM_COHOM}) {
            for (Coeff k : {Coeff::Q, Coeff::Z}) {
                auto pred = cone_formula(e, 0, p_hi, flavor, k);
                HomologyResult got;
                switch (flavor) {
                    case ConeFlavor::GM: got = e.homology(Variant::GM, k, 0, p_hi); break;
                    case ConeFlavor::NONGM: got = e.homology(Variant::NONGM, k, 0, p_hi); break;
                    case ConeFlavor::NONGM_BM: got = e.bm_homology(Variant::NONGM, k, 0, p_hi); break;
                    case ConeFlavor::NONGM_COHOM: got = e.cohomology(Variant::NONGM, k, 0, p_hi); break;
                }
                std::string tag = name + " cone " + variant_tag(pred.groups.variant) + "-" +
                                  flavor_tag(pred.groups.flavor) + "-" + coeff_tag(k);
                diff_groups(rep, tag, pred.groups, got);
            }
        }
    } else if (suite == "onedim") {
        for (Coeff k : {Coeff::Q, Coeff::Z}) {
            auto predn = onedim_nongm(e, 0, p_hi, k);
            diff_groups(rep, name + " onedim nongm " + coeff_tag(k), predn,
                        e.homology(Variant::NONGM, k, 0, p_hi));
            auto predg = onedim_gm(e, 0, p_hi, k);
            diff_groups(rep, name + " onedim gm " + coeff_tag(k), predg, e.homology(Variant::GM, k, 0, p_hi));
        }
    } else if (suite == "tms") {
        int m = inst.file.pkind == InstanceFile::PervKind::CONSTANT ? inst.file.pshift : 0;
        for (Coeff k : {Coeff::Q, Coeff::Z}) {
            auto pred = tms_oracle(e, inst.file.u_cells, m, 0, p_hi, k);
            diff_groups(rep, name + " tms " + coeff_tag(k), pred, e.homology(Variant::NONGM, k, 0, p_hi));
        }
        auto dual = duality_check(e, Variant::NONGM, Coeff::Q);
        rep.require(dual.all_equal, name + " tms duality");
    } else if (suite == "duality") {
        auto dual = duality_check(e, Variant::NONGM, Coeff::Q);
        rep.require(dual.all_equal, name + " duality nongm");
        if (inst.file.expect_gm_mismatch) {
            auto gm = duality_check(e, Variant::GM, Coeff::Q);
            rep.require(!gm.all_equal, name + " duality gm expected mismatch");
        }
    } else if (!suite.empty()) {
        rep.require(false, name + ": unknown suite '" + suite + "'");
        return;
    } else if (inst.file.expected.is_null()) {
        rep.require(false, name + ": instance has no suite and no frozen expectations");
        return;
    }
    // frozen expectations bundled with the instance
    if (!inst.file.expected.is_null()) {
        for (const auto& [tag, groups] : inst.file.expected.items()) {
            // tag: <variant>-<flavor>-<coeff>
            auto d1 = tag.find('-');
            auto d2 = tag.rfind('-');
            Variant v = tag.substr(0, d1) == "gm" ? Variant::GM : Variant::NONGM;
            std::string fl = tag.substr(d1 + 1, d2 - d1 - 1);
            Coeff k = tag.substr(d2 + 1) == "z" ? Coeff::Z : Coeff::Q;
            HomologyResult got;
            if (fl == "ih")
                got = e.homology(v, k, 0, p_hi);
            else if (fl == "bm")
                got = e.bm_homology(v, k, 0, p_hi);
            else if (fl == "cohom")
                got = e.cohomology(v, k, 0, p_hi);
            else if (fl == "plain")
                got = e.tropical_homology(k, 0, p_hi);
            else {
                rep.require(false, name + ": unknown expected tag " + tag);
                continue;
            }
            rep.require(result_matches(got, groups), name + " frozen " + tag);
        }
    }
}

int cmd_oracle(const std::string& path, const std::string& suite, const std::string& corpus) {
    SuiteReport rep;
    if (!path.empty()) {
        LoadedInstance inst = load_path(path);
        run_instance_oracles(inst.file.name.empty() ? path : inst.file.name, inst, rep);
    } else {
        if (suite != "cone" && suite != "onedim" && suite != "tms" && suite != "duality" && suite != "all") {
            std::cerr << "unknown suite: " << suite << "\n";
            return kExitValidation;
        }
        std::vector<fs::path> files;
        if (!fs::is_directory(corpus)) {
            std::cerr << "corpus directory not found: " << corpus << "\n";
            return kExitValidation;
        }
        for (const auto& entry : fs::directory_iterator(corpus))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            LoadedInstance inst = load_path(file.string());
            if (suite != "all" && inst.file.suite != suite) continue;
            run_instance_oracles(inst.file.name.empty() ? file.filename().string() : inst.file.name, inst,
                                 rep);
        }
    }
    for (const auto& d : rep.diffs) std::cout << "MISMATCH " << d << "\n";
    std::cout << (rep.diffs.empty() ? "pass" : "FAIL") << ": " << rep.checked - rep.diffs.size() << "/"
              << rep.checked << " oracle checks\n";
    return rep.diffs.empty() ? 0 : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tropical intersection homology engine"};
    app.require_subcommand(1);

    std::string path, prange, qrange, corpus = "data/instances/v1";
    std::string variant = "nongm", coeff = "q", flavor = "ih", suite;
    std::vector<int> rel;

    auto* hom = app.add_subcommand("homology", "compute (co)homology tables for an instance");
    hom->add_option("instance", path)->required();
    hom->add_option("--p", prange, "p range lo:hi (default 0:ambient)");
    hom->add_option("--q", qrange, "q range lo:hi (default 0:formal dim)");
    hom->add_option("--variant", variant)->check(CLI::IsMember({"gm", "nongm"}));
    hom->add_option("--coeff", coeff)->check(CLI::IsMember({"z", "q"}));
    hom->add_option("--flavor", flavor)->check(CLI::IsMember({"ih", "bm", "cohom", "cohom-c", "plain"}));
    hom->add_option("--rel", rel, "closed cell ids; compute relative to their open complement");

    auto* orc = app.add_subcommand("oracle", "run engine-vs-oracle comparisons");
    orc->add_option("instance", path);
    orc->add_option("--suite", suite)->check(CLI::IsMember({"cone", "onedim", "tms", "duality", "all"}));
    orc->add_option("--corpus", corpus, "corpus directory (default data/instances/v1)");

    auto* info = app.add_subcommand("info", "structural report for an instance");
    info->add_option("instance", path)->required();

    auto* val = app.add_subcommand("validate", "validate the polyhedral complex of an instance");
    val->add_option("instance", path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (hom->parsed()) return cmd_homology(path, prange, qrange, variant, coeff, flavor, rel);
        if (orc->parsed()) {
            if (path.empty() && suite.empty()) {
                std::cerr << "oracle needs an instance path or --suite\n";
                return kExitValidation;
            }
            return cmd_oracle(path, suite, corpus);
        }
        if (info->parsed()) return cmd_info(path);
        if (val->parsed()) return cmd_validate(path);
    } catch (const StabilizationFailure& e) {
        std::cerr << "stabilization failure: " << e.what() << "\n";
        return kExitStabilization;
    } catch (const UnsupportedInput& e) {
        std::cerr << "unsupported input: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
