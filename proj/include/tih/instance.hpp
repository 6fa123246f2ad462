#ifndef TIH_INSTANCE_HPP
#define TIH_INSTANCE_HPP

#include <json.hpp>
#include <string>

#include "tih/ic_engine.hpp"
#include "tih/triangulate.hpp"

namespace tih {

using Json = nlohmann::ordered_json;

// Parsed instance file: complex cells plus filtration/perversity presets and
// flags. Parse -> serialize -> parse is the identity on the parsed form.
struct InstanceFile {
    int ambient_dim = 0;
    bool tropical = true;
    std::vector<HPolyhedron> cells;  // typically the maximal cells

    enum class FiltKind { FACE, TROP, PAIR, EXPLICIT };
    FiltKind fkind = FiltKind::TROP;
    std::vector<std::vector<int>> levels;  // EXPLICIT
    std::set<int> u_cells;                 // PAIR

    enum class PervKind { ZERO, CONSTANT, CODIM, CODIM_SHIFT, EXPLICIT };
    PervKind pkind = PervKind::ZERO;
    int pshift = 0;
    std::map<int, int> pvalues;  // EXPLICIT: stratum id -> value

    bool conical = false;
    bool condition_c = false;
    std::optional<Rat> truncation_radius;

    std::string name, suite, provenance;
    bool expect_gm_mismatch = false;
    Json expected;  // optional frozen groups per flavor tag
};

struct LoadedInstance {
    InstanceFile file;
    FaceComplex complex;
    Filtration filtration;
    Perversity perversity;
    EngineOptions options;
};

Json cell_to_json(const HPolyhedron& p);
HPolyhedron cell_from_json(const Json& j, bool tropical);

InstanceFile instance_from_json(const Json& j);
Json instance_to_json(const InstanceFile& f);

// Builds and validates the complex, resolves filtration and perversity.
// Throws ValidationError subtypes on bad input.
LoadedInstance load_instance(const InstanceFile& f, int base_level = 2, int max_level = 4);

Json result_to_json(const HomologyResult& r);
bool result_matches(const HomologyResult& r, const Json& expected_groups);

Json filtration_to_json(const Filtration& f, const Perversity& p);
Json triangulation_to_json(const StratifiedTriangulation& t);

std::string flavor_tag(Flavor f);
std::string variant_tag(Variant v);
std::string coeff_tag(Coeff c);

}  // namespace tih

#endif
