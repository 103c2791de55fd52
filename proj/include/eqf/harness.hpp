#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "eqf/oracle.hpp"
#include "eqf/stickelberger.hpp"
#include "eqf/tower.hpp"

namespace eqf {

/// One desk-scale verification instance with vetted class-group input.
struct CuratedInstance {
    std::string name;
    long conductor = 0;
    std::vector<long> subgroup_gens;
    long h_minus = 0;  // |Cl^-(H)|; 0 = unknown (report-only)
    std::string source;
    long p = 0;
    std::set<long> t_set;
    std::string expected;  // informal expectation note
};

const std::vector<CuratedInstance>& curated_instances();
const CuratedInstance* find_curated(const std::string& name);

struct KuriharaVerdict {
    std::string instance;
    bool curated = false;
    bool oracle_available = false;
    bool pass = false;  // meaningful only when oracle_available
    std::string status;
    std::optional<FractionalIdeal> oracle_side;
    FractionalIdeal formula_side;
    OracleResult oracle;
};

/// Oracle vs Kurihara-formula comparison at the base layer, exact p-local.
KuriharaVerdict end_to_end_kurihara(const CuratedInstance& inst);

// ---- machine-readable reports ----

nlohmann::json ideal_to_json(const FractionalIdeal& ideal);
nlohmann::json lvalue_to_json(const LValue& lv);
nlohmann::json ring_elem_to_json(const RingElem& x);
nlohmann::json verdict_to_json(const KuriharaVerdict& v);

/// Parse an L-value from the documented JSON shape ({"conductor",
/// "subgroup_gens", "coeffs": {"sigma_a": "p/q"}}); this is also the entry
/// point for user-supplied partial-zeta data over base fields other than Q.
LValue lvalue_from_json(const nlohmann::json& j);

/// Envelope: {"schema_version", "command", "inputs", "checks", ...}. All
/// numbers are decimal strings; reruns are byte-identical.
nlohmann::json make_report(const std::string& command, const nlohmann::json& inputs,
                           const nlohmann::json& body);

}  // namespace eqf
