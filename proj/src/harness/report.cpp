#include <nlohmann/json.hpp>

#include "eqf/harness.hpp"

namespace eqf {

namespace {

std::string q_str(const mpq_class& q) {
    return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
}

}  // namespace

nlohmann::json ideal_to_json(const FractionalIdeal& ideal) {
    nlohmann::json j;
    j["ring"] = ideal.ring()->is_minus() ? "minus" : "full";
    j["rank"] = ideal.rank();
    j["scale"] = q_str(ideal.scale());
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < ideal.lattice().rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t k = 0; k < ideal.lattice().cols(); ++k)
            row.push_back(ideal.lattice().at(i, k).get_str());
        rows.push_back(row);
    }
    j["hnf"] = rows;
    return j;
}

nlohmann::json ring_elem_to_json(const RingElem& x) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : x.coeffs()) j.push_back(q_str(c));
    return j;
}

nlohmann::json lvalue_to_json(const LValue& lv) {
    nlohmann::json j;
    j["conductor"] = lv.field->conductor();
    j["subgroup_gens"] = lv.field->subgroup_gens();
    nlohmann::json coeffs;
    const auto& g = lv.field->galois();
    for (ElemIdx e = 0; e < g->order(); ++e) {
        if (lv.value.coeff(e) == 0) continue;
        coeffs["sigma_" + std::to_string(lv.field->sigma_label(e))] = q_str(lv.value.coeff(e));
    }
    j["coeffs"] = coeffs;
    nlohmann::json s = nlohmann::json::array();
    for (long v : lv.s_finite) s.push_back(v);
    s.push_back("inf");
    j["S"] = s;
    j["T"] = lv.t_set;
    if (lv.layer >= 0) j["layer"] = lv.layer;
    return j;
}

nlohmann::json verdict_to_json(const KuriharaVerdict& v) {
    nlohmann::json j;
    j["instance"] = v.instance;
    j["curated"] = v.curated;
    j["status"] = v.status;
    j["formula_side"] = ideal_to_json(v.formula_side);
    if (v.oracle_side) j["oracle_side"] = ideal_to_json(*v.oracle_side);
    j["oracle_status"] = v.oracle.status;
    j["oracle_coker_order"] = v.oracle.coker_order.get_str();
    if (v.oracle_available) j["verdict"] = v.pass ? "pass" : "fail";
    else j["verdict"] = "report-only";
    return j;
}

LValue lvalue_from_json(const nlohmann::json& j) {
    for (const char* key : {"conductor", "coeffs"})
        if (!j.contains(key))
            throw std::runtime_error(std::string("L-value JSON missing field: ") + key);
    std::vector<long> gens;
    if (j.contains("subgroup_gens"))
        for (const auto& g : j["subgroup_gens"]) gens.push_back(g.get<long>());
    FieldPtr field = make_field(j["conductor"].get<long>(), gens);
    LValue out;
    out.field = field;
    out.value = RingElem(field->full_ring());
    for (const auto& [key, val] : j["coeffs"].items()) {
        if (key.rfind("sigma_", 0) != 0)
            throw std::runtime_error("L-value JSON: coefficient key not of the form sigma_a: " + key);
        long label = std::stol(key.substr(6));
        mpq_class q(val.get<std::string>());
        q.canonicalize();
        out.value.coeff(field->class_of_residue(label)) += q;
    }
    if (j.contains("S"))
        for (const auto& v : j["S"])
            if (!v.is_string()) out.s_finite.insert(v.get<long>());
    if (j.contains("T"))
        for (const auto& v : j["T"]) out.t_set.insert(v.get<long>());
    return out;
}

nlohmann::json make_report(const std::string& command, const nlohmann::json& inputs,
                           const nlohmann::json& body) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["command"] = command;
    j["inputs"] = inputs;
    j["body"] = body;
    return j;
}

}  // namespace eqf
