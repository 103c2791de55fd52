#include "eqf/harness.hpp"

namespace eqf {

KuriharaVerdict end_to_end_kurihara(const CuratedInstance& inst) {
    KuriharaVerdict out;
    out.instance = inst.name;
    out.curated = inst.h_minus != 0;

    FieldPtr field = primitive_field(make_field(inst.conductor, inst.subgroup_gens));
    out.oracle = oracle_ray_class_minus(field, inst.p, inst.t_set, inst.h_minus);
    out.oracle_available = out.oracle.computable;
    if (out.oracle.fitt_dual) out.oracle_side = *out.oracle.fitt_dual;

    TowerSpec tower = derive_tower(field, inst.p, 0, {}, {}, inst.t_set);
    FractionalIdeal rhs_layer = kurihara_rhs(tower, 0, false);
    // carry the layer-0 result onto the oracle's presentation of H
    QuotientMap ident = layer_transition(tower.layers[0], field);
    out.formula_side =
        transition_image(ident, tower.minus_ring(0), field->minus_ring(), rhs_layer).image;

    if (out.oracle_available) {
        out.pass = p_local_equal(out.formula_side, *out.oracle_side, inst.p);
        out.status = out.pass ? "exact p-local match" : "MISMATCH: " + out.oracle.status;
    } else {
        out.status = "report-only: " + out.oracle.status;
    }
    return out;
}

}  // namespace eqf
