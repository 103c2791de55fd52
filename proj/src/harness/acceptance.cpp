#include "eqf/acceptance.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <sstream>

#include "eqf/harness.hpp"
#include "eqf/ritter_weiss.hpp"

namespace eqf {

CriterionResult criterion_fitt_identity(long max_order) {
    CriterionResult res{1, "shifted-Fitting product identity, exhaustive sweep", false, ""};
    long instances = 0, failures = 0;
    res.table = nlohmann::json::array();
    for (long n = 1; n <= max_order; ++n) {
        for (const auto& parts : abelian_groups_of_order(n)) {
            auto g = group_product(parts);
            auto subs = all_subgroups(g);
            for (const auto& i_sub : subs) {
                // D is generated by I and the lift sigma, so enumerating
                // (I, sigma) covers every (I, D, sigma-lift) with D/I cyclic
                for (ElemIdx sigma = 0; sigma < g->order(); ++sigma) {
                    std::vector<ElemIdx> dgens = i_sub.gens();
                    dgens.push_back(sigma);
                    Subgroup d_sub(g, dgens);
                    auto rep = verify_shifted_fitt_identity(g, i_sub, d_sub, sigma);
                    ++instances;
                    if (!rep.equal) ++failures;
                    nlohmann::json row;
                    row["group"] = parts;
                    row["inertia_order"] = i_sub.order();
                    row["d_order"] = d_sub.order();
                    row["sigma"] = g->exps_of(sigma);
                    row["equal"] = rep.equal;
                    res.table.push_back(std::move(row));
                }
            }
        }
    }
    res.pass = failures == 0 && instances > 0;
    res.detail = std::to_string(instances) + " instances with |G| <= " + std::to_string(max_order) +
                 ", " + std::to_string(failures) + " failures";
    return res;
}

CriterionResult criterion_calj_independence(long max_order) {
    CriterionResult res{2, "J(I) decomposition independence", false, ""};
    long instances = 0, failures = 0;
    for (long n = 4; n <= max_order; ++n) {
        for (const auto& parts : abelian_groups_of_order(n)) {
            auto g = group_product(parts);
            RingPtr ring = GroupRing::full(g);
            auto subs = all_subgroups(g);
            for (const auto& i_sub : subs) {
                const auto inv = [&] {
                    std::vector<long> orders;
                    Subgroup s = i_sub;
                    auto dec = cyclic_decomposition(s);
                    for (const auto& c : dec) orders.push_back(c.order);
                    return orders;
                }();
                bool is22 = inv == std::vector<long>{2, 2};
                bool is33 = inv == std::vector<long>{3, 3};
                if (!is22 && !is33) continue;
                const long ell = is22 ? 2 : 3;
                // all ordered cyclic decompositions of I
                std::vector<std::pair<ElemIdx, ElemIdx>> decomps;
                for (ElemIdx a : i_sub.elems())
                    for (ElemIdx b : i_sub.elems()) {
                        if (g->order_of(a) != ell || g->order_of(b) != ell) continue;
                        if (is_cyclic_decomposition(i_sub, {a, b}))
                            decomps.push_back({a, b});
                    }
                // D = <I, sigma> over all sigma, deduplicated by D
                std::vector<std::vector<ElemIdx>> seen_d;
                for (ElemIdx sigma = 0; sigma < g->order(); ++sigma) {
                    std::vector<ElemIdx> dgens = i_sub.gens();
                    dgens.push_back(sigma);
                    Subgroup d_sub(g, dgens);
                    if (std::find(seen_d.begin(), seen_d.end(), d_sub.elems()) != seen_d.end())
                        continue;
                    seen_d.push_back(d_sub.elems());
                    std::vector<FractionalIdeal> ideals;
                    for (auto [a, b] : decomps) {
                        std::vector<CyclicFactor> dec{{a, ell}, {b, ell}};
                        ideals.push_back(calJ_ideal(ring, dec, d_sub, sigma));
                    }
                    ++instances;
                    for (const auto& j : ideals)
                        if (!(j == ideals[0])) ++failures;
                }
            }
        }
    }
    res.pass = failures == 0 && instances > 0;
    res.detail = std::to_string(instances) + " (G, I, D) triples, " + std::to_string(failures) +
                 " decomposition mismatches";
    return res;
}

namespace {

// all (G_w, I_w, phi_w) with G_w/I_w cyclic generated by the class of phi_w
template <typename F>
void sweep_local_data(long max_order, F&& fn) {
    for (long n = 1; n <= max_order; ++n) {
        for (const auto& parts : abelian_groups_of_order(n)) {
            auto g = group_product(parts);
            for (const auto& i_sub : all_subgroups(g)) {
                for (ElemIdx phi = 0; phi < g->order(); ++phi) {
                    long k = 1;
                    ElemIdx pw = phi;
                    while (!i_sub.contains(pw)) {
                        pw = g->mul(pw, phi);
                        ++k;
                    }
                    if (static_cast<std::size_t>(k) * i_sub.order() != g->order()) continue;
                    fn(g, i_sub, phi);
                }
            }
        }
    }
}

}  // namespace

CriterionResult criterion_rw_exactness(long max_order) {
    CriterionResult res{3, "Ritter-Weiss exactness sweep", false, ""};
    long instances = 0, failures = 0;
    sweep_local_data(max_order, [&](const GroupPtr& g, const Subgroup& i_sub, ElemIdx phi) {
        ++instances;
        LocalData d{g, i_sub, phi};
        WModule w(d);  // construction verifies the basis and action tables
        auto f = map_f(w);
        if (!f.exact) ++failures;
        if (i_sub.order() == 1) {
            IntMat m = map_iota(w);
            if (abs(det(m)) != 1) ++failures;
        }
        // action-table associativity: (gh).w_k = g.(h.w_k)
        const std::size_t order = g->order();
        for (ElemIdx a = 0; a < order; ++a)
            for (ElemIdx b = 0; b < order; ++b)
                for (ElemIdx k = 0; k < order; ++k) {
                    auto lhs = w.action(g->mul(a, b), k);
                    auto inner = w.action(b, k);
                    std::vector<mpz_class> rhs(order, 0);
                    for (ElemIdx j = 0; j < order; ++j) {
                        if (inner[j] == 0) continue;
                        auto outer = w.action(a, j);
                        for (ElemIdx t = 0; t < order; ++t) rhs[t] += inner[j] * outer[t];
                    }
                    if (lhs != rhs) {
                        ++failures;
                        return;
                    }
                }
    });
    res.pass = failures == 0 && instances > 0;
    res.detail = std::to_string(instances) + " local datum sweeps with |G_w| <= " +
                 std::to_string(max_order) + ", " + std::to_string(failures) + " failures";
    return res;
}

CriterionResult criterion_rw_certificates(long max_order) {
    CriterionResult res{4, "Ritter-Weiss rational rank-1 certificates", false, ""};
    long instances = 0, failures = 0;
    sweep_local_data(max_order, [&](const GroupPtr& g, const Subgroup& i_sub, ElemIdx phi) {
        ++instances;
        WModule w(LocalData{g, i_sub, phi});
        auto r = rational_generator(w);
        if (!r.free_rank_one || !r.f_certificate || !r.j_certificate) ++failures;
    });
    res.pass = failures == 0 && instances > 0;
    res.detail = std::to_string(instances) + " instances, " + std::to_string(failures) + " failures";
    return res;
}

CriterionResult criterion_theta_values() {
    CriterionResult res{5, "Stickelberger pinned values", false, ""};
    long failures = 0;
    auto coeff_at = [](const LValue& lv, long label) {
        for (ElemIdx e = 0; e < lv.field->galois()->order(); ++e)
            if (lv.field->sigma_label(e) == label) return lv.value.coeff(e);
        throw std::logic_error("label");
    };
    {
        auto qi = make_field(4, {});
        LValue t = theta_for_field(qi, {2}, {});
        if (!(coeff_at(t, 1) == mpq_class(1, 4) && coeff_at(t, 3) == mpq_class(-1, 4))) ++failures;
        LValue ts = theta_for_field(qi, {2}, {5});
        if (!(coeff_at(ts, 1) == -1 && coeff_at(ts, 3) == 1)) ++failures;
        // the T-smoothed value is integral
        for (const auto& c : ts.value.coeffs())
            if (c.get_den() != 1) ++failures;
    }
    {
        auto q3 = make_field(3, {});
        LValue t = theta_for_field(q3, {3}, {});
        if (!(coeff_at(t, 1) == mpq_class(1, 6) && coeff_at(t, 2) == mpq_class(-1, 6))) ++failures;
    }
    {
        // two-route consistency at conductor 12
        auto qi12 = make_field(12, {5});
        LValue a = theta_for_field(qi12, {2, 3}, {});
        auto qi = make_field(4, {});
        LValue b = theta_for_field(qi, {2, 3}, {});
        if (!(coeff_at(a, 1) == mpq_class(1, 2) && coeff_at(a, 7) == mpq_class(-1, 2))) ++failures;
        if (!(coeff_at(b, 1) == mpq_class(1, 2) && coeff_at(b, 3) == mpq_class(-1, 2))) ++failures;
    }
    res.pass = failures == 0;
    res.detail = failures == 0 ? "all pinned values match" : std::to_string(failures) + " mismatches";
    return res;
}

CriterionResult criterion_integrality_sweep(long max_f) {
    CriterionResult res{6, "Deligne-Ribet-type integrality sweep", false, ""};
    long checked = 0, hyp_hold = 0, failures = 0, skipped = 0;
    std::set<std::pair<long, std::vector<long>>> seen_fields;
    for (long f = 3; f <= max_f; ++f) {
        UnitGroup u(f);
        if (f > 2 && !u.group()->has_conjugation()) continue;
        for (const auto& k : all_subgroups(u.group())) {
            if (k.contains(u.class_of(f - 1))) continue;  // field not CM
            std::vector<long> gens;
            for (ElemIdx e : k.elems()) gens.push_back(u.residue_of(e));
            FieldPtr h = primitive_field(make_field(f, gens));
            std::vector<long> key_k;
            for (ElemIdx e : h->fixing_subgroup().elems())
                key_k.push_back(h->units().residue_of(e));
            if (!seen_fields.insert({h->conductor(), key_k}).second) continue;

            std::set<long> ram;
            for (long v : h->ramified_primes()) ram.insert(v);
            for (long p : {3L, 5L, 7L}) {
                std::vector<std::set<long>> s_choices;
                s_choices.push_back(ram);
                {
                    std::set<long> s2 = ram;
                    long q = 17;
                    while (ram.count(q)) q += 2;
                    s2.insert(q);
                    s_choices.push_back(s2);
                }
                s_choices.push_back({});
                for (const auto& s : s_choices) {
                    for (long t : {5L, 7L, 11L, 13L}) {
                        if (t == p || s.count(t)) continue;
                        try {
                            auto rep = integrality_scan(h, p, s, {t});
                            ++checked;
                            if (rep.hypotheses_hold) {
                                ++hyp_hold;
                                if (!rep.minus_part_p_integral) ++failures;
                            }
                        } catch (const std::domain_error&) {
                            // Euler factor removal impossible at an odd
                            // character; configuration rejected by contract
                            ++skipped;
                        }
                    }
                }
            }
        }
    }
    res.pass = failures == 0 && hyp_hold >= 500;
    res.detail = std::to_string(checked) + " configurations, " + std::to_string(hyp_hold) +
                 " with hypotheses holding, " + std::to_string(failures) + " integrality failures, " +
                 std::to_string(skipped) + " rejected divisions";
    return res;
}

CriterionResult criterion_norm_compatibility() {
    CriterionResult res{7, "norm compatibility across layers", false, ""};
    long failures = 0, runs = 0;
    struct Case {
        long f;
        long p;
        std::set<long> s;
        std::set<long> t;
        int n_max;
    };
    std::vector<Case> cases{
        {4, 3, {2, 3}, {5}, 2},
        {4, 5, {2, 5}, {7}, 2},
        {3, 3, {3}, {5}, 2},
        {3, 5, {3, 5}, {7}, 2},
    };
    for (const auto& c : cases) {
        auto h = make_field(c.f, {});
        auto rep = norm_compatibility_check(h, c.p, c.s, c.t, c.n_max);
        ++runs;
        if (!rep.all_equal) ++failures;
    }
    res.pass = failures == 0;
    res.detail = std::to_string(runs) + " towers, " + std::to_string(failures) + " transition failures";
    return res;
}

CriterionResult criterion_kurihara_end_to_end() {
    CriterionResult res{8, "end-to-end Kurihara instances", false, ""};
    long failures = 0;
    std::ostringstream os;
    for (const char* name : {"qi_p3_t5", "q3_p3_t5", "qm23_p3_t5"}) {
        const CuratedInstance* inst = find_curated(name);
        if (!inst) { ++failures; continue; }
        auto v = end_to_end_kurihara(*inst);
        if (!v.oracle_available || !v.pass) ++failures;
        os << name << "=" << (v.pass ? "pass" : "FAIL") << " ";
        if (std::string(name) == "qi_p3_t5" || std::string(name) == "q3_p3_t5") {
            // both sides must be the unit ideal on the nose
            if (!(v.formula_side == FractionalIdeal::unit(v.formula_side.ring()))) ++failures;
            if (v.oracle_side && !p_local_equal(*v.oracle_side, FractionalIdeal::unit(v.oracle_side->ring()), inst->p))
                ++failures;
        } else {
            // oracle Fitt = (9); formula side has 3-adic valuation 2
            auto nine = FractionalIdeal::from_generators(
                v.formula_side.ring(), {RingElem::scalar(v.formula_side.ring(), 9)});
            if (!v.oracle_side || !(*v.oracle_side == nine)) ++failures;
            if (!p_local_equal(v.formula_side, nine, 3)) ++failures;
        }
    }
    res.pass = failures == 0;
    res.detail = os.str() + (failures ? std::to_string(failures) + " failures" : "");
    return res;
}

namespace {

struct TowerCase {
    long f;
    long p;
    std::set<long> t;
    long ram_away;  // the ramified place away from p
};

std::vector<TowerCase> tower_cases() {
    return {{4, 3, {5}, 2}, {3, 5, {7}, 3}};
}

}  // namespace

CriterionResult criterion_tower_stability(int depth) {
    CriterionResult res{9, "tower stability to depth " + std::to_string(depth), false, ""};
    long failures = 0;
    std::ostringstream os;
    for (const auto& c : tower_cases()) {
        auto h = make_field(c.f, {});
        TowerSpec tw = derive_tower(h, c.p, depth, {}, {}, c.t);
        std::vector<IdealFamily> families;
        families.push_back(kurihara_factor_family(tw, c.ram_away));
        families.push_back(kurihara_factor_family(tw, c.p));
        families.push_back(q_v_family(tw, c.ram_away));
        families.push_back(tilde_j_family(tw, c.p));
        families.push_back(theta_family(tw, {c.p}));
        bool saw_bad = false;
        for (const auto& fam : families) {
            auto st = limit_stability(tw, fam);
            bool ok = st.containment && st.aligned && st.decay && st.product_split;
            if (!ok) ++failures;
            os << fam.name << "@f" << c.f << "=" << (ok ? "ok" : "FAIL") << " ";
            for (const auto& al : st.alignments)
                for (auto a : al)
                    if (a == GenAlignment::Bad) saw_bad = true;
        }
        if (!saw_bad) ++failures;  // the p-place norm generator must decay
    }
    res.pass = failures == 0;
    res.detail = os.str();
    return res;
}

CriterionResult criterion_main_rhs_assembly(int depth) {
    CriterionResult res{10, "main-formula RHS assembly (corollary shape)", false, ""};
    long failures = 0;
    std::ostringstream os;
    for (const auto& c : tower_cases()) {
        auto h = make_field(c.f, {});
        TowerSpec tw = derive_tower(h, c.p, depth, {}, {}, c.t);
        std::vector<MainRhsResult> rhs;
        for (int n = 0; n <= depth; ++n) {
            rhs.push_back(main_rhs(tw, n));
            if (!rhs.back().ideal.full_rank()) ++failures;
            // every factor must rationalize to the whole minus algebra;
            // a surviving common character would be a counterexample candidate
            for (const auto& [name, ideal] : rhs.back().factors)
                if (!ideal.full_rank() || !vanishing_characters(ideal).empty()) ++failures;
        }
        for (int n = 0; n < depth; ++n) {
            auto ti = transition_image(tw.transitions[n], tw.minus_ring(n + 1), tw.minus_ring(n),
                                       rhs[n + 1].ideal);
            if (!rhs[n].ideal.contains_ideal(ti.image)) ++failures;
            // the theta factor is exactly coherent
            RingElem down = restriction(tw.transitions[n], tw.layers[n + 1]->full_ring(),
                                        tw.layers[n]->full_ring(), rhs[n + 1].theta.value);
            if (!(down == rhs[n].theta.value)) ++failures;
        }
        os << "f" << c.f << "/p" << c.p << " layers 0.." << depth << " ";
    }
    res.pass = failures == 0;
    res.detail = os.str() + (failures ? std::to_string(failures) + " failures" : "assembled, coherent, full rank");
    return res;
}

CriterionResult run_criterion(int number, long max_group_order, int tower_depth) {
    switch (number) {
        case 1: return criterion_fitt_identity(max_group_order);
        case 2: return criterion_calj_independence();
        case 3: return criterion_rw_exactness();
        case 4: return criterion_rw_certificates();
        case 5: return criterion_theta_values();
        case 6: return criterion_integrality_sweep();
        case 7: return criterion_norm_compatibility();
        case 8: return criterion_kurihara_end_to_end();
        case 9: return criterion_tower_stability(tower_depth);
        case 10: return criterion_main_rhs_assembly(tower_depth);
        default: throw std::invalid_argument("criterion number must be 1..10");
    }
}

std::vector<CriterionResult> run_all_criteria(long max_group_order, int tower_depth) {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= 10; ++i) out.push_back(run_criterion(i, max_group_order, tower_depth));
    return out;
}

nlohmann::json criteria_to_json(const std::vector<CriterionResult>& results) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json j;
        j["criterion"] = r.number;
        j["name"] = r.name;
        j["pass"] = r.pass;
        j["detail"] = r.detail;
        if (!r.table.is_null()) j["table"] = r.table;
        arr.push_back(j);
    }
    return arr;
}

}  // namespace eqf
