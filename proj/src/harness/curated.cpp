#include "eqf/harness.hpp"

namespace eqf {

namespace {

std::vector<long> squares_mod(long q) {
    std::vector<long> out;
    for (long a = 1; a < q; ++a) out.push_back(a * a % q);
    return out;
}

std::vector<CuratedInstance> build_table() {
    // Class data sources:
    //  [W] Washington, Introduction to Cyclotomic Fields, 2nd ed., tables of
    //      h^- (Q(zeta_f) has h = 1 for f <= 22, f = 24).
    //  [C] Cohen, A Course in Computational Algebraic Number Theory,
    //      Table B: h(Q(sqrt(-23))) = 3.
    std::vector<CuratedInstance> t;
    t.push_back({"qi_p3_t5", 4, {}, 1, "h(Q(i)) = 1 [W]", 3, {5}, "both sides unit"});
    t.push_back({"q3_p3_t5", 3, {}, 1, "h(Q(zeta_3)) = 1 [W]", 3, {5}, "both sides unit"});
    t.push_back({"qm23_p3_t5", 23, squares_mod(23), 3, "h(Q(sqrt(-23))) = 3 [C]", 3, {5},
                 "oracle Fitt (9), formula valuation 2"});
    t.push_back({"q3_p3_t7", 3, {}, 1, "h(Q(zeta_3)) = 1 [W]", 3, {7}, "split T-prime"});
    t.push_back({"q3_p3_t19", 3, {}, 1, "h(Q(zeta_3)) = 1 [W]", 3, {19},
                 "split T-prime with 19 = 1 mod 9: nontrivial p-content on both sides"});
    t.push_back({"q5_p3_t7", 5, {}, 1, "h(Q(zeta_5)) = 1 [W]", 3, {7}, ""});
    t.push_back({"q5_p7_t11", 5, {}, 1, "h(Q(zeta_5)) = 1 [W]", 7, {11}, ""});
    t.push_back({"q7_p5_t11", 7, {}, 1, "h(Q(zeta_7)) = 1 [W]", 5, {11}, ""});
    t.push_back({"q8_p3_t5", 8, {}, 1, "h(Q(zeta_8)) = 1 [W]", 3, {5}, ""});
    t.push_back({"q8_p5_t7", 8, {}, 1, "h(Q(zeta_8)) = 1 [W]", 5, {7}, ""});
    t.push_back({"q12_p5_t7", 12, {}, 1, "h(Q(zeta_12)) = 1 [W]", 5, {7}, ""});
    t.push_back({"q12_p7_t5", 12, {}, 1, "h(Q(zeta_12)) = 1 [W]", 7, {5}, ""});
    return t;
}

}  // namespace

const std::vector<CuratedInstance>& curated_instances() {
    static const std::vector<CuratedInstance> table = build_table();
    return table;
}

const CuratedInstance* find_curated(const std::string& name) {
    for (const auto& inst : curated_instances())
        if (inst.name == name) return &inst;
    return nullptr;
}

}  // namespace eqf
