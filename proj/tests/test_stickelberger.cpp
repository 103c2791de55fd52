#include <doctest.h>

#include <numeric>
#include <random>

#include "eqf/cyclotomic.hpp"
#include "eqf/stickelberger.hpp"

using namespace eqf;

namespace {

mpq_class coeff_at_label(const LValue& lv, long label) {
    const auto& g = lv.field->galois();
    for (ElemIdx e = 0; e < g->order(); ++e)
        if (lv.field->sigma_label(e) == label) return lv.value.coeff(e);
    throw std::logic_error("label not found");
}

RingElem plus_part(const LValue& lv) {
    RingPtr r = lv.field->full_ring();
    ElemIdx c = lv.field->galois()->conjugation();
    RingElem ec = (RingElem::one(r) + RingElem::of_group_elem(r, c)) * mpq_class(1, 2);
    return ec * lv.value;
}

}  // namespace

TEST_CASE("unit group structures") {
    UnitGroup u8(8);
    CHECK(u8.order() == 4);
    CHECK(u8.group()->invariant_factors() == std::vector<long>{2, 2});
    UnitGroup u9(9);
    CHECK(u9.order() == 6);
    CHECK(u9.group()->invariant_factors() == std::vector<long>{6});
    UnitGroup u12(12);
    CHECK(u12.group()->invariant_factors() == std::vector<long>{2, 2});
    UnitGroup u972(972);
    CHECK(u972.order() == 324);
    // multiplicativity spot check
    UnitGroup u35(35);
    for (long a : {2L, 3L, 4L, 6L})
        for (long b : {2L, 3L, 8L}) {
            CHECK(u35.group()->mul(u35.class_of(a), u35.class_of(b)) == u35.class_of(a * b));
        }
}

TEST_CASE("field spec ramification data") {
    // Q(i): conductor 4, trivial fixing subgroup
    auto qi = make_field(4, {});
    CHECK(qi->degree() == 2);
    CHECK(qi->is_ramified(2));
    CHECK(!qi->is_ramified(3));
    CHECK(qi->inertia(2).order() == 2);
    CHECK(qi->residue_degree(5) == 1);  // 5 = 1 mod 4 splits
    CHECK(qi->residue_degree(3) == 2);  // 3 inert
    CHECK(qi->mu_p_power(3) == 0);

    // Q(zeta_3)
    auto q3 = make_field(3, {});
    CHECK(q3->degree() == 2);
    CHECK(q3->mu_p_power(3) == 1);
    CHECK(q3->residue_degree(5) == 2);
    CHECK(q3->residue_degree(7) == 1);

    // Q(i) presented non-primitively at modulus 12
    auto qi12 = make_field(12, {5});
    CHECK(qi12->degree() == 2);
    CHECK(qi12->is_ramified(2));
    CHECK(!qi12->is_ramified(3));  // 3 ramifies in Q(zeta_12) but not in Q(i)

    // Q(sqrt(-23)): index-2 subgroup of (Z/23)^* = squares
    std::vector<long> squares;
    for (long a = 1; a < 23; ++a) squares.push_back(a * a % 23);
    auto q23 = make_field(23, squares);
    CHECK(q23->degree() == 2);
    CHECK(q23->is_ramified(23));
    CHECK(q23->residue_degree(5) == 2);  // 5 is a nonresidue mod 23
}

TEST_CASE("layer fields") {
    auto qi = make_field(4, {});
    auto h0 = layer_field(qi, 3, 0);
    CHECK(h0->conductor() == 12);
    CHECK(h0->degree() == 2);
    auto h1 = layer_field(qi, 3, 1);
    CHECK(h1->conductor() == 36);
    CHECK(h1->degree() == 6);
    auto h2 = layer_field(qi, 3, 2);
    CHECK(h2->conductor() == 108);
    CHECK(h2->degree() == 18);
    auto pi = layer_transition(h1, h0);
    CHECK(pi.quotient->order() == 2);

    auto q3 = make_field(3, {});
    auto g1 = layer_field(q3, 5, 1);
    CHECK(g1->conductor() == 75);
    CHECK(g1->degree() == 10);
}

TEST_CASE("theta at full level") {
    SUBCASE("f = 4") {
        LValue t = theta_full_level(4);
        CHECK(coeff_at_label(t, 1) == mpq_class(1, 4));
        CHECK(coeff_at_label(t, 3) == mpq_class(-1, 4));
    }
    SUBCASE("f = 3") {
        LValue t = theta_full_level(3);
        CHECK(coeff_at_label(t, 1) == mpq_class(1, 6));
        CHECK(coeff_at_label(t, 2) == mpq_class(-1, 6));
    }
    SUBCASE("f = 12") {
        LValue t = theta_full_level(12);
        CHECK(coeff_at_label(t, 1) == mpq_class(5, 12));
        CHECK(coeff_at_label(t, 5) == mpq_class(1, 12));
        CHECK(coeff_at_label(t, 7) == mpq_class(-1, 12));
        CHECK(coeff_at_label(t, 11) == mpq_class(-5, 12));
    }
    CHECK_THROWS_AS(theta_full_level(2), std::invalid_argument);
}

TEST_CASE("theta for fields") {
    auto qi = make_field(4, {});
    SUBCASE("Q(i), S = {2}, T = {5}: -1 + c") {
        LValue t = theta_for_field(qi, {2}, {5});
        CHECK(coeff_at_label(t, 1) == -1);
        CHECK(coeff_at_label(t, 3) == 1);
    }
    SUBCASE("two Euler routes to Theta_{2,3,infty}(Q(i)) = 1/2 - c/2") {
        // route 1: restriction of the conductor-12 value
        auto qi12 = make_field(12, {5});
        LValue t1 = theta_for_field(qi12, {2, 3}, {});
        CHECK(coeff_at_label(t1, 1) == mpq_class(1, 2));
        CHECK(coeff_at_label(t1, 7) == mpq_class(-1, 2));
        // route 2: conductor-4 value times (1 - phi_3^{-1})
        LValue t2 = theta_for_field(qi, {2, 3}, {});
        CHECK(coeff_at_label(t2, 1) == mpq_class(1, 2));
        CHECK(coeff_at_label(t2, 3) == mpq_class(-1, 2));
    }
    SUBCASE("Q(zeta_3), S = {3}: 1/6 - c/6") {
        auto q3 = make_field(3, {});
        LValue t = theta_for_field(q3, {3}, {});
        CHECK(coeff_at_label(t, 1) == mpq_class(1, 6));
        CHECK(coeff_at_label(t, 2) == mpq_class(-1, 6));
    }
    SUBCASE("minus purity when S contains the ramified primes") {
        for (long f : {4L, 3L, 12L, 23L}) {
            std::vector<long> gens;
            if (f == 23)
                for (long a = 1; a < 23; ++a) gens.push_back(a * a % 23);
            auto h = make_field(f, gens);
            std::set<long> s;
            for (long v : h->ramified_primes()) s.insert(v);
            LValue t = theta_for_field(h, s, {});
            CHECK(plus_part(t).is_zero());
        }
    }
}

TEST_CASE("theta_ssprime") {
    auto qi = make_field(4, {});
    SUBCASE("S' empty equals theta_for_field") {
        LValue a = theta_ssprime(qi, {2}, {}, {5});
        LValue b = theta_for_field(qi, {2}, {5});
        CHECK(a.value == b.value);
    }
    SUBCASE("Q(i), S = {2}, S' = {3}, T = {5}: -3 + 3c") {
        LValue t = theta_ssprime(qi, {2}, {3}, {5});
        CHECK(coeff_at_label(t, 1) == -3);
        CHECK(coeff_at_label(t, 3) == 3);
    }
    SUBCASE("split prime in S' contributes the factor 1 - phi^{-1} + 1 = 1 at phi = 1") {
        // 5 splits completely in Q(i): factor = 1 - (1 - 1) = 1
        RingElem f5 = ssprime_factor(qi, 5);
        CHECK(f5 == RingElem::one(qi->full_ring()));
    }
}

TEST_CASE("mu_pT_trivial") {
    auto qi = make_field(4, {});
    CHECK(mu_pT_trivial(qi, 3, {}));
    CHECK(mu_pT_trivial(qi, 3, {5}));
    auto q3 = make_field(3, {});
    CHECK(mu_pT_trivial(q3, 3, {5}));
    CHECK(!mu_pT_trivial(q3, 3, {}));
    CHECK(!mu_pT_trivial(q3, 3, {3}));
}

TEST_CASE("integrality scan examples") {
    auto qi = make_field(4, {});
    SUBCASE("Q(i), p=3, S={2}, T={5} passes") {
        auto rep = integrality_scan(qi, 3, {2}, {5});
        CHECK(rep.hypotheses_hold);
        CHECK(rep.minus_part_p_integral);
        CHECK(!rep.fatal_inconsistency);
        CHECK(rep.theta.minus_part() == RingElem::scalar(qi->minus_ring(), -2));
    }
    auto q3 = make_field(3, {});
    SUBCASE("Q(zeta_3), p=3, T empty: hypothesis fails, no verdict demanded") {
        auto rep = integrality_scan(q3, 3, {3}, {});
        CHECK(!rep.hypotheses_hold);
        CHECK(!rep.hyp_mu_trivial);
        CHECK(!rep.fatal_inconsistency);
    }
    SUBCASE("Q(zeta_3), p=5: denominators 6 prime to 5") {
        auto rep = integrality_scan(q3, 5, {3}, {});
        CHECK(rep.minus_part_p_integral);
        CHECK(!rep.fatal_inconsistency);
    }
    CHECK_THROWS_AS(integrality_scan(qi, 2, {2}, {}), std::invalid_argument);
}

TEST_CASE("T-factor multiplicativity") {
    auto qi = make_field(4, {});
    LValue t12 = theta_for_field(qi, {2}, {5, 13});
    LValue t1 = theta_for_field(qi, {2}, {5});
    RingPtr r = qi->full_ring();
    Subgroup i13 = qi->inertia(13);
    RingElem factor = RingElem::one(r) -
                      idempotent(r, i13) *
                          RingElem::of_group_elem(r, qi->galois()->inverse(qi->frobenius(13))) *
                          mpq_class(13);
    CHECK(t12.value == t1.value * factor);
}

TEST_CASE("two-route Euler consistency over random subfields") {
    std::mt19937_64 rng(53);
    int tested = 0;
    for (long f : {5L, 7L, 8L, 12L, 15L, 20L, 24L, 40L, 60L}) {
        UnitGroup u(f);
        // pick a random CM subfield: subgroup not containing -1
        auto subs = all_subgroups(u.group());
        std::shuffle(subs.begin(), subs.end(), rng);
        for (const auto& k : subs) {
            if (k.contains(u.class_of(f - 1))) continue;
            std::vector<long> gens;
            for (ElemIdx e : k.elems()) gens.push_back(u.residue_of(e));
            auto h_raw = make_field(f, gens);
            // route A: the value restricted from the non-primitive modulus,
            // with the extra modulus primes kept in S
            std::set<long> s_mod;
            for (long v = 2; v <= f; ++v)
                if (f % v == 0) {
                    bool prime = true;
                    for (long d2 = 2; d2 * d2 <= v; ++d2)
                        if (v % d2 == 0) prime = false;
                    if (prime) s_mod.insert(v);
                }
            LValue a = theta_for_field(h_raw, s_mod, {});
            // route B: primitive conductor value times the removed factors
            auto h0 = primitive_field(h_raw);
            std::set<long> s_prim;
            for (long v : s_mod)
                if (h0->conductor() % v == 0) s_prim.insert(v);
            LValue b = theta_for_field(h0, s_prim, {});
            RingElem bv = b.value;
            RingPtr r0 = h0->full_ring();
            for (long v : s_mod) {
                if (s_prim.count(v)) continue;
                Subgroup iv = h0->inertia(v);
                RingElem factor = RingElem::one(r0) -
                                  idempotent(r0, iv) *
                                      RingElem::of_group_elem(
                                          r0, h0->galois()->inverse(h0->frobenius(v)));
                bv = bv * factor;
            }
            // compare coefficientwise through the sigma labels
            bool same = true;
            for (ElemIdx e = 0; e < h_raw->degree(); ++e) {
                long label = h_raw->sigma_label(e);
                if (a.value.coeff(e) != bv.coeff(h0->class_of_residue(label))) same = false;
            }
            CHECK(same);
            if (++tested > 12) return;
            break;
        }
    }
}

TEST_CASE("theta against independent generalized Bernoulli sums") {
    // Independent route: chi(Theta_{S_f}(Q(zeta_f))) must equal
    // -B_{1, chibar'} Pi_{v | f, v not dividing f_chi} (1 - chibar'(v)),
    // with B_{1,psi} = (1/f_psi) sum_a psi(a) a over the primitive psi.
    for (long f : {4L, 3L, 5L, 7L, 8L, 12L, 15L}) {
        LValue theta = theta_full_level(f);
        const auto& field = theta.field;
        const auto& g = field->galois();
        long n_exp = 1;
        for (long part : g->parts()) n_exp = std::lcm(n_exp, part);
        CycloField cyc(n_exp);
        auto chi_phase = [&](const std::vector<long>& chi, ElemIdx e) {
            auto ee = g->exps_of(e);
            long phase = 0;
            for (std::size_t k = 0; k < chi.size(); ++k)
                phase = (phase + (chi[k] * ee[k] % g->parts()[k]) * (n_exp / g->parts()[k])) % n_exp;
            return phase;
        };
        auto values = character_values(theta.value);
        for (const auto& cv : values) {
            // conductor of chibar: smallest m | f with chi trivial on units = 1 mod m
            const auto& chi = cv.character;
            long f_chi = 1;
            for (long m = 1; m <= f; ++m) {
                if (f % m != 0) continue;
                bool trivial = true;
                for (long x = 1; x < f && trivial; ++x) {
                    if (std::gcd(x, f) != 1 || (x - 1) % m != 0) continue;
                    if (chi_phase(chi, field->class_of_residue(x)) != 0) trivial = false;
                }
                if (trivial) { f_chi = m; break; }
            }
            bool odd = chi_phase(chi, g->conjugation()) == n_exp / 2;
            if (!odd) continue;
            // -B_{1, chibar'}: sum over residues prime to f_chi, using any
            // lift to a unit mod f (chi bar = inverse character)
            std::vector<mpq_class> acc(static_cast<std::size_t>(n_exp), 0);
            for (long a = 1; a < f_chi || (f_chi == 1 && a == 1); ++a) {
                if (f_chi > 1 && std::gcd(a, f_chi) != 1) continue;
                long lift = a;
                while (std::gcd(lift, f) != 1) lift += f_chi;
                long ph = chi_phase(chi, g->inverse(field->class_of_residue(lift)));
                acc[static_cast<std::size_t>(ph)] -= mpq_class(a, f_chi);
                if (f_chi == 1) break;
            }
            auto val = cyc.reduce_powers(acc);
            // Euler factors at primes dividing f but not f_chi
            for (long v = 2; v <= f; ++v) {
                bool prime = true;
                for (long d = 2; d * d <= v; ++d)
                    if (v % d == 0) prime = false;
                if (!prime || f % v != 0 || (f_chi > 1 && f_chi % v == 0)) continue;
                // multiply val by (1 - chibar'(v)) on power coefficients
                long lift = f_chi == 1 ? 1 : v % f_chi;
                while (std::gcd(lift, f) != 1) lift += f_chi;
                long ph = chi_phase(chi, g->inverse(field->class_of_residue(lift)));
                std::vector<mpq_class> pw(static_cast<std::size_t>(n_exp), 0);
                for (std::size_t i = 0; i < val.size(); ++i) {
                    pw[i] += val[i];
                    pw[(i + static_cast<std::size_t>(ph)) % static_cast<std::size_t>(n_exp)] -= val[i];
                }
                val = cyc.reduce_powers(pw);
            }
            CHECK(cv.value == val);
        }
    }
}

TEST_CASE("plus part of theta over S = S_infty only") {
    // Theta_{S_infty}^T has plus part zeta(0) Pi_T (1 - Nv) e_G; the trivial
    // character sees the full coefficient sum
    auto qi = make_field(4, {});
    LValue t = theta_for_field(qi, {}, {5});
    mpq_class coeff_sum = 0;
    for (const auto& c : t.value.coeffs()) coeff_sum += c;
    CHECK(coeff_sum == mpq_class(-1, 2) * (1 - 5));  // = 2
    // odd part is -2, so the value is exactly 2 sigma_3
    CHECK(coeff_at_label(t, 1) == 0);
    CHECK(coeff_at_label(t, 3) == 2);
    // with a finite prime in S the plus part vanishes identically
    LValue t2 = theta_for_field(qi, {2}, {5});
    RingElem plus = plus_part(t2);
    CHECK(plus.is_zero());
}

TEST_CASE("norm compatibility") {
    SUBCASE("Q(i), p=3, S={2,3}, T={5}, depth 2") {
        auto qi = make_field(4, {});
        auto rep = norm_compatibility_check(qi, 3, {2, 3}, {5}, 2);
        CHECK(rep.all_equal);
        CHECK(rep.layer_moduli == std::vector<long>{12, 36, 108});
    }
    SUBCASE("depth 0 is a vacuous pass") {
        auto qi = make_field(4, {});
        auto rep = norm_compatibility_check(qi, 3, {2, 3}, {5}, 0);
        CHECK(rep.all_equal);
    }
    SUBCASE("Q(zeta_3), p=5, S={3,5}, T={7}, depth 1") {
        auto q3 = make_field(3, {});
        auto rep = norm_compatibility_check(q3, 5, {3, 5}, {7}, 1);
        CHECK(rep.all_equal);
        CHECK(rep.layer_moduli == std::vector<long>{15, 75});
    }
}
