#include <doctest.h>

#include <nlohmann/json.hpp>

#include "eqf/harness.hpp"

using namespace eqf;

TEST_CASE("oracle on the curated instances") {
    SUBCASE("Q(i), p=3, T={5}: residue module prime to 3, A^{T,-} trivial at 3") {
        auto f = make_field(4, {});
        auto r = oracle_ray_class_minus(f, 3, {5}, 1);
        REQUIRE(r.computable);
        CHECK(r.coker_order == 4);  // |F_5^x tensor (minus part)| = 4, prime to 3
        REQUIRE(r.fitt_dual.has_value());
        CHECK(p_local_equal(*r.fitt_dual, FractionalIdeal::unit(f->minus_ring()), 3));
    }
    SUBCASE("Q(zeta_3), p=3, T={5}: mu_3 injects into the order-3 part") {
        auto f = make_field(3, {});
        auto r = oracle_ray_class_minus(f, 3, {5}, 1);
        REQUIRE(r.computable);
        // kappa = F_25, minus module of order 24/2^k...; 3-part killed by mu_3
        mpz_class t = r.coker_order;
        CHECK(!mpz_divisible_ui_p(t.get_mpz_t(), 3));
        CHECK(p_local_equal(*r.fitt_dual, FractionalIdeal::unit(f->minus_ring()), 3));
    }
    SUBCASE("Q(zeta_3), p=3, T={7}: split prime, diagonal mu image") {
        auto f = make_field(3, {});
        auto r = oracle_ray_class_minus(f, 3, {7}, 1);
        REQUIRE(r.computable);
        mpz_class t = r.coker_order;
        CHECK(!mpz_divisible_ui_p(t.get_mpz_t(), 3));
    }
    SUBCASE("Q(sqrt(-23)), p=3, T={5}: order argument gives (9)") {
        std::vector<long> squares;
        for (long a = 1; a < 23; ++a) squares.push_back(a * a % 23);
        auto f = make_field(23, squares);
        auto r = oracle_ray_class_minus(f, 3, {5}, 3);
        REQUIRE(r.computable);
        auto nine = FractionalIdeal::from_generators(
            f->minus_ring(), {RingElem::scalar(f->minus_ring(), 9)});
        CHECK(*r.fitt_dual == nine);
    }
    SUBCASE("report-only modes") {
        auto f = make_field(4, {});
        auto r1 = oracle_ray_class_minus(f, 3, {2}, 1);  // T-prime divides the modulus
        CHECK(!r1.computable);
        auto r2 = oracle_ray_class_minus(f, 3, {5}, 0);  // no curated data
        CHECK(!r2.computable);
        CHECK(r2.coker_order == 4);  // both sides still emitted
    }
}

TEST_CASE("every curated instance passes end to end") {
    for (const auto& inst : curated_instances()) {
        auto v = end_to_end_kurihara(inst);
        CAPTURE(inst.name);
        CAPTURE(v.status);
        CHECK(v.oracle_available);
        CHECK(v.pass);
    }
}

TEST_CASE("split T-prime with 19 = 1 mod 9 carries honest p-content") {
    const CuratedInstance* inst = find_curated("q3_p3_t19");
    REQUIRE(inst != nullptr);
    auto v = end_to_end_kurihara(*inst);
    REQUIRE(v.oracle_available);
    CHECK(v.pass);
    // both sides are (3) up to 3-units, not the unit ideal
    auto three = FractionalIdeal::from_generators(
        v.formula_side.ring(), {RingElem::scalar(v.formula_side.ring(), 3)});
    CHECK(p_local_equal(v.formula_side, three, 3));
    CHECK(!p_local_equal(v.formula_side, FractionalIdeal::unit(v.formula_side.ring()), 3));
}

TEST_CASE("L-value JSON round trip") {
    auto qi = make_field(4, {});
    LValue t = theta_for_field(qi, {2}, {5});
    auto j = lvalue_to_json(t);
    LValue back = lvalue_from_json(j);
    CHECK(back.value.coeffs() == t.value.coeffs());
    CHECK(back.s_finite == t.s_finite);
}

TEST_CASE("report JSON is deterministic and carries the schema") {
    const CuratedInstance* inst = find_curated("qi_p3_t5");
    REQUIRE(inst != nullptr);
    auto v1 = end_to_end_kurihara(*inst);
    auto v2 = end_to_end_kurihara(*inst);
    auto j1 = make_report("kurihara", {{"instance", inst->name}}, verdict_to_json(v1));
    auto j2 = make_report("kurihara", {{"instance", inst->name}}, verdict_to_json(v2));
    CHECK(j1.dump() == j2.dump());
    CHECK(j1["schema_version"] == 1);

    // theta JSON in the documented shape
    auto qi = make_field(4, {});
    LValue t = theta_for_field(qi, {2}, {5});
    auto tj = lvalue_to_json(t);
    CHECK(tj["coeffs"]["sigma_1"] == "-1");
    CHECK(tj["coeffs"]["sigma_3"] == "1");
    CHECK(tj["conductor"] == 4);
}
