#include <doctest.h>

#include <random>

#include "eqf/ideal.hpp"

using namespace eqf;

namespace {

GroupPtr c2_group() { return group_product({2}); }

RingElem elem(const RingPtr& r, ElemIdx g) { return RingElem::of_group_elem(r, g); }

}  // namespace

TEST_CASE("ideal canonical forms in Z[C2]") {
    auto r = GroupRing::full(c2_group());
    RingElem one = RingElem::one(r), c = elem(r, 1);
    auto i = FractionalIdeal::from_generators(r, {RingElem::scalar(r, 2), one + c});
    // lattice HNF {(1,1),(0,2)} in basis (1, c)
    IntMat expect(2, 2);
    expect.at(0, 0) = 1; expect.at(0, 1) = 1; expect.at(1, 1) = 2;
    CHECK(i.lattice() == expect);
    CHECK(i.scale() == 1);

    CHECK(FractionalIdeal::from_generators(r, {one}) == FractionalIdeal::unit(r));
    CHECK(FractionalIdeal::from_generators(r, {one + c, c + one}) ==
          FractionalIdeal::from_generators(r, {one + c}));
    CHECK(FractionalIdeal::from_generators(r, {}).is_zero());
}

TEST_CASE("ideal sum and product") {
    auto r = GroupRing::full(c2_group());
    RingElem one = RingElem::one(r), c = elem(r, 1);
    auto a = FractionalIdeal::from_generators(r, {one + c});
    auto b = FractionalIdeal::from_generators(r, {one - c});
    CHECK((a * b).is_zero());

    auto two = FractionalIdeal::from_generators(r, {RingElem::scalar(r, 2)});
    auto three = FractionalIdeal::from_generators(r, {RingElem::scalar(r, 3)});
    CHECK(two * three == FractionalIdeal::from_generators(r, {RingElem::scalar(r, 6)}));

    auto i = FractionalIdeal::from_generators(r, {RingElem::scalar(r, 2), one + c});
    auto s = i + b;
    IntMat expect(2, 2);
    expect.at(0, 0) = 1; expect.at(0, 1) = 1; expect.at(1, 1) = 2;
    CHECK(s.lattice() == expect);
}

TEST_CASE("membership") {
    auto r = GroupRing::full(c2_group());
    RingElem one = RingElem::one(r), c = elem(r, 1);
    auto i = FractionalIdeal::from_generators(r, {RingElem::scalar(r, 2), one + c});
    CHECK(i.contains(one + c));
    CHECK(!i.contains(one));
    CHECK(i.contains(RingElem::zero(r)));
}

TEST_CASE("p-local equality") {
    auto r = GroupRing::full(c2_group());
    RingElem one = RingElem::one(r), c = elem(r, 1);
    auto i = FractionalIdeal::from_generators(r, {RingElem::scalar(r, 2), one + c});
    auto j = FractionalIdeal::from_generators(r, {RingElem::scalar(r, 4), one + c});
    CHECK(p_local_equal(i, j, 3));
    CHECK(i != j);
    CHECK(p_local_equal(i, i, 5));
    CHECK_THROWS_AS(p_local_equal(i, j, 2), std::invalid_argument);
    auto five_i = i.scaled(5);
    CHECK(!p_local_equal(i, five_i, 5));
    CHECK(p_local_equal(i, five_i, 3));
}

TEST_CASE("minus ring ideals normalize 2-units away") {
    auto g = std::make_shared<FiniteAbelianGroup>(std::vector<long>{2});
    g->set_conjugation(1);
    GroupPtr gp = g;
    auto mr = GroupRing::minus(gp);
    // (-2) is a unit ideal in the minus ring (2 invertible)
    auto a = FractionalIdeal::from_generators(mr, {RingElem::scalar(mr, -2)});
    CHECK(a == FractionalIdeal::unit(mr));
    auto b = FractionalIdeal::from_generators(mr, {RingElem::scalar(mr, 18)});
    auto nine = FractionalIdeal::from_generators(mr, {RingElem::scalar(mr, 9)});
    CHECK(b == nine);

    // C_4 with c = g^2: minus ring is Z[i]; (1+g) becomes a unit ideal
    auto g4 = std::make_shared<FiniteAbelianGroup>(std::vector<long>{4});
    g4->set_conjugation(2);
    GroupPtr gp4 = g4;
    auto m4 = GroupRing::minus(gp4);
    auto onepg = FractionalIdeal::from_generators(m4, {RingElem::one(m4) + RingElem::of_group_elem(m4, 1)});
    CHECK(onepg == FractionalIdeal::unit(m4));
}

TEST_CASE("canonical form independent of generator order; product associative; G-stable") {
    auto g = group_product({2, 4});
    auto r = GroupRing::full(g);
    std::mt19937_64 rng(29);
    std::uniform_int_distribution<int> d(-3, 3);
    auto rand_elem = [&]() {
        RingElem x(r);
        for (std::size_t i = 0; i < g->order(); ++i) x.coeff(i) = d(rng);
        return x;
    };
    for (int it = 0; it < 15; ++it) {
        RingElem a = rand_elem(), b = rand_elem(), c = rand_elem();
        auto i1 = FractionalIdeal::from_generators(r, {a, b, c});
        auto i2 = FractionalIdeal::from_generators(r, {c, a, b, a});
        CHECK(i1 == i2);

        auto x = FractionalIdeal::from_generators(r, {a});
        auto y = FractionalIdeal::from_generators(r, {b});
        auto z = FractionalIdeal::from_generators(r, {c});
        CHECK((x * y) * z == x * (y * z));
        CHECK(x * y == y * x);
        CHECK(x * FractionalIdeal::unit(r) == x);

        // G-stability of the canonical lattice
        for (ElemIdx e = 0; e < g->order(); ++e) {
            auto translated = FractionalIdeal::from_generators(r, {a * RingElem::of_group_elem(r, e)});
            CHECK(translated == x);
        }
    }
}

TEST_CASE("global equality implies p-local for all odd p; equivalence relation") {
    auto g = group_product({2, 4});
    auto r = GroupRing::full(g);
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> d(-2, 2);
    auto rand_ideal = [&]() {
        RingElem a(r), b(r);
        for (std::size_t i = 0; i < g->order(); ++i) { a.coeff(i) = d(rng); b.coeff(i) = d(rng); }
        return FractionalIdeal::from_generators(r, {a, b});
    };
    for (int it = 0; it < 10; ++it) {
        auto i = rand_ideal();
        auto j = rand_ideal();
        auto k = rand_ideal();
        for (long p : {3L, 5L, 7L}) {
            if (i == j) CHECK(p_local_equal(i, j, p));
            CHECK(p_local_equal(i, i, p));
            if (p_local_equal(i, j, p) && p_local_equal(j, k, p)) CHECK(p_local_equal(i, k, p));
            if (p_local_equal(i, j, p)) CHECK(p_local_equal(j, i, p));
        }
    }
}

TEST_CASE("transition image with classification") {
    auto c4 = group_product({4});
    auto q = quotient_map(c4, subgroup_from_generators(c4, {c4->idx_of({2})}));
    auto r4 = GroupRing::full(c4);
    auto r2 = GroupRing::full(q.quotient);

    Subgroup whole4(c4, {1});
    Subgroup whole2(q.quotient, {1});
    auto i = FractionalIdeal::from_generators(r4, {norm_element(r4, whole4)});
    auto target = FractionalIdeal::from_generators(r2, {norm_element(r2, whole2)});
    auto ti = transition_image(q, r4, r2, i, &target, 2);
    CHECK(ti.image == FractionalIdeal::from_generators(r2, {norm_element(r2, whole2) * mpq_class(2)}));
    REQUIRE(ti.alignment.size() == 1);
    CHECK(ti.alignment[0] == GenAlignment::Bad);

    auto u = FractionalIdeal::unit(r4);
    auto ut = FractionalIdeal::unit(r2);
    auto tu = transition_image(q, r4, r2, u, &ut, 2);
    CHECK(tu.image == ut);
    CHECK(tu.alignment[0] == GenAlignment::Good);

    auto c9 = group_product({9});
    auto q9 = quotient_map(c9, subgroup_from_generators(c9, {c9->idx_of({3})}));
    auto r9 = GroupRing::full(c9);
    auto r3 = GroupRing::full(q9.quotient);
    auto gm1 = FractionalIdeal::from_generators(
        r9, {RingElem::of_group_elem(r9, 1) - RingElem::one(r9)});
    auto gm1_t = FractionalIdeal::from_generators(
        r3, {RingElem::of_group_elem(r3, q9.image[1]) - RingElem::one(r3)});
    auto t9 = transition_image(q9, r9, r3, gm1, &gm1_t, 3);
    CHECK(t9.image == gm1_t);
    CHECK(t9.alignment[0] == GenAlignment::Good);
}
