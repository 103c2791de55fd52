#include <doctest.h>

#include "eqf/ritter_weiss.hpp"

using namespace eqf;

TEST_CASE("W module for unramified C2") {
    auto g = group_product({2});
    auto d = make_local_data(g, {}, 1);
    WModule w(d);
    CHECK(w.a(1) == 1);
    CHECK(w.a(0) == 2);
    // phi . w_phi = w_1 - w_phi
    auto act = w.action(1, 1);
    CHECK(act[0] == 1);
    CHECK(act[1] == -1);
}

TEST_CASE("W module for totally ramified C2") {
    auto g = group_product({2});
    auto d = make_local_data(g, {1}, 0);
    WModule w(d);
    CHECK(d.l_v() == 1);
    CHECK(w.a(0) == 1);
    CHECK(w.a(1) == 1);
    // w_i = (i - 1, 1), w_1 = (0, 1)
    CHECK(w.x_part(1)[1] == 1);
    CHECK(w.x_part(1)[0] == -1);
    CHECK(w.y_part(1)[0] == 1);
    CHECK(w.y_part(0)[0] == 1);
}

TEST_CASE("W module for C4 with inertia of order 2") {
    auto g = group_product({4});
    auto d = make_local_data(g, {g->idx_of({2})}, g->idx_of({1}));
    WModule w(d);
    CHECK(d.l_v() == 2);
    CHECK(w.a(g->idx_of({1})) == 1);
    CHECK(w.a(g->idx_of({2})) == 2);
    CHECK(w.a(g->idx_of({3})) == 1);
    CHECK(w.a(0) == 2);
}

TEST_CASE("iota is unimodular in unramified cases") {
    SUBCASE("C2") {
        auto g = group_product({2});
        WModule w(make_local_data(g, {}, 1));
        IntMat m = map_iota(w);
        // rows: iota(w_1) = 1 + phi, iota(w_phi) = phi
        CHECK(abs(det(m)) == 1);
    }
    SUBCASE("C3") {
        auto g = group_product({3});
        WModule w(make_local_data(g, {}, 1));
        CHECK(abs(det(map_iota(w))) == 1);
    }
    SUBCASE("trivial group") {
        auto g = group_product({});
        WModule w(make_local_data(g, {}, 0));
        IntMat m = map_iota(w);
        CHECK(m.rows() == 1);
        CHECK(abs(det(m)) == 1);
    }
    SUBCASE("ramified input rejected") {
        auto g = group_product({2});
        WModule w(make_local_data(g, {1}, 0));
        CHECK_THROWS_AS(map_iota(w), std::invalid_argument);
    }
}

TEST_CASE("map_f exactness") {
    SUBCASE("totally ramified C2: image (2, 1+i), cokernel Z/2") {
        auto g = group_product({2});
        WModule w(make_local_data(g, {1}, 0));
        auto r = map_f(w);
        CHECK(r.injective);
        CHECK(r.cokernel_order == 2);
        CHECK(r.stated_order == 2);
        CHECK(r.exact);
        // image lattice is (2, 1+i): f(w_i) = 2i, f(w_1) = 1+i
        IntMat h = hnf(r.matrix);
        IntMat expect(2, 2);
        expect.at(0, 0) = 1; expect.at(0, 1) = 1; expect.at(1, 1) = 2;
        CHECK(h == expect);
    }
    SUBCASE("unramified C2") {
        auto g = group_product({2});
        WModule w(make_local_data(g, {}, 1));
        auto r = map_f(w);
        CHECK(r.exact);
        // cokernel order = |Z[C2]/(1 - phi^{-1} + 1)| = |det| of 2-phi = 3
        CHECK(r.cokernel_order == 3);
    }
    SUBCASE("I_w = G_w = C2 x C2: cokernel Z/4") {
        auto g = group_product({2, 2});
        WModule w(make_local_data(g, {g->idx_of({1, 0}), g->idx_of({0, 1})}, 0));
        auto r = map_f(w);
        CHECK(r.exact);
        CHECK(r.cokernel_order == 4);
    }
}

TEST_CASE("rational generator certificates") {
    SUBCASE("unramified C2") {
        auto g = group_product({2});
        WModule w(make_local_data(g, {}, 1));
        auto r = rational_generator(w);
        CHECK(r.free_rank_one);
        CHECK(r.f_certificate);
        CHECK(r.j_certificate);
        auto rg = GroupRing::full(g);
        // j(gen) = 1 - phi^{-1} since e_I = 1 for trivial inertia
        CHECK(r.j_of_gen == RingElem::one(rg) - RingElem::of_group_elem(rg, 1));
    }
    SUBCASE("totally ramified C2: h_v = 1 + e_I") {
        auto g = group_product({2});
        WModule w(make_local_data(g, {1}, 0));
        auto r = rational_generator(w);
        CHECK(r.free_rank_one);
        CHECK(r.f_certificate);
        auto rg = GroupRing::full(g);
        Subgroup whole(g, {1});
        CHECK(r.h_v == RingElem::one(rg) + idempotent(rg, whole));
    }
    SUBCASE("trivial group: gen = (0,1), f(gen) = 1") {
        auto g = group_product({});
        WModule w(make_local_data(g, {}, 0));
        auto r = rational_generator(w);
        CHECK(r.free_rank_one);
        auto rg = GroupRing::full(g);
        CHECK(r.f_of_gen == RingElem::one(rg));
    }
}
