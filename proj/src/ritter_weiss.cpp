#include "eqf/ritter_weiss.hpp"

#include <stdexcept>

namespace eqf {

LocalData make_local_data(GroupPtr g_w, const std::vector<ElemIdx>& inertia_gens, ElemIdx phi) {
    LocalData d{g_w, Subgroup(g_w, inertia_gens), phi};
    // the class of phi must generate the cyclic quotient G_w/I_w
    long k = 1;
    ElemIdx pw = phi;
    while (!d.i_w.contains(pw)) {
        pw = g_w->mul(pw, phi);
        ++k;
    }
    if (static_cast<std::size_t>(k) * d.i_w.order() != g_w->order())
        throw std::invalid_argument("LocalData: G_w/I_w not cyclic generated by phi_w");
    return d;
}

WModule::WModule(LocalData data) : data_(std::move(data)) {
    const auto& g = data_.g_w;
    quot_ = quotient_map(g, data_.i_w);
    const auto& q = quot_.quotient;
    const long l = data_.l_v();
    if (static_cast<std::size_t>(l) != q->order())
        throw std::logic_error("WModule: quotient size mismatch");
    ElemIdx phibar = quot_.image[data_.phi_w];

    // a(g) with gbar = phibar^{a(g)}, 0 < a(g) <= l_v
    std::vector<long> dlog(q->order(), -1);
    ElemIdx pw = phibar;
    for (long i = 1; i <= l; ++i) {
        dlog[pw] = i;
        pw = q->mul(pw, phibar);
    }
    a_.resize(g->order());
    for (ElemIdx e = 0; e < g->order(); ++e) {
        a_[e] = dlog[quot_.image[e]];
        if (a_[e] <= 0) throw std::logic_error("WModule: phibar does not generate");
    }

    // defining condition of every basis pair: xbar = (1 - phibar^{-1}) y
    ElemIdx phibar_inv = q->inverse(phibar);
    for (ElemIdx e = 0; e < g->order(); ++e) {
        std::vector<mpz_class> lhs(q->order(), 0);
        ElemIdx ebar = quot_.image[e];
        lhs[ebar] += 1;
        lhs[0] -= 1;
        std::vector<mpz_class> y = y_part(e);
        std::vector<mpz_class> rhs(q->order(), 0);
        for (ElemIdx t = 0; t < q->order(); ++t) {
            if (y[t] == 0) continue;
            rhs[t] += y[t];
            rhs[q->mul(phibar_inv, t)] -= y[t];
        }
        if (lhs != rhs) throw std::logic_error("WModule: defining condition fails");
    }

    // action bookkeeping: a(g) + a(h) - a(gh) in {0, l_v}, and the action
    // formula holds componentwise on the pairs
    for (ElemIdx e = 0; e < g->order(); ++e)
        for (ElemIdx h = 0; h < g->order(); ++h) {
            long diff = a_[e] + a_[h] - a_[g->mul(e, h)];
            if (diff != 0 && diff != l) throw std::logic_error("WModule: a-value bookkeeping fails");
            // y-part of g.w_h vs w_{gh} - w_g + a_{g,h} w_1
            std::vector<mpz_class> lhs(q->order(), 0);
            auto yh = y_part(h);
            ElemIdx ebar = quot_.image[e];
            for (ElemIdx t = 0; t < q->order(); ++t)
                if (yh[t] != 0) lhs[q->mul(ebar, t)] += yh[t];
            std::vector<mpz_class> rhs(q->order(), 0);
            auto add = [&](const std::vector<mpz_class>& v, long s) {
                for (std::size_t t = 0; t < v.size(); ++t) rhs[t] += s * v[t];
            };
            add(y_part(g->mul(e, h)), 1);
            add(y_part(e), -1);
            add(y_part(0), diff / l);
            if (lhs != rhs) throw std::logic_error("WModule: action formula fails");
        }
}

long WModule::a_pair(ElemIdx g, ElemIdx h) const {
    return (a_[g] + a_[h] - a_[data_.g_w->mul(g, h)]) / data_.l_v();
}

std::vector<mpz_class> WModule::x_part(ElemIdx g) const {
    std::vector<mpz_class> x(data_.g_w->order(), 0);
    x[g] += 1;
    x[0] -= 1;
    return x;
}

std::vector<mpz_class> WModule::y_part(ElemIdx g) const {
    const auto& q = quot_.quotient;
    std::vector<mpz_class> y(q->order(), 0);
    ElemIdx phibar = quot_.image[data_.phi_w];
    ElemIdx pw = phibar;
    for (long i = 1; i <= a_[g]; ++i) {
        y[pw] += 1;
        pw = q->mul(pw, phibar);
    }
    return y;
}

std::vector<mpz_class> WModule::action(ElemIdx g, ElemIdx h) const {
    std::vector<mpz_class> v(data_.g_w->order(), 0);
    v[data_.g_w->mul(g, h)] += 1;
    v[g] -= 1;
    v[0] += a_pair(g, h);
    return v;
}

IntMat map_iota(const WModule& w) {
    if (w.data().i_w.order() != 1) throw std::invalid_argument("map_iota: ramified input");
    const auto& g = w.data().g_w;
    const auto& quot = w.quot();
    IntMat m(g->order(), g->order());
    for (ElemIdx e = 0; e < g->order(); ++e) {
        auto y = w.y_part(e);
        for (ElemIdx t = 0; t < quot.quotient->order(); ++t) m.at(e, quot.section[t]) = y[t];
    }
    return m;
}

MapFResult map_f(const WModule& w) {
    const auto& g = w.data().g_w;
    const auto& quot = w.quot();
    const auto& q = quot.quotient;
    const long e_i = static_cast<long>(w.data().i_w.order());
    const ElemIdx phi = w.data().phi_w;

    MapFResult out;
    out.matrix = IntMat(g->order(), g->order());
    for (ElemIdx e = 0; e < g->order(); ++e) {
        // x + N(I_w) ytilde with ytilde = sum_{i<=a(g)} phi^i lifted through phi
        std::vector<mpz_class> row(g->order(), 0);
        row[e] += 1;
        row[0] -= 1;
        ElemIdx pw = phi;
        for (long i = 1; i <= w.a(e); ++i) {
            for (ElemIdx s : w.data().i_w.elems()) row[g->mul(s, pw)] += 1;
            pw = g->mul(pw, phi);
        }
        for (ElemIdx t = 0; t < g->order(); ++t) out.matrix.at(e, t) = row[t];
    }
    mpz_class d = det(out.matrix);
    out.injective = d != 0;
    out.cokernel_order = abs(d);

    // stated quotient Z[G_w/I_w]/(1 - phibar^{-1} + |I_w|)
    ElemIdx phibar_inv = q->inverse(quot.image[phi]);
    IntMat rel(q->order(), q->order());
    for (ElemIdx t = 0; t < q->order(); ++t) {
        rel.at(t, t) += 1 + e_i;
        rel.at(t, q->mul(phibar_inv, t)) -= 1;
    }
    out.stated_order = abs(det(rel));

    // the natural projection Z[G_w] -> Z[G_w/I_w] carries im(f) into the
    // stated relation lattice, hence induces the claimed isomorphism
    IntMat rel_h = hnf(rel);
    out.natural_projection_ok = true;
    for (ElemIdx e = 0; e < g->order(); ++e) {
        std::vector<mpz_class> proj(q->order(), 0);
        for (ElemIdx t = 0; t < g->order(); ++t) proj[quot.image[t]] += out.matrix.at(e, t);
        if (!solve_in_hnf(rel_h, proj)) {
            out.natural_projection_ok = false;
            break;
        }
    }
    out.exact = out.injective && out.cokernel_order == out.stated_order && out.natural_projection_ok;
    return out;
}

RationalGeneratorResult rational_generator(const WModule& w) {
    const auto& g = w.data().g_w;
    const auto& quot = w.quot();
    const auto& q = quot.quotient;
    RingPtr rg = GroupRing::full(g);
    const std::size_t n = g->order(), l = q->order();

    RingElem one = RingElem::one(rg);
    RingElem e_i = idempotent(rg, w.data().i_w);
    RingElem phi_inv = RingElem::of_group_elem(rg, g->inverse(w.data().phi_w));
    RingElem x0 = one - e_i * phi_inv;

    // pair coordinates of alpha * gen for alpha = each basis element:
    // (alpha x0, alphabar) stacked as a column of length n + l
    std::vector<std::vector<mpq_class>> m(n + l, std::vector<mpq_class>(n, 0));
    for (ElemIdx b = 0; b < n; ++b) {
        RingElem col = RingElem::of_group_elem(rg, b) * x0;
        for (std::size_t i = 0; i < n; ++i) m[i][b] = col.coeff(i);
        m[n + quot.image[b]][b] += 1;
    }

    RationalGeneratorResult out;
    out.free_rank_one = true;
    out.coordinates.resize(n, RingElem::zero(rg));
    for (ElemIdx e = 0; e < n; ++e) {
        std::vector<mpq_class> rhs(n + l, 0);
        auto x = w.x_part(e);
        auto y = w.y_part(e);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = mpq_class(x[i]);
        for (std::size_t i = 0; i < l; ++i) rhs[n + i] = mpq_class(y[i]);
        auto sol = solve_rational(m, rhs);
        if (!sol) {
            out.free_rank_one = false;
            continue;
        }
        out.coordinates[e] = RingElem(rg, *sol);
    }

    RingElem n_i = norm_element(rg, w.data().i_w);
    out.f_of_gen = x0 + n_i;  // f(x0, 1) = x0 + N(I) * lift(1)
    out.h_v = one - e_i * (phi_inv - RingElem::scalar(rg, static_cast<long>(w.data().i_w.order())));
    out.f_certificate = out.f_of_gen == out.h_v;
    out.j_of_gen = x0;
    out.j_certificate = out.j_of_gen == one - e_i * phi_inv;
    return out;
}

}  // namespace eqf
