#include "eqf/tower.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace eqf {

namespace {

std::vector<long> modulus_primes(long f) {
    std::vector<long> out;
    for (long p = 2; p <= f; ++p)
        if (f % p == 0) {
            out.push_back(p);
            while (f % p == 0) f /= p;
        }
    return out;
}

// Elements of G_n that admit a lift to G_{n+1} of the same order -- the
// layer-n shadow of the torsion subgroup of the projective limit.
Subgroup stable_torsion(const GroupPtr& lo, const GroupPtr& hi, const QuotientMap& pi,
                        const std::vector<ElemIdx>& restrict_to) {
    std::vector<char> ok(lo->order(), 0);
    for (ElemIdx y = 0; y < hi->order(); ++y) {
        ElemIdx x = pi.image[y];
        if (hi->order_of(y) == lo->order_of(x)) ok[x] = 1;
    }
    std::vector<ElemIdx> gens;
    for (ElemIdx x : restrict_to)
        if (ok[x]) gens.push_back(x);
    Subgroup t(lo, gens);
    for (ElemIdx e : t.elems())
        if (!ok[e] || !std::binary_search(restrict_to.begin(), restrict_to.end(), e))
            throw std::logic_error("stable_torsion: detected set is not a subgroup");
    return t;
}

Subgroup map_subgroup(const QuotientMap& pi, const GroupPtr& target, const Subgroup& s) {
    std::vector<ElemIdx> gens;
    for (ElemIdx e : s.elems()) gens.push_back(pi.image[e]);
    return Subgroup(target, gens);
}

std::vector<ElemIdx> decomposition_gens(const PlaceData& place, int n) {
    std::vector<ElemIdx> gens = place.torsion_gens[n];
    if (place.above_p) gens.push_back(place.growing_gen[n]);
    gens.push_back(place.layers[n].frobenius);
    return gens;
}

}  // namespace

const PlaceData& TowerSpec::place(long v) const {
    for (const auto& pd : places)
        if (pd.v == v) return pd;
    throw std::invalid_argument("tower: no data for place " + std::to_string(v));
}

namespace {

PlaceData build_place(long v, long p, int depth, const std::vector<FieldPtr>& layers,
                      const std::vector<QuotientMap>& transitions) {
    // layers/transitions include one probe layer beyond `depth`
    PlaceData pd;
    pd.v = v;
    pd.above_p = (v == p);
    const int top = depth + 1;
    for (int n = 0; n <= top; ++n) {
        PlaceLayer pl{layers[n]->inertia(v), layers[n]->frobenius(v), Subgroup(layers[n]->galois(), {})};
        std::vector<ElemIdx> dg = pl.inertia.gens();
        dg.push_back(pl.frobenius);
        pl.decomposition = Subgroup(layers[n]->galois(), dg);
        pd.layers.push_back(std::move(pl));
    }
    // transition coherence of inertia and Frobenius
    for (int n = 0; n < top; ++n) {
        const auto& pi = transitions[n];
        if (pi.image[pd.layers[n + 1].frobenius] != pd.layers[n].frobenius)
            throw std::logic_error("tower: Frobenius sequence not coherent at " + std::to_string(v));
        Subgroup img = map_subgroup(pi, layers[n]->galois(), pd.layers[n + 1].inertia);
        if (!(img == pd.layers[n].inertia))
            throw std::logic_error("tower: inertia does not restrict onto inertia at " + std::to_string(v));
    }

    // stable torsion of the inertia at the probe level, pushed down coherently
    Subgroup tor_top = stable_torsion(layers[top - 1]->galois(), layers[top]->galois(),
                                      transitions[top - 1], pd.layers[top - 1].inertia.elems());
    auto decomp = cyclic_decomposition(tor_top);
    std::vector<std::vector<ElemIdx>> tg(top + 1);
    for (const auto& c : decomp) {
        pd.torsion_orders.push_back(c.order);
        tg[top - 1].push_back(c.gen);
    }
    for (int n = top - 1; n > 0; --n) {
        tg[n - 1].clear();
        for (ElemIdx e : tg[n]) tg[n - 1].push_back(transitions[n - 1].image[e]);
    }
    pd.torsion_gens = std::move(tg);

    if (pd.above_p) {
        // growing cyclic part: generator of the p-Sylow of the probe inertia
        const auto& g_top = layers[top]->galois();
        ElemIdx best = 0;
        long best_ord = 1;
        long sylow_count = 0;
        for (ElemIdx e : pd.layers[top].inertia.elems()) {
            long o = g_top->order_of(e), oo = o;
            while (oo % p == 0) oo /= p;
            if (oo != 1) continue;
            ++sylow_count;
            if (o > best_ord) { best_ord = o; best = e; }
        }
        if (sylow_count != best_ord)
            throw std::logic_error("tower: p-part of the inertia above p is not cyclic");
        std::vector<ElemIdx> gg(top + 1);
        gg[top] = best;
        for (int n = top; n > 0; --n) gg[n - 1] = transitions[n - 1].image[gg[n]];
        pd.growing_gen = std::move(gg);
        // n0: from here on |I| multiplies by p and I = torsion x <g_s>
        int n0 = top;
        for (int n = top; n-- > 0;) {
            bool ok = pd.layers[n + 1].inertia.order() == pd.layers[n].inertia.order() * p;
            std::vector<ElemIdx> gens = pd.torsion_gens[n];
            long torsion_order = 1;
            for (long o : pd.torsion_orders) torsion_order *= o;
            gens.push_back(pd.growing_gen[n]);
            Subgroup prod(layers[n]->galois(), gens);
            long expect = torsion_order * layers[n]->galois()->order_of(pd.growing_gen[n]);
            ok = ok && static_cast<long>(prod.order()) == expect &&
                 prod.order() == pd.layers[n].inertia.order();
            if (!ok) break;
            n0 = n;
        }
        pd.n0 = n0;
    } else {
        for (int n = 0; n < top; ++n)
            if (pd.layers[n + 1].inertia.order() != pd.layers[n].inertia.order())
                throw std::logic_error("tower: inertia away from p is not constant");
        // the canonical Frobenius must have unbounded order; its Gamma-part
        // starts gaining a factor p per layer at t = v_p(v^d - 1), d the
        // order of v mod p, and the empirical layer orders must agree with
        // that once the truncation reaches t
        for (int n = 0; n <= top; ++n)
            pd.frobenius_orders.push_back(layers[n]->galois()->order_of(pd.layers[n].frobenius));
        int growth_from = top;
        for (int n = top; n-- > 0;) {
            if (pd.frobenius_orders[n + 1] != p * pd.frobenius_orders[n]) break;
            growth_from = n;
        }
        long d = 1;
        {
            long x = v % p;
            while (x != 1) { x = x * (v % p) % p; ++d; }
        }
        mpz_class w;
        mpz_ui_pow_ui(w.get_mpz_t(), static_cast<unsigned long>(v), static_cast<unsigned long>(d));
        w -= 1;
        int t = 0;
        while (mpz_divisible_ui_p(w.get_mpz_t(), static_cast<unsigned long>(p))) {
            mpz_divexact_ui(w.get_mpz_t(), w.get_mpz_t(), static_cast<unsigned long>(p));
            ++t;
        }
        if (growth_from == top && top >= t && pd.layers[top].inertia.order() > 1)
            throw std::logic_error("tower: canonical Frobenius at " + std::to_string(v) +
                                   " shows no order growth past its certified threshold");
        pd.n0 = growth_from == top ? t : growth_from;
    }
    return pd;
}

}  // namespace

TowerSpec derive_tower(const FieldPtr& base_in, long p, int depth,
                       const std::vector<long>& extra_places, const std::set<long>& s_finite,
                       const std::set<long>& t_set, const std::set<long>& s_prime) {
    if (p == 2) throw std::invalid_argument("derive_tower: p must be odd");
    if (t_set.count(p)) throw std::invalid_argument("derive_tower: T meets S_p");
    for (long v : s_finite)
        if (t_set.count(v)) throw std::invalid_argument("derive_tower: S and T not disjoint");

    FieldPtr base = primitive_field(base_in);
    if (static_cast<long>(base->degree()) % p == 0) {
        // re-base so that the Galois tower splits as (torsion) x (cyclic p-tower):
        // compute a deep layer, split off a cyclic complement of the stable
        // torsion, and restart from its fixed field.
        int probe = depth + 1;
        FieldPtr lo = layer_field(base, p, probe);
        FieldPtr hi = layer_field(base, p, probe + 1);
        QuotientMap pi = layer_transition(hi, lo);
        std::vector<ElemIdx> all;
        for (ElemIdx e = 0; e < lo->degree(); ++e) all.push_back(e);
        Subgroup tor = stable_torsion(lo->galois(), hi->galois(), pi, all);
        const long a_order = static_cast<long>(lo->degree() / tor.order());
        ElemIdx pick = SIZE_MAX;
        for (ElemIdx e = 0; e < lo->degree(); ++e) {
            if (lo->galois()->order_of(e) != a_order) continue;
            Subgroup cand(lo->galois(), {e});
            bool trivial_meet = true;
            for (ElemIdx x : cand.elems())
                if (x != 0 && tor.contains(x)) trivial_meet = false;
            if (trivial_meet) { pick = e; break; }
        }
        if (pick == SIZE_MAX)
            throw std::logic_error("derive_tower: no cyclic complement found; increase depth");
        Subgroup a(lo->galois(), {pick});
        std::vector<long> fix_gens;
        for (long x = 1; x < lo->conductor(); ++x) {
            if (std::gcd(x, lo->conductor()) != 1) continue;
            if (a.contains(lo->class_of_residue(x))) fix_gens.push_back(x);
        }
        base = primitive_field(make_field(lo->conductor(), fix_gens));
        if (static_cast<long>(base->degree()) % p == 0 &&
            layer_field(base, p, 1)->degree() != base->degree() * static_cast<std::size_t>(p))
            throw std::logic_error("derive_tower: re-basing failed");
    }

    TowerSpec tw;
    tw.base = base;
    tw.p = p;
    tw.depth = depth;
    tw.s_finite = s_finite;
    tw.t_set = t_set;
    tw.s_prime = s_prime;

    std::vector<FieldPtr> layers;
    std::vector<QuotientMap> transitions;
    for (int n = 0; n <= depth + 1; ++n) layers.push_back(layer_field(base, p, n));
    for (int n = 0; n <= depth; ++n) transitions.push_back(layer_transition(layers[n + 1], layers[n]));
    for (int n = 0; n <= depth + 1; ++n) {
        std::size_t expect = base->degree();
        for (int i = 0; i < n; ++i) expect *= static_cast<std::size_t>(p);
        if (layers[n]->degree() != expect)
            throw std::logic_error("derive_tower: layer degrees do not split as |G| p^n");
    }
    // the prime-to-p part is the stable base: every transition restricts to
    // an isomorphism on it
    for (int n = 0; n <= depth; ++n) {
        std::vector<ElemIdx> hall_hi;
        for (ElemIdx e = 0; e < layers[n + 1]->degree(); ++e)
            if (layers[n + 1]->galois()->order_of(e) % p != 0) hall_hi.push_back(e);
        std::set<ElemIdx> image;
        for (ElemIdx e : hall_hi) image.insert(transitions[n].image[e]);
        std::size_t hall_lo = 0;
        for (ElemIdx e = 0; e < layers[n]->degree(); ++e)
            if (layers[n]->galois()->order_of(e) % p != 0) ++hall_lo;
        if (image.size() != hall_hi.size() || hall_hi.size() != hall_lo)
            throw std::logic_error("derive_tower: base part does not restrict identically");
    }

    std::set<long> place_set(extra_places.begin(), extra_places.end());
    for (long v : modulus_primes(base->conductor())) place_set.insert(v);
    place_set.insert(p);
    for (long v : t_set) place_set.insert(v);
    for (long v : s_prime) place_set.insert(v);

    tw.n0 = 0;
    for (long v : place_set) {
        tw.places.push_back(build_place(v, p, depth, layers, transitions));
        tw.n0 = std::max(tw.n0, tw.places.back().n0);
    }
    tw.layers.assign(layers.begin(), layers.begin() + depth + 1);
    tw.transitions.assign(transitions.begin(), transitions.begin() + depth);
    return tw;
}

namespace {

std::vector<std::vector<std::size_t>> combinations(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        out.push_back(idx);
        if (k == 0) break;
        std::size_t t = k;
        bool done = true;
        while (t > 0) {
            --t;
            if (idx[t] + (k - t) < n) {
                ++idx[t];
                for (std::size_t u = t + 1; u < k; ++u) idx[u] = idx[u - 1] + 1;
                done = false;
                break;
            }
        }
        if (done) break;
    }
    return out;
}

std::vector<std::vector<std::size_t>> multisets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k == 0) {
        out.push_back({});
        return out;
    }
    if (n == 0) return out;
    std::vector<std::size_t> idx(k, 0);
    for (;;) {
        out.push_back(idx);
        std::size_t t = k;
        bool done = true;
        while (t > 0) {
            --t;
            if (idx[t] + 1 < n) {
                std::size_t v = idx[t] + 1;
                for (std::size_t u = t; u < k; ++u) idx[u] = v;
                done = false;
                break;
            }
        }
        if (done) break;
    }
    return out;
}

}  // namespace

FractionalIdeal tilde_j_ideal(const TowerSpec& tower, long v, int n) {
    const PlaceData& pd = tower.place(v);
    if (!pd.above_p) throw std::invalid_argument("tilde_j_ideal: place not above p");
    RingPtr r = tower.minus_ring(n);
    const auto& g = tower.layers[n]->galois();

    const std::size_t s_minus_1 = pd.torsion_gens[n].size();
    const std::size_t s = s_minus_1 + 1;
    std::vector<RingElem> norms;
    for (ElemIdx e : pd.torsion_gens[n]) norms.push_back(norm_element(r, Subgroup(g, {e})));

    // zero generators (from not-yet-grown layer data) are kept so generator
    // lists stay positionally aligned across layers
    std::vector<ElemIdx> dgens = decomposition_gens(pd, n);
    std::vector<RingElem> deltas;
    for (ElemIdx e : dgens) deltas.push_back(RingElem::of_group_elem(r, e) - RingElem::one(r));

    std::vector<RingElem> gens;
    for (std::size_t i = 1; i <= s; ++i)
        for (const auto& lam : combinations(s_minus_1, s - i)) {
            RingElem z = RingElem::one(r);
            for (std::size_t l : lam) z = z * norms[l];
            for (const auto& d : deltas) gens.push_back(z * d);
        }
    return FractionalIdeal::from_generators(r, std::move(gens));
}

FractionalIdeal q_v_ideal(const TowerSpec& tower, long v, int n) {
    const PlaceData& pd = tower.place(v);
    if (pd.above_p) throw std::invalid_argument("q_v_ideal: place above p");
    RingPtr r = tower.minus_ring(n);
    const auto& g = tower.layers[n]->galois();

    const std::size_t s = pd.torsion_gens[n].size();
    std::vector<RingElem> norms;
    for (ElemIdx e : pd.torsion_gens[n]) norms.push_back(norm_element(r, Subgroup(g, {e})));

    std::vector<ElemIdx> dgens = decomposition_gens(pd, n);
    std::vector<RingElem> deltas;
    for (ElemIdx e : dgens) deltas.push_back(RingElem::of_group_elem(r, e) - RingElem::one(r));

    std::vector<RingElem> jgens;
    for (std::size_t i = 1; i <= s; ++i)
        for (const auto& lam : combinations(s, s - i)) {
            RingElem z = RingElem::one(r);
            for (std::size_t l : lam) z = z * norms[l];
            for (const auto& mu : multisets(deltas.size(), i - 1)) {
                RingElem e = z;
                for (std::size_t m : mu) e = e * deltas[m];
                jgens.push_back(e);
            }
        }

    const Subgroup& i_sub = pd.layers[n].inertia;
    RingElem n_i = norm_element(r, i_sub);
    RingElem one_minus =
        RingElem::one(r) -
        idempotent(r, i_sub) *
            RingElem::of_group_elem(r, g->inverse(pd.layers[n].frobenius));
    std::vector<RingElem> gens{n_i};
    for (const auto& j : jgens) gens.push_back(one_minus * j);
    return FractionalIdeal::from_generators(r, std::move(gens));
}

namespace {

std::vector<Subgroup> subgroups_within(const GroupPtr& g, const Subgroup& ambient) {
    std::vector<Subgroup> out;
    std::vector<std::vector<ElemIdx>> seen;
    std::vector<Subgroup> frontier{Subgroup(g, {})};
    seen.push_back(frontier[0].elems());
    out.push_back(frontier[0]);
    while (!frontier.empty()) {
        std::vector<Subgroup> next;
        for (const auto& s : frontier)
            for (ElemIdx e : ambient.elems()) {
                if (s.contains(e)) continue;
                std::vector<ElemIdx> gens = s.gens();
                gens.push_back(e);
                Subgroup bigger(g, gens);
                if (std::find(seen.begin(), seen.end(), bigger.elems()) == seen.end()) {
                    seen.push_back(bigger.elems());
                    out.push_back(bigger);
                    next.push_back(bigger);
                }
            }
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elems() < b.elems();
    });
    return out;
}

long rank_at(const std::vector<long>& invariants, long ell) {
    long r = 0;
    for (long d : invariants)
        if (d % ell == 0) ++r;
    return r;
}

}  // namespace

RvResult r_v_ideal(const TowerSpec& tower, long v, int n, std::size_t max_group) {
    const PlaceData& pd = tower.place(v);
    RingPtr r = tower.minus_ring(n);
    const auto& g = tower.layers[n]->galois();
    const Subgroup& gv = pd.layers[n].decomposition;
    if (gv.order() > max_group)
        throw std::length_error("r_v_ideal: decomposition group exceeds the enumeration bound");

    // stable torsion of the decomposition group at this layer
    Subgroup tor = [&] {
        if (n + 1 <= tower.depth) {
            return stable_torsion(g, tower.layers[n + 1]->galois(), tower.transitions[n],
                                  gv.elems());
        }
        // no layer above inside the truncation: fall back to pushing the
        // known torsion generators of inertia + the prime-to-p Frobenius part
        std::vector<ElemIdx> gens = pd.torsion_gens[n];
        long fo = g->order_of(pd.layers[n].frobenius);
        long fp = fo;
        while (fp % tower.p == 0) fp /= tower.p;
        gens.push_back(g->pow(pd.layers[n].frobenius, fo / fp));
        return Subgroup(g, gens);
    }();

    RvResult out;
    std::vector<RingElem> honest_gens;
    auto subs = subgroups_within(g, tor);
    for (const auto& a : subs) {
        // complements B of A inside G_v containing the growing part:
        // B = B_T x <b> with T = A x B_T
        for (const auto& bt : subs) {
            // direct complement inside the torsion
            if (a.order() * bt.order() != tor.order()) continue;
            bool meet_trivial = true;
            for (ElemIdx e : bt.elems())
                if (e != 0 && a.contains(e)) meet_trivial = false;
            if (!meet_trivial) continue;
            // pro-cyclic completions: b ranges over elements with
            // <B_T, b> a complement of A in G_v
            std::vector<std::vector<ElemIdx>> b_seen;
            for (ElemIdx b : gv.elems()) {
                std::vector<ElemIdx> bgens = bt.gens();
                bgens.push_back(b);
                Subgroup bsub(g, bgens);
                if (bsub.order() * a.order() != gv.order()) continue;
                bool ok = true;
                for (ElemIdx e : bsub.elems())
                    if (e != 0 && a.contains(e)) ok = false;
                if (!ok) continue;
                if (std::find(b_seen.begin(), b_seen.end(), bsub.elems()) != b_seen.end()) continue;
                b_seen.push_back(bsub.elems());

                RvContribution contrib;
                contrib.a_gens = a.gens();
                // limit invariants of B: stable torsion of B x the Z_p line
                std::vector<ElemIdx> btor_gens;
                for (ElemIdx e : bsub.elems())
                    if (tor.contains(e)) btor_gens.push_back(e);
                Subgroup btor(g, btor_gens);
                auto dec = cyclic_decomposition(btor);
                std::vector<long> invs;
                for (const auto& c : dec) invs.push_back(c.order);
                long rb = 1;
                for (long ell = 2; ell <= (invs.empty() ? 1 : invs.back()); ++ell) {
                    if (ell == tower.p) continue;
                    rb = std::max(rb, rank_at(invs, ell));
                }
                rb = std::max(rb, rank_at(invs, tower.p) + 1);
                contrib.r_b = rb;
                std::ostringstream os;
                os << "B_T of order " << btor.order() << " x procyclic";
                contrib.b_desc = os.str();
                RingElem n_a = norm_element(r, a);
                if (rb >= 2) {
                    FractionalIdeal delta_pow = FractionalIdeal::unit(r);
                    std::vector<RingElem> dgens;
                    for (ElemIdx e : bsub.gens())
                        if (e != 0) dgens.push_back(RingElem::of_group_elem(r, e) - RingElem::one(r));
                    FractionalIdeal delta = FractionalIdeal::from_generators(r, dgens);
                    for (long t = 0; t < rb - 2; ++t) delta_pow = delta_pow * delta;
                    contrib.honest = FractionalIdeal::from_generators(r, {n_a}) * delta_pow;
                    contrib.symbolic = false;
                    for (const auto& hg : contrib.honest->generators()) honest_gens.push_back(hg);
                } else {
                    contrib.symbolic = true;
                    // denominator b - 1 for a maximal-order element of B
                    ElemIdx bmax = 0;
                    for (ElemIdx e : bsub.elems())
                        if (g->order_of(e) > g->order_of(bmax)) bmax = e;
                    contrib.denominator = RingElem::of_group_elem(r, bmax) - RingElem::one(r);
                }
                out.contributions.push_back(std::move(contrib));
            }
        }
    }
    out.honest_join = FractionalIdeal::from_generators(r, honest_gens);
    out.fully_honest = true;
    for (const auto& c : out.contributions)
        if (c.symbolic) out.fully_honest = false;
    return out;
}

FractionalIdeal kurihara_rhs(const TowerSpec& tower, int n, bool limit_form) {
    const FieldPtr& layer = tower.layers[n];
    if (!mu_pT_trivial(layer, tower.p, tower.t_set))
        throw std::domain_error("kurihara_rhs: mu_p^T is not trivial at layer " + std::to_string(n));
    for (long v : tower.t_set)
        if (v == tower.p)
            throw std::domain_error("kurihara_rhs: T meets S_p");
    RingPtr r = tower.minus_ring(n);

    std::set<long> s_theta;
    if (limit_form) s_theta.insert(tower.p);
    LValue theta = theta_for_field(layer, s_theta, tower.t_set);
    FractionalIdeal acc = FractionalIdeal::from_generators(r, {theta.minus_part()});

    for (const auto& pd : tower.places) {
        if (tower.t_set.count(pd.v)) continue;
        if (limit_form && pd.above_p) continue;
        if (pd.layers[n].inertia.order() == 1) continue;  // unramified at this layer
        RingElem n_i = norm_element(r, pd.layers[n].inertia);
        RingElem one_minus =
            RingElem::one(r) -
            idempotent(r, pd.layers[n].inertia) *
                RingElem::of_group_elem(r, layer->galois()->inverse(pd.layers[n].frobenius));
        acc = acc * FractionalIdeal::from_generators(r, {n_i, one_minus});
    }
    return acc;
}

MainRhsResult main_rhs(const TowerSpec& tower, int n) {
    if (tower.t_set.empty())
        throw std::domain_error("main_rhs: T is always assumed to be nonempty");
    const FieldPtr& layer = tower.layers[n];
    RingPtr r = tower.minus_ring(n);

    // ramified places of the tower
    std::set<long> s_ram;
    for (const auto& pd : tower.places)
        if (pd.layers[tower.depth].inertia.order() > 1 || pd.above_p) s_ram.insert(pd.v);

    MainRhsResult out;
    std::set<long> s_theta;
    for (long v : tower.s_finite)
        if (s_ram.count(v)) s_theta.insert(v);
    s_theta.insert(tower.p);
    out.theta = theta_for_field(layer, s_theta, tower.t_set);
    out.theta.layer = n;
    out.ideal = FractionalIdeal::from_generators(r, {out.theta.minus_part()});
    out.factors.push_back({"theta", out.ideal});

    for (long v : s_ram) {
        if (v == tower.p || tower.s_finite.count(v) || tower.t_set.count(v)) continue;
        FractionalIdeal q = q_v_ideal(tower, v, n);
        out.factors.push_back({"Q_" + std::to_string(v), q});
        out.ideal = out.ideal * q;
    }
    if (!tower.s_finite.count(tower.p)) {
        FractionalIdeal j = tilde_j_ideal(tower, tower.p, n);
        out.factors.push_back({"tildeJ_" + std::to_string(tower.p), j});
        out.ideal = out.ideal * j;
    }
    for (long v : s_ram) {
        if (!tower.s_finite.count(v)) continue;
        RvResult rv = r_v_ideal(tower, v, n);
        if (!rv.fully_honest)
            throw std::domain_error("main_rhs: R_v at place " + std::to_string(v) +
                                    " has a symbolic (topologically cyclic B) contribution");
        out.factors.push_back({"R_" + std::to_string(v), rv.honest_join});
        out.ideal = out.ideal * rv.honest_join;
    }
    return out;
}

FamilyStability limit_stability(const TowerSpec& tower, const IdealFamily& family) {
    FamilyStability rep;
    rep.name = family.name;
    rep.containment = true;
    rep.aligned = true;
    rep.decay = true;
    rep.product_split = true;

    const int start = std::max(family.first_layer, tower.n0);
    for (int n = start; n + 1 <= tower.depth; ++n) {
        auto ti = transition_image(tower.transitions[n], tower.minus_ring(n + 1),
                                   tower.minus_ring(n), family.layers[n + 1], &family.layers[n],
                                   tower.p);
        rep.alignments.push_back(ti.alignment);
        if (!family.layers[n].contains_ideal(ti.image)) rep.containment = false;
        for (auto a : ti.alignment)
            if (a == GenAlignment::Unaligned) rep.aligned = false;
    }
    if (rep.alignments.empty()) return rep;  // vacuous at this depth
    // classification must be consistent across layers
    std::vector<GenAlignment> cls = rep.alignments[0];
    for (const auto& al : rep.alignments)
        if (al != cls) rep.aligned = false;
    if (!rep.aligned) {
        rep.decay = rep.product_split = false;
        return rep;
    }
    // multi-step decay and the good/bad split of the pushed-down ideal
    for (int n = start + 1; n <= tower.depth; ++n) {
        for (int m = start; m < n; ++m) {
            std::vector<RingElem> mapped = family.layers[n].generators();
            for (int t = n; t-- > m;) {
                std::vector<RingElem> next;
                for (const auto& x : mapped)
                    next.push_back(restriction(tower.transitions[t], tower.minus_ring(t + 1),
                                               tower.minus_ring(t), x));
                mapped = std::move(next);
            }
            mpq_class scale = 1;
            for (int t = 0; t < n - m; ++t) scale *= tower.p;
            std::vector<RingElem> good_gens, bad_gens;
            const auto& target = family.layers[m].generators();
            for (std::size_t k = 0; k < mapped.size(); ++k) {
                if (cls[k] == GenAlignment::Good) {
                    if (!(mapped[k] == target[k])) rep.decay = false;
                    good_gens.push_back(target[k]);
                } else {
                    if (!(mapped[k] == target[k] * scale)) rep.decay = false;
                    bad_gens.push_back(target[k] * scale);
                }
            }
            RingPtr rm = tower.minus_ring(m);
            FractionalIdeal pushed = FractionalIdeal::from_generators(rm, mapped);
            std::vector<RingElem> split = good_gens;
            split.insert(split.end(), bad_gens.begin(), bad_gens.end());
            if (!(pushed == FractionalIdeal::from_generators(rm, split))) rep.product_split = false;
        }
    }
    return rep;
}

IdealFamily kurihara_factor_family(const TowerSpec& tower, long v) {
    IdealFamily fam;
    fam.name = "kurihara_factor_" + std::to_string(v);
    const PlaceData& pd = tower.place(v);
    for (int n = 0; n <= tower.depth; ++n) {
        RingPtr r = tower.minus_ring(n);
        RingElem n_i = norm_element(r, pd.layers[n].inertia);
        RingElem one_minus =
            RingElem::one(r) -
            idempotent(r, pd.layers[n].inertia) *
                RingElem::of_group_elem(r, tower.layers[n]->galois()->inverse(pd.layers[n].frobenius));
        fam.layers.push_back(FractionalIdeal::from_generators(r, {n_i, one_minus}));
    }
    fam.first_layer = pd.n0;
    return fam;
}

IdealFamily tilde_j_family(const TowerSpec& tower, long v) {
    IdealFamily fam;
    fam.name = "tildeJ_" + std::to_string(v);
    for (int n = 0; n <= tower.depth; ++n) fam.layers.push_back(tilde_j_ideal(tower, v, n));
    fam.first_layer = tower.place(v).n0;
    return fam;
}

IdealFamily q_v_family(const TowerSpec& tower, long v) {
    IdealFamily fam;
    fam.name = "Q_" + std::to_string(v);
    for (int n = 0; n <= tower.depth; ++n) fam.layers.push_back(q_v_ideal(tower, v, n));
    fam.first_layer = tower.place(v).n0;
    return fam;
}

IdealFamily theta_family(const TowerSpec& tower, const std::set<long>& s_finite) {
    IdealFamily fam;
    fam.name = "theta";
    for (int n = 0; n <= tower.depth; ++n) {
        LValue th = theta_for_field(tower.layers[n], s_finite, tower.t_set);
        fam.layers.push_back(
            FractionalIdeal::from_generators(tower.minus_ring(n), {th.minus_part()}));
    }
    fam.first_layer = 0;
    return fam;
}

}  // namespace eqf
