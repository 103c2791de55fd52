#include "eqf/fitting.hpp"

#include <algorithm>
#include <stdexcept>

namespace eqf {

namespace {

// w += sign * (g . v) for a block vector v in (R^k as Q-space), acting
// componentwise by the group element g (through g^{-1} when `involution`).
void translate_into(const RingPtr& ring, const std::vector<mpz_class>& v, ElemIdx g,
                    bool involution, std::vector<mpz_class>& w) {
    const std::size_t dim = ring->dim();
    const auto& grp = *ring->group();
    const ElemIdx act = involution ? grp.inverse(g) : g;
    std::fill(w.begin(), w.end(), mpz_class(0));
    const std::size_t k = v.size() / dim;
    for (std::size_t b = 0; b < k; ++b)
        for (std::size_t i = 0; i < dim; ++i) {
            if (v[b * dim + i] == 0) continue;
            ElemIdx prod = grp.mul(act, ring->elem_at(i));
            auto [pos, sign] = ring->slot_of(prod);
            if (sign > 0)
                w[b * dim + pos] += v[b * dim + i];
            else
                w[b * dim + pos] -= v[b * dim + i];
        }
}

mpz_class common_denominator(const std::vector<RingElem>& xs) {
    mpz_class den = 1;
    for (const auto& x : xs)
        for (const auto& q : x.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    return den;
}

std::vector<mpz_class> scaled_vec(const RingElem& x, const mpz_class& den) {
    std::vector<mpz_class> v(x.coeffs().size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        mpq_class q = x.coeff(i) * mpq_class(den);
        v[i] = q.get_num();
    }
    return v;
}

// Z-generating set of { (a_1..a_s) in R^s : sum_j a_j . gen_j in den_lattice },
// one relation column per kernel row.
std::vector<std::vector<RingElem>> syzygy_relations(const RingPtr& ring,
                                                    const std::vector<std::vector<mpz_class>>& gen_vecs,
                                                    const IntMat& den_lattice, bool involution) {
    const std::size_t dim = ring->dim();
    const std::size_t s = gen_vecs.size();
    const std::size_t n = den_lattice.cols();
    IntMat stacked(0, n);
    std::vector<mpz_class> w(n);
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t t = 0; t < dim; ++t) {
            translate_into(ring, gen_vecs[j], ring->elem_at(t), involution, w);
            stacked.append_row(w);
        }
    for (std::size_t i = 0; i < den_lattice.rows(); ++i) stacked.append_row(den_lattice.row(i));
    IntMat ker = kernel_lattice(stacked);
    std::vector<std::vector<RingElem>> rels;
    for (std::size_t r = 0; r < ker.rows(); ++r) {
        std::vector<RingElem> col(s, RingElem::zero(ring));
        bool nonzero = false;
        for (std::size_t j = 0; j < s; ++j) {
            RingElem a(ring);
            for (std::size_t t = 0; t < dim; ++t) {
                const mpz_class& c = ker.at(r, j * dim + t);
                if (c != 0) {
                    a.coeff(t) = mpq_class(c);
                    nonzero = true;
                }
            }
            col[j] = std::move(a);
        }
        if (nonzero) rels.push_back(std::move(col));
    }
    return rels;
}

RingElem det_ring(const std::vector<std::vector<const RingElem*>>& m, const RingPtr& ring) {
    const std::size_t s = m.size();
    if (s == 1) return *m[0][0];
    if (s == 2) return (*m[0][0]) * (*m[1][1]) - (*m[0][1]) * (*m[1][0]);
    RingElem acc = RingElem::zero(ring);
    for (std::size_t j = 0; j < s; ++j) {
        if (m[0][j]->is_zero()) continue;
        std::vector<std::vector<const RingElem*>> sub(s - 1, std::vector<const RingElem*>(s - 1));
        for (std::size_t i = 1; i < s; ++i) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < s; ++c) {
                if (c == j) continue;
                sub[i - 1][cc++] = m[i][c];
            }
        }
        RingElem term = (*m[0][j]) * det_ring(sub, ring);
        if (j % 2 == 0)
            acc = acc + term;
        else
            acc = acc - term;
    }
    return acc;
}

void check_caps(const PresentedModule& m, const FittCaps& caps) {
    if (m.num_gens > caps.max_gens)
        throw std::length_error("fitt0: generator count exceeds the configured cap");
    if (m.relations.size() > caps.max_rels)
        throw std::length_error("fitt0: relation count exceeds the configured cap");
}

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

FractionalIdeal minors_ideal(const PresentedModule& m, const std::vector<std::size_t>& cols) {
    const std::size_t s = m.num_gens;
    const RingPtr& ring = m.ring;
    std::vector<RingElem> gens;
    for (const auto& idx : combinations(cols.size(), s)) {
        std::vector<std::vector<const RingElem*>> mat(s, std::vector<const RingElem*>(s));
        for (std::size_t j = 0; j < s; ++j)
            for (std::size_t i = 0; i < s; ++i) mat[i][j] = &m.relations[cols[idx[j]]][i];
        RingElem d = det_ring(mat, ring);
        if (!d.is_zero()) gens.push_back(std::move(d));
    }
    return FractionalIdeal::from_generators(ring, std::move(gens));
}

PresentedModule syzygy_quotient(const RingPtr& ring, const std::vector<RingElem>& gens,
                                const std::vector<RingElem>& den) {
    const std::size_t dim = ring->dim();
    std::vector<RingElem> all = gens;
    all.insert(all.end(), den.begin(), den.end());
    mpz_class d = common_denominator(all);
    std::vector<std::vector<mpz_class>> gen_vecs;
    for (const auto& x : gens) gen_vecs.push_back(scaled_vec(x, d));
    IntMat den_lat(0, dim);
    std::vector<mpz_class> w(dim);
    for (const auto& y : den) {
        auto v = scaled_vec(y, d);
        for (std::size_t t = 0; t < dim; ++t) {
            translate_into(ring, v, ring->elem_at(t), false, w);
            den_lat.append_row(w);
        }
    }
    PresentedModule m;
    m.ring = ring;
    m.num_gens = gens.size();
    m.relations = syzygy_relations(ring, gen_vecs, den_lat, false);
    return m;
}

}  // namespace

FractionalIdeal fitt0(const PresentedModule& m, const FittCaps& caps) {
    check_caps(m, caps);
    const RingPtr& ring = m.ring;
    if (m.num_gens == 0) return FractionalIdeal::unit(ring);
    if (m.relations.size() < m.num_gens) return FractionalIdeal::zero(ring);
    const std::size_t dim = ring->dim();
    const std::size_t n = m.num_gens * dim;
    // discard columns ring-dependent on earlier ones
    std::vector<RingElem> flat;
    for (const auto& col : m.relations)
        for (const auto& e : col) flat.push_back(e);
    mpz_class den = common_denominator(flat);
    HnfBuilder span(n);
    std::vector<std::size_t> kept;
    std::vector<mpz_class> w(n);
    for (std::size_t c = 0; c < m.relations.size(); ++c) {
        std::vector<mpz_class> v(n);
        for (std::size_t j = 0; j < m.num_gens; ++j) {
            auto part = scaled_vec(m.relations[c][j], den);
            for (std::size_t t = 0; t < dim; ++t) v[j * dim + t] = part[t];
        }
        bool zero = std::all_of(v.begin(), v.end(), [](const mpz_class& x) { return x == 0; });
        if (zero || span.contains(v)) continue;
        kept.push_back(c);
        for (std::size_t t = 0; t < dim; ++t) {
            translate_into(ring, v, ring->elem_at(t), false, w);
            span.insert(w);
        }
    }
    if (kept.size() < m.num_gens) return FractionalIdeal::zero(ring);
    return minors_ideal(m, kept);
}

FractionalIdeal fitt0_unpruned(const PresentedModule& m, const FittCaps& caps) {
    check_caps(m, caps);
    if (m.num_gens == 0) return FractionalIdeal::unit(m.ring);
    if (m.relations.size() < m.num_gens) return FractionalIdeal::zero(m.ring);
    std::vector<std::size_t> cols(m.relations.size());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
    return minors_ideal(m, cols);
}

PresentedModule quotient_ideal_module(const RingPtr& ring, const std::vector<RingElem>& numerator,
                                      const std::vector<RingElem>& denominator) {
    FractionalIdeal num_ideal = FractionalIdeal::from_generators(ring, numerator);
    for (const auto& d : denominator)
        if (!num_ideal.contains(d))
            throw std::invalid_argument("quotient_ideal_module: denominator not contained in numerator");
    return syzygy_quotient(ring, numerator, denominator);
}

PresentedModule image_in_cyclic_quotient(const RingPtr& ring, const std::vector<RingElem>& gens,
                                         const RingElem& f) {
    return syzygy_quotient(ring, gens, {f});
}

FractionalIdeal shifted_fitt1(const RingPtr& ring, const std::vector<RingElem>& gens,
                              const RingElem& f, const FittCaps& caps) {
    if (!is_nonzero_divisor(f))
        throw std::domain_error("shifted_fitt1: resolving element is a zero divisor");
    PresentedModule n = image_in_cyclic_quotient(ring, gens, f);
    FractionalIdeal fn = fitt0(n, caps);
    RingElem finv = invert(f);
    return fn * FractionalIdeal::from_generators(ring, {finv});
}

FractionalIdeal fitt1_direct_sum(const RingPtr& ring,
                                 const std::vector<std::pair<std::vector<RingElem>, RingElem>>& factors,
                                 const FittCaps& caps) {
    FractionalIdeal acc = FractionalIdeal::unit(ring);
    for (const auto& [gens, f] : factors) acc = acc * shifted_fitt1(ring, gens, f, caps);
    return acc;
}

namespace {

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

FractionalIdeal calJ_ideal(const RingPtr& ring, const std::vector<CyclicFactor>& decomposition,
                           const Subgroup& d, ElemIdx sigma) {
    const auto& g = ring->group();
    std::vector<ElemIdx> igens;
    for (const auto& f : decomposition) igens.push_back(f.gen);
    Subgroup i_sub(g, igens);
    if (!d.contains_all(i_sub)) throw std::invalid_argument("calJ: I not inside D");
    if (!d.contains(sigma)) throw std::invalid_argument("calJ: sigma not in D");
    // D/I must be cyclic and generated by the class of sigma
    const long quot = static_cast<long>(d.order() / i_sub.order());
    long k = 1;
    ElemIdx pw = sigma;
    while (!i_sub.contains(pw)) {
        pw = g->mul(pw, sigma);
        ++k;
    }
    if (k != quot) throw std::invalid_argument("calJ: D/I not cyclic with the given sigma");

    const std::size_t s = decomposition.size();
    if (s == 0) return FractionalIdeal::zero(ring);

    std::vector<RingElem> norms, gen_minus_one;
    for (const auto& f : decomposition) {
        Subgroup cyc(g, {f.gen});
        norms.push_back(norm_element(ring, cyc));
        gen_minus_one.push_back(RingElem::of_group_elem(ring, f.gen) - RingElem::one(ring));
    }
    RingElem sig_minus_one = RingElem::of_group_elem(ring, sigma) - RingElem::one(ring);

    std::vector<RingElem> out;
    for (std::size_t i = 1; i <= s; ++i) {
        for (std::size_t j = 0; j + 1 <= i; ++j) {
            RingElem sig_pow = RingElem::one(ring);
            for (std::size_t t = 0; t < i - 1 - j; ++t) sig_pow = sig_pow * sig_minus_one;
            for (const auto& lam : combinations(s, s - i)) {
                RingElem base = sig_pow;
                for (std::size_t l : lam) base = base * norms[l];
                for (const auto& mu : multisets(s, j)) {
                    RingElem e = base;
                    for (std::size_t r : mu) e = e * gen_minus_one[r];
                    out.push_back(e);
                }
            }
        }
    }
    return FractionalIdeal::from_generators(ring, std::move(out));
}

ShiftedFittIdentityReport verify_shifted_fitt_identity(const GroupPtr& g, const Subgroup& i_sub, const Subgroup& d_sub,
                                   ElemIdx sigma, const FittCaps& caps) {
    RingPtr ring = GroupRing::full(g);
    auto decomp = cyclic_decomposition(i_sub);
    const mpq_class i_order(static_cast<long>(i_sub.order()));

    RingElem one = RingElem::one(ring);
    RingElem sig_inv = RingElem::of_group_elem(ring, g->inverse(sigma));
    RingElem f = one - sig_inv + RingElem::scalar(ring, i_order);
    RingElem e_i = idempotent(ring, i_sub);
    RingElem n_i = norm_element(ring, i_sub);
    RingElem h = one - e_i * sig_inv + n_i;

    std::vector<RingElem> gens;
    for (const auto& c : decomp) gens.push_back(RingElem::of_group_elem(ring, c.gen) - one);

    ShiftedFittIdentityReport rep;
    FractionalIdeal fitt1 = shifted_fitt1(ring, gens, f, caps);
    rep.lhs = FractionalIdeal::from_generators(ring, {h}) * fitt1;

    FractionalIdeal j = calJ_ideal(ring, decomp, d_sub, sigma);
    RingElem one_minus = one - e_i * sig_inv;
    std::vector<RingElem> rhs_gens{n_i};
    for (const auto& jg : j.generators()) rhs_gens.push_back(one_minus * jg);
    rep.rhs = FractionalIdeal::from_generators(ring, std::move(rhs_gens));

    rep.equal = rep.lhs == rep.rhs;
    return rep;
}

PresentedModule present_lattice_quotient(const RingPtr& ring, const IntMat& a, const IntMat& b,
                                         bool involution) {
    const std::size_t dim = ring->dim();
    const std::size_t n = a.cols();
    if (n % dim != 0 || (b.rows() && b.cols() != n))
        throw std::invalid_argument("present_lattice_quotient: bad shapes");
    HnfBuilder span(n);
    for (std::size_t i = 0; i < b.rows(); ++i) span.insert(b.row(i));
    std::vector<std::vector<mpz_class>> chosen;
    std::vector<mpz_class> w(n);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto r = a.row(i);
        if (span.contains(r)) continue;
        for (std::size_t t = 0; t < dim; ++t) {
            translate_into(ring, r, ring->elem_at(t), involution, w);
            span.insert(w);
        }
        chosen.push_back(std::move(r));
    }
    PresentedModule m;
    m.ring = ring;
    m.num_gens = chosen.size();
    m.relations = syzygy_relations(ring, chosen, b, involution);
    return m;
}

bool annihilates(const PresentedModule& m, const RingElem& x) {
    const RingPtr& ring = m.ring;
    const std::size_t dim = ring->dim();
    const std::size_t n = m.num_gens * dim;
    std::vector<RingElem> flat;
    for (const auto& col : m.relations)
        for (const auto& e : col) flat.push_back(e);
    flat.push_back(x);
    mpz_class den = common_denominator(flat);
    HnfBuilder span(n);
    std::vector<mpz_class> w(n);
    for (const auto& col : m.relations) {
        std::vector<mpz_class> v(n);
        for (std::size_t j = 0; j < m.num_gens; ++j) {
            auto part = scaled_vec(col[j], den);
            for (std::size_t t = 0; t < dim; ++t) v[j * dim + t] = part[t];
        }
        for (std::size_t t = 0; t < dim; ++t) {
            translate_into(ring, v, ring->elem_at(t), false, w);
            span.insert(w);
        }
    }
    auto xv = scaled_vec(x, den);
    for (std::size_t j = 0; j < m.num_gens; ++j) {
        std::vector<mpz_class> v(n, 0);
        for (std::size_t t = 0; t < dim; ++t) v[j * dim + t] = xv[t];
        if (!span.contains(v)) return false;
    }
    return true;
}

}  // namespace eqf
