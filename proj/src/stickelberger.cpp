#include "eqf/stickelberger.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace eqf {

namespace {

RingElem euler_factor(const FieldPtr& field, long v) {
    // 1 - e_{I_v} phi_v^{-1}
    RingPtr r = field->full_ring();
    Subgroup i_v = field->inertia(v);
    RingElem e = idempotent(r, i_v);
    ElemIdx phi = field->frobenius(v);
    return RingElem::one(r) - e * RingElem::of_group_elem(r, field->galois()->inverse(phi));
}

RingElem t_factor(const FieldPtr& field, long v) {
    // 1 - e_{I_v} phi_v^{-1} Nv  (Nv = v: the norm of v as a place of Q)
    RingPtr r = field->full_ring();
    Subgroup i_v = field->inertia(v);
    RingElem e = idempotent(r, i_v);
    ElemIdx phi = field->frobenius(v);
    return RingElem::one(r) -
           e * RingElem::of_group_elem(r, field->galois()->inverse(phi)) * mpq_class(v);
}

std::vector<long> modulus_primes(long f) {
    std::vector<long> out;
    for (long p = 2; p <= f; ++p)
        if (f % p == 0) {
            out.push_back(p);
            while (f % p == 0) f /= p;
        }
    return out;
}

}  // namespace

LValue theta_full_level(long f) {
    if (f < 3) throw std::invalid_argument("theta_full_level: f >= 3");
    FieldPtr field = make_field(f, {});
    RingPtr r = field->full_ring();
    RingElem theta(r);
    const auto& g = field->galois();
    for (long a = 1; a < f; ++a) {
        if (std::gcd(a, f) != 1) continue;
        ElemIdx cls = g->inverse(field->class_of_residue(a));
        theta.coeff(cls) += mpq_class(1, 2) - mpq_class(a, f);
    }
    LValue out;
    out.field = field;
    out.value = theta;
    for (long p : modulus_primes(f)) out.s_finite.insert(p);
    return out;
}

LValue theta_for_field(const FieldPtr& field, const std::set<long>& s_finite,
                       const std::set<long>& t_set) {
    for (long v : s_finite)
        if (t_set.count(v)) throw std::invalid_argument("theta: S and T must be disjoint");
    // compute at the primitive conductor (so only genuinely ramified Euler
    // factors ever need removal) and transport back through the Artin labels
    FieldPtr h0 = primitive_field(field);
    if (h0->conductor() != field->conductor()) {
        LValue inner = theta_for_field(h0, s_finite, t_set);
        LValue out;
        out.field = field;
        out.s_finite = s_finite;
        out.t_set = t_set;
        RingElem v(field->full_ring());
        for (ElemIdx e = 0; e < field->galois()->order(); ++e)
            v.coeff(e) = inner.value.coeff(h0->class_of_residue(field->sigma_label(e)));
        out.value = std::move(v);
        return out;
    }
    const long f = field->conductor();
    RingPtr full = field->full_ring();
    RingPtr minus = field->minus_ring();

    // full-level value summed straight onto G through the projection:
    // Theta_{P + S_infty}(H), P = primes of f
    RingElem theta_p(full);
    const auto& g = field->galois();
    for (long a = 1; a < f; ++a) {
        if (std::gcd(a, f) != 1) continue;
        ElemIdx cls = g->inverse(field->class_of_residue(a));
        theta_p.coeff(cls) += mpq_class(1, 2) - mpq_class(a, f);
    }
    RingElem m = minus_project(theta_p, minus);

    const std::vector<long> p_set = modulus_primes(f);
    for (long v : p_set) {
        if (s_finite.count(v)) continue;
        // remove v from S: divide the minus part by 1 - e_{I_v} phi_v^{-1}
        RingElem u = minus_project(euler_factor(field, v), minus);
        if (u == RingElem::one(minus)) continue;
        if (!is_nonzero_divisor(u)) {
            // locate an offending odd character for the error message
            std::ostringstream os;
            os << "theta: Euler factor at " << v << " vanishes at an odd character:";
            for (const auto& cv : character_values(u))
                if (!cv.nonzero) {
                    os << " (";
                    for (std::size_t i = 0; i < cv.character.size(); ++i)
                        os << (i ? "," : "") << cv.character[i];
                    os << ")";
                }
            throw std::domain_error(os.str());
        }
        m = m * invert(u);
    }
    for (long v : s_finite) {
        if (std::find(p_set.begin(), p_set.end(), v) != p_set.end()) continue;
        m = m * minus_project(euler_factor(field, v), minus);
    }

    RingElem theta = lift_minus(m, full);
    if (s_finite.empty()) {
        // plus part: zeta(0) e_G (T-factors applied uniformly below)
        Subgroup whole(field->galois(), [&] {
            std::vector<ElemIdx> gens;
            for (ElemIdx e = 0; e < field->galois()->order(); ++e) gens.push_back(e);
            return gens;
        }());
        theta = theta + idempotent(full, whole) * mpq_class(-1, 2);
    }
    for (long v : t_set) theta = theta * t_factor(field, v);

    LValue out;
    out.field = field;
    out.value = theta;
    out.s_finite = s_finite;
    out.t_set = t_set;
    return out;
}

RingElem ssprime_factor(const FieldPtr& field, long v) {
    RingPtr r = field->full_ring();
    Subgroup i_v = field->inertia(v);
    RingElem e = idempotent(r, i_v);
    ElemIdx phi = field->frobenius(v);
    RingElem phi_inv = RingElem::of_group_elem(r, field->galois()->inverse(phi));
    return RingElem::one(r) -
           e * (phi_inv - RingElem::scalar(r, static_cast<long>(i_v.order())));
}

LValue theta_ssprime(const FieldPtr& field, const std::set<long>& s_finite,
                     const std::set<long>& s_prime, const std::set<long>& t_set) {
    for (long v : s_prime)
        if (s_finite.count(v) || t_set.count(v))
            throw std::invalid_argument("theta_ssprime: S, S', T must be pairwise disjoint");
    LValue out = theta_for_field(field, s_finite, t_set);
    for (long v : s_prime) out.value = out.value * ssprime_factor(field, v);
    return out;
}

bool mu_pT_trivial(const FieldPtr& field, long p, const std::set<long>& t_set) {
    if (field->mu_p_power(p) == 0) return true;
    for (long v : t_set)
        if (v != p) return true;
    return false;
}

IntegralityReport integrality_scan(const FieldPtr& field, long p, const std::set<long>& s_finite,
                                   const std::set<long>& t_set) {
    if (p == 2) throw std::invalid_argument("integrality_scan: p must be odd");
    IntegralityReport rep;
    for (long v : field->ramified_primes())
        if (field->inertia(v).order() % p == 0) rep.wild_set.push_back(v);
    rep.hyp_wild_in_s_or_t = true;
    for (long v : rep.wild_set)
        if (!s_finite.count(v) && !t_set.count(v)) rep.hyp_wild_in_s_or_t = false;
    rep.hyp_wild_p_in_s = true;
    for (long v : rep.wild_set)
        if (v == p && !s_finite.count(v)) rep.hyp_wild_p_in_s = false;
    rep.hyp_mu_trivial = mu_pT_trivial(field, p, t_set);
    rep.hypotheses_hold = rep.hyp_wild_in_s_or_t && rep.hyp_wild_p_in_s && rep.hyp_mu_trivial;

    rep.theta = theta_for_field(field, s_finite, t_set);
    RingElem m = rep.theta.minus_part();
    rep.minus_part_p_integral = true;
    for (const auto& q : m.coeffs()) {
        if (mpz_divisible_ui_p(q.get_den_mpz_t(), static_cast<unsigned long>(p))) {
            rep.minus_part_p_integral = false;
            break;
        }
    }
    rep.fatal_inconsistency = rep.hypotheses_hold && !rep.minus_part_p_integral;
    return rep;
}

NormCompatReport norm_compatibility_check(const FieldPtr& field, long p,
                                          const std::set<long>& s_finite,
                                          const std::set<long>& t_set, int n_max) {
    if (!s_finite.count(p))
        throw std::invalid_argument("norm_compatibility_check: S must contain p");
    for (long v : field->ramified_primes())
        if (!s_finite.count(v))
            throw std::invalid_argument("norm_compatibility_check: S must contain the ramified primes");
    NormCompatReport rep;
    rep.n_max = n_max;
    std::vector<FieldPtr> layers;
    for (int n = 0; n <= n_max; ++n) {
        layers.push_back(layer_field(field, p, n));
        LValue th = theta_for_field(layers.back(), s_finite, t_set);
        th.layer = n;
        rep.layers.push_back(th);
        rep.layer_moduli.push_back(layers.back()->conductor());
    }
    rep.all_equal = true;
    for (int n = 0; n < n_max; ++n) {
        QuotientMap pi = layer_transition(layers[n + 1], layers[n]);
        RingElem down = restriction(pi, layers[n + 1]->full_ring(), layers[n]->full_ring(),
                                    rep.layers[n + 1].value);
        if (!(down == rep.layers[n].value)) rep.all_equal = false;
    }
    return rep;
}

}  // namespace eqf
