#pragma once

#include <set>
#include <string>
#include <vector>

#include "eqf/field_spec.hpp"
#include "eqf/ring.hpp"

namespace eqf {

/// An equivariant L-value at s = 0: exact rational group-ring element over
/// Gal(H/Q) together with the S and T sets it encodes. Infinity is always
/// part of S and is kept implicit; the sets stored here are the finite
/// primes.
struct LValue {
    FieldPtr field;
    RingElem value;       // in Q[G]
    std::set<long> s_finite;
    std::set<long> t_set;
    int layer = -1;

    RingElem minus_part() const { return minus_project(value, field->minus_ring()); }
};

/// Theta_{S_f + S_infty}(Q(zeta_f)/Q) at 0 from the classical partial zeta
/// values zeta_f(0, a) = 1/2 - a/f.
LValue theta_full_level(long f);

/// Theta_S^T(H/Q)(0), exact. S is given by its finite primes; primes of the
/// modulus not in S are removed by exact Euler-factor division on the minus
/// part (rejected when a factor vanishes at an odd character), and the plus
/// part is supplied in closed form (zero once S has a finite prime,
/// zeta(0) e_G Pi_T (1 - Nv) for S = S_infty).
LValue theta_for_field(const FieldPtr& field, const std::set<long>& s_finite,
                       const std::set<long>& t_set);

/// Theta_{S,S'}^T = Theta_S^T * prod_{v in S'} (1 - e_{I_v}(phi_v^{-1} - |I_v|)).
LValue theta_ssprime(const FieldPtr& field, const std::set<long>& s_finite,
                     const std::set<long>& s_prime, const std::set<long>& t_set);

/// The S'-factor h_v = 1 - e_{I_v}(phi_v^{-1} - |I_v|) at v.
RingElem ssprime_factor(const FieldPtr& field, long v);

/// mu(H)^T_p is trivial: no p-th root of unity in H, or T contains a prime
/// away from p.
bool mu_pT_trivial(const FieldPtr& field, long p, const std::set<long>& t_set);

struct IntegralityReport {
    bool hyp_wild_in_s_or_t = false;   // S_wild^p <= S cup T
    bool hyp_wild_p_in_s = false;      // S_wild^p cap S_p <= S
    bool hyp_mu_trivial = false;
    bool hypotheses_hold = false;
    bool minus_part_p_integral = false;
    bool fatal_inconsistency = false;  // hypotheses hold but value not integral
    std::vector<long> wild_set;
    LValue theta;
};

/// Corollary-style p-integrality check of Theta_S^T.
IntegralityReport integrality_scan(const FieldPtr& field, long p, const std::set<long>& s_finite,
                                   const std::set<long>& t_set);

struct NormCompatReport {
    bool all_equal = false;
    int n_max = 0;
    std::vector<LValue> layers;
    std::vector<long> layer_moduli;
};

/// Theta_S^T(H_n) for n = 0..n_max with exact transition equalities
/// pi_n^{n+1}(Theta(H_{n+1})) = Theta(H_n). Requires S to contain p and the
/// ramified primes of H.
NormCompatReport norm_compatibility_check(const FieldPtr& field, long p,
                                          const std::set<long>& s_finite,
                                          const std::set<long>& t_set, int n_max);

}  // namespace eqf
