#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eqf/field_spec.hpp"
#include "eqf/fitting.hpp"

namespace eqf {

/// Per-prime residue-field data entering the ray-class computation.
struct ResiduePlace {
    long v = 0;
    long residue_degree = 0;
    int p_valuation = 0;       // v_p(v^{f} - 1)
    RingElem relation;         // 1 - sigma_v^{-1} v over the minus ring
    RingElem mu_coefficient;   // lambda_v with (image of zeta) = lambda_v . generator
};

/// Brute-force computation of A^{T,-}(H) from the residue-field exact
/// sequence 0 -> mu_p -> (sum_{w in T_H} kappa(w)^x (x) Z_p)^- -> A^{T,-} -> A^- -> 0,
/// valid when the minus part A^- is known from the curated table. The
/// computation never touches the L-value or tower code.
struct OracleResult {
    bool computable = false;       // a ground-truth Fitting ideal is produced
    std::string status;
    std::vector<ResiduePlace> places;
    std::optional<PresentedModule> module;       // residue cokernel (h^- = 1 cases)
    std::optional<PresentedModule> dual_module;  // covariant Pontryagin dual
    mpz_class coker_order = 0;                   // |coker(mu_p -> residue part)|
    long h_minus = 0;                            // curated |A^-| input (p-part used)
    std::optional<FractionalIdeal> fitt_dual;    // Fitt of A^T(H)^{v,-} over the minus ring
};

/// h_minus: the curated minus class number of H, or 0 when unknown
/// (report-only mode). T-primes must not divide the modulus.
OracleResult oracle_ray_class_minus(const FieldPtr& field, long p, const std::set<long>& t_set,
                                    long h_minus);

}  // namespace eqf
