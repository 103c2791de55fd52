#pragma once

#include <optional>
#include <vector>

#include "eqf/ideal.hpp"
#include "eqf/ring.hpp"

namespace eqf {

/// Finitely presented module over a group ring: s generators, one relation
/// per column.
struct PresentedModule {
    RingPtr ring;
    std::size_t num_gens = 0;
    /// relations[c][j] = coefficient of generator j in relation c.
    std::vector<std::vector<RingElem>> relations;
};

struct FittCaps {
    std::size_t max_gens = 4;
    std::size_t max_rels = 64;
};

/// 0-th Fitting ideal: the ideal of all s x s minors of the relation matrix
/// (unit ideal for s = 0, zero ideal when there are fewer relations than
/// generators). Columns that are ring-linear combinations of earlier ones
/// are discarded first; this leaves the ideal unchanged since determinants
/// are ring-multilinear in columns.
FractionalIdeal fitt0(const PresentedModule& m, const FittCaps& caps = {});

/// Reference enumeration without column pruning (test oracle).
FractionalIdeal fitt0_unpruned(const PresentedModule& m, const FittCaps& caps = {});

/// Presentation of (numerator gens)/(denominator gens): generators are the
/// numerator generators as classes, relations are a Z-generating set of all
/// syzygies sum a_i x_i in (denominator), from the integer kernel of the
/// stacked coefficient matrix. Requires denominator contained in numerator.
PresentedModule quotient_ideal_module(const RingPtr& ring, const std::vector<RingElem>& numerator,
                                      const std::vector<RingElem>& denominator);

/// Presentation of the image of (gens) in R/(f) -- the kernel term N of the
/// canonical sequence 0 -> N -> R/(f) -> R/(gens, f) -> 0. Same syzygy
/// computation as quotient_ideal_module without the containment check.
PresentedModule image_in_cyclic_quotient(const RingPtr& ring, const std::vector<RingElem>& gens,
                                         const RingElem& f);

/// First shifted Fitting ideal of A = R/(gens, f) through the canonical
/// sequence above: fitt0(N) * (f)^{-1}. f must be a nonzero divisor.
FractionalIdeal shifted_fitt1(const RingPtr& ring, const std::vector<RingElem>& gens,
                              const RingElem& f, const FittCaps& caps = {});

/// Product of per-factor shifted Fitting ideals (direct sums multiply on
/// the N-side).
FractionalIdeal fitt1_direct_sum(const RingPtr& ring,
                                 const std::vector<std::pair<std::vector<RingElem>, RingElem>>& factors,
                                 const FittCaps& caps = {});

/// The ideal J(I) = sum_i Z_i (Delta D)^{i-1} realized by its explicit
/// generator family: e(lambda, mu) (sigma-1)^{i-1-j}. The decomposition of I
/// is passed explicitly so alternate decompositions can be compared; trivial
/// I (empty decomposition) yields the zero ideal (empty generator list).
FractionalIdeal calJ_ideal(const RingPtr& ring, const std::vector<CyclicFactor>& decomposition,
                           const Subgroup& d, ElemIdx sigma);

struct ShiftedFittIdentityReport {
    bool equal = false;
    FractionalIdeal lhs;   // (h) * Fitt^[1](A)
    FractionalIdeal rhs;   // (N(I), (1 - e_I sigma^{-1}) J(I))
};

/// Check the product identity (h) Fitt^[1](A) = (N(I), (1-e_I sigma^{-1}) J(I)) for
/// A = Z[G]/(i-1, 1-sigma^{-1}+|I|), h = 1 - e_I sigma^{-1} + N(I).
/// Requires I <= D <= G with D/I cyclic generated by the class of sigma.
ShiftedFittIdentityReport verify_shifted_fitt_identity(const GroupPtr& g, const Subgroup& i_sub, const Subgroup& d_sub,
                                   ElemIdx sigma, const FittCaps& caps = {});

/// Greedy ring-generator selection + syzygy presentation for a finite
/// quotient A/B of integer lattices inside (R^k as Z-module), k = n/dim.
/// With `involution` the ring acts through g -> g^{-1} (covariant duals).
PresentedModule present_lattice_quotient(const RingPtr& ring, const IntMat& a, const IntMat& b,
                                         bool involution);

/// Relation lattice (Z-span of all ring-translates of the relation columns)
/// contains x * e_j for every generator j -- i.e. x annihilates the module.
bool annihilates(const PresentedModule& m, const RingElem& x);

}  // namespace eqf
