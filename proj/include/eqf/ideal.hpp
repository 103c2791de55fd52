#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eqf/int_mat.hpp"
#include "eqf/ring.hpp"

namespace eqf {

/// Fractional ideal of Z[G] (or of the minus quotient, where 2 is a unit),
/// stored as the canonical pair (scale, HNF lattice) of the Z-span of all
/// G-translates of its generators:
///   - lattice: primitive HNF (entry gcd 1); minus rings: also 2-saturated;
///   - scale: positive rational; minus rings: odd numerator and denominator.
/// Two ideals are equal iff their canonical pairs coincide. The verbatim
/// generator list is retained for transition-map bookkeeping.
class FractionalIdeal {
public:
    static FractionalIdeal from_generators(const RingPtr& ring, std::vector<RingElem> gens);
    static FractionalIdeal zero(const RingPtr& ring);
    static FractionalIdeal unit(const RingPtr& ring);

    const RingPtr& ring() const { return ring_; }
    const IntMat& lattice() const { return lattice_; }
    const mpq_class& scale() const { return scale_; }
    const std::vector<RingElem>& generators() const { return gens_; }

    bool is_zero() const { return lattice_.rows() == 0; }
    std::size_t rank() const { return lattice_.rows(); }
    /// Rank equal to the ring dimension, i.e. the rationalization is the
    /// whole rational algebra.
    bool full_rank() const { return lattice_.rows() == ring_->dim(); }

    bool operator==(const FractionalIdeal& o) const;
    bool operator!=(const FractionalIdeal& o) const { return !(*this == o); }

    FractionalIdeal operator+(const FractionalIdeal& o) const;
    FractionalIdeal operator*(const FractionalIdeal& o) const;
    FractionalIdeal scaled(const mpq_class& q) const;

    bool contains(const RingElem& x) const;
    /// Lattice containment o <= *this (as fractional ideals).
    bool contains_ideal(const FractionalIdeal& o) const;

    std::string to_string() const;

private:
    RingPtr ring_;
    IntMat lattice_;
    mpq_class scale_ = 1;
    std::vector<RingElem> gens_;
};

/// Exact Z_p-local equality for odd p: equal rational spans and both indices
/// [I+J : I], [I+J : J] prime to p. Rejects p = 2.
bool p_local_equal(const FractionalIdeal& i, const FractionalIdeal& j, long p);

/// p-adic valuation of the index [sum : part]; requires equal rational spans.
long index_valuation(const FractionalIdeal& sum, const FractionalIdeal& part, long p);

/// How one generator maps relative to its positionally matching target
/// generator under a transition map.
enum class GenAlignment { Good, Bad, Unaligned };

struct TransitionImage {
    FractionalIdeal image;                  // ideal generated by the mapped generators
    std::vector<RingElem> mapped_gens;      // pi(g) for each retained generator
    std::vector<GenAlignment> alignment;    // vs target, when a target was supplied
};

/// Push an ideal through a quotient map (generator-wise). When `target` is
/// supplied its generator list must match positionally; each mapped
/// generator is classified Good (equal), Bad (p times the target) or
/// Unaligned.
TransitionImage transition_image(const QuotientMap& pi, const RingPtr& source_ring,
                                 const RingPtr& target_ring, const FractionalIdeal& ideal,
                                 const FractionalIdeal* target = nullptr, long p = 0);

/// Characters at which every generator vanishes (dual exponent tuples);
/// empty exactly when the rationalized ideal is the whole algebra.
std::vector<std::vector<long>> vanishing_characters(const FractionalIdeal& ideal);

}  // namespace eqf
