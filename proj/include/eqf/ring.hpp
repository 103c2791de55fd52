#pragma once

#include <gmpxx.h>

#include <memory>
#include <vector>

#include "eqf/abelian.hpp"

namespace eqf {

/// Descriptor for Z[G] / Q[G] (full) or the minus quotient Z[1/2][G]/(1+c).
/// Minus-ring coordinates run over coset representatives of G/<c>, fixed by
/// the first-in-enumeration rule, with c identified with -1.
class GroupRing {
public:
    static std::shared_ptr<const GroupRing> full(GroupPtr g);
    static std::shared_ptr<const GroupRing> minus(GroupPtr g);

    const GroupPtr& group() const { return g_; }
    bool is_minus() const { return minus_; }
    std::size_t dim() const { return dim_; }

    /// Basis slot and sign of a group element: full ring gives (g, +1);
    /// minus ring gives (rep position, +-1) under c = -1.
    std::pair<std::size_t, int> slot_of(ElemIdx g) const;
    /// The group element enumerated at a basis slot.
    ElemIdx elem_at(std::size_t slot) const { return minus_? reps_[slot] : slot; }

    bool same(const GroupRing& o) const {
        return minus_ == o.minus_ && (g_.get() == o.g_.get() || *g_ == *o.g_);
    }

private:
    GroupRing(GroupPtr g, bool minus);
    GroupPtr g_;
    bool minus_;
    std::size_t dim_;
    std::vector<ElemIdx> reps_;
    std::vector<std::size_t> rep_pos_;
    std::vector<int> rep_sign_;
};

using RingPtr = std::shared_ptr<const GroupRing>;

/// Element of a group ring (or its minus quotient) with exact rational
/// coefficients. Arithmetic never rounds.
class RingElem {
public:
    RingElem() = default;
    explicit RingElem(RingPtr r) : ring_(std::move(r)), c_(ring_->dim(), 0) {}
    RingElem(RingPtr r, std::vector<mpq_class> coeffs);

    static RingElem zero(const RingPtr& r) { return RingElem(r); }
    static RingElem one(const RingPtr& r);
    /// The basis element for a group element (in the minus ring this is the
    /// signed representative).
    static RingElem of_group_elem(const RingPtr& r, ElemIdx g);
    static RingElem scalar(const RingPtr& r, const mpq_class& q);

    const RingPtr& ring() const { return ring_; }
    const std::vector<mpq_class>& coeffs() const { return c_; }
    mpq_class& coeff(std::size_t i) { return c_[i]; }
    const mpq_class& coeff(std::size_t i) const { return c_[i]; }

    bool is_zero() const;
    std::size_t support_size() const;

    RingElem operator+(const RingElem& o) const;
    RingElem operator-(const RingElem& o) const;
    RingElem operator-() const;
    RingElem operator*(const RingElem& o) const;
    RingElem operator*(const mpq_class& q) const;
    bool operator==(const RingElem& o) const;
    bool operator!=(const RingElem& o) const { return !(*this == o); }

    /// Sum of coefficients (full ring only).
    mpq_class augmentation() const;

    std::string to_string() const;

private:
    RingPtr ring_;
    std::vector<mpq_class> c_;
};

/// N(H) = sum of the elements of H.
RingElem norm_element(const RingPtr& r, const Subgroup& h);

/// e_H = N(H)/|H|.
RingElem idempotent(const RingPtr& r, const Subgroup& h);

/// Linear extension of a quotient map to group rings (full -> full or
/// minus -> minus; for minus rings both groups must carry compatible
/// conjugations). Augmentation is preserved.
RingElem restriction(const QuotientMap& pi, const RingPtr& source_ring,
                     const RingPtr& target_ring, const RingElem& x);

/// Image of a full-ring element in the minus ring (the map induced by
/// (1/2)(1-c) followed by c = -1).
RingElem minus_project(const RingElem& x, const RingPtr& minus_ring);

/// The full-ring element (1/2)(1-c) * lift(m); minus_project of the result
/// gives back m, and its plus part is 0.
RingElem lift_minus(const RingElem& m, const RingPtr& full_ring);

/// Multiplication matrix of x on the ring's rational basis: column j holds
/// the coefficients of x * basis_j.
std::vector<std::vector<mpq_class>> mult_matrix(const RingElem& x);

/// x is a nonzero divisor iff its multiplication matrix is invertible.
bool is_nonzero_divisor(const RingElem& x);

/// Exact inverse in the rational group algebra; throws when x is a zero
/// divisor.
RingElem invert(const RingElem& x);

/// w with chi(w) = 1/chi(x) at every character where chi(x) != 0, and
/// chi(w) = 0 where chi(x) = 0. (Group inverse in the semisimple algebra.)
RingElem pseudo_inverse(const RingElem& x);

/// Exact character values of x over cyclotomic integers, one per character
/// of G (minus ring: odd characters only). Each value is the canonical
/// representative in Q(zeta_N), N = exponent of G; the boolean marks
/// nonvanishing.
struct CharacterValue {
    std::vector<long> character;      // dual exponent tuple
    std::vector<mpq_class> value;     // coefficients in Q(zeta_N)
    bool nonzero;
};
std::vector<CharacterValue> character_values(const RingElem& x);

/// Solve a * y = b in the rational group algebra; empty when unsolvable.
std::optional<RingElem> solve_mul(const RingElem& a, const RingElem& b);

}  // namespace eqf
