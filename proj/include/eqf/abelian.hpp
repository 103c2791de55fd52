#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "eqf/int_mat.hpp"

namespace eqf {

using ElemIdx = std::size_t;

/// Finite abelian group, stored with the cyclic decomposition it was built
/// from (reporting) plus the canonical invariant factors (identity checks).
/// Elements are exponent tuples over the stored decomposition, enumerated in
/// mixed-radix order; index 0 is the identity.
class FiniteAbelianGroup {
public:
    /// parts: cyclic orders, each >= 2 (empty list = trivial group).
    explicit FiniteAbelianGroup(std::vector<long> parts);

    std::size_t order() const { return order_; }
    std::size_t num_parts() const { return parts_.size(); }
    const std::vector<long>& parts() const { return parts_; }
    const std::vector<long>& invariant_factors() const { return inv_; }

    std::vector<long> exps_of(ElemIdx i) const;
    ElemIdx idx_of(const std::vector<long>& exps) const;

    ElemIdx mul(ElemIdx a, ElemIdx b) const;
    ElemIdx inverse(ElemIdx a) const;
    ElemIdx pow(ElemIdx a, long k) const;
    long order_of(ElemIdx a) const;

    bool has_conjugation() const { return conj_.has_value(); }
    ElemIdx conjugation() const;
    void set_conjugation(ElemIdx c);

    bool operator==(const FiniteAbelianGroup& o) const {
        return parts_ == o.parts_ && conj_ == o.conj_;
    }

private:
    std::vector<long> parts_;
    std::vector<long> strides_;
    std::vector<long> inv_;
    std::size_t order_;
    std::optional<ElemIdx> conj_;
};

using GroupPtr = std::shared_ptr<const FiniteAbelianGroup>;

/// Build a group from cyclic orders; optionally mark a conjugation element
/// (must have order exactly 2). Rejects order-1 factors.
GroupPtr group_product(const std::vector<long>& parts,
                       const std::optional<std::vector<long>>& conjugation_exps = std::nullopt);

class Subgroup {
public:
    Subgroup(GroupPtr g, std::vector<ElemIdx> gens);

    const GroupPtr& ambient() const { return g_; }
    const std::vector<ElemIdx>& gens() const { return gens_; }
    /// Sorted, duplicate-free enumeration of all elements.
    const std::vector<ElemIdx>& elems() const { return elems_; }
    std::size_t order() const { return elems_.size(); }
    bool contains(ElemIdx e) const;
    bool contains_all(const Subgroup& other) const;

    bool operator==(const Subgroup& o) const { return elems_ == o.elems_; }

private:
    GroupPtr g_;
    std::vector<ElemIdx> gens_;
    std::vector<ElemIdx> elems_;
};

/// Smallest subgroup containing the given elements (exhaustive closure).
Subgroup subgroup_from_generators(const GroupPtr& g, const std::vector<ElemIdx>& gens);

struct QuotientMap {
    GroupPtr quotient;                 // invariant-factor form
    std::vector<ElemIdx> image;        // index in G -> index in quotient
    std::vector<ElemIdx> section;      // index in quotient -> a representative in G
    GroupPtr source;

    ElemIdx operator()(ElemIdx g) const { return image[g]; }
};

/// Quotient G/H in invariant-factor form together with the element surjection.
QuotientMap quotient_map(const GroupPtr& g, const Subgroup& h);

/// One cyclic factor of a decomposition H = <b_1> x ... x <b_s>.
struct CyclicFactor {
    ElemIdx gen;
    long order;
};

/// Canonical cyclic decomposition of a subgroup (invariant-factor orders,
/// d_1 | d_2 | ..., all >= 2; empty for the trivial subgroup).
std::vector<CyclicFactor> cyclic_decomposition(const Subgroup& h);

/// Check that the given elements define a direct-product decomposition of H.
bool is_cyclic_decomposition(const Subgroup& h, const std::vector<ElemIdx>& bs);

/// All subgroups of G (each as a Subgroup), deterministic order.
std::vector<Subgroup> all_subgroups(const GroupPtr& g);

/// All isomorphism classes of abelian groups of order n, as parts lists.
std::vector<std::vector<long>> abelian_groups_of_order(long n);

/// A small generating set (greedy, deterministic).
std::vector<ElemIdx> small_generating_set(const Subgroup& h);

}  // namespace eqf
