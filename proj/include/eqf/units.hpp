#pragma once

#include <vector>

#include "eqf/abelian.hpp"

namespace eqf {

/// The unit group (Z/m)^* with an explicit cyclic-part decomposition,
/// residue <-> element tables, and discrete logarithms by enumeration.
class UnitGroup {
public:
    explicit UnitGroup(long m);

    long modulus() const { return m_; }
    const GroupPtr& group() const { return g_; }
    std::size_t order() const { return g_->order(); }

    bool is_unit(long a) const;
    ElemIdx class_of(long a) const;
    /// Smallest positive residue representing the element.
    long residue_of(ElemIdx e) const { return residue_[e]; }

    Subgroup subgroup_of_residues(const std::vector<long>& gens) const;

private:
    long m_;
    GroupPtr g_;
    std::vector<ElemIdx> class_table_;  // residue -> element (SIZE_MAX if not a unit)
    std::vector<long> residue_;         // element -> smallest positive residue
};

}  // namespace eqf
