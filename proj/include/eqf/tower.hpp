#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eqf/ideal.hpp"
#include "eqf/stickelberger.hpp"

namespace eqf {

/// Per-layer Galois data of one place in the truncated cyclotomic tower.
struct PlaceLayer {
    Subgroup inertia;
    ElemIdx frobenius;
    Subgroup decomposition;
};

struct PlaceData {
    long v = 0;
    bool above_p = false;
    std::vector<PlaceLayer> layers;                  // 0..depth
    /// Coherent generators of the stable torsion part of the inertia, one
    /// tuple per layer (for v away from p this is the whole inertia's
    /// decomposition; for v above p the s-1 finite generators).
    std::vector<std::vector<ElemIdx>> torsion_gens;
    std::vector<long> torsion_orders;
    /// For v above p: the layer-varying generator g_s^{(n)} of the growing
    /// cyclic part (identity while the layer is below n0).
    std::vector<ElemIdx> growing_gen;
    int n0 = 0;  // first layer where the alignment conditions hold
    /// For v away from p: layer orders of the canonical Frobenius
    /// (certifying unbounded order by strict growth from n0 on).
    std::vector<long> frobenius_orders;
};

struct TowerSpec {
    FieldPtr base;
    long p = 0;
    int depth = 0;
    std::set<long> s_finite, t_set, s_prime;
    std::vector<FieldPtr> layers;           // 0..depth
    std::vector<QuotientMap> transitions;   // [n]: layers[n+1] -> layers[n]
    std::vector<PlaceData> places;
    int n0 = 0;                             // max of the per-place thresholds

    const PlaceData& place(long v) const;
    RingPtr minus_ring(int n) const { return layers[n]->minus_ring(); }
};

/// Build the truncated tower over H for the odd prime p: layer fields,
/// transition maps, and per-place decomposition/inertia/Frobenius data for
/// the requested places plus every ramified prime of the tower. Validates
/// S_infty <= S (implicit) and T disjoint from S_p, and certifies the
/// coherence invariants; towers with p dividing [H:Q] are re-based so the
/// base group splits off the growing cyclic part.
TowerSpec derive_tower(const FieldPtr& base, long p, int depth,
                       const std::vector<long>& extra_places, const std::set<long>& s_finite,
                       const std::set<long>& t_set, const std::set<long>& s_prime = {});

/// Layer-n image of tilde-J_v = (sum_i tilde-Z_i) Delta G_v for v above p.
FractionalIdeal tilde_j_ideal(const TowerSpec& tower, long v, int n);

/// Layer-n image of Q_v = (N(I_v), (1 - e_{I_v} sigma_v^{-1}) J_v) for v
/// away from p.
FractionalIdeal q_v_ideal(const TowerSpec& tower, long v, int n);

struct RvContribution {
    std::vector<ElemIdx> a_gens;    // generators of the finite factor A (layer n)
    std::string b_desc;
    long r_b = 0;
    bool symbolic = false;          // r_B = 1: N(A) over the denominator (b - 1)
    std::optional<FractionalIdeal> honest;  // N(A) Delta(B)^{r_B - 2} when r_B >= 2
    RingElem denominator;           // b - 1 for the symbolic case
};

struct RvResult {
    std::vector<RvContribution> contributions;
    FractionalIdeal honest_join;    // join of the honest contributions
    bool fully_honest = false;      // no symbolic contribution appeared
};

/// Enumerate the decompositions G_v = A x B (A finite, B containing the
/// pro-cyclic part) at layer n and evaluate N(A) Delta(B)^{r_B-2} for each;
/// decompositions with topologically cyclic B stay symbolic.
RvResult r_v_ideal(const TowerSpec& tower, long v, int n, std::size_t max_group = 256);

/// Layer-n Kurihara right-hand side. Plain form:
///   Theta_{S_infty}^T(H_n) prod_{v in S_ram(H_n) - T} (N(I_v), 1 - e_{I_v} sigma_v^{-1}).
/// Limit form (per the projective-limit theorem): the p-ramified factors are
/// absorbed, Theta_{S_p + S_infty}^T(H_n) prod_{v in S_ram - (T + S_p)} (...).
FractionalIdeal kurihara_rhs(const TowerSpec& tower, int n, bool limit_form);

struct MainRhsResult {
    FractionalIdeal ideal;
    LValue theta;
    std::vector<std::pair<std::string, FractionalIdeal>> factors;
};

/// Layer-n right-hand side of the main Fitting-ideal formula:
///   Theta_{(S cap S_ram) + S_p}^T(H_n) * prod Q_v * prod tilde-J_v * prod R_v.
/// Refuses when T is empty or when an R_v factor is symbolic.
MainRhsResult main_rhs(const TowerSpec& tower, int n);

/// One tracked family of layer ideals with positionally aligned generators.
struct IdealFamily {
    std::string name;
    std::vector<FractionalIdeal> layers;  // index = layer
    int first_layer = 0;
};

struct FamilyStability {
    std::string name;
    bool containment = false;        // pi(F_{n+1}) <= F_n for all tracked n
    bool aligned = false;            // every generator Good or Bad from n0 on
    bool decay = false;              // bad generators map with exactly p^{n-m}
    bool product_split = false;      // image from level n = good_m + p^{n-m} bad_m
    std::vector<std::vector<GenAlignment>> alignments;
};

FamilyStability limit_stability(const TowerSpec& tower, const IdealFamily& family);

/// The Kurihara factor (N(I_{v,n}), 1 - e_{I_{v,n}} sigma_{v,n}^{-1}) as a
/// per-layer family.
IdealFamily kurihara_factor_family(const TowerSpec& tower, long v);
IdealFamily tilde_j_family(const TowerSpec& tower, long v);
IdealFamily q_v_family(const TowerSpec& tower, long v);
IdealFamily theta_family(const TowerSpec& tower, const std::set<long>& s_finite);

}  // namespace eqf
