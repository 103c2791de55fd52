#pragma once

#include <vector>

#include "eqf/fitting.hpp"
#include "eqf/ideal.hpp"
#include "eqf/ring.hpp"

namespace eqf {

/// Local data at a place: decomposition group G_w, inertia I_w, and a
/// Frobenius lift phi_w whose class generates the cyclic quotient G_w/I_w.
struct LocalData {
    GroupPtr g_w;
    Subgroup i_w;
    ElemIdx phi_w;

    long l_v() const { return static_cast<long>(g_w->order() / i_w.order()); }
};

/// The local module W_w = {(x, y) in Delta G_w + Z[G_w/I_w] : xbar = (1-phi^{-1}) y},
/// realized on its Z-basis {w_g = (g-1, sum_{i<=a(g)} phi^i)} with
/// 0 < a(g) <= l_v and action g.w_h = w_{gh} - w_g + a_{g,h} w_1.
class WModule {
public:
    explicit WModule(LocalData data);

    const LocalData& data() const { return data_; }
    long a(ElemIdx g) const { return a_[g]; }
    /// a_{g,h} from a(g)+a(h) = a(gh) + l_v a_{g,h}; always 0 or 1.
    long a_pair(ElemIdx g, ElemIdx h) const;

    /// Pair coordinates of basis element w_g: (x in Z[G_w], y in Z[G_w/I_w]).
    std::vector<mpz_class> x_part(ElemIdx g) const;
    std::vector<mpz_class> y_part(ElemIdx g) const;

    /// Action of g on w_h in w-basis coordinates (length |G_w|).
    std::vector<mpz_class> action(ElemIdx g, ElemIdx h) const;

    const QuotientMap& quot() const { return quot_; }

private:
    LocalData data_;
    std::vector<long> a_;
    QuotientMap quot_;  // G_w -> G_w/I_w
};

LocalData make_local_data(GroupPtr g_w, const std::vector<ElemIdx>& inertia_gens, ElemIdx phi);

/// Matrix of iota_w : W_w -> Z[G_w], (x,y) -> y, in the unramified case.
/// Throws on ramified input; the returned matrix is unimodular iff iota is
/// an isomorphism.
IntMat map_iota(const WModule& w);

struct MapFResult {
    IntMat matrix;                 // rows: image of w_g in Z[G_w] coordinates
    bool injective = false;
    mpz_class cokernel_order;      // index of the image lattice
    mpz_class stated_order;        // |Z[G_w/I_w]/(1 - phibar^{-1} + |I_w|)|
    bool natural_projection_ok = false;  // pi(im f) lands in the stated relation lattice
    bool exact = false;            // injective + matching orders + natural projection
};

/// f_w : W_w -> Z[G_w], (x, y) -> x + N(I_w) ytilde, with the verification
/// of the exactness claim "0 -> W_w -> Z[G_w] -> Z[G_w/I_w]/(1-phi^{-1}+|I_w|) -> 0":
/// injectivity, cokernel order = stated order, and the natural projection
/// identifying the cokernel with the stated quotient.
MapFResult map_f(const WModule& w);

struct RationalGeneratorResult {
    bool free_rank_one = false;           // every w_g solved over Q[G_w] in the generator
    std::vector<RingElem> coordinates;    // w_g = coordinates[g] * gen
    RingElem f_of_gen;                    // f_w(gen); must equal h_v
    RingElem h_v;                         // 1 - e_I(phi^{-1} - |I|)
    bool f_certificate = false;
    RingElem j_of_gen;                    // j_w(gen) = x-part; must be 1 - e_I phi^{-1}
    bool j_certificate = false;
};

/// Rational rank-1 structure of W_w with generator (1 - e_I phi^{-1}, 1) and
/// the two certificates f_w(gen) = h_v, j_w(gen) = 1 - e_I phi^{-1}.
RationalGeneratorResult rational_generator(const WModule& w);

}  // namespace eqf
