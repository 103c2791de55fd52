#include "eqf/ideal.hpp"

#include <sstream>
#include <stdexcept>

namespace eqf {

namespace {

long val_at(const mpz_class& z, long p) {
    if (z == 0) throw std::logic_error("valuation of zero");
    long v = 0;
    mpz_class t = z;
    while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p))) {
        mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p));
        ++v;
    }
    return v;
}

long val_at(const mpq_class& q, long p) {
    return val_at(mpz_class(q.get_num()), p) - val_at(mpz_class(q.get_den()), p);
}

mpq_class pivot_product(const IntMat& h) {
    mpq_class prod = 1;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::size_t pc = 0;
        while (pc < h.cols() && h.at(i, pc) == 0) ++pc;
        prod *= mpq_class(h.at(i, pc));
    }
    return prod;
}

}  // namespace

FractionalIdeal FractionalIdeal::from_generators(const RingPtr& ring, std::vector<RingElem> gens) {
    FractionalIdeal out;
    out.ring_ = ring;
    out.gens_ = std::move(gens);
    const std::size_t dim = ring->dim();
    const auto& g = *ring->group();

    // common denominator across all generators
    mpz_class den = 1;
    for (const auto& x : out.gens_) {
        if (!ring->same(*x.ring())) throw std::invalid_argument("ideal generator in wrong ring");
        for (const auto& q : x.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    }

    HnfBuilder b(dim);
    std::vector<mpz_class> row(dim);
    // translate by coset representatives only (minus ring: c-translates are
    // just sign flips of the same rows)
    for (const auto& x : out.gens_) {
        for (std::size_t t = 0; t < dim; ++t) {
            const ElemIdx tr = ring->elem_at(t);
            for (auto& r : row) r = 0;
            bool nonzero = false;
            for (std::size_t i = 0; i < dim; ++i) {
                if (x.coeff(i) == 0) continue;
                ElemIdx prod = g.mul(tr, ring->elem_at(i));
                auto [pos, sign] = ring->slot_of(prod);
                mpq_class q = x.coeff(i) * mpq_class(den);
                if (sign < 0) q = -q;
                row[pos] += q.get_num();  // q has denominator 1 by construction
                nonzero = true;
            }
            if (nonzero) b.insert(row);
        }
    }
    IntMat h = b.finalize();
    if (h.rows() == 0) {
        out.lattice_ = IntMat(0, dim);
        out.scale_ = 1;
        return out;
    }
    if (ring->is_minus()) h = saturate_at_2(h);
    mpz_class g0 = content(h);
    if (g0 > 1) h = divexact(h, g0);
    out.scale_ = mpq_class(g0, den);
    out.scale_.canonicalize();
    if (ring->is_minus()) {
        // strip the 2-part of the scale: 2 is a unit in the minus ring
        mpz_class num = out.scale_.get_num(), d2 = out.scale_.get_den();
        while (mpz_even_p(num.get_mpz_t())) mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), 2);
        while (mpz_even_p(d2.get_mpz_t())) mpz_divexact_ui(d2.get_mpz_t(), d2.get_mpz_t(), 2);
        out.scale_ = mpq_class(num, d2);
        out.scale_.canonicalize();
    }
    out.lattice_ = std::move(h);
    return out;
}

FractionalIdeal FractionalIdeal::zero(const RingPtr& ring) {
    return from_generators(ring, {});
}

FractionalIdeal FractionalIdeal::unit(const RingPtr& ring) {
    return from_generators(ring, {RingElem::one(ring)});
}

bool FractionalIdeal::operator==(const FractionalIdeal& o) const {
    return ring_->same(*o.ring_) && scale_ == o.scale_ && lattice_ == o.lattice_;
}

FractionalIdeal FractionalIdeal::operator+(const FractionalIdeal& o) const {
    if (!ring_->same(*o.ring_)) throw std::invalid_argument("ideal sum: ring mismatch");
    std::vector<RingElem> gens = gens_;
    gens.insert(gens.end(), o.gens_.begin(), o.gens_.end());
    return from_generators(ring_, std::move(gens));
}

FractionalIdeal FractionalIdeal::operator*(const FractionalIdeal& o) const {
    if (!ring_->same(*o.ring_)) throw std::invalid_argument("ideal product: ring mismatch");
    std::vector<RingElem> gens;
    gens.reserve(gens_.size() * o.gens_.size());
    for (const auto& a : gens_)
        for (const auto& b : o.gens_) gens.push_back(a * b);
    return from_generators(ring_, std::move(gens));
}

FractionalIdeal FractionalIdeal::scaled(const mpq_class& q) const {
    std::vector<RingElem> gens;
    gens.reserve(gens_.size());
    for (const auto& a : gens_) gens.push_back(a * q);
    return from_generators(ring_, std::move(gens));
}

bool FractionalIdeal::contains(const RingElem& x) const {
    if (!ring_->same(*x.ring())) throw std::invalid_argument("membership: ring mismatch");
    if (x.is_zero()) return true;
    if (is_zero()) return false;
    const std::size_t dim = ring_->dim();
    // w = x / scale must lie in the lattice (minus rings: up to a 2-power)
    std::vector<mpq_class> w(dim);
    mpz_class den = 1;
    for (std::size_t i = 0; i < dim; ++i) {
        w[i] = x.coeff(i) / scale_;
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), w[i].get_den_mpz_t());
    }
    if (den != 1) {
        if (!ring_->is_minus()) return false;
        // only a 2-power denominator may be cleared
        mpz_class d = den;
        while (mpz_even_p(d.get_mpz_t())) mpz_divexact_ui(d.get_mpz_t(), d.get_mpz_t(), 2);
        if (d != 1) return false;
    }
    std::vector<mpz_class> v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        mpq_class t = w[i] * mpq_class(den);
        v[i] = t.get_num();
    }
    return solve_in_hnf(lattice_, v).has_value();
}

bool FractionalIdeal::contains_ideal(const FractionalIdeal& o) const {
    for (const auto& g : o.gens_)
        if (!contains(g)) return false;
    // generators span o by construction
    return true;
}

std::string FractionalIdeal::to_string() const {
    std::ostringstream os;
    os << "scale " << scale_.get_str() << " lattice " << lattice_.to_string();
    return os.str();
}

namespace {

bool same_rational_span(const FractionalIdeal& a, const FractionalIdeal& b) {
    if (a.rank() != b.rank()) return false;
    for (std::size_t i = 0; i < a.lattice().rows(); ++i) {
        std::vector<mpq_class> v(a.lattice().cols());
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = mpq_class(a.lattice().at(i, j));
        if (!in_rational_span(b.lattice(), v)) return false;
    }
    return true;
}

}  // namespace

long index_valuation(const FractionalIdeal& sum, const FractionalIdeal& part, long p) {
    // [sum : part] as a positive rational; v_p of it
    const long r = static_cast<long>(sum.rank());
    mpq_class idx = pivot_product(part.lattice()) / pivot_product(sum.lattice());
    for (long i = 0; i < r; ++i) idx *= part.scale() / sum.scale();
    idx.canonicalize();
    return val_at(idx, p);
}

bool p_local_equal(const FractionalIdeal& i, const FractionalIdeal& j, long p) {
    if (p == 2) throw std::invalid_argument("p_local_equal: p must be odd");
    if (!i.ring()->same(*j.ring())) throw std::invalid_argument("p_local_equal: ring mismatch");
    if (i.is_zero() || j.is_zero()) return i.is_zero() && j.is_zero();
    if (!same_rational_span(i, j)) return false;
    FractionalIdeal sum = i + j;
    return index_valuation(sum, i, p) == 0 && index_valuation(sum, j, p) == 0;
}

std::vector<std::vector<long>> vanishing_characters(const FractionalIdeal& ideal) {
    std::vector<std::vector<long>> out;
    std::vector<std::vector<CharacterValue>> per_gen;
    for (const auto& g : ideal.generators()) per_gen.push_back(character_values(g));
    if (per_gen.empty()) {
        for (const auto& cv : character_values(RingElem::zero(ideal.ring())))
            out.push_back(cv.character);
        return out;
    }
    for (std::size_t c = 0; c < per_gen[0].size(); ++c) {
        bool all_zero = true;
        for (const auto& pg : per_gen)
            if (pg[c].nonzero) all_zero = false;
        if (all_zero) out.push_back(per_gen[0][c].character);
    }
    return out;
}

TransitionImage transition_image(const QuotientMap& pi, const RingPtr& source_ring,
                                 const RingPtr& target_ring, const FractionalIdeal& ideal,
                                 const FractionalIdeal* target, long p) {
    TransitionImage out;
    for (const auto& g : ideal.generators())
        out.mapped_gens.push_back(restriction(pi, source_ring, target_ring, g));
    out.image = FractionalIdeal::from_generators(target_ring, out.mapped_gens);
    if (target) {
        const auto& tg = target->generators();
        for (std::size_t k = 0; k < out.mapped_gens.size(); ++k) {
            if (k < tg.size() && out.mapped_gens[k] == tg[k])
                out.alignment.push_back(GenAlignment::Good);
            else if (k < tg.size() && p > 0 && out.mapped_gens[k] == tg[k] * mpq_class(p))
                out.alignment.push_back(GenAlignment::Bad);
            else
                out.alignment.push_back(GenAlignment::Unaligned);
        }
    }
    return out;
}

}  // namespace eqf
