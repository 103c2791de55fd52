#include "eqf/ring.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

#include "eqf/cyclotomic.hpp"

namespace eqf {

GroupRing::GroupRing(GroupPtr g, bool minus) : g_(std::move(g)), minus_(minus) {
    if (!minus_) {
        dim_ = g_->order();
        return;
    }
    const ElemIdx c = g_->conjugation();
    const std::size_t n = g_->order();
    rep_pos_.assign(n, SIZE_MAX);
    rep_sign_.assign(n, 0);
    for (ElemIdx e = 0; e < n; ++e) {
        if (rep_pos_[e] != SIZE_MAX) continue;
        const std::size_t pos = reps_.size();
        reps_.push_back(e);
        rep_pos_[e] = pos;
        rep_sign_[e] = +1;
        ElemIdx partner = g_->mul(c, e);
        rep_pos_[partner] = pos;
        rep_sign_[partner] = -1;
    }
    dim_ = reps_.size();
}

std::shared_ptr<const GroupRing> GroupRing::full(GroupPtr g) {
    return std::shared_ptr<const GroupRing>(new GroupRing(std::move(g), false));
}

std::shared_ptr<const GroupRing> GroupRing::minus(GroupPtr g) {
    if (!g->has_conjugation())
        throw std::invalid_argument("minus ring needs a conjugation element");
    return std::shared_ptr<const GroupRing>(new GroupRing(std::move(g), true));
}

std::pair<std::size_t, int> GroupRing::slot_of(ElemIdx g) const {
    if (!minus_) return {g, +1};
    return {rep_pos_[g], rep_sign_[g]};
}

RingElem::RingElem(RingPtr r, std::vector<mpq_class> coeffs)
    : ring_(std::move(r)), c_(std::move(coeffs)) {
    if (c_.size() != ring_->dim()) throw std::invalid_argument("RingElem: coefficient count");
    for (auto& x : c_) x.canonicalize();
}

RingElem RingElem::one(const RingPtr& r) { return of_group_elem(r, 0); }

RingElem RingElem::of_group_elem(const RingPtr& r, ElemIdx g) {
    RingElem e(r);
    auto [pos, sign] = r->slot_of(g);
    e.c_[pos] = sign;
    return e;
}

RingElem RingElem::scalar(const RingPtr& r, const mpq_class& q) {
    RingElem e(r);
    auto [pos, sign] = r->slot_of(0);
    e.c_[pos] = sign > 0 ? q : -q;
    return e;
}

bool RingElem::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

std::size_t RingElem::support_size() const {
    std::size_t s = 0;
    for (const auto& x : c_)
        if (x != 0) ++s;
    return s;
}

RingElem RingElem::operator+(const RingElem& o) const {
    if (!ring_->same(*o.ring_)) throw std::invalid_argument("ring mismatch");
    RingElem out(ring_);
    for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] + o.c_[i];
    return out;
}

RingElem RingElem::operator-(const RingElem& o) const {
    if (!ring_->same(*o.ring_)) throw std::invalid_argument("ring mismatch");
    RingElem out(ring_);
    for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] - o.c_[i];
    return out;
}

RingElem RingElem::operator-() const {
    RingElem out(ring_);
    for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = -c_[i];
    return out;
}

RingElem RingElem::operator*(const RingElem& o) const {
    if (!ring_->same(*o.ring_)) throw std::invalid_argument("ring mismatch");
    const RingElem* a = this;
    const RingElem* b = &o;
    if (a->support_size() > b->support_size()) std::swap(a, b);
    RingElem out(ring_);
    const auto& g = *ring_->group();
    for (std::size_t i = 0; i < a->c_.size(); ++i) {
        if (a->c_[i] == 0) continue;
        const ElemIdx gi = ring_->elem_at(i);
        for (std::size_t j = 0; j < b->c_.size(); ++j) {
            if (b->c_[j] == 0) continue;
            const ElemIdx prod = g.mul(gi, ring_->elem_at(j));
            auto [pos, sign] = ring_->slot_of(prod);
            if (sign > 0)
                out.c_[pos] += a->c_[i] * b->c_[j];
            else
                out.c_[pos] -= a->c_[i] * b->c_[j];
        }
    }
    return out;
}

RingElem RingElem::operator*(const mpq_class& q) const {
    RingElem out(ring_);
    for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = c_[i] * q;
    return out;
}

bool RingElem::operator==(const RingElem& o) const {
    return ring_->same(*o.ring_) && c_ == o.c_;
}

mpq_class RingElem::augmentation() const {
    if (ring_->is_minus()) throw std::logic_error("augmentation on a minus-ring element");
    mpq_class s = 0;
    for (const auto& x : c_) s += x;
    return s;
}

std::string RingElem::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << c_[i].get_str() << "*[";
        auto ex = ring_->group()->exps_of(ring_->elem_at(i));
        for (std::size_t k = 0; k < ex.size(); ++k) os << (k ? "," : "") << ex[k];
        os << "]";
    }
    if (first) os << "0";
    return os.str();
}

RingElem norm_element(const RingPtr& r, const Subgroup& h) {
    RingElem out(r);
    for (ElemIdx e : h.elems()) {
        auto [pos, sign] = r->slot_of(e);
        out.coeff(pos) += sign;
    }
    return out;
}

RingElem idempotent(const RingPtr& r, const Subgroup& h) {
    return norm_element(r, h) * mpq_class(1, static_cast<long>(h.order()));
}

RingElem restriction(const QuotientMap& pi, const RingPtr& source_ring,
                     const RingPtr& target_ring, const RingElem& x) {
    if (!source_ring->same(*x.ring())) throw std::invalid_argument("restriction: wrong source ring");
    if (source_ring->is_minus() != target_ring->is_minus())
        throw std::invalid_argument("restriction: full/minus mismatch");
    if (source_ring->is_minus() &&
        pi.image[source_ring->group()->conjugation()] != target_ring->group()->conjugation())
        throw std::invalid_argument("restriction: conjugations are not compatible");
    RingElem out(target_ring);
    for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
        if (x.coeff(i) == 0) continue;
        ElemIdx g = source_ring->elem_at(i);
        ElemIdx img = pi.image[g];
        auto [pos, sign] = target_ring->slot_of(img);
        if (sign > 0)
            out.coeff(pos) += x.coeff(i);
        else
            out.coeff(pos) -= x.coeff(i);
    }
    return out;
}

RingElem minus_project(const RingElem& x, const RingPtr& minus_ring) {
    if (x.ring()->is_minus()) throw std::invalid_argument("minus_project: already minus");
    if (!minus_ring->is_minus()) throw std::invalid_argument("minus_project: target not minus");
    RingElem out(minus_ring);
    for (std::size_t g = 0; g < x.coeffs().size(); ++g) {
        if (x.coeff(g) == 0) continue;
        auto [pos, sign] = minus_ring->slot_of(g);
        if (sign > 0)
            out.coeff(pos) += x.coeff(g);
        else
            out.coeff(pos) -= x.coeff(g);
    }
    return out;
}

RingElem lift_minus(const RingElem& m, const RingPtr& full_ring) {
    if (!m.ring()->is_minus()) throw std::invalid_argument("lift_minus: source not minus");
    if (full_ring->is_minus()) throw std::invalid_argument("lift_minus: target must be full");
    const auto& g = *full_ring->group();
    const ElemIdx c = g.conjugation();
    RingElem out(full_ring);
    for (std::size_t i = 0; i < m.coeffs().size(); ++i) {
        if (m.coeff(i) == 0) continue;
        ElemIdx rep = m.ring()->elem_at(i);
        mpq_class half = m.coeff(i) / 2;
        out.coeff(rep) += half;
        out.coeff(g.mul(c, rep)) -= half;
    }
    return out;
}

std::vector<std::vector<mpq_class>> mult_matrix(const RingElem& x) {
    const std::size_t d = x.ring()->dim();
    std::vector<std::vector<mpq_class>> m(d, std::vector<mpq_class>(d, 0));
    const auto& ring = x.ring();
    const auto& g = *ring->group();
    for (std::size_t j = 0; j < d; ++j) {
        const ElemIdx bj = ring->elem_at(j);
        for (std::size_t i = 0; i < d; ++i) {
            if (x.coeff(i) == 0) continue;
            ElemIdx prod = g.mul(ring->elem_at(i), bj);
            auto [pos, sign] = ring->slot_of(prod);
            if (sign > 0)
                m[pos][j] += x.coeff(i);
            else
                m[pos][j] -= x.coeff(i);
        }
    }
    return m;
}

namespace {

// Solve M y = v exactly; returns a particular solution (free variables 0)
// or nothing when inconsistent.
std::optional<std::vector<mpq_class>> solve_linear(std::vector<std::vector<mpq_class>> m,
                                                   std::vector<mpq_class> v) {
    const std::size_t n = m.size();
    const std::size_t cols = n == 0 ? 0 : m[0].size();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < n; ++c) {
        std::size_t p = r;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(m[p], m[r]);
        std::swap(v[p], v[r]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || m[i][c] == 0) continue;
            mpq_class f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
            v[i] -= f * v[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < n; ++i)
        if (v[i] != 0) return std::nullopt;
    std::vector<mpq_class> y(cols, 0);
    for (std::size_t i = 0; i < r; ++i) y[pivot_col[i]] = v[i] / m[i][pivot_col[i]];
    return y;
}

}  // namespace

bool is_nonzero_divisor(const RingElem& x) {
    const std::size_t d = x.ring()->dim();
    // clear denominators; scaling by a nonzero rational preserves the property
    mpz_class den = 1;
    for (const auto& q : x.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    auto m = mult_matrix(x);
    IntMat im(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            mpq_class q = m[i][j] * mpq_class(den);
            im.at(i, j) = q.get_num();
        }
    return det(im) != 0;
}

std::optional<RingElem> solve_mul(const RingElem& a, const RingElem& b) {
    if (!a.ring()->same(*b.ring())) throw std::invalid_argument("solve_mul: ring mismatch");
    auto m = mult_matrix(a);
    std::vector<mpq_class> v(b.coeffs().begin(), b.coeffs().end());
    auto y = solve_linear(std::move(m), std::move(v));
    if (!y) return std::nullopt;
    return RingElem(a.ring(), std::move(*y));
}

RingElem invert(const RingElem& x) {
    auto y = solve_mul(x, RingElem::one(x.ring()));
    if (!y || !((x * *y) == RingElem::one(x.ring())))
        throw std::domain_error("invert: element is a zero divisor");
    return *y;
}

RingElem pseudo_inverse(const RingElem& x) {
    // Solve x^2 z = x (always consistent in the semisimple rational algebra),
    // then w = x z^2 has chi(w) = 1/chi(x) on the nonvanishing components.
    RingElem x2 = x * x;
    auto z = solve_mul(x2, x);
    if (!z) throw std::logic_error("pseudo_inverse: unexpected inconsistency");
    return x * (*z) * (*z);
}

std::vector<CharacterValue> character_values(const RingElem& x) {
    const auto& ring = x.ring();
    const auto& g = *ring->group();
    long n_exp = 1;
    for (long p : g.parts()) n_exp = std::lcm(n_exp, p);
    CycloField field(n_exp);
    std::vector<CharacterValue> out;
    const std::size_t nchars = g.order();
    for (ElemIdx t = 0; t < nchars; ++t) {
        auto te = g.exps_of(t);
        if (ring->is_minus()) {
            // keep odd characters only: chi(c) = -1
            auto ce = g.exps_of(g.conjugation());
            long phase = 0;
            for (std::size_t k = 0; k < te.size(); ++k)
                phase = (phase + (te[k] * ce[k] % g.parts()[k]) * (n_exp / g.parts()[k])) % n_exp;
            if (phase != n_exp / 2) continue;
        }
        std::vector<mpq_class> pow(static_cast<std::size_t>(n_exp), 0);
        for (std::size_t i = 0; i < x.coeffs().size(); ++i) {
            if (x.coeff(i) == 0) continue;
            auto ee = g.exps_of(ring->elem_at(i));
            long phase = 0;
            for (std::size_t k = 0; k < te.size(); ++k)
                phase = (phase + (te[k] * ee[k] % g.parts()[k]) * (n_exp / g.parts()[k])) % n_exp;
            pow[static_cast<std::size_t>(phase)] += x.coeff(i);
        }
        CharacterValue cv;
        cv.character = te;
        cv.value = field.reduce_powers(pow);
        cv.nonzero = !CycloField::is_zero(cv.value);
        out.push_back(std::move(cv));
    }
    return out;
}

}  // namespace eqf
