#include "eqf/abelian.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace eqf {

FiniteAbelianGroup::FiniteAbelianGroup(std::vector<long> parts) : parts_(std::move(parts)) {
    order_ = 1;
    strides_.resize(parts_.size());
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] < 2) throw std::invalid_argument("group factor of order < 2");
        strides_[i] = static_cast<long>(order_);
        order_ *= static_cast<std::size_t>(parts_[i]);
    }
    // invariant factors via SNF of the relation lattice diag(parts)
    if (parts_.empty()) {
        inv_ = {};
    } else {
        IntMat d(parts_.size(), parts_.size());
        for (std::size_t i = 0; i < parts_.size(); ++i) d.at(i, i) = parts_[i];
        SmithForm s = smith_form(d);
        for (const auto& di : s.divisors)
            if (di > 1) inv_.push_back(static_cast<long>(di.get_si()));
        std::sort(inv_.begin(), inv_.end());
    }
}

std::vector<long> FiniteAbelianGroup::exps_of(ElemIdx i) const {
    std::vector<long> e(parts_.size());
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        e[k] = static_cast<long>(i % static_cast<std::size_t>(parts_[k]));
        i /= static_cast<std::size_t>(parts_[k]);
    }
    return e;
}

ElemIdx FiniteAbelianGroup::idx_of(const std::vector<long>& exps) const {
    if (exps.size() != parts_.size()) throw std::invalid_argument("exponent tuple length");
    ElemIdx i = 0;
    for (std::size_t k = parts_.size(); k-- > 0;) {
        long e = exps[k] % parts_[k];
        if (e < 0) e += parts_[k];
        i = i * static_cast<std::size_t>(parts_[k]) + static_cast<std::size_t>(e);
    }
    return i;
}

ElemIdx FiniteAbelianGroup::mul(ElemIdx a, ElemIdx b) const {
    ElemIdx out = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        const std::size_t p = static_cast<std::size_t>(parts_[k]);
        std::size_t ea = a % p, eb = b % p;
        a /= p; b /= p;
        std::size_t e = ea + eb;
        if (e >= p) e -= p;
        out += e * stride;
        stride *= p;
    }
    return out;
}

ElemIdx FiniteAbelianGroup::inverse(ElemIdx a) const {
    ElemIdx out = 0;
    std::size_t stride = 1;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
        const std::size_t p = static_cast<std::size_t>(parts_[k]);
        std::size_t ea = a % p;
        a /= p;
        out += (ea == 0 ? 0 : p - ea) * stride;
        stride *= p;
    }
    return out;
}

ElemIdx FiniteAbelianGroup::pow(ElemIdx a, long k) const {
    ElemIdx out = 0;
    std::size_t stride = 1;
    ElemIdx aa = a;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        const long p = parts_[i];
        long ea = static_cast<long>(aa % static_cast<std::size_t>(p));
        aa /= static_cast<std::size_t>(p);
        long e = static_cast<long>(((static_cast<long long>(ea) * k) % p + p) % p);
        out += static_cast<std::size_t>(e) * stride;
        stride *= static_cast<std::size_t>(p);
    }
    return out;
}

long FiniteAbelianGroup::order_of(ElemIdx a) const {
    long o = 1;
    std::size_t aa = a;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        const long p = parts_[i];
        long ea = static_cast<long>(aa % static_cast<std::size_t>(p));
        aa /= static_cast<std::size_t>(p);
        long oi = p / std::gcd(p, ea == 0 ? p : ea);
        o = std::lcm(o, oi);
    }
    return o;
}

ElemIdx FiniteAbelianGroup::conjugation() const {
    if (!conj_) throw std::logic_error("group has no conjugation element");
    return *conj_;
}

void FiniteAbelianGroup::set_conjugation(ElemIdx c) {
    if (order_of(c) != 2) throw std::invalid_argument("conjugation element must have order 2");
    conj_ = c;
}

GroupPtr group_product(const std::vector<long>& parts,
                       const std::optional<std::vector<long>>& conjugation_exps) {
    auto g = std::make_shared<FiniteAbelianGroup>(parts);
    if (conjugation_exps) g->set_conjugation(g->idx_of(*conjugation_exps));
    return g;
}

Subgroup::Subgroup(GroupPtr g, std::vector<ElemIdx> gens) : g_(std::move(g)), gens_(std::move(gens)) {
    std::set<ElemIdx> seen{0};
    std::vector<ElemIdx> frontier{0};
    while (!frontier.empty()) {
        std::vector<ElemIdx> next;
        for (ElemIdx e : frontier)
            for (ElemIdx gen : gens_) {
                ElemIdx x = g_->mul(e, gen);
                if (seen.insert(x).second) next.push_back(x);
            }
        frontier = std::move(next);
    }
    elems_.assign(seen.begin(), seen.end());
}

bool Subgroup::contains(ElemIdx e) const {
    return std::binary_search(elems_.begin(), elems_.end(), e);
}

bool Subgroup::contains_all(const Subgroup& other) const {
    return std::includes(elems_.begin(), elems_.end(), other.elems_.begin(), other.elems_.end());
}

Subgroup subgroup_from_generators(const GroupPtr& g, const std::vector<ElemIdx>& gens) {
    return Subgroup(g, gens);
}

QuotientMap quotient_map(const GroupPtr& g, const Subgroup& h) {
    if (h.ambient().get() != g.get() && !(*h.ambient() == *g))
        throw std::invalid_argument("quotient_map: subgroup of a different group");
    const std::size_t k = g->num_parts();
    QuotientMap out;
    out.source = g;
    if (k == 0) {
        out.quotient = group_product({});
        out.image.assign(1, 0);
        out.section.assign(1, 0);
        return out;
    }
    IntMat rel(0, k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<mpz_class> r(k, 0);
        r[i] = g->parts()[i];
        rel.append_row(r);
    }
    for (ElemIdx e : h.gens()) {
        auto ex = g->exps_of(e);
        std::vector<mpz_class> r(k);
        for (std::size_t j = 0; j < k; ++j) r[j] = ex[j];
        rel.append_row(r);
    }
    SmithForm s = smith_form(rel);
    std::vector<long> qparts;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i) {
        long d = static_cast<long>(s.divisors[i].get_si());
        if (d > 1) {
            qparts.push_back(d);
            keep.push_back(i);
        }
    }
    auto q = std::make_shared<FiniteAbelianGroup>(qparts);
    out.image.resize(g->order());
    std::vector<long> qe(qparts.size());
    for (ElemIdx e = 0; e < g->order(); ++e) {
        auto ex = g->exps_of(e);
        for (std::size_t t = 0; t < keep.size(); ++t) {
            // component of x*V at the kept coordinate
            mpz_class acc = 0;
            for (std::size_t j = 0; j < k; ++j) acc += mpz_class(ex[j]) * s.v.at(j, keep[t]);
            mpz_class m = acc % s.divisors[keep[t]];
            if (m < 0) m += s.divisors[keep[t]];
            qe[t] = static_cast<long>(m.get_si());
        }
        out.image[e] = q->idx_of(qe);
    }
    // carry the conjugation down when it stays of order 2
    if (g->has_conjugation()) {
        ElemIdx ci = out.image[g->conjugation()];
        if (q->order_of(ci) == 2) q->set_conjugation(ci);
    }
    out.quotient = q;
    out.section.assign(q->order(), 0);
    std::vector<bool> found(q->order(), false);
    for (ElemIdx e = 0; e < g->order(); ++e)
        if (!found[out.image[e]]) {
            found[out.image[e]] = true;
            out.section[out.image[e]] = e;
        }
    return out;
}

std::vector<ElemIdx> small_generating_set(const Subgroup& h) {
    const auto& g = h.ambient();
    std::vector<ElemIdx> ordered = h.elems();
    std::stable_sort(ordered.begin(), ordered.end(), [&](ElemIdx a, ElemIdx b) {
        return g->order_of(a) > g->order_of(b);
    });
    std::vector<ElemIdx> gens;
    std::size_t cur = 1;
    for (ElemIdx e : ordered) {
        if (cur == h.order()) break;
        if (e == 0) continue;
        std::vector<ElemIdx> trial = gens;
        trial.push_back(e);
        Subgroup s(g, trial);
        if (s.order() > cur) {
            gens = std::move(trial);
            cur = s.order();
        }
    }
    return gens;
}

std::vector<CyclicFactor> cyclic_decomposition(const Subgroup& h) {
    const auto& g = h.ambient();
    if (h.order() == 1) return {};
    std::vector<ElemIdx> gens = small_generating_set(h);
    const std::size_t t = gens.size();
    const std::size_t k = g->num_parts();
    // relation lattice R = { a in Z^t : sum a_i gens_i = 0 in G }
    IntMat m(0, k);
    for (ElemIdx e : gens) {
        auto ex = g->exps_of(e);
        std::vector<mpz_class> r(k);
        for (std::size_t j = 0; j < k; ++j) r[j] = ex[j];
        m.append_row(r);
    }
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<mpz_class> r(k, 0);
        r[i] = g->parts()[i];
        m.append_row(r);
    }
    IntMat ker = kernel_lattice(m);  // rows: (a | b), we want the a-part
    IntMat rel(0, t);
    for (std::size_t i = 0; i < ker.rows(); ++i) {
        std::vector<mpz_class> r(t);
        for (std::size_t j = 0; j < t; ++j) r[j] = ker.at(i, j);
        rel.append_row(r);
    }
    rel = hnf(rel);
    SmithForm s = smith_form(rel);
    // H = Z^t / R with iso x -> xV mod D; generator of factor i pulls back
    // through V^{-1}: h_i = sum_j (V^{-1})_{i j} gens_j.
    std::vector<CyclicFactor> out;
    for (std::size_t i = 0; i < t; ++i) {
        long d = static_cast<long>(s.divisors[i].get_si());
        if (d <= 1) continue;
        std::vector<mpz_class> e(t, 0);
        e[i] = 1;
        // solve x V = e_i  <=>  find integer row x
        // V in HNF is identity for unimodular V only after reduction; solve via s.v directly:
        // use adjugate-free route: x = e_i * V^{-1}; compute by Gaussian elimination over Q.
        // t is tiny here.
        std::vector<mpq_class> x(t, 0);
        {
            // solve x * V = e  =>  V^T x^T = e^T
            std::vector<std::vector<mpq_class>> a(t, std::vector<mpq_class>(t + 1));
            for (std::size_t r2 = 0; r2 < t; ++r2) {
                for (std::size_t c2 = 0; c2 < t; ++c2) a[r2][c2] = mpq_class(s.v.at(c2, r2));
                a[r2][t] = mpq_class(e[r2]);
            }
            for (std::size_t c2 = 0; c2 < t; ++c2) {
                std::size_t piv = c2;
                while (piv < t && a[piv][c2] == 0) ++piv;
                std::swap(a[piv], a[c2]);
                for (std::size_t r2 = 0; r2 < t; ++r2) {
                    if (r2 == c2 || a[r2][c2] == 0) continue;
                    mpq_class f = a[r2][c2] / a[c2][c2];
                    for (std::size_t j = c2; j <= t; ++j) a[r2][j] -= f * a[c2][j];
                }
            }
            for (std::size_t r2 = 0; r2 < t; ++r2) x[r2] = a[r2][t] / a[r2][r2];
        }
        ElemIdx gen = 0;
        for (std::size_t j = 0; j < t; ++j) {
            mpq_class xj = x[j];
            if (xj.get_den() != 1) throw std::logic_error("cyclic_decomposition: non-integer inverse");
            long c = static_cast<long>(mpz_class(xj.get_num()).get_si());
            gen = g->mul(gen, g->pow(gens[j], c));
        }
        if (g->order_of(gen) != d) throw std::logic_error("cyclic_decomposition: generator order mismatch");
        out.push_back({gen, d});
    }
    return out;
}

bool is_cyclic_decomposition(const Subgroup& h, const std::vector<ElemIdx>& bs) {
    const auto& g = h.ambient();
    long prod = 1;
    for (ElemIdx b : bs) {
        if (!h.contains(b)) return false;
        prod *= g->order_of(b);
    }
    if (static_cast<std::size_t>(prod) != h.order()) return false;
    Subgroup s(g, bs);
    return s.order() == h.order();
}

std::vector<Subgroup> all_subgroups(const GroupPtr& g) {
    std::map<std::vector<ElemIdx>, Subgroup> found;
    Subgroup triv(g, {});
    found.emplace(triv.elems(), triv);
    std::vector<Subgroup> frontier{triv};
    while (!frontier.empty()) {
        std::vector<Subgroup> next;
        for (const Subgroup& s : frontier) {
            for (ElemIdx e = 1; e < g->order(); ++e) {
                if (s.contains(e)) continue;
                std::vector<ElemIdx> gens = s.gens();
                gens.push_back(e);
                Subgroup bigger(g, gens);
                if (found.emplace(bigger.elems(), bigger).second) next.push_back(bigger);
            }
        }
        frontier = std::move(next);
    }
    std::vector<Subgroup> out;
    out.reserve(found.size());
    for (auto& [k, v] : found) out.push_back(v);
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.order() != b.order()) return a.order() < b.order();
        return a.elems() < b.elems();
    });
    return out;
}

namespace {

void partitions_of(long n, long maxpart, std::vector<long>& cur, std::vector<std::vector<long>>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (long p = std::min(n, maxpart); p >= 1; --p) {
        cur.push_back(p);
        partitions_of(n - p, p, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::vector<long>> abelian_groups_of_order(long n) {
    std::vector<std::pair<long, long>> fact;
    long m = n;
    for (long p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            long e = 0;
            while (m % p == 0) { m /= p; ++e; }
            fact.push_back({p, e});
        }
    if (m > 1) fact.push_back({m, 1});
    std::vector<std::vector<long>> groups{{}};
    for (auto [p, e] : fact) {
        std::vector<std::vector<long>> parts;
        std::vector<long> cur;
        partitions_of(e, e, cur, parts);
        std::vector<std::vector<long>> next;
        for (const auto& gbase : groups)
            for (const auto& lam : parts) {
                std::vector<long> gp = gbase;
                for (long ei : lam) {
                    long q = 1;
                    for (long i = 0; i < ei; ++i) q *= p;
                    gp.push_back(q);
                }
                next.push_back(gp);
            }
        groups = std::move(next);
    }
    return groups;
}

}  // namespace eqf
