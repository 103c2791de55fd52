#include "eqf/units.hpp"

#include <numeric>
#include <stdexcept>

namespace eqf {

namespace {

long pow_mod(long b, long e, long m) {
    long long r = 1, bb = ((b % m) + m) % m;
    while (e > 0) {
        if (e & 1) r = (r * bb) % m;
        bb = (bb * bb) % m;
        e >>= 1;
    }
    return static_cast<long>(r);
}

long multiplicative_order(long a, long m, long group_order) {
    long o = group_order;
    for (long q = 2; q <= o; ++q) {
        if (o % q != 0) continue;
        while (o % q == 0 && pow_mod(a, o / q, m) == 1) o /= q;
    }
    return o;
}

long primitive_root(long q, long phi) {
    for (long g = 2; g < q; ++g) {
        if (std::gcd(g, q) != 1) continue;
        if (multiplicative_order(g, q, phi) == phi) return g;
    }
    throw std::logic_error("no primitive root found");
}

struct CyclicPart {
    long q;                  // the prime power this part lives in
    long ord;
    std::vector<long> dlog;  // residue mod q -> exponent (-1 if impossible)
};

}  // namespace

UnitGroup::UnitGroup(long m) : m_(m) {
    if (m < 1) throw std::invalid_argument("UnitGroup: modulus >= 1");

    std::vector<std::pair<long, long>> pps;  // (p, p^e)
    long t = m;
    for (long p = 2; p * p <= t; ++p)
        if (t % p == 0) {
            long q = 1;
            while (t % p == 0) { t /= p; q *= p; }
            pps.push_back({p, q});
        }
    if (t > 1) pps.push_back({t, t});

    std::vector<CyclicPart> parts;
    for (auto [p, q] : pps) {
        if (p == 2) {
            if (q == 2) continue;  // (Z/2)^* is trivial
            if (q == 4) {
                CyclicPart c{q, 2, std::vector<long>(q, -1)};
                c.dlog[1] = 0;
                c.dlog[3] = 1;
                parts.push_back(std::move(c));
            } else {
                // (Z/2^e)^* = <-1> x <3>
                CyclicPart s{q, 2, std::vector<long>(q, -1)};
                CyclicPart c{q, q / 4, std::vector<long>(q, -1)};
                long x = 1;
                for (long i = 0; i < c.ord; ++i) {
                    c.dlog[x] = i;
                    s.dlog[x] = 0;
                    c.dlog[q - x] = i;
                    s.dlog[q - x] = 1;
                    x = static_cast<long>(static_cast<long long>(x) * 3 % q);
                }
                parts.push_back(std::move(s));
                parts.push_back(std::move(c));
            }
        } else {
            long phi = q / p * (p - 1);
            long g = primitive_root(q, phi);
            CyclicPart c{q, phi, std::vector<long>(q, -1)};
            long x = 1;
            for (long i = 0; i < phi; ++i) {
                c.dlog[x] = i;
                x = static_cast<long>(static_cast<long long>(x) * g % q);
            }
            parts.push_back(std::move(c));
        }
    }

    std::vector<long> orders;
    for (const auto& c : parts) orders.push_back(c.ord);
    auto grp = std::make_shared<FiniteAbelianGroup>(orders);

    class_table_.assign(static_cast<std::size_t>(std::max(m, 1L)), SIZE_MAX);
    residue_.assign(grp->order(), 0);
    std::vector<bool> seen(grp->order(), false);
    std::vector<long> exps(parts.size());
    if (m == 1) {
        class_table_[0] = 0;
        residue_[0] = 1;
        seen[0] = true;
    } else {
        for (long a = 1; a < m; ++a) {
            if (std::gcd(a, m) != 1) continue;
            bool ok = true;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                long e = parts[i].dlog[a % parts[i].q];
                if (e < 0) { ok = false; break; }
                exps[i] = e;
            }
            if (!ok) throw std::logic_error("UnitGroup: dlog table incomplete");
            ElemIdx idx = grp->idx_of(exps);
            class_table_[static_cast<std::size_t>(a)] = idx;
            if (!seen[idx]) {
                seen[idx] = true;
                residue_[idx] = a;
            }
        }
    }
    if (m > 2) {
        ElemIdx c = class_table_[static_cast<std::size_t>(m - 1)];
        if (grp->order_of(c) == 2) grp->set_conjugation(c);
    }
    g_ = grp;
}

bool UnitGroup::is_unit(long a) const {
    if (m_ == 1) return true;
    long r = ((a % m_) + m_) % m_;
    return class_table_[static_cast<std::size_t>(r)] != SIZE_MAX;
}

ElemIdx UnitGroup::class_of(long a) const {
    if (m_ == 1) return 0;
    long r = ((a % m_) + m_) % m_;
    ElemIdx e = class_table_[static_cast<std::size_t>(r)];
    if (e == SIZE_MAX) throw std::invalid_argument("class_of: not a unit mod m");
    return e;
}

Subgroup UnitGroup::subgroup_of_residues(const std::vector<long>& gens) const {
    std::vector<ElemIdx> g;
    for (long a : gens) g.push_back(class_of(a));
    return Subgroup(g_, g);
}

}  // namespace eqf
