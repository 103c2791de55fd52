#include "eqf/cyclotomic.hpp"

#include <stdexcept>

namespace eqf {

namespace {

// Exact division of polynomials with integer coefficients (ascending order).
std::vector<mpz_class> poly_divexact(const std::vector<mpz_class>& num,
                                     const std::vector<mpz_class>& den) {
    std::vector<mpz_class> r = num;
    const std::size_t dn = den.size() - 1;
    if (r.size() < den.size()) throw std::logic_error("poly_divexact: degree");
    std::vector<mpz_class> q(r.size() - dn, 0);
    for (std::size_t i = r.size(); i-- > dn;) {
        if (r[i] == 0) continue;
        mpz_class c;
        mpz_divexact(c.get_mpz_t(), r[i].get_mpz_t(), den[dn].get_mpz_t());
        q[i - dn] = c;
        for (std::size_t j = 0; j <= dn; ++j) r[i - dn + j] -= c * den[j];
    }
    for (const auto& x : r)
        if (x != 0) throw std::logic_error("poly_divexact: not divisible");
    return q;
}

}  // namespace

std::vector<mpz_class> cyclotomic_polynomial(long n) {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    std::vector<mpz_class> poly(n + 1, 0);
    poly[0] = -1;
    poly[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        poly = poly_divexact(poly, cyclotomic_polynomial(d));
    }
    return poly;
}

CycloField::CycloField(long n) : n_(n) {
    if (n < 1) throw std::invalid_argument("CycloField: n >= 1");
    phi_ = cyclotomic_polynomial(n);
}

std::vector<mpq_class> CycloField::reduce_powers(const std::vector<mpq_class>& pow_coeffs) const {
    std::vector<mpq_class> r = pow_coeffs;
    r.resize(static_cast<std::size_t>(n_), 0);
    const std::size_t d = degree();
    for (std::size_t i = r.size(); i-- > d;) {
        if (r[i] == 0) continue;
        mpq_class c = r[i];
        for (std::size_t j = 0; j <= d; ++j) r[i - d + j] -= c * mpq_class(phi_[j]);
    }
    r.resize(d);
    for (auto& x : r) x.canonicalize();
    return r;
}

bool CycloField::is_zero(const std::vector<mpq_class>& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

}  // namespace eqf
