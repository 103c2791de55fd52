#pragma once

#include <gmpxx.h>

#include <vector>

namespace eqf {

/// Exact arithmetic in Q(zeta_n), elements represented as polynomials in
/// zeta reduced modulo the n-th cyclotomic polynomial. Just enough for
/// evaluating characters of finite abelian groups exactly.
class CycloField {
public:
    explicit CycloField(long n);

    long n() const { return n_; }
    std::size_t degree() const { return phi_.size() - 1; }

    /// Reduce a coefficient vector on the powers 1, zeta, ..., zeta^{n-1}
    /// to the canonical representative modulo Phi_n.
    std::vector<mpq_class> reduce_powers(const std::vector<mpq_class>& pow_coeffs) const;

    static bool is_zero(const std::vector<mpq_class>& v);

private:
    long n_;
    std::vector<mpz_class> phi_;  // Phi_n coefficients, phi_[deg] = 1
};

/// Integer coefficients of the n-th cyclotomic polynomial (ascending).
std::vector<mpz_class> cyclotomic_polynomial(long n);

}  // namespace eqf
