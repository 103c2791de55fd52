#include "eqf/int_mat.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

namespace eqf {

namespace {

// v -= q * r, starting at column `from` (earlier entries are known zero).
void row_submul(std::vector<mpz_class>& v, const std::vector<mpz_class>& r,
                const mpz_class& q, std::size_t from) {
    if (q == 0) return;
    for (std::size_t j = from; j < v.size(); ++j)
        mpz_submul(v[j].get_mpz_t(), q.get_mpz_t(), r[j].get_mpz_t());
}

std::size_t first_nonzero(const std::vector<mpz_class>& v, std::size_t limit) {
    for (std::size_t j = 0; j < limit; ++j)
        if (v[j] != 0) return j;
    return limit;
}

}  // namespace

IntMat IntMat::identity(std::size_t n) {
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMat IntMat::from_rows(const std::vector<std::vector<mpz_class>>& rows) {
    if (rows.empty()) return IntMat(0, 0);
    IntMat m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw std::invalid_argument("from_rows: ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

std::vector<mpz_class> IntMat::row(std::size_t i) const {
    return std::vector<mpz_class>(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

void IntMat::append_row(const std::vector<mpz_class>& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) throw std::invalid_argument("append_row: size mismatch");
    a_.insert(a_.end(), r.begin(), r.end());
    ++rows_;
}

std::string IntMat::to_string() const {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << at(i, j).get_str();
    }
    os << "]";
    return os.str();
}

bool HnfBuilder::insert(std::vector<mpz_class> v) {
    if (v.size() != cols_) throw std::invalid_argument("HnfBuilder: size mismatch");
    bool grew = false;
    for (;;) {
        std::size_t c = first_nonzero(v, cols_);
        if (c == cols_) return grew;
        // locate echelon row with this pivot column
        std::size_t lo = 0, hi = rows_.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (pivot_col_[mid] < c) lo = mid + 1; else hi = mid;
        }
        if (lo == rows_.size() || pivot_col_[lo] != c) {
            if (v[c] < 0)
                for (std::size_t j = c; j < cols_; ++j) v[j] = -v[j];
            // keep the new row reduced at the later pivot columns (entry
            // growth over long insertion sequences is bounded this way)
            for (std::size_t i = lo; i < rows_.size(); ++i) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), v[pivot_col_[i]].get_mpz_t(),
                           rows_[i][pivot_col_[i]].get_mpz_t());
                row_submul(v, rows_[i], q, pivot_col_[i]);
            }
            rows_.insert(rows_.begin() + lo, std::move(v));
            pivot_col_.insert(pivot_col_.begin() + lo, c);
            reduce_column(lo);
            return true;
        }
        std::vector<mpz_class>& r = rows_[lo];
        const mpz_class& p = r[c];
        if (mpz_divisible_p(v[c].get_mpz_t(), p.get_mpz_t())) {
            mpz_class q = v[c] / p;
            row_submul(v, r, q, c);
        } else {
            mpz_class g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t(), v[c].get_mpz_t());
            mpz_class pg = p / g, vg = v[c] / g;
            std::vector<mpz_class> nr(cols_), nv(cols_);
            for (std::size_t j = c; j < cols_; ++j) {
                nr[j] = s * r[j] + t * v[j];
                nv[j] = pg * v[j] - vg * r[j];
            }
            r = std::move(nr);
            v = std::move(nv);
            grew = true;  // pivot strictly shrank
            // tail-reduce the rebuilt pivot row, then re-reduce the other
            // rows against the smaller pivot
            for (std::size_t i = lo + 1; i < rows_.size(); ++i) {
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), rows_[lo][pivot_col_[i]].get_mpz_t(),
                           rows_[i][pivot_col_[i]].get_mpz_t());
                row_submul(rows_[lo], rows_[i], q, pivot_col_[i]);
            }
            reduce_column(lo);
        }
    }
}

// Reduce every other row at the pivot column of row `idx` into [0, pivot).
void HnfBuilder::reduce_column(std::size_t idx) {
    const std::size_t pc = pivot_col_[idx];
    const mpz_class& p = rows_[idx][pc];
    for (std::size_t j = 0; j < idx; ++j) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows_[j][pc].get_mpz_t(), p.get_mpz_t());
        row_submul(rows_[j], rows_[idx], q, pc);
    }
}

bool HnfBuilder::contains(const std::vector<mpz_class>& vin) const {
    std::vector<mpz_class> v = vin;
    for (;;) {
        std::size_t c = first_nonzero(v, cols_);
        if (c == cols_) return true;
        std::size_t lo = 0, hi = rows_.size();
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (pivot_col_[mid] < c) lo = mid + 1; else hi = mid;
        }
        if (lo == rows_.size() || pivot_col_[lo] != c) return false;
        const std::vector<mpz_class>& r = rows_[lo];
        if (!mpz_divisible_p(v[c].get_mpz_t(), r[c].get_mpz_t())) return false;
        mpz_class q = v[c] / r[c];
        row_submul(v, r, q, c);
    }
}

IntMat HnfBuilder::finalize() const {
    std::vector<std::vector<mpz_class>> rows = rows_;
    // reduce entries above each pivot into [0, pivot)
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t pc = pivot_col_[i];
        const mpz_class& p = rows[i][pc];
        for (std::size_t j = 0; j < i; ++j) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), rows[j][pc].get_mpz_t(), p.get_mpz_t());
            row_submul(rows[j], rows[i], q, pc);
        }
    }
    IntMat out(rows.size(), cols_);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols_; ++j) out.at(i, j) = rows[i][j];
    return out;
}

IntMat hnf(const IntMat& m) {
    HnfBuilder b(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) b.insert(m.row(i));
    return b.finalize();
}

IntMat kernel_lattice(const IntMat& m) {
    const std::size_t nr = m.rows(), nc = m.cols();
    const std::size_t width = nc + nr;
    std::vector<std::vector<mpz_class>> ech;   // rows with nonzero head
    std::vector<std::size_t> piv;
    HnfBuilder ker(nr);
    for (std::size_t i = 0; i < nr; ++i) {
        std::vector<mpz_class> v(width);
        for (std::size_t j = 0; j < nc; ++j) v[j] = m.at(i, j);
        v[nc + i] = 1;
        for (;;) {
            std::size_t c = first_nonzero(v, nc);
            if (c == nc) {
                ker.insert(std::vector<mpz_class>(v.begin() + nc, v.end()));
                break;
            }
            std::size_t lo = 0, hi = ech.size();
            while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (piv[mid] < c) lo = mid + 1; else hi = mid;
            }
            if (lo == ech.size() || piv[lo] != c) {
                if (v[c] < 0)
                    for (std::size_t j = c; j < width; ++j) v[j] = -v[j];
                ech.insert(ech.begin() + lo, std::move(v));
                piv.insert(piv.begin() + lo, c);
                break;
            }
            std::vector<mpz_class>& r = ech[lo];
            if (mpz_divisible_p(v[c].get_mpz_t(), r[c].get_mpz_t())) {
                mpz_class q = v[c] / r[c];
                row_submul(v, r, q, c);
            } else {
                mpz_class g, s, t;
                mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), r[c].get_mpz_t(), v[c].get_mpz_t());
                mpz_class pg = r[c] / g, vg = v[c] / g;
                std::vector<mpz_class> nr2(width), nv(width);
                for (std::size_t j = c; j < nc; ++j) {
                    nr2[j] = s * r[j] + t * v[j];
                    nv[j] = pg * v[j] - vg * r[j];
                }
                for (std::size_t j = nc; j < width; ++j) {
                    nr2[j] = s * r[j] + t * v[j];
                    nv[j] = pg * v[j] - vg * r[j];
                }
                r = std::move(nr2);
                v = std::move(nv);
            }
        }
    }
    return ker.finalize();
}

std::size_t rank(const IntMat& m) { return hnf(m).rows(); }

mpz_class det(const IntMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("det: not square");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMat a = m;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a.at(k, k) == 0) {
            std::size_t s = k + 1;
            while (s < n && a.at(s, k) == 0) ++s;
            if (s == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(s, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class t = a.at(k, k) * a.at(i, j) - a.at(i, k) * a.at(k, j);
                mpz_divexact(a.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            a.at(i, k) = 0;
        }
        prev = a.at(k, k);
    }
    return sign > 0 ? a.at(n - 1, n - 1) : -a.at(n - 1, n - 1);
}

std::optional<std::vector<mpz_class>> solve_in_hnf(const IntMat& h, const std::vector<mpz_class>& v) {
    if (v.size() != h.cols() && !(h.rows() == 0)) {
        if (v.size() != h.cols()) throw std::invalid_argument("solve_in_hnf: size mismatch");
    }
    std::vector<mpz_class> cur = v;
    std::vector<mpz_class> coef(h.rows());
    std::size_t scan = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::size_t pc = scan;
        while (pc < h.cols() && h.at(i, pc) == 0) ++pc;
        // v must be zero before the pivot
        for (; scan < pc; ++scan)
            if (cur[scan] != 0) return std::nullopt;
        if (pc == h.cols()) break;
        const mpz_class& p = h.at(i, pc);
        if (!mpz_divisible_p(cur[pc].get_mpz_t(), p.get_mpz_t())) return std::nullopt;
        coef[i] = cur[pc] / p;
        if (coef[i] != 0)
            for (std::size_t j = pc; j < h.cols(); ++j)
                mpz_submul(cur[j].get_mpz_t(), coef[i].get_mpz_t(), h.at(i, j).get_mpz_t());
        scan = pc + 1;
    }
    for (std::size_t j = 0; j < v.size(); ++j)
        if (cur[j] != 0) return std::nullopt;
    return coef;
}

bool in_rational_span(const IntMat& h, const std::vector<mpq_class>& v) {
    std::vector<mpq_class> cur = v;
    std::size_t scan = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        std::size_t pc = scan;
        while (pc < h.cols() && h.at(i, pc) == 0) ++pc;
        for (; scan < pc; ++scan)
            if (cur[scan] != 0) return false;
        if (pc == h.cols()) break;
        mpq_class q = cur[pc] / mpq_class(h.at(i, pc));
        if (q != 0)
            for (std::size_t j = pc; j < h.cols(); ++j) cur[j] -= q * mpq_class(h.at(i, j));
        scan = pc + 1;
    }
    for (const auto& x : cur)
        if (x != 0) return false;
    return true;
}

LatticeIndex lattice_index(const IntMat& l1, const IntMat& l2) {
    for (std::size_t i = 0; i < l2.rows(); ++i) {
        if (!solve_in_hnf(l1, l2.row(i))) {
            throw std::invalid_argument("lattice_index: containment fails at row " +
                                        std::to_string(i) + ": " + IntMat::from_rows({l2.row(i)}).to_string());
        }
    }
    LatticeIndex out;
    if (l2.rows() != l1.rows()) {
        out.finite = false;
        return out;
    }
    out.finite = true;
    out.index = 1;
    mpz_class d1 = 1, d2 = 1;
    for (std::size_t i = 0; i < l1.rows(); ++i) {
        std::size_t pc = 0;
        while (pc < l1.cols() && l1.at(i, pc) == 0) ++pc;
        d1 *= l1.at(i, pc);
    }
    for (std::size_t i = 0; i < l2.rows(); ++i) {
        std::size_t pc = 0;
        while (pc < l2.cols() && l2.at(i, pc) == 0) ++pc;
        d2 *= l2.at(i, pc);
    }
    out.index = d2 / d1;
    return out;
}

SmithForm smith_form(const IntMat& b) {
    const std::size_t r = b.rows(), c = b.cols();
    IntMat a = b;
    IntMat v = IntMat::identity(c);
    const std::size_t n = std::min(r, c);
    std::size_t t = 0;
    for (; t < n; ++t) {
        // find smallest nonzero entry in the trailing submatrix
        std::size_t pi = r, pj = c;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < c; ++j)
                if (a.at(i, j) != 0 &&
                    (pi == r || mpz_cmpabs(a.at(i, j).get_mpz_t(), a.at(pi, pj).get_mpz_t()) < 0)) {
                    pi = i; pj = j;
                }
        if (pi == r) break;  // submatrix is zero
        if (pi != t)
            for (std::size_t j = 0; j < c; ++j) std::swap(a.at(t, j), a.at(pi, j));
        if (pj != t) {
            for (std::size_t i = 0; i < r; ++i) std::swap(a.at(i, t), a.at(i, pj));
            for (std::size_t i = 0; i < c; ++i) std::swap(v.at(i, t), v.at(i, pj));
        }
        bool clean = false;
        while (!clean) {
            clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (a.at(i, t) == 0) continue;
                mpz_class q = a.at(i, t) / a.at(t, t);
                if (q != 0)
                    for (std::size_t j = t; j < c; ++j)
                        mpz_submul(a.at(i, j).get_mpz_t(), q.get_mpz_t(), a.at(t, j).get_mpz_t());
                if (a.at(i, t) != 0) {
                    for (std::size_t j = 0; j < c; ++j) std::swap(a.at(t, j), a.at(i, j));
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (a.at(t, j) == 0) continue;
                mpz_class q = a.at(t, j) / a.at(t, t);
                if (q != 0)
                    for (std::size_t i = 0; i < r; ++i)
                        mpz_submul(a.at(i, j).get_mpz_t(), q.get_mpz_t(), a.at(i, t).get_mpz_t());
                if (q != 0)
                    for (std::size_t i = 0; i < c; ++i)
                        mpz_submul(v.at(i, j).get_mpz_t(), q.get_mpz_t(), v.at(i, t).get_mpz_t());
                if (a.at(t, j) != 0) {
                    for (std::size_t i = 0; i < r; ++i) std::swap(a.at(i, t), a.at(i, j));
                    for (std::size_t i = 0; i < c; ++i) std::swap(v.at(i, t), v.at(i, j));
                    clean = false;
                }
            }
        }
        // enforce divisibility of the remaining block by the pivot
        bool redo = false;
        for (std::size_t i = t + 1; i < r && !redo; ++i)
            for (std::size_t j = t + 1; j < c && !redo; ++j)
                if (!mpz_divisible_p(a.at(i, j).get_mpz_t(), a.at(t, t).get_mpz_t())) {
                    for (std::size_t jj = t; jj < c; ++jj)
                        a.at(t, jj) += a.at(i, jj);
                    redo = true;
                }
        if (redo) { --t; continue; }
        if (a.at(t, t) < 0) {
            for (std::size_t i = 0; i < r; ++i) a.at(i, t) = -a.at(i, t);
            for (std::size_t i = 0; i < c; ++i) v.at(i, t) = -v.at(i, t);
        }
    }
    SmithForm out;
    out.divisors.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.divisors[i] = i < t ? a.at(i, i) : 0;
    out.v = std::move(v);
    return out;
}

namespace {

// Left kernel over GF(2) of an integer matrix (rows as generators):
// basis of {z in GF(2)^rows : z * (B mod 2) = 0}.
std::vector<std::vector<std::uint8_t>> gf2_left_kernel(const IntMat& b) {
    const std::size_t r = b.rows(), c = b.cols();
    const std::size_t hw = (c + 63) / 64, tw = (r + 63) / 64;
    std::vector<std::vector<std::uint64_t>> head(r, std::vector<std::uint64_t>(hw, 0));
    std::vector<std::vector<std::uint64_t>> tail(r, std::vector<std::uint64_t>(tw, 0));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j)
            if (mpz_odd_p(b.at(i, j).get_mpz_t())) head[i][j / 64] ^= (1ULL << (j % 64));
        tail[i][i / 64] ^= (1ULL << (i % 64));
    }
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::size_t> pivot_of_col(c, r);
    for (std::size_t i = 0; i < r; ++i) {
        for (;;) {
            std::size_t lead = c;
            for (std::size_t w = 0; w < hw && lead == c; ++w)
                if (head[i][w]) lead = w * 64 + __builtin_ctzll(head[i][w]);
            if (lead == c) {
                std::vector<std::uint8_t> z(r, 0);
                for (std::size_t k = 0; k < r; ++k)
                    if ((tail[i][k / 64] >> (k % 64)) & 1) z[k] = 1;
                out.push_back(std::move(z));
                break;
            }
            if (pivot_of_col[lead] == r) {
                pivot_of_col[lead] = i;
                break;
            }
            std::size_t p = pivot_of_col[lead];
            for (std::size_t w = 0; w < hw; ++w) head[i][w] ^= head[p][w];
            for (std::size_t w = 0; w < tw; ++w) tail[i][w] ^= tail[p][w];
        }
    }
    return out;
}

}  // namespace

IntMat saturate_at_2(const IntMat& l) {
    HnfBuilder b(l.cols());
    for (std::size_t i = 0; i < l.rows(); ++i) b.insert(l.row(i));
    IntMat cur = b.finalize();
    for (;;) {
        auto ker = gf2_left_kernel(cur);
        if (ker.empty()) return cur;
        HnfBuilder nb(l.cols());
        for (std::size_t i = 0; i < cur.rows(); ++i) nb.insert(cur.row(i));
        bool grew = false;
        for (const auto& z : ker) {
            std::vector<mpz_class> v(cur.cols(), 0);
            for (std::size_t i = 0; i < cur.rows(); ++i)
                if (z[i])
                    for (std::size_t j = 0; j < cur.cols(); ++j) v[j] += cur.at(i, j);
            for (auto& x : v) {
                mpz_divexact_ui(x.get_mpz_t(), x.get_mpz_t(), 2);
            }
            if (nb.insert(std::move(v))) grew = true;
        }
        if (!grew) return cur;
        cur = nb.finalize();
    }
}

mpz_class content(const IntMat& m) {
    mpz_class g = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), m.at(i, j).get_mpz_t());
    return g;
}

IntMat divexact(const IntMat& m, const mpz_class& d) {
    IntMat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            mpz_divexact(out.at(i, j).get_mpz_t(), m.at(i, j).get_mpz_t(), d.get_mpz_t());
    return out;
}

IntMat scalar_mul(const IntMat& m, const mpz_class& d) {
    IntMat out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out.at(i, j) = m.at(i, j) * d;
    return out;
}

std::optional<std::vector<mpq_class>> solve_rational(const std::vector<std::vector<mpq_class>>& a_in,
                                                     const std::vector<mpq_class>& b_in) {
    auto a = a_in;
    auto b = b_in;
    const std::size_t n = a.size();
    const std::size_t cols = n == 0 ? 0 : a[0].size();
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < n; ++c) {
        std::size_t p = r;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r || a[i][c] == 0) continue;
            mpq_class f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < n; ++i)
        if (b[i] != 0) return std::nullopt;
    std::vector<mpq_class> x(cols, 0);
    for (std::size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i] / a[i][pivot_col[i]];
    return x;
}

IntMat inverse_times_det(const IntMat& a) {
    const std::size_t n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("inverse_times_det: not square");
    mpz_class d = det(a);
    if (d == 0) throw std::invalid_argument("inverse_times_det: singular");
    std::vector<std::vector<mpq_class>> aq(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) aq[i][j] = mpq_class(a.at(i, j));
    IntMat out(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<mpq_class> e(n, 0);
        e[c] = 1;
        auto x = solve_rational(aq, e);
        if (!x) throw std::logic_error("inverse_times_det: solve failed");
        for (std::size_t i = 0; i < n; ++i) {
            mpq_class s = (*x)[i] * mpq_class(d);
            s.canonicalize();
            if (s.get_den() != 1) throw std::logic_error("inverse_times_det: non-integral");
            out.at(i, c) = s.get_num();
        }
    }
    return out;
}

IntMat vstack(const IntMat& a, const IntMat& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack: column mismatch");
    IntMat out(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out.at(a.rows() + i, j) = b.at(i, j);
    return out;
}

}  // namespace eqf
