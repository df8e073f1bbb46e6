#pragma once

#include <vector>

#include "perfproj/errors.hpp"
#include "perfproj/field.hpp"

namespace perfproj {

/// Dense univariate polynomial over F_p.  Workhorse for the normal-form
/// linear algebra over the cleared (integer-exponent) residue ring.
struct Poly {
    int p = 2;
    std::vector<int> c;  // c[i] * y^i, trimmed

    Poly() = default;
    Poly(int prime, std::vector<int> coeffs) : p(prime), c(std::move(coeffs)) { trim(); }

    static Poly zero(int p) { return Poly(p, {}); }
    static Poly constant(int p, int a) { return Poly(p, {a}); }
    static Poly monomial(int p, int a, int deg) {
        std::vector<int> v(deg + 1, 0);
        v[deg] = a;
        return Poly(p, std::move(v));
    }

    void trim() {
        for (auto& a : c) a = ((a % p) + p) % p;
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return (int)c.size() - 1; }  // -1 for zero
    int lead() const { return c.back(); }

    Poly operator+(const Poly& o) const {
        std::vector<int> r(std::max(c.size(), o.c.size()), 0);
        for (size_t i = 0; i < c.size(); ++i) r[i] += c[i];
        for (size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
        return Poly(p, std::move(r));
    }
    Poly operator-() const {
        std::vector<int> r(c.size());
        for (size_t i = 0; i < c.size(); ++i) r[i] = p - c[i];
        return Poly(p, std::move(r));
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }

    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return zero(p);
        std::vector<int> r(c.size() + o.c.size() - 1, 0);
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j)
                r[i + j] = (int)((r[i + j] + (long long)c[i] * o.c[j]) % p);
        return Poly(p, std::move(r));
    }

    bool operator==(const Poly& o) const { return p == o.p && c == o.c; }

    /// Euclidean division; returns {quotient, remainder}.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        if (d.is_zero()) throw Error("polynomial division by zero");
        Poly r = *this;
        Poly q = zero(p);
        int dinv = FieldElem::mod_inverse(d.lead(), p);
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int qc = (int)((long long)r.lead() * dinv % p);
            int qd = r.degree() - d.degree();
            Poly t = monomial(p, qc, qd);
            q = q + t;
            r = r - t * d;
        }
        return {q, r};
    }

    bool divides_exactly(const Poly& dividend, Poly* quotient = nullptr) const {
        auto [q, r] = dividend.divmod(*this);
        if (!r.is_zero()) return false;
        if (quotient) *quotient = q;
        return true;
    }
};

using PolyMatrix = std::vector<std::vector<Poly>>;

inline PolyMatrix poly_identity(int p, int n) {
    PolyMatrix I(n, std::vector<Poly>(n, Poly::zero(p)));
    for (int i = 0; i < n; ++i) I[i][i] = Poly::constant(p, 1);
    return I;
}

inline PolyMatrix poly_mat_mul(const PolyMatrix& A, const PolyMatrix& B) {
    size_t n = A.size(), m = B[0].size(), l = B.size();
    int p = A[0][0].p;
    PolyMatrix C(n, std::vector<Poly>(m, Poly::zero(p)));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < l; ++k) {
            if (A[i][k].is_zero()) continue;
            for (size_t j = 0; j < m; ++j)
                C[i][j] = C[i][j] + A[i][k] * B[k][j];
        }
    return C;
}

/// Column-style echelon (Hermite) form over F_p[y]: returns H with
/// column module equal to A's, columns in echelon position, pivots monic.
inline PolyMatrix poly_column_echelon(PolyMatrix A) {
    if (A.empty()) return A;
    int rows = (int)A.size(), cols = (int)A[0].size();
    int p = A[0][0].p;
    auto col_sub = [&](int dst, int src, const Poly& q) {
        for (int i = 0; i < rows; ++i) A[i][dst] = A[i][dst] - q * A[i][src];
    };
    auto col_scale = [&](int j, int a) {
        Poly s = Poly::constant(p, a);
        for (int i = 0; i < rows; ++i) A[i][j] = A[i][j] * s;
    };
    int pivot_col = 0;
    for (int row = 0; row < rows && pivot_col < cols; ++row) {
        // Euclid across columns until at most one nonzero entry stays in this row.
        while (true) {
            int jmin = -1;
            for (int j = pivot_col; j < cols; ++j)
                if (!A[row][j].is_zero() &&
                    (jmin < 0 || A[row][j].degree() < A[row][jmin].degree()))
                    jmin = j;
            if (jmin < 0) break;
            bool others = false;
            for (int j = pivot_col; j < cols; ++j) {
                if (j == jmin || A[row][j].is_zero()) continue;
                auto [q, r] = A[row][j].divmod(A[row][jmin]);
                col_sub(j, jmin, q);
                if (!A[row][j].is_zero()) others = true;
            }
            if (!others) {
                for (int i = 0; i < rows; ++i) std::swap(A[i][jmin], A[i][pivot_col]);
                col_scale(pivot_col, FieldElem::mod_inverse(A[row][pivot_col].lead(), p));
                ++pivot_col;
                break;
            }
        }
    }
    return A;
}

} // namespace perfproj
