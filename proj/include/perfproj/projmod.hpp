#pragma once

#include <optional>
#include <vector>

#include "perfproj/poly.hpp"
#include "perfproj/series.hpp"

namespace perfproj {

// Matrices over the residue ring F_p[X^{1/p^k}] (coefficients F_p, i.e. the
// coefficient model truncated at the residue digit) or the truncated
// integral ring F_p[t^{1/p^k_t}]/(t^d)[X^{1/p^k}].
using SeriesMatrix = std::vector<std::vector<TateSeries>>;

inline SeriesMatrix mat_identity(const SeriesShape& sh, int n) {
    SeriesMatrix I(n, std::vector<TateSeries>(n, TateSeries::zero(sh)));
    for (int i = 0; i < n; ++i) I[i][i] = TateSeries::one(sh);
    return I;
}

inline SeriesMatrix mat_mul(const SeriesMatrix& A, const SeriesMatrix& B) {
    size_t n = A.size(), l = B.size(), m = B[0].size();
    SeriesMatrix C(n, std::vector<TateSeries>(m, TateSeries::zero(A[0][0].shape)));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = 0; k < l; ++k) {
            if (A[i][k].is_zero()) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] = C[i][j] + A[i][k] * B[k][j];
        }
    return C;
}

inline bool mat_eq(const SeriesMatrix& A, const SeriesMatrix& B) {
    if (A.size() != B.size()) return false;
    for (size_t i = 0; i < A.size(); ++i) {
        if (A[i].size() != B[i].size()) return false;
        for (size_t j = 0; j < A[i].size(); ++j)
            if (!A[i][j].same_support_and_coeffs(B[i][j])) return false;
    }
    return true;
}

inline SeriesMatrix mat_residue(const SeriesMatrix& A) {
    SeriesMatrix R = A;
    for (auto& row : R)
        for (auto& e : row) e = e.residue();
    return R;
}

inline bool check_idempotent(const SeriesMatrix& U) {
    if (U.empty() || U.size() != U[0].size()) throw ShapeMismatch("idempotent check needs a square matrix");
    return mat_eq(mat_mul(U, U), U);
}

/// Substitution X = Y^{p^k}: a univariate residue-ring series with depth-k
/// exponents becomes an ordinary polynomial (y-degree = scaled exponent).
inline Poly clear_exponents(const TateSeries& f) {
    if (f.shape.nvars != 1) throw ShapeMismatch("clear_exponents is univariate");
    Poly out = Poly::zero(f.shape.p);
    for (auto& [e, c] : f.terms) {
        if (e[0] < 0) throw ShapeMismatch("clear_exponents needs nonnegative exponents");
        auto it = c.digits.find(0);
        int digit = it == c.digits.end() ? 0 : it->second;
        if (digit) out = out + Poly::monomial(f.shape.p, digit, (int)e[0]);
    }
    return out;
}

inline PolyMatrix clear_exponents(const SeriesMatrix& U) {
    PolyMatrix A;
    for (auto& row : U) {
        A.emplace_back();
        for (auto& e : row) A.back().push_back(clear_exponents(e));
    }
    return A;
}

/// Inverse substitution: y^j maps back to X^{j/p^k}.
inline TateSeries restore_exponents(const Poly& f, const SeriesShape& sh) {
    TateSeries out(sh);
    for (int j = 0; j <= f.degree(); ++j)
        if (f.c[j])
            out.insert({(long long)j},
                       FieldElem::monomial(sh.coeff, 0, f.c[j]).truncated(1));
    return out;
}

/// Column echelon form with the applied column transform tracked, so the
/// echelon columns can be expressed back in terms of the input columns.
inline void poly_column_echelon_tracked(PolyMatrix& A, PolyMatrix& V) {
    int rows = (int)A.size(), cols = (int)A[0].size();
    int p = A[0][0].p;
    V = poly_identity(p, cols);
    auto col_sub = [&](int dst, int src, const Poly& q) {
        for (int i = 0; i < rows; ++i) A[i][dst] = A[i][dst] - q * A[i][src];
        for (int i = 0; i < cols; ++i) V[i][dst] = V[i][dst] - q * V[i][src];
    };
    auto col_swap = [&](int a, int b) {
        for (int i = 0; i < rows; ++i) std::swap(A[i][a], A[i][b]);
        for (int i = 0; i < cols; ++i) std::swap(V[i][a], V[i][b]);
    };
    auto col_scale = [&](int j, int a) {
        Poly s = Poly::constant(p, a);
        for (int i = 0; i < rows; ++i) A[i][j] = A[i][j] * s;
        for (int i = 0; i < cols; ++i) V[i][j] = V[i][j] * s;
    };
    int pivot_col = 0;
    for (int row = 0; row < rows && pivot_col < cols; ++row) {
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
                col_swap(jmin, pivot_col);
                col_scale(pivot_col, FieldElem::mod_inverse(A[row][pivot_col].lead(), p));
                ++pivot_col;
                break;
            }
        }
    }
}

/// Solve H * X = T columnwise where H is in column echelon form; exact
/// divisions only.  Returns nullopt when T's columns leave H's column module.
inline std::optional<PolyMatrix> poly_solve_echelon(const PolyMatrix& H, int npivots,
                                                    const PolyMatrix& T) {
    int rows = (int)H.size();
    int tcols = (int)T[0].size();
    int p = H[0][0].p;
    std::vector<int> pivot_row(npivots, -1);
    for (int j = 0; j < npivots; ++j)
        for (int i = 0; i < rows; ++i)
            if (!H[i][j].is_zero()) { pivot_row[j] = i; break; }
    PolyMatrix X(npivots, std::vector<Poly>(tcols, Poly::zero(p)));
    for (int col = 0; col < tcols; ++col) {
        std::vector<Poly> res(rows, Poly::zero(p));
        for (int i = 0; i < rows; ++i) res[i] = T[i][col];
        for (int j = 0; j < npivots; ++j) {
            int r = pivot_row[j];
            if (res[r].is_zero()) continue;
            Poly q;
            if (!H[r][j].divides_exactly(res[r], &q)) return std::nullopt;
            X[j][col] = q;
            for (int i = 0; i < rows; ++i) res[i] = res[i] - q * H[i][j];
        }
        for (int i = 0; i < rows; ++i)
            if (!res[i].is_zero()) return std::nullopt;
    }
    return X;
}

enum class FreeBasisStatus { Verified, Unknown };

struct FreeBasisResult {
    FreeBasisStatus status = FreeBasisStatus::Unknown;
    SeriesMatrix B;  // columns: free basis of im U
    SeriesMatrix C;  // certificate: B * C = U
    int rank = 0;
};

/// Free basis of the image of an idempotent matrix over the univariate
/// residue ring, with generation certificate.  U*B = B, B*C = U and
/// C*B = I_rank are all verified exactly before the result is returned.
inline FreeBasisResult residue_free_basis(const SeriesMatrix& U) {
    if (!check_idempotent(U)) throw NotIdempotent();
    const SeriesShape& sh = U[0][0].shape;
    FreeBasisResult out;
    bool constant_entries = true;
    for (auto& row : U)
        for (auto& e : row)
            for (auto& [exp, c] : e.terms)
                if (exp[0] != 0) constant_entries = false;
    if (sh.nvars != 1 && !constant_entries) {
        out.status = FreeBasisStatus::Unknown;  // multivariate: no guaranteed route
        return out;
    }

    PolyMatrix A;
    if (sh.nvars == 1) A = clear_exponents(U);
    else {
        // constant multivariate matrix: degree-0 polynomials suffice
        for (auto& row : U) {
            A.emplace_back();
            for (auto& e : row) {
                auto z = std::vector<long long>(sh.nvars, 0);
                auto it = e.terms.find(z);
                int d = 0;
                if (it != e.terms.end() && it->second.digits.count(0))
                    d = it->second.digits.at(0);
                A.back().push_back(Poly::constant(sh.p, d));
            }
        }
    }
    int r = (int)A.size();
    PolyMatrix H = poly_column_echelon(A);
    int s = 0;
    auto col_nonzero = [&](int j) {
        for (int i = 0; i < r; ++i)
            if (!H[i][j].is_zero()) return true;
        return false;
    };
    while (s < r && col_nonzero(s)) ++s;

    PolyMatrix Bp(r, std::vector<Poly>(s, Poly::zero(sh.p)));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < s; ++j) Bp[i][j] = H[i][j];

    auto Cp = poly_solve_echelon(Bp, s, A);
    if (!Cp) throw NotIdempotent("image columns do not generate consistently");

    // Certificates in the polynomial world.
    if (poly_mat_mul(A, Bp) != Bp) throw NotIdempotent("U*B != B");
    if (poly_mat_mul(Bp, *Cp) != A) throw NotIdempotent("B*C != U");
    if (poly_mat_mul(*Cp, Bp) != poly_identity(sh.p, s)) throw NotIdempotent("C*B != I");

    SeriesShape back = sh;
    if (sh.nvars != 1) {
        out.B.assign(r, std::vector<TateSeries>(s, TateSeries::zero(sh)));
        out.C.assign(s, std::vector<TateSeries>(r, TateSeries::zero(sh)));
        auto put = [&](SeriesMatrix& M, int i, int j, const Poly& f) {
            if (!f.is_zero())
                M[i][j] = TateSeries::constant(sh, FieldElem::monomial(sh.coeff, 0, f.c[0]).truncated(1));
        };
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < s; ++j) put(out.B, i, j, Bp[i][j]);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < r; ++j) put(out.C, i, j, (*Cp)[i][j]);
    } else {
        out.B.assign(r, std::vector<TateSeries>(s, TateSeries::zero(back)));
        out.C.assign(s, std::vector<TateSeries>(r, TateSeries::zero(back)));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < s; ++j) out.B[i][j] = restore_exponents(Bp[i][j], back);
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < r; ++j) out.C[i][j] = restore_exponents((*Cp)[i][j], back);
    }
    out.rank = s;
    out.status = FreeBasisStatus::Verified;
    return out;
}

/// Entrywise lift from residue coefficients to the truncated integral ring
/// (residue digits reread at full coefficient precision).
inline SeriesMatrix mat_lift(const SeriesMatrix& A, const SeriesShape& target) {
    SeriesMatrix out(A.size());
    for (size_t i = 0; i < A.size(); ++i)
        for (auto& e : A[i]) {
            TateSeries lifted(target);
            for (auto& [exp, c] : e.terms) {
                auto it = c.digits.find(0);
                if (it != c.digits.end())
                    lifted.insert(exp, FieldElem::monomial(target.coeff, 0, it->second));
            }
            out[i].push_back(lifted);
        }
    return out;
}

struct NakayamaResult {
    SeriesMatrix B;
    SeriesMatrix C;
    int rank = 0;
    bool verified = false;
};

/// Lift a residue free basis through the nilpotent kernel of
/// A_d -> residue: B = U * lift(B0), with the certificate C solved
/// level-by-level in the t-adic filtration.
inline NakayamaResult nakayama_lift(const SeriesMatrix& U, const SeriesMatrix& B0) {
    if (!check_idempotent(U)) throw NotIdempotent();
    const SeriesShape& sh = U[0][0].shape;
    SeriesMatrix U0 = mat_residue(U);

    // Re-derive the residue certificate; a corrupted B0 fails here.
    if (B0.empty() || B0[0].empty()) throw ResidueBasisInvalid("empty basis");
    if (B0[0][0].shape.nvars != sh.nvars) throw ShapeMismatch("basis arity");
    // re-home the basis in the integral shape, residue digits only
    SeriesMatrix B0h(B0.size());
    for (size_t i = 0; i < B0.size(); ++i)
        for (auto& e : B0[i]) {
            TateSeries s(sh);
            for (auto& [exp, c] : e.terms) {
                auto it = c.digits.find(0);
                if (it != c.digits.end())
                    s.insert(exp, FieldElem::monomial(sh.coeff, 0, it->second).truncated(1));
            }
            B0h[i].push_back(s);
        }
    if (!mat_eq(mat_mul(U0, B0h), B0h)) throw ResidueBasisInvalid("columns not in im U0");
    PolyMatrix B0p = clear_exponents(B0h), V;
    PolyMatrix H = B0p;
    poly_column_echelon_tracked(H, V);
    int cols = (int)B0[0].size();
    for (int j = 0; j < cols; ++j) {
        bool nz = false;
        for (size_t i = 0; i < H.size(); ++i) nz = nz || !H[i][j].is_zero();
        if (!nz) throw ResidueBasisInvalid("dependent or zero column");
    }
    auto Cprime = poly_solve_echelon(H, cols, clear_exponents(U0));
    if (!Cprime) throw ResidueBasisInvalid("basis does not generate im U0");
    PolyMatrix C0p = poly_mat_mul(V, *Cprime);

    SeriesMatrix C0(cols);
    for (int i = 0; i < cols; ++i)
        for (size_t j = 0; j < U.size(); ++j) {
            SeriesShape rsh = sh;
            C0[i].push_back(restore_exponents(C0p[i][j], rsh));
        }

    SeriesMatrix B = mat_mul(U, mat_lift(B0h, sh));
    SeriesMatrix C = mat_lift(C0, sh);

    long long guard = (long long)sh.coeff.m * sh.coeff.unit() + 2;
    auto residual = [&]() {
        SeriesMatrix E = U;
        SeriesMatrix BC = mat_mul(B, C);
        for (size_t i = 0; i < E.size(); ++i)
            for (size_t j = 0; j < E[i].size(); ++j) E[i][j] = E[i][j] - BC[i][j];
        return E;
    };
    for (long long it = 0; it < guard; ++it) {
        SeriesMatrix E = residual();
        std::optional<long long> a;  // min t-valuation (scaled) over all entries
        for (auto& row : E)
            for (auto& e : row)
                for (auto& [exp, c] : e.terms) {
                    auto v = c.val_scaled();
                    if (v && (!a || *v < *a)) a = *v;
                }
        if (!a) {
            NakayamaResult out{B, C, cols, true};
            // final certificates, recomputed from scratch
            out.verified = mat_eq(mat_mul(U, B), B) && mat_eq(mat_mul(B, C), U);
            return out;
        }
        // E = t^a * E'; solve the residue correction and push it back up.
        SeriesMatrix Ebar(E.size());
        for (size_t i = 0; i < E.size(); ++i)
            for (auto& e : E[i]) {
                TateSeries s(sh);
                for (auto& [exp, c] : e.terms) {
                    FieldElem down = c.shifted(-*a).truncated(1);
                    if (!down.is_zero()) s.insert(exp, down);
                }
                Ebar[i].push_back(s);
            }
        SeriesMatrix delta = mat_lift(mat_mul(C0, Ebar), sh);
        for (size_t i = 0; i < delta.size(); ++i)
            for (auto& e : delta[i]) {
                TateSeries shifted(sh);
                for (auto& [exp, c] : e.terms) {
                    FieldElem up = c.shifted(*a).truncated(sh.coeff.prec_scaled());
                    if (!up.is_zero()) shifted.insert(exp, up);
                }
                e = shifted;
            }
        for (size_t i = 0; i < C.size(); ++i)
            for (size_t j = 0; j < C[i].size(); ++j) C[i][j] = C[i][j] + delta[i][j];
    }
    throw Error("nakayama correction failed to terminate within the nilpotency bound");
}

/// Jacobson-radical membership test for the truncated integral ring:
/// nilpotent elements (zero residue) always pass; otherwise 1 - f*g must be
/// a unit for every sampled g.
inline bool jacobson_unit_check(const TateSeries& f) {
    const SeriesShape& sh = f.shape;
    if (f.residue().is_zero()) return true;
    std::vector<TateSeries> samples{TateSeries::one(sh), f};
    for (int i = 0; i < sh.nvars; ++i) samples.push_back(TateSeries::variable(sh, i));
    for (auto& g : samples) {
        TateSeries h = TateSeries::one(sh) - f * g;
        // unit in A_d[X^{1/p^k}] iff the residue is a nonzero constant
        TateSeries hr = h.residue();
        std::vector<long long> z(sh.nvars, 0);
        if (hr.terms.size() != 1 || hr.terms.begin()->first != z) return false;
    }
    return true;
}

} // namespace perfproj
