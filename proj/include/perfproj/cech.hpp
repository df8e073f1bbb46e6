#pragma once

#include <vector>

#include "perfproj/field.hpp"
#include "perfproj/padic_exp.hpp"

namespace perfproj {

/// Exact rank of an integer matrix over F_p.
inline int fp_rank(std::vector<std::vector<int>> M, int p) {
    if (M.empty() || M[0].empty()) return 0;
    int rows = (int)M.size(), cols = (int)M[0].size();
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int piv = -1;
        for (int i = rank; i < rows; ++i)
            if (M[i][col] % p != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(M[rank], M[piv]);
        int inv = FieldElem::mod_inverse(M[rank][col], p);
        for (int j = col; j < cols; ++j)
            M[rank][j] = (int)((long long)M[rank][j] * inv % p + p) % p;
        for (int i = 0; i < rows; ++i) {
            if (i == rank || M[i][col] % p == 0) continue;
            int f = ((M[i][col] % p) + p) % p;
            for (int j = col; j < cols; ++j)
                M[i][j] = (int)(((M[i][j] - (long long)f * M[rank][j]) % p + p) % p);
        }
        ++rank;
    }
    return rank;
}

/// Monomial basis of the degree-d graded piece of the localization at a
/// face S of the standard cover: tuples (a_0..a_n) in (1/p^k)Z (stored
/// scaled by p^k), sum d, a_i >= 0 off the face, a_i >= -W on it.
struct GradedPiece {
    int n = 0, k = 0;
    long long d_scaled = 0, window = 0;
    std::vector<int> S;
    std::vector<std::vector<long long>> basis;  // lexicographic
};

inline GradedPiece enumerate_monomials(int n, const PAdicExp& d, int k, long long W,
                                       std::vector<int> S) {
    GradedPiece out;
    out.n = n;
    out.k = k;
    out.d_scaled = d.scaled(k);
    out.window = W;
    out.S = std::move(S);
    long long unit = ipow(d.p, k);
    std::vector<long long> lb(n + 1, 0);
    for (int i : out.S) lb[i] = -W * unit;
    std::vector<long long> tail_lb(n + 2, 0);  // sum of lower bounds for indices > i
    for (int i = n; i >= 0; --i) tail_lb[i] = tail_lb[i + 1] + lb[i];
    std::vector<long long> cur(n + 1);
    auto rec = [&](auto&& self, int i, long long rem) -> void {
        if (i == n + 1) {
            if (rem == 0) out.basis.push_back(cur);
            return;
        }
        long long hi = rem - tail_lb[i + 1];
        for (long long a = lb[i]; a <= hi; ++a) {
            cur[i] = a;
            self(self, i + 1, rem - a);
        }
    };
    rec(rec, 0, out.d_scaled);
    return out;
}

/// All-strictly-negative tuples of total degree d < 0: the top cohomology
/// basis from the duality-flavored count.
inline std::vector<std::vector<long long>> hn_basis(int n, const PAdicExp& d, int k, long long W) {
    std::vector<std::vector<long long>> out;
    long long ds = d.scaled(k);
    if (ds >= 0) return out;
    long long unit = ipow(d.p, k);
    long long lo = -W * unit;
    std::vector<long long> cur(n + 1);
    auto rec = [&](auto&& self, int i, long long rem) -> void {
        if (i == n + 1) {
            if (rem == 0) out.push_back(cur);
            return;
        }
        long long hi = std::min((long long)-1, rem - (long long)(n - i) * lo);
        for (long long a = std::max(lo, rem - (long long)(n - i) * -1); a <= hi; ++a) {
            cur[i] = a;
            self(self, i + 1, rem - a);
        }
    };
    rec(rec, 0, ds);
    return out;
}

inline std::vector<std::vector<int>> faces_of_size(int n, int size) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if ((int)cur.size() == size) { out.push_back(cur); return; }
        for (int i = start; i <= n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

/// The alternating Cech complex of O(d) on the standard (n+1)-chart cover,
/// Laurent directions window-bounded.  Differentials are signed inclusions
/// of monomials; d o d = 0 is checked on construction.
struct CechComplexInstance {
    int n = 0, k = 0, p = 2;
    long long window = 0;
    PAdicExp d;
    std::vector<std::vector<GradedPiece>> pieces;     // [r][face]
    std::vector<int> dims;                            // dim C^r
    std::vector<std::vector<std::vector<int>>> diff;  // diff[r]: C^r -> C^{r+1}
};

inline CechComplexInstance build_cech_complex(int n, const PAdicExp& d, int k, long long W) {
    long long ds = d.scaled(k);
    if (W < 1 || (ds < 0 && W * ipow(d.p, k) < -ds))
        throw WindowTooSmall("window " + std::to_string(W) + " cannot close the degree-" +
                             d.str() + " complex");
    CechComplexInstance cx;
    cx.n = n;
    cx.k = k;
    cx.p = d.p;
    cx.window = W;
    cx.d = d;
    for (int r = 0; r <= n; ++r) {
        cx.pieces.emplace_back();
        int dim = 0;
        for (auto& S : faces_of_size(n, r + 1)) {
            cx.pieces.back().push_back(enumerate_monomials(n, d, k, W, S));
            dim += (int)cx.pieces.back().back().basis.size();
        }
        cx.dims.push_back(dim);
    }
    // d^r maps the face component S to each superface T = S u {t}, with the
    // usual alternating sign at t's position in T.
    for (int r = 0; r < n; ++r) {
        std::vector<std::vector<int>> M(cx.dims[r + 1], std::vector<int>(cx.dims[r], 0));
        auto& src = cx.pieces[r];
        auto& dst = cx.pieces[r + 1];
        std::vector<int> src_off(src.size() + 1, 0), dst_off(dst.size() + 1, 0);
        for (size_t f = 0; f < src.size(); ++f)
            src_off[f + 1] = src_off[f] + (int)src[f].basis.size();
        for (size_t f = 0; f < dst.size(); ++f)
            dst_off[f + 1] = dst_off[f] + (int)dst[f].basis.size();
        for (size_t tf = 0; tf < dst.size(); ++tf) {
            const GradedPiece& T = dst[tf];
            for (size_t pos = 0; pos < T.S.size(); ++pos) {
                std::vector<int> S = T.S;
                int dropped = S[pos];
                S.erase(S.begin() + pos);
                size_t sf = 0;
                while (sf < src.size() && src[sf].S != S) ++sf;
                int sign = pos % 2 == 0 ? 1 : cx.p - 1;
                for (size_t b = 0; b < T.basis.size(); ++b) {
                    const auto& m = T.basis[b];
                    if (m[dropped] < 0) continue;  // absent from the smaller chart
                    auto& sb = src[sf].basis;
                    auto it = std::lower_bound(sb.begin(), sb.end(), m);
                    if (it == sb.end() || *it != m)
                        throw WindowTooSmall("restriction leaves the window");
                    int col = src_off[sf] + (int)(it - sb.begin());
                    M[dst_off[tf] + b][col] = (M[dst_off[tf] + b][col] + sign) % cx.p;
                }
            }
        }
        cx.diff.push_back(std::move(M));
    }
    for (size_t r = 0; r + 1 < cx.diff.size(); ++r) {  // d o d = 0, exactly
        auto& A = cx.diff[r + 1];
        auto& B = cx.diff[r];
        for (size_t i = 0; i < A.size(); ++i)
            for (size_t jcol = 0; jcol < (B.empty() ? 0 : B[0].size()); ++jcol) {
                long long s = 0;
                for (size_t l = 0; l < B.size(); ++l) s += (long long)A[i][l] * B[l][jcol];
                if (s % cx.p != 0) throw Error("cech differential square nonzero");
            }
    }
    return cx;
}

inline std::vector<int> cohomology_dims(const CechComplexInstance& cx) {
    std::vector<int> ranks;
    for (auto& M : cx.diff) ranks.push_back(fp_rank(M, cx.p));
    std::vector<int> h(cx.n + 1, 0);
    for (int r = 0; r <= cx.n; ++r) {
        int ker = cx.dims[r] - (r < cx.n ? ranks[r] : 0);
        int im = r > 0 ? ranks[r - 1] : 0;
        h[r] = ker - im;
    }
    return h;
}

/// Smallest window at which two consecutive sweeps agree; cohomology is
/// stable from there on.
inline long long window_threshold(int n, const PAdicExp& d, int k,
                                  std::vector<int>* stable_dims = nullptr) {
    long long ds = d.scaled(k);
    long long unit = ipow(d.p, k);
    long long W = 1;
    if (ds < 0) W = (-ds + unit - 1) / unit;
    for (int guard = 0; guard < 64; ++guard, ++W) {
        auto a = cohomology_dims(build_cech_complex(n, d, k, W));
        auto b = cohomology_dims(build_cech_complex(n, d, k, W + 1));
        if (a == b) {
            if (stable_dims) *stable_dims = a;
            return W;
        }
    }
    throw Error("no stable window found");
}

/// Cohomology lengths (F_p-dimensions) of the same complex with
/// coefficients in the chain ring F_p[t^{1/p^kt}]/(t^delta).  The signed
/// inclusion matrices have unit entries, so the diagonal normal form over
/// this local ring is exact.
inline std::vector<long long> chain_ring_cohomology_lengths(const CechComplexInstance& cx,
                                                            int kt, int delta) {
    long long D = (long long)delta * ipow(cx.p, kt);  // length of the chain ring
    FieldModel R{FieldKind::CharP, cx.p, 0, (int)D};
    auto pivot_vals = [&](const std::vector<std::vector<int>>& Mint) {
        std::vector<long long> vals;
        if (Mint.empty() || Mint[0].empty()) return vals;
        size_t rows = Mint.size(), cols = Mint[0].size();
        std::vector<std::vector<FieldElem>> M(rows);
        for (size_t i = 0; i < rows; ++i)
            for (size_t j = 0; j < cols; ++j)
                M[i].push_back(Mint[i][j] ? FieldElem::monomial(R, 0, Mint[i][j])
                                          : FieldElem::zero(R));
        std::vector<bool> rdone(rows, false), cdone(cols, false);
        while (true) {
            long long best = D + 1;
            size_t pi = rows, pj = cols;
            for (size_t i = 0; i < rows; ++i) {
                if (rdone[i]) continue;
                for (size_t j = 0; j < cols; ++j) {
                    if (cdone[j] || M[i][j].is_zero()) continue;
                    long long v = *M[i][j].val_scaled();
                    if (v < best) { best = v; pi = i; pj = j; }
                }
            }
            if (pi == rows) break;
            FieldElem pinv = M[pi][pj].inv();  // exact: unit pivots throughout
            for (size_t i = 0; i < rows; ++i) {
                if (i == pi || rdone[i] || M[i][pj].is_zero()) continue;
                FieldElem f = M[i][pj] * pinv;
                for (size_t j = 0; j < cols; ++j)
                    if (!cdone[j]) M[i][j] = M[i][j] - f * M[pi][j];
            }
            vals.push_back(best);
            rdone[pi] = true;
            cdone[pj] = true;
        }
        return vals;
    };
    std::vector<std::vector<long long>> piv;
    for (auto& M : cx.diff) piv.push_back(pivot_vals(M));
    std::vector<long long> h(cx.n + 1, 0);
    for (int r = 0; r <= cx.n; ++r) {
        long long ker = (long long)cx.dims[r] * D;
        if (r < cx.n)
            for (long long v : piv[r]) ker -= D - v;  // minus length of im d^r
        long long im = 0;
        if (r > 0)
            for (long long v : piv[r - 1]) im += D - v;
        h[r] = ker - im;
    }
    return h;
}

/// Homology dimensions of the Koszul complex on (T_0^s, ..., T_n^s) over
/// F_p[T_0..T_n], computed graded degree by degree.  An independent
/// regular-sequence oracle: H_i = 0 for i > 0, dim H_0 = s^{n+1}.
inline std::vector<long long> koszul_oracle(int n, int s, int p) {
    int nv = n + 1;
    auto monomials = [&](int deg) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur(nv);
        auto rec = [&](auto&& self, int i, int rem) -> void {
            if (i == nv - 1) { cur[i] = rem; out.push_back(cur); return; }
            for (int a = 0; a <= rem; ++a) { cur[i] = a; self(self, i + 1, rem - a); }
        };
        rec(rec, 0, deg);
        return out;
    };
    auto subsets = [&](int size) {
        std::vector<std::vector<int>> out;
        std::vector<int> cur;
        auto rec = [&](auto&& self, int start) -> void {
            if ((int)cur.size() == size) { out.push_back(cur); return; }
            for (int i = start; i < nv; ++i) {
                cur.push_back(i);
                self(self, i + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
        return out;
    };
    int dmax = nv * s;  // H_0 is concentrated below (n+1)(s-1) < dmax
    std::vector<long long> H(nv + 1, 0);
    for (int D = 0; D <= dmax; ++D) {
        // basis of K_i in degree D: wedge index sets J (|J| = i) times
        // monomials of degree D - i*s
        std::vector<std::vector<std::pair<std::vector<int>, std::vector<int>>>> basis(nv + 1);
        for (int i = 0; i <= nv; ++i) {
            if (D - i * s < 0) continue;
            auto mons = monomials(D - i * s);
            for (auto& J : subsets(i))
                for (auto& m : mons) basis[i].push_back({J, m});
        }
        auto index_of = [&](int i, const std::vector<int>& J, const std::vector<int>& m) {
            auto& b = basis[i];
            auto it = std::lower_bound(b.begin(), b.end(), std::make_pair(J, m));
            return (int)(it - b.begin());
        };
        std::vector<int> ranks(nv + 2, 0);  // rank of d_i: K_i -> K_{i-1}
        for (int i = 1; i <= nv; ++i) {
            if (basis[i].empty() || basis[i - 1].empty()) continue;
            std::vector<std::vector<int>> M(basis[i - 1].size(),
                                            std::vector<int>(basis[i].size(), 0));
            for (size_t col = 0; col < basis[i].size(); ++col) {
                auto& [J, m] = basis[i][col];
                for (size_t l = 0; l < J.size(); ++l) {
                    std::vector<int> J2 = J;
                    int var = J2[l];
                    J2.erase(J2.begin() + l);
                    std::vector<int> m2 = m;
                    m2[var] += s;
                    int sign = l % 2 == 0 ? 1 : p - 1;
                    int row = index_of(i - 1, J2, m2);
                    M[row][col] = (M[row][col] + sign) % p;
                }
            }
            ranks[i] = fp_rank(M, p);
        }
        for (int i = 0; i <= nv; ++i)
            H[i] += (long long)basis[i].size() - ranks[i] - ranks[i + 1];
    }
    return H;
}

} // namespace perfproj
