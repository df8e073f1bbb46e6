#pragma once

#include <optional>
#include <vector>

#include "perfproj/picard.hpp"
#include "perfproj/poly.hpp"
#include "perfproj/series.hpp"

namespace perfproj {

/// A tower of twisting data describing a map P^{m,perf} -> P^{n,perf}:
/// level i carries n+1 homogeneous sections of total degree d0/p^i, and
/// lambdas[i] is the global scalar through which the p-th power of level
/// i+1 is identified with level i.
struct LnDatum {
    int m = 0, n = 0, N = 1;
    PAdicExp d0;
    std::vector<FieldElem> lambdas;                   // N-1 entries
    std::vector<std::vector<TateSeries>> sections;    // [level][0..n]
};

inline bool check_tower(const LnDatum& D) {
    if ((int)D.sections.size() != D.N) throw ShapeMismatch("tower length");
    if ((int)D.lambdas.size() != D.N - 1) throw ShapeMismatch("scalar count");
    for (auto& level : D.sections)
        if ((int)level.size() != D.n + 1) throw ShapeMismatch("section count");
    int k = D.sections[0][0].shape.k;
    long long ds = D.d0.scaled(k);
    for (int i = 0; i < D.N; ++i) {
        long long di = ds;
        for (int t = 0; t < i; ++t) {
            if (di % D.d0.p != 0) throw ShapeMismatch("degree leaves the lattice");
            di /= D.d0.p;
        }
        for (auto& s : D.sections[i]) {
            auto deg = s.homogeneous_degree();
            if (!deg || *deg != di) return false;
        }
    }
    for (int i = 0; i + 1 < D.N; ++i)
        for (int j = 0; j <= D.n; ++j) {
            TateSeries lhs = D.sections[i + 1][j].pow(D.d0.p);
            TateSeries rhs = D.sections[i][j].scalar_mul(D.lambdas[i]);
            if (!lhs.same_support_and_coeffs(rhs)) return false;
        }
    return true;
}

enum class GenStatus { Generates, CommonZero, Unknown };

struct GenReport {
    GenStatus status = GenStatus::Unknown;
    int field_ext = 0;                        // e with witness over F_{p^e}
    std::vector<Poly> minpoly_and_point;      // [0] = minpoly, then coordinates
};

namespace detail {

inline Poly find_irreducible(int p, int e) {
    if (e == 1) return Poly::monomial(p, 1, 1);  // F_p itself as F_p[x]/(x)
    // degree <= 3: irreducible over F_p iff no root in F_p
    for (long long code = 0;; ++code) {
        std::vector<int> c(e + 1, 0);
        c[e] = 1;
        long long t = code;
        for (int i = 0; i < e; ++i) { c[i] = (int)(t % p); t /= p; }
        if (t != 0) throw Error("no irreducible polynomial found");
        Poly f(p, c);
        bool has_root = false;
        for (int a = 0; a < p && !has_root; ++a) {
            long long v = 0, pw = 1;
            for (int i = 0; i <= e; ++i) { v = (v + (long long)c[i] * pw) % p; pw = pw * a % p; }
            if (v % p == 0) has_root = true;
        }
        if (!has_root) return f;
    }
}

inline Poly ff_mul(const Poly& a, const Poly& b, const Poly& mod) {
    return (a * b).divmod(mod).second;
}

inline Poly ff_pow(Poly a, long long n, const Poly& mod) {
    Poly r = Poly::constant(a.p, 1);
    while (n > 0) {
        if (n & 1) r = ff_mul(r, a, mod);
        a = ff_mul(a, a, mod);
        n >>= 1;
    }
    return r;
}

} // namespace detail

/// Generation check for level-0 sections over residue coefficients.
/// Sound but incomplete: a pure-monomial section per variable certifies
/// generation; a common projective zero over F_{p^e} (e small, found in
/// cleared coordinates) refutes it; everything else is Unknown.
inline GenReport check_generation(const std::vector<TateSeries>& sections, int ext_bound = 2) {
    GenReport rep;
    if (sections.empty()) return rep;
    const SeriesShape& sh = sections[0].shape;
    int p = sh.p, nv = sh.nvars;

    std::vector<bool> covered(nv, false);
    for (auto& s : sections) {
        if (s.terms.size() != 1) continue;
        auto& e = s.terms.begin()->first;
        int nz = -1;
        bool pure = true;
        for (int i = 0; i < nv; ++i)
            if (e[i] != 0) { pure = pure && nz < 0; nz = i; }
        if (pure && nz >= 0 && !s.terms.begin()->second.truncated(1).is_zero()) covered[nz] = true;
    }
    if (std::all_of(covered.begin(), covered.end(), [](bool b) { return b; })) {
        rep.status = GenStatus::Generates;
        return rep;
    }

    // cleared coordinates y = X^{1/p^k}: common zeros correspond bijectively
    auto value_at = [&](const TateSeries& s, const std::vector<Poly>& pt, const Poly& mod) {
        Poly acc = Poly::zero(p);
        for (auto& [e, c] : s.terms) {
            auto it = c.truncated(1).digits.find(0);
            if (it == c.truncated(1).digits.end()) continue;
            Poly term = Poly::constant(p, it->second);
            for (int i = 0; i < nv; ++i)
                if (e[i] != 0) term = detail::ff_mul(term, detail::ff_pow(pt[i], e[i], mod), mod);
            acc = acc + term;
        }
        return acc.divmod(mod).second;
    };
    for (int e = 1; e <= ext_bound; ++e) {
        Poly mod = detail::find_irreducible(p, e);
        long long q = ipow(p, e);
        // projective points: first nonzero coordinate normalized to 1
        std::vector<Poly> pt(nv, Poly::zero(p));
        auto elem = [&](long long code) {
            std::vector<int> c(e, 0);
            for (int i = 0; i < e; ++i) { c[i] = (int)(code % p); code /= p; }
            return Poly(p, c);
        };
        for (int lead = 0; lead < nv; ++lead) {
            std::vector<long long> codes(nv - lead - 1, 0);
            while (true) {
                for (int i = 0; i < lead; ++i) pt[i] = Poly::zero(p);
                pt[lead] = Poly::constant(p, 1);
                for (int i = lead + 1; i < nv; ++i) pt[i] = elem(codes[i - lead - 1]);
                bool all_zero = true;
                for (auto& s : sections)
                    if (!value_at(s, pt, mod).is_zero()) { all_zero = false; break; }
                if (all_zero) {
                    rep.status = GenStatus::CommonZero;
                    rep.field_ext = e;
                    rep.minpoly_and_point.push_back(mod);
                    for (auto& x : pt) rep.minpoly_and_point.push_back(x);
                    return rep;
                }
                int pos = 0;
                while (pos < (int)codes.size() && ++codes[pos] == q) codes[pos++] = 0;
                if (pos == (int)codes.size()) break;
            }
        }
    }
    rep.status = GenStatus::Unknown;
    return rep;
}

/// gamma_j substitution entry: (T_r/T_j)^{1/p^i} maps to num/den, kept as
/// a formal pair and simplified only when the denominator divides the
/// numerator monomially (verified by multiplying back).
struct QuotientEntry {
    TateSeries num, den;
    int level = 0;
    std::optional<TateSeries> simplified;  // Laurent-shaped, when available
};

inline std::optional<TateSeries> simplify_quotient(const TateSeries& num, const TateSeries& den) {
    if (den.terms.size() != 1) return std::nullopt;
    auto& [b, c] = *den.terms.begin();
    auto cv = c.val_scaled();
    if (!cv) return std::nullopt;
    long long need = 0;
    for (auto& [e, x] : num.terms)
        for (int i = 0; i < num.shape.nvars; ++i) need = std::max(need, b[i] - e[i]);
    long long W = std::max(num.shape.window,
                           (need + num.shape.unit() - 1) / num.shape.unit());
    SeriesShape lsh = SeriesShape::laurent_all(num.shape.nvars, num.shape.p, num.shape.k,
                                               std::max(W, (long long)1), num.shape.coeff);
    FieldElem cinv = c.inv();
    TateSeries q(lsh);
    for (auto& [e, x] : num.terms) {
        std::vector<long long> shifted(e);
        for (int i = 0; i < num.shape.nvars; ++i) shifted[i] = e[i] - b[i];
        q.insert(shifted, x * cinv);
    }
    // multiply back in the Laurent shape to certify the division
    TateSeries dl(lsh), nl(lsh);
    dl.insert(b, c);
    for (auto& [e, x] : num.terms) nl.insert(e, x);
    if (!(q * dl).same_support_and_coeffs(nl)) return std::nullopt;
    return q;
}

struct ProjectivoidMap {
    int m = 0, n = 0, N = 1;
    PAdicExp d0;
    // table[j][r][i]: gamma_j on (T_r/T_j)^{1/p^i}
    std::vector<std::vector<std::vector<QuotientEntry>>> table;
};

inline ProjectivoidMap build_map(const LnDatum& D) {
    if (!check_tower(D)) throw TowerInvalid();
    auto gen = check_generation(D.sections[0]);
    if (gen.status == GenStatus::CommonZero)
        throw NotGenerating("level-0 sections share a zero over F_{p^" +
                            std::to_string(gen.field_ext) + "}");
    ProjectivoidMap M;
    M.m = D.m;
    M.n = D.n;
    M.N = D.N;
    M.d0 = D.d0;
    M.table.resize(D.n + 1);
    for (int j = 0; j <= D.n; ++j) {
        M.table[j].resize(D.n + 1);
        for (int r = 0; r <= D.n; ++r)
            for (int i = 0; i < D.N; ++i) {
                QuotientEntry q;
                q.num = D.sections[i][r];
                q.den = D.sections[i][j];
                q.level = i;
                q.simplified = simplify_quotient(q.num, q.den);
                M.table[j][r].push_back(std::move(q));
            }
    }
    // gluing: gamma_j((T_r/T_j)) * gamma_r((T_j/T_r)) = 1 as cross products
    for (int j = 0; j <= D.n; ++j)
        for (int r = 0; r <= D.n; ++r)
            for (int i = 0; i < D.N; ++i) {
                const QuotientEntry& a = M.table[j][r][i];
                const QuotientEntry& b = M.table[r][j][i];
                if (!(a.num * b.num).same_support_and_coeffs(a.den * b.den))
                    throw TowerInvalid("chart gluing fails");
            }
    return M;
}

/// Pull the degree-d twisting cocycle back along M and classify it on the
/// source.  Needs d = a/p^i with i inside the tower, and per source chart
/// a target section that is a pure monomial in that chart's coordinate.
inline PicClass pullback_class(const ProjectivoidMap& M, const LnDatum& D, const PAdicExp& d) {
    if (d.depth >= M.N)
        throw DepthOverflow("degree " + d.str() + " reaches past the tower");
    int i = d.depth;
    long long a = d.num;
    const SeriesShape& sh = D.sections[0][0].shape;
    int p = sh.p, k = sh.k, nv = sh.nvars;

    // chart assignment: source chart r uses the target index whose level-i
    // section is a pure monomial in X_r
    std::vector<int> chart(nv, -1);
    for (int j = 0; j <= D.n; ++j) {
        const TateSeries& s = D.sections[i][j];
        if (s.terms.size() != 1) continue;
        auto& e = s.terms.begin()->first;
        int nz = -1;
        bool pure = true;
        for (int v = 0; v < nv; ++v)
            if (e[v] != 0) { pure = pure && nz < 0; nz = v; }
        if (pure && nz >= 0 && chart[nz] < 0) chart[nz] = j;
    }
    for (int r = 0; r < nv; ++r)
        if (chart[r] < 0)
            throw NotGenerating("no pure monomial section distinguishes chart " +
                                std::to_string(r));

    UnitCocycle pulled;
    pulled.n = nv - 1;
    pulled.p = p;
    std::optional<PAdicExp> alpha;
    for (int r = 0; r < nv; ++r)
        for (int s = r + 1; s < nv; ++s) {
            auto q = simplify_quotient(D.sections[i][chart[r]], D.sections[i][chart[s]]);
            if (!q || q->terms.size() != 1)
                throw NotACocycle("pullback transition is not monomial");
            auto [e, c] = *q->terms.begin();
            // q^a must be lambda * (X_r/X_s)^alpha
            for (int v = 0; v < nv; ++v)
                if (v != r && v != s && e[v] != 0)
                    throw NotACocycle("pullback transition involves extra charts");
            if (e[r] + e[s] != 0) throw NotACocycle("pullback transition not degree zero");
            auto rd = c.truncated(1).digits.find(0);
            if (rd == c.truncated(1).digits.end()) throw NotAUnit("transition scalar not a unit");
            // scalar part: rd^a in the cyclic group F_p^x
            long long ae = ((a % (p - 1)) + (p - 1)) % (p - 1);
            long long lam = 1;
            for (long long t = 0; t < ae; ++t) lam = lam * rd->second % p;
            PAdicExp al = PAdicExp::from_scaled(e[r], k, p).times(a);
            if (!alpha) alpha = al;
            pulled.c[{r, s}] = {(int)lam, al};
        }
    return classify_residue_cocycle(pulled);
}

/// Expand a single char-p level into the mixed-characteristic tower:
/// Frobenius roots are exact on the tilt side, and each monomial
/// coefficient c * t^e transports to its Teichmuller untilt w(c) * p^e.
inline LnDatum tilt_datum(const LnDatum& charp, const FieldModel& mixed, int N) {
    if (charp.N != 1) throw ShapeMismatch("expected a single-level datum");
    const SeriesShape& sh = charp.sections[0][0].shape;
    if (sh.coeff.kind != FieldKind::CharP) throw ShapeMismatch("datum not on the tilt side");
    if (mixed.kind != FieldKind::MixedChar || mixed.p != sh.p)
        throw ShapeMismatch("target model mismatch");

    for (auto& s : charp.sections[0]) {
        if (s.terms.size() != 1) throw NotSharpLiftable("section is not a monomial");
        if (s.terms.begin()->second.digits.size() != 1)
            throw NotSharpLiftable("coefficient has several digits");
    }
    std::vector<std::vector<TateSeries>> tilt_levels{charp.sections[0]};
    for (int i = 1; i < N; ++i) {
        std::vector<TateSeries> level;
        for (auto& s : tilt_levels.back()) level.push_back(s.root_p());
        tilt_levels.push_back(std::move(level));
    }
    SeriesShape msh = sh;
    msh.coeff = mixed;
    LnDatum out;
    out.m = charp.m;
    out.n = charp.n;
    out.N = N;
    out.d0 = charp.d0;
    for (int i = 0; i + 1 < N; ++i) out.lambdas.push_back(FieldElem::one(mixed));
    for (auto& level : tilt_levels) {
        out.sections.emplace_back();
        for (auto& s : level) {
            if (s.terms.size() != 1) throw NotSharpLiftable("section is not a monomial");
            auto& [e, c] = *s.terms.begin();
            if (c.digits.size() != 1) throw NotSharpLiftable("coefficient has several digits");
            auto [te, td] = *c.digits.begin();
            FieldElem mc = FieldElem::teichmuller(mixed, td).shifted(te).truncated(mixed.prec_scaled());
            out.sections.back().push_back(TateSeries::monomial(msh, e, mc));
        }
    }
    if (!check_tower(out)) throw TowerInvalid("transported tower fails compatibility");
    return out;
}

/// Inverse transport: recognize each mixed coefficient as w(c) * p^e and
/// rebuild the char-p datum from level 0 (checking the higher levels are
/// its Frobenius roots).
inline LnDatum untilt_datum(const LnDatum& mixed_tower, const FieldModel& charp) {
    const SeriesShape& msh = mixed_tower.sections[0][0].shape;
    if (msh.coeff.kind != FieldKind::MixedChar) throw ShapeMismatch("datum not on the untilt side");
    if (charp.kind != FieldKind::CharP || charp.p != msh.p) throw ShapeMismatch("target model mismatch");
    SeriesShape csh = msh;
    csh.coeff = charp;

    auto recognize = [&](const FieldElem& c) -> std::pair<long long, int> {
        auto v = c.val_scaled();
        if (!v) throw NotSharpLiftable("zero coefficient");
        int d = c.digits.begin()->second;
        FieldElem expect = FieldElem::teichmuller(msh.coeff, d).shifted(*v);
        if (!expect.eq_at_common_prec(c))
            throw NotSharpLiftable("coefficient is not a Teichmuller monomial");
        return {*v, d};
    };
    std::vector<std::vector<TateSeries>> charp_levels;
    for (auto& level : mixed_tower.sections) {
        charp_levels.emplace_back();
        for (auto& s : level) {
            if (s.terms.size() != 1) throw NotSharpLiftable("section is not a monomial");
            auto& [e, c] = *s.terms.begin();
            auto [te, td] = recognize(c);
            charp_levels.back().push_back(
                TateSeries::monomial(csh, e, FieldElem::monomial(charp, te, td)));
        }
    }
    for (int i = 0; i + 1 < mixed_tower.N; ++i)
        for (int j = 0; j <= mixed_tower.n; ++j)
            if (!charp_levels[i + 1][j].pow(charp.p).same_support_and_coeffs(charp_levels[i][j]))
                throw TowerInvalid("levels are not Frobenius-compatible");

    LnDatum out;
    out.m = mixed_tower.m;
    out.n = mixed_tower.n;
    out.N = 1;
    out.d0 = mixed_tower.d0;
    out.sections.push_back(charp_levels[0]);
    return out;
}

} // namespace perfproj
