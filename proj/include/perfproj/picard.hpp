#pragma once

#include <map>
#include <utility>
#include <vector>

#include "perfproj/cech.hpp"
#include "perfproj/series.hpp"

namespace perfproj {

/// Invertible element of a residue chart-overlap ring in classified form:
/// lambda * (T_i/T_j)^alpha.  The only invertible Laurent polynomials are
/// monomials, so nothing is lost by storing the normal form.
struct ResidueUnit {
    int lambda = 1;       // in F_p^x
    PAdicExp alpha;

    ResidueUnit() = default;
    ResidueUnit(int l, PAdicExp a) : lambda(l), alpha(a) {}

    ResidueUnit inverse(int p) const {
        return {FieldElem::mod_inverse(lambda, p), -alpha};
    }
    ResidueUnit operator*(const ResidueUnit& o) const {
        return {(int)((long long)lambda * o.lambda % alpha.p), alpha + o.alpha};
    }
};

/// Residue-level unit 1-cochain on the standard cover; entries indexed by
/// pairs i < j, with c_{ji} = c_{ij}^{-1} by convention.
struct UnitCocycle {
    int n = 0, p = 2;
    std::map<std::pair<int, int>, ResidueUnit> c;

    const ResidueUnit& at(int i, int j) const { return c.at({i, j}); }
};

inline UnitCocycle twisting_cocycle(int n, const PAdicExp& d) {
    UnitCocycle out;
    out.n = n;
    out.p = d.p;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j <= n; ++j) out.c[{i, j}] = {1, d};
    return out;
}

/// Coboundary of a 0-cochain of scalars: c_{ij} = mu_i / mu_j.
inline UnitCocycle coboundary(const std::vector<int>& mu, int p) {
    UnitCocycle out;
    out.n = (int)mu.size() - 1;
    out.p = p;
    PAdicExp zero = PAdicExp::integer(0, p);
    for (int i = 0; i < out.n; ++i)
        for (int j = i + 1; j <= out.n; ++j)
            out.c[{i, j}] = {(int)((long long)mu[i] * FieldElem::mod_inverse(mu[j], p) % p), zero};
    return out;
}

inline UnitCocycle cocycle_mul(const UnitCocycle& a, const UnitCocycle& b) {
    if (a.n != b.n || a.p != b.p) throw ShapeMismatch("cocycle shapes differ");
    UnitCocycle out = a;
    for (auto& [ij, u] : out.c) u = u * b.c.at(ij);
    return out;
}

/// Exact triple-product check: alpha_{ij} = alpha_{jk} = alpha_{ik} and
/// lambda_{ij} lambda_{jk} = lambda_{ik}.
inline bool verify_cocycle(const UnitCocycle& c) {
    for (int i = 0; i < c.n; ++i)
        for (int j = i + 1; j < c.n; ++j)
            for (int k = j + 1; k <= c.n; ++k) {
                const ResidueUnit &ij = c.at(i, j), &jk = c.at(j, k), &ik = c.at(i, k);
                if (ij.alpha != jk.alpha || ij.alpha != ik.alpha) return false;
                if ((long long)ij.lambda * jk.lambda % c.p != ik.lambda) return false;
            }
    // n = 1 has no triples; a lone entry is always a cocycle
    return true;
}

/// Isomorphism class of a line bundle: a degree in Z[1/p] plus the scalar
/// coboundary witness splitting the lambda part (mu_0 normalized to 1).
struct PicClass {
    PAdicExp degree;
    std::vector<int> witness;

    PicClass() = default;
    PicClass(PAdicExp d, std::vector<int> w) : degree(d), witness(std::move(w)) {}
};

inline PicClass classify_residue_cocycle(const UnitCocycle& c) {
    if (!verify_cocycle(c)) throw NotACocycle();
    if (c.c.empty()) throw ShapeMismatch("empty cocycle");
    PAdicExp d = c.at(0, 1).alpha;
    std::vector<int> mu(c.n + 1, 1);
    for (int j = 1; j <= c.n; ++j)
        mu[j] = FieldElem::mod_inverse(c.at(0, j).lambda, c.p);
    // lambda_{ij} = mu_i/mu_j follows from the cocycle relation through 0
    return {d, std::move(mu)};
}

/// 1 + g with g of positive t-valuation in a truncated coefficient ring is
/// a unit; invert by the (terminating) geometric series.
inline TateSeries nilpotent_inv_one_plus(const TateSeries& g) {
    const SeriesShape& sh = g.shape;
    TateSeries acc = TateSeries::one(sh);
    TateSeries term = TateSeries::one(sh);
    long long guard = (long long)sh.coeff.m * sh.coeff.unit() + 2;
    for (long long j = 0; j < guard && !term.is_zero(); ++j) {
        term = term * -g;
        acc = acc + term;
    }
    return acc;
}

struct DeformationReport {
    std::vector<long long> kernel_h;  // chain-ring cohomology lengths, d = 0
    bool lifts_matched = false;
    TateSeries w0, w1;                // explicit coboundary: lift2/lift1 = w0 * w1
};

/// Deformation of a residue class through the truncation tower on P^1:
/// (i) the additive kernel complex at level dtilde is acyclic in positive
/// degrees, and (ii) two independent unit lifts of the same residue
/// cocycle differ by an explicitly solved coboundary (chart-0 factor
/// supported in nonpositive overlap exponents, chart-1 in nonnegative).
inline DeformationReport deformation_check(const ResidueUnit& c01, int p, int k, int dtilde,
                                           bool sabotage = false) {
    DeformationReport rep;
    PAdicExp d0 = PAdicExp::integer(0, p);
    rep.kernel_h = chain_ring_cohomology_lengths(build_cech_complex(1, d0, k, 1), k, dtilde);

    FieldModel A{FieldKind::CharP, p, k, dtilde};
    long long unit = ipow(p, k);
    long long as = c01.alpha.scaled(k);
    // terms of t-valuation v stay above exponent -v*unit; anything at or
    // beyond dtilde*unit in valuation is already zero, so this window keeps
    // every product of correction factors exact
    long long W = (std::abs(as) + unit - 1) / unit + dtilde + 1;
    SeriesShape sh = SeriesShape::laurent_all(1, p, k, W, A);

    TateSeries lift1 = TateSeries::monomial(sh, {as}, FieldElem::monomial(A, 0, c01.lambda));
    // second, independent lift: multiply by a unit congruent to 1 mod t
    // whose correction mixes both overlap signs
    TateSeries bump(sh);
    bump.insert({unit}, FieldElem::monomial(A, 1, 1));
    bump.insert({-unit}, FieldElem::monomial(A, 1, p - 1));
    TateSeries lift2 = lift1 * (TateSeries::one(sh) + bump);
    if (sabotage)  // mutate a residue digit: no longer a lift of the same class
        lift2 = lift2 + TateSeries::monomial(sh, {0}, FieldElem::monomial(A, 0, 1));

    TateSeries ratio = lift2 * TateSeries::monomial(sh, {-as},
                           FieldElem::monomial(A, 0, FieldElem::mod_inverse(c01.lambda, p)));
    TateSeries one = TateSeries::one(sh);
    if (!ratio.residue().same_support_and_coeffs(one))
        throw LiftMismatch("lift ratio " + std::string("is not congruent to 1 mod t"));

    TateSeries w0 = one, w1 = one;
    TateSeries cur = ratio;
    long long guard = (long long)dtilde * unit + 2;
    for (long long it = 0;; ++it) {
        TateSeries diff = cur - one;
        if (diff.is_zero()) break;
        if (it >= guard) throw LiftMismatch("coboundary solve failed to converge");
        std::optional<long long> a;
        for (auto& [e, cf] : diff.terms) {
            auto v = cf.val_scaled();
            if (v && (!a || *v < *a)) a = *v;
        }
        TateSeries e0(sh), e1(sh);  // level-a slice, split by overlap sign
        for (auto& [e, cf] : diff.terms) {
            auto it2 = cf.digits.find(*a);
            if (it2 == cf.digits.end()) continue;
            FieldElem slice = FieldElem::monomial(A, 0, it2->second).shifted(*a).truncated(A.prec_scaled());
            if (e[0] < 0) e0.insert(e, slice);
            else e1.insert(e, slice);
        }
        w0 = w0 * (one + e0);
        w1 = w1 * (one + e1);
        cur = cur * nilpotent_inv_one_plus(e0) * nilpotent_inv_one_plus(e1);
    }
    if (!(w0 * w1).same_support_and_coeffs(ratio))
        throw LiftMismatch("solved factors do not reproduce the lift ratio");
    rep.lifts_matched = true;
    rep.w0 = w0;
    rep.w1 = w1;
    return rep;
}

/// The inverse system theta assigns to the degree-d twist: level i is
/// obtained by i-fold exact Frobenius root of the tilt-side monomial
/// cocycle, untilting the coefficient through its Teichmuller digit, and
/// classifying the resulting unit.
inline std::vector<PicClass> theta_on_twisting(int n, const PAdicExp& d, int N, int k, int m) {
    int p = d.p;
    FieldModel tilt{FieldKind::CharP, p, k, m};
    long long ds = d.scaled(k);
    long long unit = ipow(p, k);
    long long W = (std::max(std::abs(ds), (long long)1) + unit - 1) / unit;
    SeriesShape overlap = SeriesShape::laurent_all(2, p, k, W, tilt);

    std::vector<PicClass> tower;
    // tilt-side transition on a chart pair: (T_i/T_j)^d with Teichmuller
    // coefficient; roots stay exact in characteristic p
    TateSeries cur = TateSeries::monomial(overlap, {ds, -ds}, FieldElem::teichmuller(tilt, 1));
    for (int i = 0; i < N; ++i) {
        if (cur.terms.size() != 1) throw NotACocycle("non-monomial transition");
        auto& [e, cf] = *cur.terms.begin();
        if (e[0] + e[1] != 0) throw NotACocycle("transition not degree-balanced");
        // untilt the coefficient: sharp of the Teichmuller sequence keeps
        // the residue digit
        auto it = cf.digits.find(0);
        if (it == cf.digits.end()) throw NotAUnit("transition coefficient not a unit");
        int lambda = it->second;
        PAdicExp alpha = PAdicExp::from_scaled(e[0], k, p);
        UnitCocycle level = twisting_cocycle(n, alpha);
        for (auto& [ij, u] : level.c) u.lambda = lambda;
        tower.push_back(classify_residue_cocycle(level));
        if (i + 1 < N) cur = cur.root_p();  // DepthOverflow when the lattice runs out
    }
    return tower;
}

} // namespace perfproj
