#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "perfproj/field.hpp"

namespace perfproj {

/// Shape data every series operation must agree on: variable count, sign
/// policy per variable, exponent depth k for the X's, Laurent window W,
/// and the coefficient field model.
struct SeriesShape {
    int nvars = 1;
    int p = 2;
    int k = 0;                    // X-exponent depth: exponents in (1/p^k)Z
    long long window = 0;         // Laurent exponents bounded below by -window
    std::vector<bool> laurent;    // per-variable sign policy
    FieldModel coeff;

    long long unit() const { return ipow(p, k); }

    bool operator==(const SeriesShape& o) const {
        return nvars == o.nvars && p == o.p && k == o.k && window == o.window &&
               laurent == o.laurent && coeff == o.coeff;
    }
    bool operator!=(const SeriesShape& o) const { return !(*this == o); }

    static SeriesShape disk(int nvars, int p, int k, const FieldModel& coeff) {
        SeriesShape s{nvars, p, k, 0, std::vector<bool>(nvars, false), coeff};
        return s;
    }
    static SeriesShape laurent_all(int nvars, int p, int k, long long W, const FieldModel& coeff) {
        SeriesShape s{nvars, p, k, W, std::vector<bool>(nvars, true), coeff};
        return s;
    }
};

enum class UnitStatus { Unit, NotUnit, Unresolved };

/// Finitely supported Z[1/p]^n-graded series.  Exponents are stored scaled
/// by p^k.  Products that clip terms below the Laurent window set the
/// sticky `truncated` flag; norm claims on flagged values are bounds only.
struct TateSeries {
    SeriesShape shape;
    std::map<std::vector<long long>, FieldElem> terms;
    bool truncated = false;

    TateSeries() = default;
    explicit TateSeries(const SeriesShape& sh) : shape(sh) {}

    static TateSeries zero(const SeriesShape& sh) { return TateSeries(sh); }

    static TateSeries monomial(const SeriesShape& sh, std::vector<long long> exps,
                               const FieldElem& c) {
        TateSeries s(sh);
        s.insert(std::move(exps), c);
        return s;
    }
    static TateSeries constant(const SeriesShape& sh, const FieldElem& c) {
        return monomial(sh, std::vector<long long>(sh.nvars, 0), c);
    }
    static TateSeries one(const SeriesShape& sh) {
        return constant(sh, FieldElem::one(sh.coeff));
    }
    /// X_i^{e/p^k} with unit coefficient.
    static TateSeries variable(const SeriesShape& sh, int i, long long exp_scaled = -1) {
        std::vector<long long> e(sh.nvars, 0);
        e[i] = exp_scaled < 0 ? sh.unit() : exp_scaled;
        return monomial(sh, std::move(e), FieldElem::one(sh.coeff));
    }

    void insert(std::vector<long long> exps, const FieldElem& c) {
        if ((int)exps.size() != shape.nvars) throw ShapeMismatch("exponent arity");
        for (int i = 0; i < shape.nvars; ++i) {
            long long lb = shape.laurent[i] ? -shape.window * shape.unit() : 0;
            if (exps[i] < lb) throw ShapeMismatch("exponent below window/sign policy");
        }
        if (c.is_zero()) return;
        auto it = terms.find(exps);
        if (it == terms.end()) terms.emplace(std::move(exps), c);
        else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }

    bool is_zero() const { return terms.empty(); }

    bool same_support_and_coeffs(const TateSeries& o) const {
        if (terms.size() != o.terms.size()) return false;
        auto a = terms.begin();
        auto b = o.terms.begin();
        for (; a != terms.end(); ++a, ++b) {
            if (a->first != b->first) return false;
            if (!a->second.eq_at_common_prec(b->second)) return false;
        }
        return true;
    }

    TateSeries operator+(const TateSeries& o) const {
        require_same_shape(o);
        TateSeries out(shape);
        out.truncated = truncated || o.truncated;
        out.terms = terms;
        for (auto& [e, c] : o.terms) {
            auto it = out.terms.find(e);
            if (it == out.terms.end()) out.terms.emplace(e, c);
            else {
                it->second = it->second + c;
                if (it->second.is_zero()) out.terms.erase(it);
            }
        }
        return out;
    }

    TateSeries operator-() const {
        TateSeries out(shape);
        out.truncated = truncated;
        for (auto& [e, c] : terms) out.terms.emplace(e, -c);
        return out;
    }
    TateSeries operator-(const TateSeries& o) const { return *this + (-o); }

    TateSeries operator*(const TateSeries& o) const {
        require_same_shape(o);
        TateSeries out(shape);
        out.truncated = truncated || o.truncated;
        long long lb_scaled = -shape.window * shape.unit();
        for (auto& [e1, c1] : terms)
            for (auto& [e2, c2] : o.terms) {
                std::vector<long long> e(shape.nvars);
                bool clipped = false;
                for (int i = 0; i < shape.nvars; ++i) {
                    e[i] = e1[i] + e2[i];
                    long long lb = shape.laurent[i] ? lb_scaled : 0;
                    if (e[i] < lb) clipped = true;
                }
                if (clipped) { out.truncated = true; continue; }
                FieldElem c = c1 * c2;
                if (c.is_zero()) continue;
                auto it = out.terms.find(e);
                if (it == out.terms.end()) out.terms.emplace(std::move(e), c);
                else {
                    it->second = it->second + c;
                    if (it->second.is_zero()) out.terms.erase(it);
                }
            }
        return out;
    }

    TateSeries scalar_mul(const FieldElem& c) const {
        TateSeries out(shape);
        out.truncated = truncated;
        for (auto& [e, x] : terms) {
            FieldElem y = x * c;
            if (!y.is_zero()) out.terms.emplace(e, y);
        }
        return out;
    }

    TateSeries pow(long long n) const {
        TateSeries acc = one(shape);
        TateSeries base = *this;
        while (n > 0) {
            if (n & 1) acc = acc * base;
            if (n > 1) base = base * base;
            n >>= 1;
        }
        return acc;
    }

    /// Valuation form of the Gauss norm: min coefficient valuation.
    std::optional<PAdicExp> gauss_norm() const {
        std::optional<long long> best;
        for (auto& [e, c] : terms) {
            auto v = c.val_scaled();
            if (v && (!best || *v < *best)) best = v;
        }
        if (!best) return std::nullopt;
        return PAdicExp::from_scaled(*best, shape.coeff.k, shape.p);
    }

    /// Lemma-style normalization: lambda * f has Gauss valuation 0.  The
    /// scaling coefficient is the inverse of the (lex-first) coefficient of
    /// minimal valuation.
    std::pair<FieldElem, TateSeries> normalize() const {
        if (terms.empty()) throw ZeroSeries();
        const FieldElem* pick = nullptr;
        long long best = 0;
        for (auto& [e, c] : terms) {
            long long v = *c.val_scaled();
            if (!pick || v < best) { pick = &c; best = v; }
        }
        FieldElem lambda = pick->inv();
        return {lambda, scalar_mul(lambda)};
    }

    /// Unit criterion on the disk algebra: val(f_0) strictly below the
    /// valuation of every other coefficient.
    UnitStatus unit_status() const {
        for (bool l : shape.laurent)
            if (l) throw ShapeMismatch("unit criterion needs a disk (nonnegative) algebra");
        std::vector<long long> zero_exp(shape.nvars, 0);
        auto it = terms.find(zero_exp);
        if (it == terms.end())
            return terms.empty() ? UnitStatus::Unresolved : UnitStatus::NotUnit;
        long long v0 = *it->second.val_scaled();
        for (auto& [e, c] : terms) {
            if (e == zero_exp) continue;
            if (*c.val_scaled() <= v0) return UnitStatus::NotUnit;
        }
        return UnitStatus::Unit;
    }

    bool is_unit() const {
        UnitStatus s = unit_status();
        if (s == UnitStatus::Unresolved)
            throw UnresolvedAtPrecision("unit comparison undecidable at precision");
        return s == UnitStatus::Unit;
    }

    /// Geometric-series inverse: f_0^{-1} * sum (1 - f/f_0)^j.
    TateSeries invert() const {
        UnitStatus st = unit_status();
        if (st == UnitStatus::Unresolved)
            throw UnresolvedAtPrecision("unit comparison undecidable at precision");
        if (st != UnitStatus::Unit) throw NotAUnit();
        std::vector<long long> zero_exp(shape.nvars, 0);
        FieldElem f0_inv = terms.at(zero_exp).inv();
        TateSeries u = constant(shape, f0_inv);
        TateSeries y = one(shape) - u * *this;
        TateSeries geo = one(shape);
        TateSeries term = one(shape);
        long long guard = (long long)shape.coeff.m * shape.coeff.unit() + 2;
        for (long long j = 0; j < guard && !term.is_zero(); ++j) {
            term = term * y;
            geo = geo + term;
        }
        return u * geo;
    }

    /// Sum f_alpha x^alpha, fractional powers read off tilt components.
    FieldElem evaluate(const std::vector<TiltElem>& x) const {
        if ((int)x.size() != shape.nvars) throw ShapeMismatch("point arity");
        std::vector<FieldElem> root_k;  // x_j^{1/p^k}
        for (auto& t : x) {
            if (t.length() < shape.k + 1)
                throw DepthOverflow("tilt sequence shorter than exponent depth");
            root_k.push_back(t.comp[shape.k]);
        }
        FieldElem acc = FieldElem::zero(shape.coeff);
        acc.prec = shape.coeff.prec_scaled();
        for (auto& [e, c] : terms) {
            FieldElem term = c;
            for (int i = 0; i < shape.nvars; ++i) {
                if (e[i] < 0) throw ShapeMismatch("evaluation needs nonnegative exponents");
                if (e[i] != 0) term = term * root_k[i].pow(e[i]);
            }
            acc = acc + term;
        }
        return acc;
    }

    /// Exact p-th root, termwise (CharP coefficients only).
    TateSeries root_p() const {
        TateSeries out(shape);
        out.truncated = truncated;
        for (auto& [e, c] : terms) {
            std::vector<long long> r(shape.nvars);
            for (int i = 0; i < shape.nvars; ++i) {
                if (e[i] % shape.p != 0)
                    throw DepthOverflow("series p-th root leaves the exponent lattice");
                r[i] = e[i] / shape.p;
            }
            out.terms.emplace(std::move(r), c.root_p());
        }
        return out;
    }

    /// Total degree (scaled) when homogeneous, else nullopt.
    std::optional<long long> homogeneous_degree() const {
        std::optional<long long> deg;
        for (auto& [e, c] : terms) {
            long long s = 0;
            for (long long a : e) s += a;
            if (!deg) deg = s;
            else if (*deg != s) return std::nullopt;
        }
        return deg;
    }

    /// Reduce coefficients modulo the maximal ideal (keep the residue digit).
    TateSeries residue() const {
        TateSeries out(shape);
        out.truncated = truncated;
        for (auto& [e, c] : terms) {
            FieldElem r = c.truncated(1);
            if (!r.is_zero()) out.terms.emplace(e, r);
        }
        return out;
    }

private:
    void require_same_shape(const TateSeries& o) const {
        if (shape != o.shape) throw ShapeMismatch("series shapes differ");
    }
};

inline TateSeries s_add(const TateSeries& f, const TateSeries& g) { return f + g; }
inline TateSeries s_mul(const TateSeries& f, const TateSeries& g) { return f * g; }

} // namespace perfproj
