#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perfproj/errors.hpp"
#include "perfproj/padic_exp.hpp"

namespace perfproj {

enum class FieldKind { CharP, MixedChar };

/// A truncated perfectoid-field model.  CharP is F_p((t^{1/p^k})) with
/// pi = t; MixedChar is the Kummer model Q_p(p^{1/p^k}) with pi = p and
/// u = p^{1/p^k} as uniformizer.  Elements are known mod pi^m.
struct FieldModel {
    FieldKind kind = FieldKind::CharP;
    int p = 2;
    int k = 0;
    int m = 1;

    long long unit() const { return ipow(p, k); }      // scaled exponents count pi^{1/p^k}
    long long prec_scaled() const { return (long long)m * unit(); }

    bool operator==(const FieldModel& o) const {
        return kind == o.kind && p == o.p && k == o.k && m == o.m;
    }
    bool operator!=(const FieldModel& o) const { return !(*this == o); }
};

/// Field element as a uniformizer-adic digit expansion: a finite map
/// scaled-exponent -> digit in [1, p-1], truncated at `prec`.  Both models
/// share this shape; MixedChar addition carries (p * u^i = u^{i + p^k}),
/// CharP addition is digitwise mod p.
struct FieldElem {
    FieldModel model;
    std::map<long long, int> digits;
    long long prec = 0;

    FieldElem() = default;
    explicit FieldElem(const FieldModel& mo) : model(mo), prec(mo.prec_scaled()) {}

    static FieldElem zero(const FieldModel& mo) { return FieldElem(mo); }
    static FieldElem zero_at(const FieldModel& mo, long long prec) {
        FieldElem e(mo);
        e.prec = prec;
        return e;
    }

    static FieldElem monomial(const FieldModel& mo, long long exp_scaled, long long digit) {
        FieldElem e(mo);
        std::map<long long, long long> raw;
        raw[exp_scaled] = digit;
        return canonical(mo, raw, mo.prec_scaled());
    }

    static FieldElem one(const FieldModel& mo) { return monomial(mo, 0, 1); }

    static FieldElem from_integer(const FieldModel& mo, long long n) {
        std::map<long long, long long> raw;
        raw[0] = n;
        return canonical(mo, raw, mo.prec_scaled());
    }

    /// Teichmuller representative of c in F_p^x: in CharP just the digit,
    /// in MixedChar the (p-1)st root of unity congruent to c mod p.
    static FieldElem teichmuller(const FieldModel& mo, int c) {
        c = ((c % mo.p) + mo.p) % mo.p;
        if (c == 0) return zero(mo);
        if (mo.kind == FieldKind::CharP) return monomial(mo, 0, c);
        long long md = ipow(mo.p, mo.m);
        long long x = c % md, prev = -1;
        while (x != prev) {
            prev = x;
            long long y = 1;
            for (int i = 0; i < mo.p; ++i) y = (__int128)y * x % md;
            x = y;
        }
        std::map<long long, long long> raw;
        long long e = 0;
        while (x != 0) {
            raw[e * mo.unit()] = x % mo.p;
            x /= mo.p;
            ++e;
        }
        return canonical(mo, raw, mo.prec_scaled());
    }

    static FieldElem canonical(const FieldModel& mo, std::map<long long, long long> raw,
                               long long prec) {
        FieldElem out(mo);
        // absolute precision never exceeds the model cap pi^m
        out.prec = std::min(prec, mo.prec_scaled());
        prec = out.prec;
        while (!raw.empty()) {
            auto it = raw.begin();
            long long e = it->first, v = it->second;
            raw.erase(it);
            if (v == 0) continue;
            int d = (int)(((v % mo.p) + mo.p) % mo.p);
            long long carry = (v - d) / mo.p;
            if (e < prec && d != 0) out.digits[e] = d;
            if (carry != 0 && mo.kind == FieldKind::MixedChar) {
                long long ce = e + mo.unit();
                if (ce < prec) raw[ce] += carry;
            }
        }
        return out;
    }

    bool is_zero() const { return digits.empty(); }

    /// Scaled valuation (units of 1/p^k); nullopt when zero at precision.
    std::optional<long long> val_scaled() const {
        if (digits.empty()) return std::nullopt;
        return digits.begin()->first;
    }
    std::optional<PAdicExp> val() const {
        auto v = val_scaled();
        if (!v) return std::nullopt;
        return PAdicExp::from_scaled(*v, model.k, model.p);
    }
    long long val_or_prec() const { return digits.empty() ? prec : digits.begin()->first; }

    FieldElem truncated(long long new_prec) const {
        FieldElem out(model);
        out.prec = std::min(prec, new_prec);
        for (auto& [e, d] : digits)
            if (e < out.prec) out.digits[e] = d;
        return out;
    }

    bool eq_at_common_prec(const FieldElem& o) const {
        long long P = std::min(prec, o.prec);
        return truncated(P).digits == o.truncated(P).digits;
    }
    bool operator==(const FieldElem& o) const {
        return model == o.model && prec == o.prec && digits == o.digits;
    }

    FieldElem operator+(const FieldElem& o) const {
        require_same_model(o);
        std::map<long long, long long> raw;
        for (auto& [e, d] : digits) raw[e] += d;
        for (auto& [e, d] : o.digits) raw[e] += d;
        return canonical(model, std::move(raw), std::min(prec, o.prec));
    }
    FieldElem operator-() const {
        std::map<long long, long long> raw;
        for (auto& [e, d] : digits) raw[e] = -(long long)d;
        return canonical(model, std::move(raw), prec);
    }
    FieldElem operator-(const FieldElem& o) const { return *this + (-o); }

    FieldElem operator*(const FieldElem& o) const {
        require_same_model(o);
        std::map<long long, long long> raw;
        for (auto& [e1, d1] : digits)
            for (auto& [e2, d2] : o.digits) raw[e1 + e2] += (long long)d1 * d2;
        long long P = std::min(prec + o.val_or_prec(), o.prec + val_or_prec());
        return canonical(model, std::move(raw), P);
    }

    FieldElem scaled_by_digit(int c) const {
        std::map<long long, long long> raw;
        for (auto& [e, d] : digits) raw[e] = (long long)d * c;
        return canonical(model, raw, prec);
    }

    /// Multiply by pi^{shift/p^k}.
    FieldElem shifted(long long shift_scaled) const {
        FieldElem out(model);
        out.prec = std::min(prec + shift_scaled, model.prec_scaled());
        for (auto& [e, d] : digits)
            if (e + shift_scaled < out.prec) out.digits[e + shift_scaled] = d;
        return out;
    }

    FieldElem pow(long long n) const {
        FieldElem acc = one(model);
        acc.prec = prec;  // keep result precision tied to the base
        FieldElem base = *this;
        if (n == 0) return one(model);
        while (n > 0) {
            if (n & 1) acc = acc * base;
            base = (n > 1) ? base * base : base;
            n >>= 1;
        }
        return acc;
    }

    /// Multiplicative inverse by digitwise long division.  Output precision
    /// is prec - 2*val: the relative precision of the input is preserved.
    FieldElem inv() const {
        if (digits.empty())
            throw NotInvertibleAtPrecision("leading digit indistinguishable from 0");
        long long v = digits.begin()->first;
        long long target = prec - 2 * v;
        FieldElem z = zero_at(model, target);
        FieldElem r = one(model);
        r.prec = target + v;
        int p = model.p;
        int lead = digits.begin()->second;
        int lead_inv = mod_inverse(lead, p);
        while (!r.digits.empty() && r.digits.begin()->first < target + v) {
            long long re = r.digits.begin()->first;
            int rd = r.digits.begin()->second;
            int qd = (int)((long long)rd * lead_inv % p);
            FieldElem q = monomial(model, re - v, qd);
            q.prec = target;
            z = z + q;
            r = r - q * *this;
        }
        z.prec = target;
        return z;
    }

    /// Exact p-th root (CharP only; Frobenius is bijective).
    FieldElem root_p() const {
        if (model.kind != FieldKind::CharP)
            throw NotSharpLiftable("p-th roots only exact in the CharP model");
        FieldElem out(model);
        // digits of the root below prec/p are determined by digits below prec
        out.prec = (prec + model.p - 1) / model.p;
        for (auto& [e, d] : digits) {
            if (e % model.p != 0)
                throw DepthOverflow("p-th root leaves the depth-" + std::to_string(model.k) +
                                    " exponent lattice");
            out.digits[e / model.p] = d;
        }
        return out;
    }

    std::string str() const {
        if (digits.empty()) return "0";
        std::string s;
        const char* sym = model.kind == FieldKind::CharP ? "t" : "p";
        for (auto& [e, d] : digits) {
            if (!s.empty()) s += " + ";
            PAdicExp ex = PAdicExp::from_scaled(e, model.k, model.p);
            if (ex.is_zero()) s += std::to_string(d);
            else s += std::to_string(d) + "*" + sym + "^" + ex.str();
        }
        return s;
    }

    static int mod_inverse(int a, int p) {
        a %= p; if (a < 0) a += p;
        int r = 1;
        for (int e = p - 2; e > 0; e >>= 1) {  // Fermat
            if (e & 1) r = (int)((long long)r * a % p);
            a = (int)((long long)a * a % p);
        }
        return r;
    }

private:
    void require_same_model(const FieldElem& o) const {
        if (model != o.model) throw ShapeMismatch("field elements from different models");
    }
};

inline FieldElem f_mul(const FieldElem& a, const FieldElem& b) { return a * b; }
inline std::optional<PAdicExp> f_val(const FieldElem& a) { return a.val(); }
inline FieldElem f_inv(const FieldElem& a) { return a.inv(); }

/// A compatible p-power-root sequence (x_0, ..., x_{N-1}) with
/// x_{i+1}^p = x_i at the recorded precisions.
struct TiltElem {
    std::vector<FieldElem> comp;

    int length() const { return (int)comp.size(); }

    bool compatible() const {
        for (size_t i = 0; i + 1 < comp.size(); ++i)
            if (!comp[i + 1].pow(comp[i].model.p).eq_at_common_prec(comp[i])) return false;
        return true;
    }

    TiltElem operator*(const TiltElem& o) const {
        if (comp.size() != o.comp.size()) throw ShapeMismatch("tilt lengths differ");
        TiltElem out;
        for (size_t i = 0; i < comp.size(); ++i) out.comp.push_back(comp[i] * o.comp[i]);
        return out;
    }
};

/// Component i is digit_c * pi^{e/p^i} (Teichmuller digit in MixedChar).
inline TiltElem tilt_monomial(const PAdicExp& e, const FieldModel& mo, int N, int digit_c = 1) {
    TiltElem out;
    PAdicExp cur = e;
    for (int i = 0; i < N; ++i) {
        if (cur.depth > mo.k)
            throw DepthOverflow("exponent " + e.str() + "/p^" + std::to_string(i) +
                                " needs depth " + std::to_string(cur.depth));
        FieldElem c = FieldElem::teichmuller(mo, digit_c).shifted(cur.scaled(mo.k));
        if (mo.kind == FieldKind::MixedChar)
            c = c.truncated(mo.prec_scaled() / ipow(mo.p, i));
        out.comp.push_back(c);
        cur = cur.div_p();
    }
    return out;
}

inline FieldElem sharp(const TiltElem& x) {
    if (x.comp.empty()) throw ShapeMismatch("empty tilt sequence");
    return x.comp[0];
}

} // namespace perfproj
