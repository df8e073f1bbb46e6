#pragma once

#include <cstdint>
#include <string>
#include <tuple>

#include "perfproj/errors.hpp"

namespace perfproj {

inline long long ipow(long long base, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

/// An element a / p^k of Z[1/p], kept normalized: k == 0 or p does not
/// divide a.  The ambient prime travels with the value.
struct PAdicExp {
    long long num = 0;
    int depth = 0;
    int p = 2;

    PAdicExp() = default;
    PAdicExp(long long n, int d, int prime) : num(n), depth(d), p(prime) { normalize(); }

    static PAdicExp integer(long long n, int prime) { return PAdicExp(n, 0, prime); }

    void normalize() {
        if (num == 0) { depth = 0; return; }
        while (depth > 0 && num % p == 0) { num /= p; --depth; }
    }

    bool is_zero() const { return num == 0; }

    /// Value as num' / p^k for the common depth k = max(depth, other.depth).
    long long scaled(int k) const {
        if (depth > k) throw DepthOverflow("exponent depth " + std::to_string(depth) +
                                           " exceeds " + std::to_string(k));
        return num * ipow(p, k - depth);
    }

    static PAdicExp from_scaled(long long s, int k, int prime) { return PAdicExp(s, k, prime); }

    PAdicExp operator+(const PAdicExp& o) const {
        check_prime(o);
        int k = std::max(depth, o.depth);
        return PAdicExp(scaled(k) + o.scaled(k), k, p);
    }
    PAdicExp operator-(const PAdicExp& o) const {
        check_prime(o);
        int k = std::max(depth, o.depth);
        return PAdicExp(scaled(k) - o.scaled(k), k, p);
    }
    PAdicExp operator-() const { return PAdicExp(-num, depth, p); }

    PAdicExp times(long long c) const { return PAdicExp(num * c, depth, p); }

    /// Exact division by p (depth grows unless the numerator absorbs it).
    PAdicExp div_p() const {
        if (num == 0) return *this;
        if (num % p == 0) return PAdicExp(num / p, depth, p);
        return PAdicExp(num, depth + 1, p);
    }

    int cmp(const PAdicExp& o) const {
        check_prime(o);
        int k = std::max(depth, o.depth);
        long long a = scaled(k), b = o.scaled(k);
        return a < b ? -1 : (a > b ? 1 : 0);
    }
    bool operator==(const PAdicExp& o) const { return cmp(o) == 0; }
    bool operator!=(const PAdicExp& o) const { return cmp(o) != 0; }
    bool operator<(const PAdicExp& o) const { return cmp(o) < 0; }
    bool operator<=(const PAdicExp& o) const { return cmp(o) <= 0; }
    bool operator>(const PAdicExp& o) const { return cmp(o) > 0; }
    bool operator>=(const PAdicExp& o) const { return cmp(o) >= 0; }

    std::string str() const {
        if (depth == 0) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(ipow(p, depth));
    }

    /// Parses "a" or "a/b" where b must be a power of p.
    static PAdicExp parse(const std::string& s, int prime) {
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos)
                return PAdicExp::integer(std::stoll(s), prime);
            long long a = std::stoll(s.substr(0, slash));
            long long b = std::stoll(s.substr(slash + 1));
            int d = 0;
            if (b <= 0) throw ParseError("denominator must be positive: " + s);
            while (b > 1) {
                if (b % prime != 0) throw ParseError("denominator not a power of p: " + s);
                b /= prime;
                ++d;
            }
            return PAdicExp(a, d, prime);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad exponent: " + s);
        } catch (const std::out_of_range&) {
            throw ParseError("exponent out of range: " + s);
        }
    }

private:
    void check_prime(const PAdicExp& o) const {
        if (p != o.p) throw ShapeMismatch("mixed primes in exponent arithmetic");
    }
};

inline PAdicExp exp_add(const PAdicExp& a, const PAdicExp& b) { return a + b; }

} // namespace perfproj
