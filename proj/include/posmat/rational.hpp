#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "posmat/errors.hpp"

namespace posmat {

using Rat = mpq_class;
using Int = mpz_class;

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

inline Rat parse_rat(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0) throw ParseError("bad rational: '" + s + "'");
    r.canonicalize();
    return r;
}

inline int sign(const Rat& r) { return sgn(r); }

/// Nearest rational to x with denominator <= max_den, by continued fractions.
inline Rat rationalize(double x, unsigned long max_den) {
    if (!std::isfinite(x)) throw Error("rationalize: non-finite input");
    bool neg = x < 0;
    double v = neg ? -x : x;
    // convergents p/q of the continued fraction of v
    unsigned long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int it = 0; it < 64; ++it) {
        double a_f = std::floor(frac);
        if (a_f > 1e18) break;
        unsigned long a = static_cast<unsigned long>(a_f);
        if (q1 != 0 && a > (max_den - q0) / q1) {
            // best semiconvergent that still fits
            unsigned long a_cap = (max_den - q0) / q1;
            if (2 * a_cap >= a && a_cap > 0) {
                p0 = a_cap * p1 + p0;
                q0 = a_cap * q1 + q0;
            }
            break;
        }
        unsigned long p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        double rem = frac - a_f;
        if (rem < 1e-18) { p0 = p1; q0 = q1; break; }
        frac = 1.0 / rem;
        if (!std::isfinite(frac)) { p0 = p1; q0 = q1; break; }
    }
    if (q1 != 0 && q1 <= max_den) { p0 = p1; q0 = q1; }
    if (q0 == 0) { p0 = p1 != 0 ? p1 : 0; q0 = 1; }
    Rat r(Int(p0), Int(q0));
    r.canonicalize();
    return neg ? Rat(-r) : r;
}

inline double to_double(const Rat& r) { return r.get_d(); }

namespace detail {

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square(const Int& n, Int* root = nullptr) {
    if (sgn(n) < 0) return false;
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        if (root) *root = isqrt(n);
        return true;
    }
    return false;
}

inline bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 25) != 0;
}

// x with x^2 = -1 (mod p), p prime, p = 1 (mod 4). Deterministic scan for a
// quadratic non-residue; tiny in practice.
inline Int sqrt_minus_one_mod(const Int& p) {
    Int e = (p - 1) / 4;
    for (Int a = 2; ; ++a) {
        Int ls;
        mpz_powm(ls.get_mpz_t(), a.get_mpz_t(), mpz_class((p - 1) / 2).get_mpz_t(), p.get_mpz_t());
        if (ls == p - 1) {
            Int x;
            mpz_powm(x.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
            return x;
        }
    }
}

// p = x^2 + y^2 for prime p = 1 (mod 4) (Hermite-Serret descent).
inline void two_squares_prime(const Int& p, Int& x, Int& y) {
    Int a = p, b = sqrt_minus_one_mod(p);
    Int bound = isqrt(p);
    while (b > bound) {
        Int t = a % b;
        a = b;
        b = t;
    }
    x = b;
    Int rem = p - b * b;
    Int r;
    if (!is_square(rem, &r)) throw InternalError("two_squares_prime: descent failed");
    y = r;
}

// n = x^2 + y^2 when recognisable without factoring: 0, squares, 2*square,
// primes = 1 (mod 4) and products of the above; returns false otherwise.
inline bool try_two_squares(const Int& n, Int& x, Int& y) {
    if (n == 0) { x = 0; y = 0; return true; }
    Int r;
    if (is_square(n, &r)) { x = r; y = 0; return true; }
    Int m = n;
    Int scale = 1;
    while (m % 4 == 0) { m /= 4; scale *= 2; }
    if (m % 2 == 0) {
        Int h = m / 2;
        if (is_probable_prime(h) && (h % 4 == 1 || h == 2)) {
            Int a, b;
            if (h == 2) { a = 1; b = 1; }
            else two_squares_prime(h, a, b);
            // 2(a^2+b^2) = (a+b)^2 + (a-b)^2
            x = scale * (a + b);
            y = scale * abs(Int(a - b));
            return true;
        }
        return false;
    }
    if (is_probable_prime(m) && m % 4 == 1) {
        Int a, b;
        two_squares_prime(m, a, b);
        x = scale * a;
        y = scale * b;
        return true;
    }
    if (m == 1) { x = scale; y = 0; return true; }
    return false;
}

// n = x^2 + y^2 + z^2 for n not of the form 4^a(8b+7).
inline void three_squares(const Int& n, Int& x, Int& y, Int& z) {
    if (n == 0) { x = y = z = 0; return; }
    Int m = n, scale = 1;
    while (m % 4 == 0) { m /= 4; scale *= 2; }
    if (m % 8 == 7) throw InternalError("three_squares: forbidden residue class");
    for (Int a = isqrt(m); a >= 0; --a) {
        Int rest = m - a * a;
        Int u, v;
        if (try_two_squares(rest, u, v)) {
            x = scale * a;
            y = scale * u;
            z = scale * v;
            return;
        }
    }
    throw InternalError("three_squares: exhausted");
}

// Lagrange: any n >= 0 as a sum of four integer squares.
inline std::vector<Int> four_squares(const Int& n) {
    if (n == 0) return {};
    Int m = n, scale = 1;
    while (m % 4 == 0) { m /= 4; scale *= 2; }
    Int a = 0, x, y, z;
    if (m % 8 == 7) {
        a = isqrt(m);
        while ((m - a * a) % 8 == 7 || a * a > m) --a;
        three_squares(m - a * a, x, y, z);
    } else {
        three_squares(m, x, y, z);
    }
    std::vector<Int> out;
    for (const Int& t : {a, x, y, z})
        if (t != 0) out.push_back(scale * t);
    return out;
}

}  // namespace detail

/// Writes c >= 0 as a sum of at most four rational squares.
inline std::vector<Rat> rational_square_sum(const Rat& c) {
    if (sgn(c) < 0) throw Error("rational_square_sum: negative input");
    if (sgn(c) == 0) return {};
    Int u = c.get_num(), v = c.get_den();
    // c = (u*v) / v^2; strip the square part of u*v first
    Int n = u * v, s = 1;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p * p)) {
            mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p * p);
            s *= p;
        }
    }
    Int r;
    if (detail::is_square(n, &r)) {
        n = 1;
        s *= r;
    }
    std::vector<Rat> out;
    for (const Int& a : detail::four_squares(n)) {
        Rat q(s * a, v);
        q.canonicalize();
        out.push_back(q);
    }
    return out;
}

}  // namespace posmat
