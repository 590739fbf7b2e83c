// SPDX-License-Identifier: Apache-2.0
#include "etaq/kloosterman.hpp"

#include <algorithm>
#include <array>

namespace etaq {

namespace {

int bit_length(i64 x) {
    int n = 0;
    while (x > 0) {
        x >>= 1;
        ++n;
    }
    return n;
}

// Integer combination of eighth roots of unity: sum c[j] e(j/8).
struct Octic {
    std::array<long, 8> c{};

    void add(long j, long coef) { c[static_cast<std::size_t>(mod(j, 8))] += coef; }

    Complex value(Precision prec) const {
        Real h = sqrt(Real(2L, prec)) / 2L;
        Real re(c[0] - c[4], prec), im(c[2] - c[6], prec);
        re += h * (c[1] - c[3] - c[5] + c[7]);
        im += h * (c[1] + c[3] - c[5] - c[7]);
        return Complex(std::move(re), std::move(im));
    }
};

Complex zero(Precision prec) { return Complex(0L, prec); }

bool exact_zero(const Complex& z) { return z.re.is_zero() && z.im.is_zero(); }

// Weights w[j] = sum of chi(h) over units h with a h + b h^-1 = j (mod q).
std::vector<i64> residue_weights(i64 a, i64 b, i64 q, const QuadCharacter& chi) {
    std::vector<i64> w(static_cast<std::size_t>(q), 0);
    if (q == 1) {
        w[0] = 1;
        return w;
    }
    for (i64 h = 1; h < q; ++h) {
        if (gcd(h, q) != 1) continue;
        int c = char_eval(chi, h);
        if (c == 0) continue;
        i64 j = mod(mul_mod(a, h, q) + mul_mod(b, mod_inverse(h, q), q), q);
        w[static_cast<std::size_t>(j)] += c;
    }
    return w;
}

Complex definition_by_recurrence(i64 a, i64 b, i64 q, const QuadCharacter& chi, Precision prec,
                                 KloostermanStats* stats) {
    if (stats) ++stats->definition_fallbacks;
    return weighted_root_sum(residue_weights(a, b, q, chi), prec);
}

// 2 sqrt(q) Re(e^{i pi r / 2} e(2u/q)) for r in {0, 1}.
Real twice_sqrt_re(i64 u, i64 q, int r, Precision prec) {
    Complex z = root_of_unity(2 * u, q, prec);
    Real out = r == 0 ? z.re : -z.im;
    out *= sqrt(Real(static_cast<long>(q), prec));
    out *= 2L;
    return out;
}

// S_1(u, u; p^alpha), odd p, alpha >= 2.
Complex salie_trivial(i64 u, i64 q, Precision prec) {
    int eq = (q % 4 == 1) ? 0 : 1;
    Real v = twice_sqrt_re(u, q, eq, prec);
    v *= static_cast<long>(kronecker(u, q));
    return Complex(std::move(v), Real(0L, prec));
}

// S_{(./p)}(u, u; p^alpha), odd p.
Complex salie_legendre(i64 u, i64 p, i64 q, Precision prec) {
    int eq = (q % 4 == 1) ? 0 : 1;
    int dq = (mul_mod(p, q, 4) == 1) ? 0 : 1;
    Real v = twice_sqrt_re(u, q, dq, prec);
    v *= static_cast<long>(kronecker(u, q));
    Complex out(std::move(v), Real(0L, prec));
    out.mul_i_pow(eq - dq);
    return out;
}

Complex two_power_small(i64 a, int alpha, const QuadCharacter& chi, Precision prec) {
    i64 q = ipow(2, alpha);
    a = mod(a, q);
    auto x = [&](i64 h) { return static_cast<long>(char_eval(chi, h)); };
    Octic o;
    long scale = 1;
    switch (alpha) {
        case 1:
            o.add(0, 1);
            break;
        case 2:
            o.add(0, 1);
            o.add(4 * (a + 1), x(3));
            break;
        case 3:
            o.add(0, 1);
            o.add(2 * (a + 1), x(3));
            o.add(4 * (a + 1), x(5));
            o.add(6 * (a + 1), x(7));
            break;
        case 4:
            if (a % 2 == 0) return zero(prec);
            scale = 2;
            o.add(0, 1);
            if (a % 4 == 3) {
                i64 m = (a + 1) / 4;
                o.add(4 * m + 4, x(3));
                o.add(4, x(5));
                o.add(4 * m, x(7));
            } else {
                i64 m = (a - 1) / 4;
                o.add(6 + 4 * m, x(3));
                o.add(0, x(5));
                o.add(6 + 4 * m, x(7));
            }
            break;
        case 5:
            if (a % 4 != 1) return zero(prec);
            scale = 4;
            o.add(0, 1);
            if (a % 8 == 5) {
                i64 m = (a + 3) / 8;
                o.add(1 + 4 * m, x(3));
                o.add(0, x(5));
                o.add(1 + 4 * m, x(7));
            } else {
                i64 m = (a - 1) / 8;
                o.add(3 + 4 * m, x(3));
                o.add(4, x(5));
                o.add(7 + 4 * m, x(7));
            }
            break;
        default:
            throw std::logic_error("two_power_small: alpha out of range");
    }
    Complex out = o.value(prec) * root_of_unity(a + 1, q, prec);
    out *= scale;
    return out;
}

// S_chi(u, u; 2^alpha) for odd u and alpha >= 6.
Complex two_power_salie(i64 u, int alpha, const QuadCharacter& chi, Precision prec) {
    i64 q = ipow(2, alpha);
    int beta = alpha / 2;
    i64 half = ipow(2, beta - 1);
    auto x = [&](i64 h) { return static_cast<long>(char_eval(chi, mod(h, q))); };
    Complex z = root_of_unity(2 * u, q, prec);
    Complex zb = z.conj();
    Complex out(prec);
    if (alpha == 2 * beta) {
        // z (x(1) + i^u x(1 + 2^(b-1))) + zbar (x(-1) - i^u x(-1 + 2^(b-1)))
        Octic o1, o2;
        o1.add(0, x(1));
        o1.add(2 * u, x(1 + half));
        o2.add(0, x(-1));
        o2.add(2 * u + 4, x(-1 + half));
        out = z * o1.value(prec) + zb * o2.value(prec);
    } else {
        long s = beta == 3 ? 5 : 1;
        long t = beta == 3 ? 3 : -1;
        Octic o1, o2;
        o1.add(2 * u + u * t, 2 * x(1 + half));
        o2.add(u * t, x(-1 + half));
        o2.add(-2 * u + u * s, x(-1 + half));
        out = z * o1.value(prec) + zb * o2.value(prec);
    }
    out *= ipow(2, beta);
    return out;
}

std::optional<SelbergResult> try_selberg(i64 a, i64 b, i64 p, int alpha, const QuadCharacter& chi_in) {
    i64 q = ipow(p, alpha);
    a = mod(a, q);
    b = mod(b, q);
    QuadCharacter chi = chi_in.local(p, alpha);
    int va = a == 0 ? alpha : std::min(valuation(a, p), alpha);
    int vb = b == 0 ? alpha : std::min(valuation(b, p), alpha);
    int gamma = std::min(va, vb);
    if (vb > gamma) std::swap(a, b);
    if (gamma == alpha) {
        Integer s = chi.trivial() ? Integer(static_cast<long>(q - q / p)) : Integer(0);
        return SelbergResult{s, std::nullopt};
    }
    int v2 = p == 2 ? 1 : 0;
    if (gamma < alpha - v2) {
        if (chi.conductor_exponent(p) > alpha - gamma) return std::nullopt;
        i64 pg = ipow(p, gamma);
        i64 qr = q / pg;
        Integer s = Integer(static_cast<long>(pg)) * char_eval(chi, b / pg);
        KloostermanQuery red{mul_mod(a / pg, b / pg, qr), 1, qr, chi.local(p, alpha - gamma)};
        return SelbergResult{s, red};
    }
    // p = 2, gamma = alpha - 1.
    Integer s = 0;
    if (chi.trivial()) {
        i64 e = (a + b) >> gamma;
        s = Integer(static_cast<long>(q / 2)) * ((e & 1) ? -1 : 1);
    }
    return SelbergResult{s, std::nullopt};
}

Complex prime_power_factor(i64 a, i64 b, const PrimePower& pp, const QuadCharacter& chi, Precision prec,
                           KloostermanStats* stats) {
    auto sel = try_selberg(a, b, pp.p, pp.alpha, chi);
    if (!sel) {
        if (stats) ++stats->prime_powers;
        return definition_by_recurrence(mod(a, pp.q), mod(b, pp.q), pp.q, chi.local(pp.p, pp.alpha), prec,
                                        stats);
    }
    if (sel->scalar == 0) return zero(prec);
    Real scalar(sel->scalar, prec);
    if (!sel->reduced) return Complex(std::move(scalar), Real(0L, prec));
    const KloostermanQuery& r = *sel->reduced;
    int alpha_r = valuation(r.k, pp.p);
    Complex v = prime_power_eval(r.a, pp.p, alpha_r, r.chi, prec, stats);
    if (exact_zero(v)) return v;
    v *= scalar;
    return v;
}

}  // namespace

QuadCharacter QuadCharacter::local(i64 p, int alpha) const {
    QuadCharacter out;
    out.modulus = ipow(p, alpha);
    if (p == 2) {
        out.d2 = d2;
    } else if (std::binary_search(odd_primes.begin(), odd_primes.end(), p)) {
        out.odd_primes.push_back(p);
    }
    return out;
}

int QuadCharacter::conductor_exponent(i64 p) const {
    if (p == 2) return d2 == 1 ? 0 : (d2 == -1 ? 2 : 3);
    return std::binary_search(odd_primes.begin(), odd_primes.end(), p) ? 1 : 0;
}

i64 QuadCharacter::discriminant() const {
    i64 d = d2;
    for (i64 p : odd_primes) d *= (p % 4 == 1) ? p : -p;
    return d;
}

std::string QuadCharacter::to_string() const {
    if (trivial()) return "1";
    return "(" + std::to_string(discriminant()) + "/.)";
}

QuadCharacter make_character(std::vector<i64> odd_primes, int d2, i64 modulus) {
    if (d2 != 1 && d2 != -1 && d2 != 2 && d2 != -2) throw std::invalid_argument("make_character: bad d2");
    std::sort(odd_primes.begin(), odd_primes.end());
    odd_primes.erase(std::unique(odd_primes.begin(), odd_primes.end()), odd_primes.end());
    for (i64 p : odd_primes)
        if (p < 3 || p % 2 == 0 || modulus % p != 0)
            throw std::invalid_argument("make_character: odd component does not divide modulus");
    if (d2 == -1 && modulus % 4 != 0) throw std::invalid_argument("make_character: (-1/.) needs 4 | modulus");
    if ((d2 == 2 || d2 == -2) && modulus % 8 != 0)
        throw std::invalid_argument("make_character: (+-2/.) needs 8 | modulus");
    QuadCharacter c;
    c.odd_primes = std::move(odd_primes);
    c.d2 = d2;
    c.modulus = modulus;
    return c;
}

int char_eval(const QuadCharacter& chi, i64 h) {
    int r = chi.d2 == 1 ? 1 : kronecker(static_cast<i64>(chi.d2), h);
    for (i64 p : chi.odd_primes) {
        if (r == 0) break;
        r *= kronecker(h, p);
    }
    return r;
}

Complex kloosterman_definition(const KloostermanQuery& q, Precision prec) {
    if (q.k < 1) throw std::invalid_argument("kloosterman_definition: k must be positive");
    if (q.k == 1) return Complex(1L, prec);
    std::vector<i64> w = residue_weights(mod(q.a, q.k), mod(q.b, q.k), q.k, q.chi);
    Precision wp = prec + 2 * bit_length(q.k) + 8;
    Complex acc(wp);
    for (i64 j = 0; j < q.k; ++j) {
        i64 c = w[static_cast<std::size_t>(j)];
        if (c == 0) continue;
        acc += root_of_unity(j, q.k, wp) * static_cast<long>(c);
    }
    return Complex(Real(acc.re, prec), Real(acc.im, prec));
}

SelbergResult selberg_reduce(i64 a, i64 b, i64 p, int alpha, const QuadCharacter& chi) {
    auto r = try_selberg(a, b, p, alpha, chi);
    if (!r) throw HypothesisViolated("selberg_reduce: conductor exceeds reduced modulus");
    return *r;
}

Complex prime_power_eval(i64 a, i64 p, int alpha, const QuadCharacter& chi_in, Precision prec,
                         KloostermanStats* stats) {
    if (alpha < 1) throw std::invalid_argument("prime_power_eval: alpha must be >= 1");
    i64 q = ipow(p, alpha);
    a = mod(a, q);
    QuadCharacter chi = chi_in.local(p, alpha);
    if (chi.conductor_exponent(p) > alpha)
        throw std::invalid_argument("prime_power_eval: character is not defined modulo p^alpha");
    if (stats) ++stats->prime_powers;
    Precision wp = prec + 16;
    auto closed = [&](Complex v) {
        if (stats) ++stats->closed_forms;
        return Complex(Real(v.re, prec), Real(v.im, prec));
    };
    if (p != 2) {
        bool legendre = !chi.trivial();
        if (alpha == 1) {
            if (!legendre) {
                if (a == 0) return closed(Complex(-1L, wp));
                return definition_by_recurrence(a, 1, q, chi, prec, stats);
            }
            if (a == 0) {
                Complex v(sqrt(Real(static_cast<long>(p), wp)), Real(0L, wp));
                if (p % 4 == 3) v.mul_i_pow(1);
                return closed(std::move(v));
            }
        } else if (a % p == 0) {
            return closed(zero(wp));
        }
        auto u = sqrt_mod_prime_power(a, p, alpha);
        if (!u) return closed(zero(wp));
        Complex v = legendre ? salie_legendre(*u, p, q, wp) : salie_trivial(*u, q, wp);
        v *= static_cast<long>(char_eval(chi, *u));
        return closed(std::move(v));
    }
    if (alpha <= 5) return closed(two_power_small(a, alpha, chi, wp));
    if (a % 8 != 1) return closed(zero(wp));
    auto u = sqrt_mod_prime_power(a, 2, alpha);
    Complex v = two_power_salie(*u, alpha, chi, wp);
    v *= static_cast<long>(char_eval(chi, *u));
    return closed(std::move(v));
}

Complex kloosterman_fast(const KloostermanQuery& q, Precision prec, KloostermanStats* stats) {
    if (q.k < 1) throw std::invalid_argument("kloosterman_fast: k must be positive");
    if (q.k == 1) return Complex(1L, prec);
    Precision wp = prec + 16;
    Complex acc(1L, wp);
    for (const PrimePower& pp : factorize(q.k)) {
        i64 other = q.k / pp.q;
        i64 inv = mod_inverse(mod(other, pp.q), pp.q);
        i64 ai = mul_mod(q.a, inv, pp.q);
        i64 bi = mul_mod(q.b, inv, pp.q);
        Complex f = prime_power_factor(ai, bi, pp, q.chi, wp, stats);
        if (exact_zero(f)) return zero(prec);
        acc *= f;
    }
    return Complex(Real(acc.re, prec), Real(acc.im, prec));
}

Complex weighted_root_sum(const std::vector<i64>& w, Precision prec) {
    const i64 q = static_cast<i64>(w.size());
    if (q == 0) throw std::invalid_argument("weighted_root_sum: empty weights");
    if (q == 1) return Complex(static_cast<long>(w[0]), prec);
    // Clenshaw: b_j = w_j + 2 cos(t) b_{j+1} - b_{j+2}.
    Precision wp = prec + 2 * bit_length(q) + 20;
    Complex z = root_of_unity(1, q, wp);
    Real two_c = z.re * 2L;
    Real b1(0L, wp), b2(0L, wp), t(wp);
    for (i64 j = q - 1; j >= 1; --j) {
        mpfr_mul(t.get(), two_c.get(), b1.get(), MPFR_RNDN);
        mpfr_sub(t.get(), t.get(), b2.get(), MPFR_RNDN);
        mpfr_add_si(t.get(), t.get(), static_cast<long>(w[static_cast<std::size_t>(j)]), MPFR_RNDN);
        mpfr_swap(b2.get(), b1.get());
        mpfr_swap(b1.get(), t.get());
    }
    Real re = b1 * z.re - b2;
    re += Real(static_cast<long>(w[0]), wp);
    Real im = b1 * z.im;
    return Complex(Real(re, prec), Real(im, prec));
}

}  // namespace etaq
