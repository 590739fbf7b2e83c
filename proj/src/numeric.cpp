// SPDX-License-Identifier: Apache-2.0
#include "etaq/numeric.hpp"

#include <utility>

namespace etaq {

EgcdResult egcd(const Integer& a, const Integer& b) {
    EgcdResult r;
    mpz_gcdext(r.g.get_mpz_t(), r.x.get_mpz_t(), r.y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Integer mod_inverse(const Integer& a, const Integer& m) {
    if (m < 1) throw std::domain_error("mod_inverse: modulus must be positive");
    if (m == 1) return 0;
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw NotInvertible("mod_inverse: gcd(a, m) != 1");
    return r;
}

std::optional<Congruence> crt(const std::vector<Congruence>& residues) {
    Integer r = 0, L = 1;
    for (const auto& c : residues) {
        if (c.m < 1) throw std::domain_error("crt: modulus must be positive");
        Integer g = gcd(L, c.m);
        Integer diff = c.r - r;
        if (diff % g != 0) return std::nullopt;
        Integer m2 = c.m / g;
        Integer t = diff / g;
        t %= m2;
        if (t < 0) t += m2;
        t = t * mod_inverse(Integer(L / g), m2) % m2;
        r += L * t;
        L *= m2;
        r %= L;
        if (r < 0) r += L;
    }
    return Congruence{r, L};
}

int kronecker(const Integer& a, const Integer& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

int valuation(const Integer& n, const Integer& p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    if (p < 2) throw std::domain_error("valuation: p must be prime");
    Integer rest;
    return static_cast<int>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

namespace {

// Square root of a unit a modulo an odd prime p, by Tonelli-Shanks.
std::optional<Integer> tonelli_shanks(const Integer& a, const Integer& p) {
    Integer x = a % p;
    if (x < 0) x += p;
    if (x == 1 || p == 2) return x;
    if (mpz_legendre(x.get_mpz_t(), p.get_mpz_t()) != 1) return std::nullopt;
    Integer q = p - 1;
    unsigned long s = mpz_scan1(q.get_mpz_t(), 0);
    q >>= s;
    Integer z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1) ++z;
    Integer c, t, r, e;
    mpz_powm(c.get_mpz_t(), z.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    mpz_powm(t.get_mpz_t(), x.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    e = (q + 1) / 2;
    mpz_powm(r.get_mpz_t(), x.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    unsigned long m = s;
    while (t != 1) {
        unsigned long i = 0;
        Integer tt = t;
        while (tt != 1) {
            tt = tt * tt % p;
            ++i;
        }
        Integer b = c;
        for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % p;
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    return r;
}

}  // namespace

std::optional<Integer> sqrt_mod_prime_power(const Integer& a, const Integer& p, int alpha) {
    if (alpha < 1) throw std::domain_error("sqrt_mod_prime_power: alpha must be >= 1");
    if (a % p == 0) throw std::domain_error("sqrt_mod_prime_power: a must be a unit");
    Integer q;
    mpz_pow_ui(q.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(alpha));
    Integer x = a % q;
    if (x < 0) x += q;
    if (p == 2) {
        if (alpha == 1) return Integer(1);
        if (alpha == 2) return x % 4 == 1 ? std::optional<Integer>(1) : std::nullopt;
        if (x % 8 != 1) return std::nullopt;
        Integer c = 1;
        for (int j = 3; j < alpha; ++j) {
            Integer mod_next = Integer(1) << (j + 1);
            if ((c * c - x) % mod_next != 0) c += Integer(1) << (j - 1);
        }
        return c % q;
    }
    auto root = tonelli_shanks(x, p);
    if (!root) return std::nullopt;
    Integer c = *root;
    Integer pj = p;
    for (int j = 1; j < alpha; ++j) {
        pj *= p;
        // Newton step c <- c - (c^2 - x) / (2c) modulo p^(j+1).
        Integer inv = mod_inverse(Integer(2 * c), pj);
        c = (c - (c * c - x) % pj * inv) % pj;
        if (c < 0) c += pj;
    }
    return c;
}

Rational dedekind_sum(const Integer& h, const Integer& k) {
    if (k < 1) throw std::domain_error("dedekind_sum: k must be positive");
    Integer hh = h % k;
    if (hh < 0) hh += k;
    Integer kk = k;
    Integer g = gcd(hh, kk);
    if (g > 1) {
        hh /= g;
        kk /= g;
    }
    // s(h,k) + s(k,h) = (h^2 + k^2 + 1) / (12hk) - 1/4 with s(0,1) = 0.
    Rational acc = 0;
    int sign = 1;
    while (hh != 0) {
        Rational term(hh * hh + kk * kk + 1, 12 * hh * kk);
        term.canonicalize();
        term -= Rational(1, 4);
        if (sign > 0)
            acc += term;
        else
            acc -= term;
        Integer next = kk % hh;
        kk = hh;
        hh = next;
        sign = -sign;
    }
    return acc;
}

Rational dedekind_sum_naive(const Integer& h, const Integer& k) {
    if (k < 1) throw std::domain_error("dedekind_sum_naive: k must be positive");
    Integer hh = h % k;
    if (hh < 0) hh += k;
    Integer num = 0;
    for (Integer r = 1; r < k; ++r) {
        Integer hr = hh * r % k;
        if (hr == 0) continue;
        num += (2 * r - k) * (2 * hr - k);
    }
    Rational out(num, 4 * k * k);
    out.canonicalize();
    return out;
}

i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 gcd(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 lcm(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd(a, b) * b;
}

i64 mul_mod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<__int128>(mod(a, m)) * mod(b, m) % m);
}

i64 mod_inverse(i64 a, i64 m) {
    if (m < 1) throw std::domain_error("mod_inverse: modulus must be positive");
    if (m == 1) return 0;
    i64 old_r = mod(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        i64 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw NotInvertible("mod_inverse: gcd(a, m) != 1");
    return mod(old_s, m);
}

i64 pow_mod(i64 a, i64 e, i64 m) {
    i64 r = 1 % m;
    a = mod(a, m);
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

i64 ipow(i64 b, int e) {
    i64 r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int r = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) r = -r;
    }
    int v = __builtin_ctzll(static_cast<unsigned long long>(n));
    if (v > 0) {
        if ((a & 1) == 0) return 0;
        i64 a8 = mod(a, 8);
        if ((v & 1) && (a8 == 3 || a8 == 5)) r = -r;
        n >>= v;
    }
    a = mod(a, n);
    while (a != 0) {
        int t = __builtin_ctzll(static_cast<unsigned long long>(a));
        a >>= t;
        i64 n8 = n & 7;
        if ((t & 1) && (n8 == 3 || n8 == 5)) r = -r;
        if ((a & 3) == 3 && (n & 3) == 3) r = -r;
        std::swap(a, n);
        a %= n;
    }
    return n == 1 ? r : 0;
}

int valuation(i64 n, i64 p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

std::optional<i64> sqrt_mod_prime_power(i64 a, i64 p, int alpha) {
    auto r = sqrt_mod_prime_power(Integer(static_cast<long>(a)), Integer(static_cast<long>(p)), alpha);
    if (!r) return std::nullopt;
    return static_cast<i64>(r->get_si());
}

std::optional<Congruence> crt_small(const std::vector<std::pair<i64, i64>>& residues) {
    std::vector<Congruence> big;
    big.reserve(residues.size());
    for (const auto& [r, m] : residues)
        big.push_back({Integer(static_cast<long>(r)), Integer(static_cast<long>(m))});
    return crt(big);
}

std::vector<PrimePower> factorize(i64 n) {
    if (n < 1) throw std::domain_error("factorize: n must be positive");
    std::vector<PrimePower> out;
    for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p != 0) continue;
        PrimePower pp{p, 0, 1};
        while (n % p == 0) {
            n /= p;
            ++pp.alpha;
            pp.q *= p;
        }
        out.push_back(pp);
    }
    if (n > 1) out.push_back({n, 1, n});
    return out;
}

i64 euler_phi(i64 n) {
    i64 r = n;
    for (const auto& pp : factorize(n)) r = r / pp.p * (pp.p - 1);
    return r;
}

}  // namespace etaq
