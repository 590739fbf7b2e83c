// SPDX-License-Identifier: Apache-2.0
#include "etaq/hrr.hpp"

#include <algorithm>
#include <map>

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

i64 to_i64(const Integer& x) { return static_cast<i64>(x.get_si()); }

i64 mod_integer(const Integer& n, i64 k) {
    Integer r = n % static_cast<long>(k);
    if (r < 0) r += static_cast<long>(k);
    return to_i64(r);
}

// 12k * sum_m delta_m s(m h / g, k / g) for each unit h (0 when not a unit).
std::vector<i64> dedekind_phases(const EtaQuotientSpec& spec, i64 k) {
    std::vector<i64> out(static_cast<std::size_t>(k), 0);
    for (i64 h = 0; h < k; ++h) {
        if (gcd(h, k) != 1) continue;
        Rational acc = 0;
        for (const auto& f : spec.pairs) {
            i64 g = gcd(f.m, k);
            acc += dedekind_sum(Integer(static_cast<long>(f.m / g * h)), Integer(static_cast<long>(k / g))) * f.delta;
        }
        acc *= 12 * k;
        if (acc.get_den() != 1) throw InternalInconsistency("Dedekind phase is not an integer");
        out[static_cast<std::size_t>(h)] = to_i64(acc.get_num());
    }
    return out;
}

Real real_part_checked(const Complex& z, Precision prec, const char* who) {
    if (!z.im.is_zero() && z.im.exponent() > -static_cast<long>(prec) / 2)
        throw InternalInconsistency(std::string(who) + ": imaginary part is not negligible");
    return Real(z.re, prec);
}

}  // namespace

Real akn_definition(const EtaQuotientSpec& spec, i64 k, const Integer& n, Precision prec) {
    if (k < 1) throw std::invalid_argument("akn_definition: k must be positive");
    const i64 K = 24 * k;
    std::vector<i64> d = dedekind_phases(spec, k);
    i64 nr = mod_integer(n, k);
    std::map<i64, long> w;
    for (i64 h = 0; h < k; ++h) {
        if (gcd(h, k) != 1) continue;
        i64 phase = mod(24 * mul_mod(h, nr, k) + d[static_cast<std::size_t>(h)], K);
        ++w[mod(-phase, K)];
    }
    Precision wp = prec + 2 * bit_length(K) + 8;
    Complex acc(wp);
    for (const auto& [j, c] : w) acc += root_of_unity(j, K, wp) * c;
    return real_part_checked(acc, prec, "akn_definition");
}

std::vector<Real> akn_definition_period(const EtaQuotientSpec& spec, i64 k, Precision prec) {
    if (k < 1) throw std::invalid_argument("akn_definition_period: k must be positive");
    const i64 K = 24 * k;
    std::vector<i64> d = dedekind_phases(spec, k);
    Precision wp = prec + 2 * bit_length(K) + 8;
    std::vector<Complex> table;
    table.reserve(static_cast<std::size_t>(K));
    for (i64 j = 0; j < K; ++j) table.push_back(root_of_unity(j, K, wp));
    std::vector<Real> out;
    out.reserve(static_cast<std::size_t>(k));
    for (i64 n = 0; n < k; ++n) {
        Complex acc(wp);
        for (i64 h = 0; h < k; ++h) {
            if (gcd(h, k) != 1) continue;
            i64 phase = mod(24 * mul_mod(h, n, k) + d[static_cast<std::size_t>(h)], K);
            acc += table[static_cast<std::size_t>(mod(-phase, K))];
        }
        out.push_back(real_part_checked(acc, prec, "akn_definition_period"));
    }
    return out;
}

HrrReduction hrr_reduce(const EtaQuotientSpec& base, i64 k) {
    if (k < 1) throw std::invalid_argument("hrr_reduce: k must be positive");
    for (const auto& f : base.pairs)
        if (f.m % 24 != 0) throw std::invalid_argument("hrr_reduce: quotient is not normalized (24 | m)");

    const int lambda = valuation(k, static_cast<i64>(2));
    const i64 two_mod = ipow(2, 3 + lambda);
    Integer a1 = 0, b1 = 0, a2 = 0, b2 = 0;
    i64 c = 0;
    std::vector<i64> odd_moduli;
    struct PsiTerm {
        int lambda_m;
        i64 k_odd;
        i64 m_k;
    };
    std::vector<PsiTerm> psi_terms;

    for (const auto& f : base.pairs) {
        const i64 m = f.m, d = f.delta;
        const i64 g = gcd(m, k);
        const i64 km = k / g;
        const i64 mk = m / g;
        i64 um = 1;
        if (km % 3 != 0) um = to_i64(crt_small({{1 % km, km}, {0, 3}})->r);
        const i64 mod3 = gcd(3, km) * km;
        const i64 vm = mod_inverse(mod(mk, mod3), mod3);
        a1 -= Integer(static_cast<long>(d)) * um * m;
        b1 -= Integer(static_cast<long>(d)) * um * vm * g;
        const int lm = valuation(km, static_cast<i64>(2));
        const i64 kp = km >> lm;
        if (km % 2 == 0) {
            const i64 wm = mod_inverse(mod(mk, two_mod), two_mod);
            a2 -= Integer(static_cast<long>(d)) * m;
            b2 -= Integer(static_cast<long>(d)) * wm * g * (Integer(static_cast<long>(km)) * km + 3 * km + 1);
            c += d * kronecker(mk, kp);
            if (d % 2 != 0) psi_terms.push_back({lm, kp, mk});
        } else {
            c += d * (km - 3) / 2 + d * kronecker(-mk, km);
        }
        if (d % 2 != 0) odd_moduli.push_back(kp);
    }

    const i64 odd3 = (3 * k) >> lambda;
    const Integer t1 = crt_small({{1 % odd3, odd3}, {0, two_mod}})->r;
    const Integer t2 = crt_small({{0, odd3}, {1, two_mod}})->r;
    Integer A = t1 * a1 + t2 * a2;
    Integer B = t1 * b1 + t2 * b2;
    if (A % 24 != 0 || B % 24 != 0) throw InternalInconsistency("hrr_reduce: a, b not divisible by 24");
    A /= 24;
    B /= 24;

    auto psi = [&](i64 h) {
        int s = 1;
        for (const auto& t : psi_terms) {
            i64 hm = h * t.m_k;
            i64 e = t.lambda_m * ((hm * hm - 1) / 8) + ((t.k_odd + 1) / 2) * ((hm - 1) / 2);
            if (e & 1) s = -s;
        }
        return s;
    };
    const int psi1 = psi(1);
    int d2 = 0;
    for (int cand : {1, -1, 2, -2}) {
        bool match = true;
        for (i64 h : {1, 3, 5, 7})
            if (kronecker(static_cast<i64>(cand), h) != psi1 * psi(h)) match = false;
        if (match) {
            d2 = cand;
            break;
        }
    }
    if (d2 == 0) throw InternalInconsistency("hrr_reduce: rho matches no Kronecker character mod 8");

    std::map<i64, int> exps;
    for (i64 kp : odd_moduli)
        for (const auto& pp : factorize(kp)) exps[pp.p] += pp.alpha;
    std::vector<i64> primes;
    for (const auto& [p, e] : exps)
        if (e % 2 != 0) primes.push_back(p);

    HrrReduction r;
    r.k = k;
    r.a = mod_integer(A, k);
    r.b = mod_integer(B, k);
    r.c_mod4 = static_cast<int>(mod(c, 4));
    r.psi1 = psi1;
    r.prefactor_exp = static_cast<int>(mod(c + (psi1 < 0 ? 2 : 0), 4));
    try {
        r.chi_rho = make_character(std::move(primes), d2, k);
    } catch (const std::invalid_argument& e) {
        throw InternalInconsistency(std::string("hrr_reduce: ") + e.what());
    }
    return r;
}

Real akn_from_reduction(const HrrReduction& red, const Integer& n, Precision prec, KloostermanStats* stats) {
    KloostermanQuery q{mod(red.a - mod_integer(n, red.k), red.k), red.b, red.k, red.chi_rho};
    Complex s = kloosterman_fast(q, prec + 8, stats);
    if (s.re.is_zero() && s.im.is_zero()) return Real(0L, prec);
    s.mul_i_pow(red.prefactor_exp);
    return real_part_checked(s, prec, "akn_kloosterman");
}

Real akn_kloosterman(const EtaQuotientSpec& base, i64 k, const Integer& n, Precision prec, KloostermanStats* stats) {
    return akn_from_reduction(hrr_reduce(base, k), n, prec, stats);
}

Integer u_bridge(const EtaQuotientSpec& base, i64 k1, i64 k2) {
    if (gcd(k1, k2) != 1) throw std::invalid_argument("u_bridge: k1 and k2 must be coprime");
    Integer u = 0;
    const Integer K1 = static_cast<long>(k1), K2 = static_cast<long>(k2);
    for (const auto& f : base.pairs) {
        const long g1 = static_cast<long>(gcd(f.m, k1));
        const long g2 = static_cast<long>(gcd(f.m, k2));
        const long g12 = static_cast<long>(gcd(f.m, k1 * k2));
        Integer s = K1 / g1, t = K2 / g2, st = K1 * K2 / g12;
        u += Integer(static_cast<long>(f.m)) * f.delta * (s * s + t * t - st * st - 1);
    }
    return u;
}

std::optional<MultSplit> mult_split(const EtaQuotientSpec& base, i64 k1, i64 k2, const Integer& n) {
    if (k1 < 2 || k2 < 2 || gcd(k1, k2) != 1)
        throw std::invalid_argument("mult_split: need coprime k1, k2 > 1");
    const i64 k = k1 * k2;
    std::vector<std::pair<i64, i64>> system;
    for (const auto& f : base.pairs) {
        i64 g1 = gcd(f.m, k1), g2 = gcd(f.m, k2);
        system.push_back({g1 * g1, k2 / g2});
        system.push_back({g2 * g2, k1 / g1});
    }
    auto sol = crt_small(system);
    if (!sol) return std::nullopt;
    // Fix the residue on the part of k that the system does not constrain.
    i64 L = to_i64(sol->m);
    i64 free_part = k;
    for (i64 g = gcd(free_part, L); g > 1; g = gcd(free_part, L)) free_part /= g;
    auto ell_sol = crt_small({{to_i64(sol->r), L}, {1 % free_part, free_part}});
    Integer ell = ell_sol->r;
    if (ell == 0) ell = ell_sol->m;
    if (gcd(ell, Integer(static_cast<long>(k))) != 1) return std::nullopt;

    i64 theta1 = 0;
    for (i64 t : {1, 2, 3, 4, 6, 8, 12, 24})
        if (gcd(t * k1, (24 / t) * k2) == 1) {
            theta1 = t;
            break;
        }
    if (theta1 == 0) throw InternalInconsistency("mult_split: no admissible theta1");
    const i64 theta2 = 24 / theta1;

    const Integer u = u_bridge(base, k1, k2);
    const Integer rhs = ell * (24 * n - u);
    auto solve = [&](i64 kk, i64 other, i64 theta) -> i64 {
        const i64 md = theta * kk;
        const Integer coef = Integer(24) * other * other;
        const Integer g = gcd(coef, Integer(static_cast<long>(md)));
        if (rhs % g != 0) throw InternalInconsistency("mult_split: n-system has no solution");
        const Integer mg = Integer(static_cast<long>(md)) / g;
        Integer x = (rhs / g) % mg;
        if (x < 0) x += mg;
        x = x * mod_inverse(Integer(coef / g), mg) % mg;
        if (x == 0) x = mg;
        return to_i64(x);
    };
    return MultSplit{ell, solve(k1, k2, theta1), solve(k2, k1, theta2)};
}

AkCache::AkCache(EtaQuotientSpec base) : base_(std::move(base)) {}

std::shared_ptr<const HrrReduction> AkCache::reduction(i64 k) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = reductions_.find(k);
        if (it != reductions_.end()) return it->second;
    }
    auto r = std::make_shared<const HrrReduction>(hrr_reduce(base_, k));
    std::lock_guard<std::mutex> lock(mu_);
    reductions_[k] = r;
    return r;
}

std::optional<Real> AkCache::lookup(i64 k, i64 r, Precision prec) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = values_.find({k, r});
    if (it == values_.end() || it->second.precision() < prec) return std::nullopt;
    return Real(it->second, prec);
}

void AkCache::store(i64 k, i64 r, const Real& value) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = values_.find({k, r});
    if (it == values_.end())
        values_.emplace(std::make_pair(k, r), value);
    else if (it->second.precision() < value.precision())
        it->second = value;
}

std::size_t AkCache::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return values_.size();
}

KloostermanStats AkCache::stats() const {
    std::lock_guard<std::mutex> lock(mu_);
    return stats_;
}

void AkCache::add_stats(const KloostermanStats& s) {
    std::lock_guard<std::mutex> lock(mu_);
    stats_.prime_powers += s.prime_powers;
    stats_.closed_forms += s.closed_forms;
    stats_.definition_fallbacks += s.definition_fallbacks;
}

namespace {

Real cached_akn(AkCache& cache, i64 k, const Integer& n, Precision prec) {
    const i64 r = mod_integer(n, k);
    if (auto v = cache.lookup(k, r, prec)) return *v;
    KloostermanStats stats;
    Real v = akn_from_reduction(*cache.reduction(k), Integer(static_cast<long>(r)), prec, &stats);
    cache.add_stats(stats);
    cache.store(k, r, v);
    return v;
}

}  // namespace

Real akn_algorithm1(const EtaQuotientSpec& base, i64 k, const Integer& n, Precision prec, AkCache& cache) {
    if (k < 1) throw std::invalid_argument("akn_algorithm1: k must be positive");
    if (!(cache.base() == base)) throw std::invalid_argument("akn_algorithm1: cache belongs to another quotient");
    std::vector<PrimePower> rest = factorize(k);
    i64 rest_k = k;
    Integer rest_n = n;
    Real acc(1L, prec);
    while (rest.size() > 1) {
        bool peeled = false;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            const i64 q = rest[i].q;
            auto split = mult_split(base, q, rest_k / q, rest_n);
            if (!split) continue;
            Real v = cached_akn(cache, q, Integer(static_cast<long>(split->n1)), prec);
            if (v.is_zero()) return Real(0L, prec);
            acc *= v;
            rest_k /= q;
            rest_n = static_cast<long>(split->n2);
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            peeled = true;
            break;
        }
        if (!peeled) break;
    }
    Real v = cached_akn(cache, rest_k, rest_n, prec);
    if (v.is_zero()) return Real(0L, prec);
    acc *= v;
    return acc;
}

Real akn_lifted(const NormalizedQuotient& nq, i64 k0, const Integer& n_user, Precision prec, AkCache& cache) {
    const i64 K = nq.shift * k0;
    Real v = akn_algorithm1(nq.base, K, n_user * static_cast<long>(nq.shift), prec + 8, cache);
    if (v.is_zero()) return Real(0L, prec);
    v *= static_cast<long>(euler_phi(k0));
    v /= static_cast<long>(euler_phi(K));
    return Real(v, prec);
}

}  // namespace etaq
