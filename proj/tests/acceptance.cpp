// SPDX-License-Identifier: Apache-2.0
// Acceptance criteria 1-8. Prints one PASS/FAIL line each; exit status is
// the number of failures. Pass criterion numbers to run a subset.
#include "etaq/hrr.hpp"
#include "etaq/oracle.hpp"
#include "etaq/series.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

using namespace etaq;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

constexpr Precision P = 128;

const Real& tol40() {
    static const Real t = exp2i(-40, P);
    return t;
}

struct Row {
    const char* name;
    const char* spec;
    long n_max;
};

const Row kTable1[] = {
    {"partitions", "1:-1", 2000},
    {"5-colored", "1:-5", 1000},
    {"overpartitions", "1:-2,2:1", 2000},
    {"no odd part repeated", "1:-1,2:1,4:-1", 2000},
    {"odd parts", "1:-1,2:1", 2000},
    {"parts prime to 15", "1:-1,15:-1,3:1,5:1", 2000},
};

// ---------------------------------------------------------------- mod p

using u64 = std::uint64_t;

u64 pw(u64 b, u64 e, u64 m) {
    u64 r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = static_cast<unsigned __int128>(r) * b % m;
        b = static_cast<unsigned __int128>(b) * b % m;
        e >>= 1;
    }
    return r;
}

void ntt(std::vector<u64>& a, bool invert, u64 mod, u64 g) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        u64 w = pw(g, (mod - 1) / len, mod);
        if (invert) w = pw(w, mod - 2, mod);
        for (std::size_t i = 0; i < n; i += len) {
            u64 wn = 1;
            for (std::size_t j = 0; j < len / 2; ++j) {
                u64 u = a[i + j], v = a[i + j + len / 2] * wn % mod;
                a[i + j] = u + v < mod ? u + v : u + v - mod;
                a[i + j + len / 2] = u >= v ? u - v : u + mod - v;
                wn = wn * w % mod;
            }
        }
    }
    if (invert) {
        u64 inv = pw(n, mod - 2, mod);
        for (auto& x : a) x = x * inv % mod;
    }
}

std::vector<u64> mul_mod_p(std::vector<u64> a, std::vector<u64> b, std::size_t keep, u64 mod) {
    std::size_t n = 1;
    while (n < 2 * keep) n <<= 1;
    a.resize(n);
    b.resize(n);
    ntt(a, false, mod, 3);
    ntt(b, false, mod, 3);
    for (std::size_t i = 0; i < n; ++i) a[i] = a[i] * b[i] % mod;
    ntt(a, true, mod, 3);
    a.resize(keep);
    return a;
}

// Coefficient of q^N in prod (1 - q^j)^{-5}, modulo an NTT prime.
u64 five_colored_mod(std::size_t N, u64 mod) {
    std::vector<u64> p(N + 1, 0);
    p[0] = 1;
    for (std::size_t n = 1; n <= N; ++n) {
        u64 acc = 0;
        for (std::size_t j = 1;; ++j) {
            std::size_t g1 = j * (3 * j - 1) / 2, g2 = j * (3 * j + 1) / 2;
            if (g1 > n) break;
            u64 t = p[n - g1] + (g2 <= n ? p[n - g2] : 0);
            t %= mod;
            acc = (j % 2) ? (acc + t) % mod : (acc + mod - t) % mod;
        }
        p[n] = acc;
    }
    auto p2 = mul_mod_p(p, p, N + 1, mod);
    auto p4 = mul_mod_p(p2, p2, N + 1, mod);
    u64 r = 0;
    for (std::size_t i = 0; i <= N; ++i) r = (r + p4[i] * p[N - i]) % mod;
    return r;
}

// ---------------------------------------------------------------- 1

const char* kPaperValue =
    "1709349027900160426231759812453331777798866621250418728438426924737182606775572832365632388835153251494246284"
    "1895955264525681257154424656792274125984782014303421202787430448933854827254859037204941154722231415335881814"
    "20284373293199200749115480647779688721463489973392452731512257715631";

Outcome criterion1() {
    NormalizedQuotient nq = normalize(parse_spec("1:-5"));
    EvaluateOptions o;
    o.form = SeriesForm::normalized;
    o.threads = std::max(1u, std::thread::hardware_concurrency());
    EvaluationReport r = evaluate(nq, 1000000, o);
    const Integer paper(kPaperValue);
    const std::string digits = r.value.get_str();

    std::ostringstream d;
    bool ok = true;
    d << "N=" << r.N << (r.N == 29881 ? " (matches)" : " (expected 29881)");
    ok &= r.N == 29881;
    d << "; runtime " << static_cast<long>(r.wall_time) << "s, A_k phase " << r.ak_time << "s";
    ok &= r.wall_time <= 300 && r.ak_time <= 90;

    // Independent check of the computed value modulo three primes.
    bool residues = true;
    for (u64 mod : {998244353ULL, 167772161ULL, 469762049ULL}) {
        Integer rm = r.value % static_cast<unsigned long>(mod);
        residues &= rm.get_ui() == five_colored_mod(1000000, mod);
    }
    d << "; value (" << digits.size() << " digits, " << digits.substr(0, 12) << "...) "
      << (residues ? "confirmed" : "NOT confirmed") << " mod 998244353, 167772161, 469762049";
    ok &= residues;

    EvaluateOptions orig;
    orig.form = SeriesForm::original;
    orig.threads = o.threads;
    EvaluationReport ro = evaluate(nq, 1000000, orig);
    d << "; original form (N=" << ro.N << ") " << (ro.value == r.value ? "agrees" : "DISAGREES");
    ok &= ro.value == r.value;

    bool golden = r.value == paper;
    d << "; paper integer (" << paper.get_str().size() << " digits) " << (golden ? "reproduced" : "NOT reproduced");
    ok &= golden;
    return {ok, d.str()};
}

// ---------------------------------------------------------------- 2

Outcome criterion2() {
    std::ostringstream d;
    long mismatches = 0, checked = 0;
    for (const Row& row : kTable1) {
        EtaQuotientSpec spec = parse_spec(row.spec);
        NormalizedQuotient nq = normalize(spec);
        auto truth = etaq_series(spec, row.n_max).second;
        EvaluateOptions o;
        o.allow_uncertified = true;
        long bad = 0, uncertified = 0;
        for (long n = 1; n <= row.n_max; ++n) {
            EvaluationReport r = evaluate(nq, n, o);
            ++checked;
            uncertified += !r.certified;
            if (r.value != truth[n]) ++bad;
        }
        mismatches += bad;
        d << row.name << " n<=" << row.n_max << ": " << bad << " mismatches";
        if (uncertified) d << " (c1 = 0, heuristic truncation)";
        d << "; ";
    }
    d << checked << " coefficients";
    return {mismatches == 0, d.str()};
}

// ---------------------------------------------------------------- 3

Outcome criterion3() {
    Real worst_k(0L, P), worst_a(0L, P);
    for (const Row& row : kTable1) {
        EtaQuotientSpec base = normalize(parse_spec(row.spec)).base;
        AkCache cache(base);
        for (i64 k = 1; k <= 240; ++k) {
            auto def = akn_definition_period(base, k, P);
            HrrReduction red = hrr_reduce(base, k);
            for (i64 n = 0; n <= k; ++n) {
                const Real& want = def[static_cast<std::size_t>(n % k)];
                Real dk = abs(akn_from_reduction(red, n, P) - want);
                Real da = abs(akn_algorithm1(base, k, n, P, cache) - want);
                if (dk > worst_k) worst_k = dk;
                if (da > worst_a) worst_a = da;
            }
        }
    }
    std::ostringstream d;
    d << "max |kloosterman - definition| = " << worst_k.to_string(3) << ", max |algorithm1 - definition| = "
      << worst_a.to_string(3) << " (bound 2^-40)";
    return {worst_k < tol40() && worst_a < tol40(), d.str()};
}

// ---------------------------------------------------------------- 4

Outcome criterion4() {
    std::ostringstream d;
    bool ok = true;
    auto check = [&](const std::string& what, bool good) {
        if (!good) d << what << " wrong; ";
        ok &= good;
    };
    QuotientConstants f = constants(parse_spec("24:-5"));
    check("c1", f.c1 == Rational(5, 2));
    check("n0", f.n0 == 5);
    check("M", f.period == 24);
    check("C3", f.C3 == 120);
    Real c2_want = Real(32L, 256) * pow(sqrt(Real(6L, 256)), 5);
    check("C2", abs(f.C2(256) - c2_want) < exp2i(-80, 256));

    QuotientConstants o = constants(parse_spec("1:-2,2:1"));
    check("overpartition c1", o.c1 == Rational(1, 2));
    check("overpartition n0", o.n0 == 0);
    check("overpartition c3(1)", o.c3_at(1) == Rational(3, 2));
    check("overpartition c3(2)", o.c3_at(2) == 0);
    // c2(1) is irrational in general; compare its square exactly.
    bool c2_ok = o.c2_squared_at(1) == Rational(1, 4);
    if (!c2_ok)
        d << "overpartition c2(1): defining product gives c2(1)^2 = " << o.c2_squared_at(1).get_str()
          << ", the stated value 1/2 has square 1/4; ";
    ok &= c2_ok;
    d << "5-colored c1=" << f.c1.get_str() << " n0=" << f.n0.get_str() << " M=" << f.period
      << " C2^2=" << f.C2_squared.get_str() << " C3=" << f.C3.get_str() << "; overpartitions c1=" << o.c1.get_str()
      << " n0=" << o.n0.get_str() << " c3(1)=" << o.c3_at(1).get_str() << " c3(2)=" << o.c3_at(2).get_str();
    return {ok, d.str()};
}

// ---------------------------------------------------------------- 5

std::vector<QuadCharacter> characters_mod(i64 k) {
    std::vector<i64> odd;
    for (const auto& f : factorize(k))
        if (f.p != 2) odd.push_back(f.p);
    std::vector<int> d2s{1};
    if (k % 4 == 0) d2s.push_back(-1);
    if (k % 8 == 0) {
        d2s.push_back(2);
        d2s.push_back(-2);
    }
    std::vector<QuadCharacter> out;
    for (unsigned mask = 0; mask < (1u << odd.size()); ++mask)
        for (int d2 : d2s) {
            std::vector<i64> ps;
            for (std::size_t i = 0; i < odd.size(); ++i)
                if (mask >> i & 1) ps.push_back(odd[i]);
            out.push_back(make_character(ps, d2, k));
        }
    return out;
}

// Component of chi living modulo the divisor k1 of its modulus.
QuadCharacter restrict_to(const QuadCharacter& chi, i64 k1) {
    std::vector<i64> ps;
    for (i64 p : chi.odd_primes)
        if (k1 % p == 0) ps.push_back(p);
    return make_character(ps, k1 % 2 == 0 ? chi.d2 : 1, k1);
}

Complex brute(i64 a, i64 b, i64 k, const QuadCharacter& chi) {
    return kloosterman_definition({mod(a, k), mod(b, k), k, chi}, P);
}

bool close(const Complex& x, const Complex& y) {
    return abs(x.re - y.re) < tol40() && abs(x.im - y.im) < tol40();
}

Outcome criterion5() {
    std::mt19937_64 rng(5);
    auto uni = [&](i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng); };
    auto pick = [&](const std::vector<QuadCharacter>& v) { return v[static_cast<std::size_t>(uni(0, static_cast<i64>(v.size()) - 1))]; };
    std::ostringstream d;
    bool ok = true;

    int mult = 0, mult_bad = 0;
    while (mult < 1000) {
        i64 k = uni(6, 500);
        auto fs = factorize(k);
        if (fs.size() < 2) continue;
        i64 k1 = 1;
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (uni(0, 1)) k1 *= fs[i].q;
        if (k1 == 1 || k1 == k) continue;
        i64 k2 = k / k1;
        QuadCharacter chi = pick(characters_mod(k));
        i64 a = uni(0, k - 1), b = uni(0, k - 1);
        i64 i2 = mod_inverse(k2 % k1, k1), i1 = mod_inverse(k1 % k2, k2);
        Complex lhs = brute(a, b, k, chi);
        Complex rhs = brute(a * i2, b * i2, k1, restrict_to(chi, k1)) * brute(a * i1, b * i1, k2, restrict_to(chi, k2));
        mult_bad += !close(lhs, rhs) || !close(lhs, kloosterman_fast({a, b, k, chi}, P));
        ++mult;
    }
    d << "multiplicativity " << mult - mult_bad << "/" << mult;
    ok &= mult_bad == 0;

    int hom = 0, hom_bad = 0, sym_bad = 0;
    while (hom < 1000) {
        i64 k = uni(2, 500), a = uni(0, k - 1), b = uni(0, k - 1), c = uni(1, k - 1);
        if (gcd(c, k) != 1) continue;
        QuadCharacter chi = pick(characters_mod(k));
        Complex s = brute(a, b, k, chi);
        Complex lhs = brute(mul_mod(a, c, k), b, k, chi) * static_cast<long>(char_eval(chi, c));
        hom_bad += !close(lhs, brute(a, mul_mod(b, c, k), k, chi));
        sym_bad += !close(s, brute(b, a, k, chi)) || !close(s.conj(), brute(-a, -b, k, chi));
        ++hom;
    }
    d << "; homogeneity " << hom - hom_bad << "/" << hom << "; conjugation/symmetry " << hom - sym_bad << "/" << hom;
    ok &= hom_bad == 0 && sym_bad == 0;

    std::vector<i64> prime_powers;
    for (i64 q = 2; q <= 500; ++q)
        if (factorize(q).size() == 1 && factorize(q)[0].alpha >= 1) prime_powers.push_back(q);
    int sel = 0, sel_bad = 0, attempts = 0;
    while (sel < 1000 && attempts < 100000) {
        ++attempts;
        i64 q = prime_powers[static_cast<std::size_t>(uni(0, static_cast<i64>(prime_powers.size()) - 1))];
        PrimePower pp = factorize(q)[0];
        if (pp.alpha < 2 && uni(0, 3)) continue;
        i64 g = ipow(pp.p, static_cast<int>(uni(1, pp.alpha)));
        i64 a = mul_mod(g, uni(0, q - 1), q), b = uni(0, q - 1);
        if (uni(0, 1)) std::swap(a, b);
        QuadCharacter chi = pick(characters_mod(q));
        SelbergResult r;
        try {
            r = selberg_reduce(a, b, pp.p, pp.alpha, chi);
        } catch (const HypothesisViolated&) {
            continue;
        }
        Complex got(Real(r.scalar, P), Real(0L, P));
        if (r.reduced) got = brute(r.reduced->a, r.reduced->b, r.reduced->k, r.reduced->chi) * Real(r.scalar, P);
        sel_bad += !close(got, brute(a, b, q, chi));
        ++sel;
    }
    d << "; Selberg " << sel - sel_bad << "/" << sel;
    ok &= sel_bad == 0 && sel >= 1000;

    // Exhaustive closed forms, grouped by the formula they exercise.
    std::map<std::string, std::pair<int, int>> forms;
    auto family = [](i64 p, int alpha, const QuadCharacter& chi) -> std::string {
        if (p == 2) return alpha <= 5 ? "2^" + std::to_string(alpha) : (alpha % 2 ? "2^odd>=7" : "2^even>=6");
        if (chi.trivial()) return alpha == 1 ? "odd p, trivial, alpha=1" : "Salie trivial";
        return "Salie Legendre";
    };
    std::vector<std::pair<i64, int>> cases;
    for (int alpha = 1; alpha <= 9; ++alpha) cases.push_back({2, alpha});
    for (int alpha = 1; alpha <= 5; ++alpha) cases.push_back({3, alpha});
    for (int alpha = 1; alpha <= 3; ++alpha) cases.push_back({5, alpha});
    for (int alpha = 1; alpha <= 2; ++alpha) cases.push_back({7, alpha});
    for (auto [p, alpha] : cases) {
        i64 q = ipow(p, alpha);
        for (const auto& chi : characters_mod(q)) {
            auto& cnt = forms[family(p, alpha, chi)];
            for (i64 a = 0; a < q; ++a) {
                ++cnt.first;
                cnt.second += !close(prime_power_eval(a, p, alpha, chi, P), brute(a, 1, q, chi));
            }
        }
    }
    int closed_bad = 0;
    d << "; closed forms:";
    for (const auto& [name, cnt] : forms) {
        d << " [" << name << " " << cnt.first - cnt.second << "/" << cnt.first << "]";
        closed_bad += cnt.second;
    }
    ok &= closed_bad == 0 && forms.size() == 10;
    return {ok, d.str()};
}

// ---------------------------------------------------------------- 6

Outcome criterion6() {
    std::ostringstream d;
    bool ok = true;
    struct Q {
        const char* name;
        EtaQuotientSpec base;
    };
    for (const Q& q : {Q{"overpartitions", normalize(parse_spec("1:-2,2:1")).base}, Q{"5-colored", parse_spec("24:-5")}}) {
        AkCache cache(q.base);
        Real worst(0L, P);
        for (i64 k = 1; k <= 99; k += 2) {
            auto def2 = akn_definition_period(q.base, 2 * k, P);
            auto def1 = akn_definition_period(q.base, k, P);
            for (i64 n = 0; n <= 2 * k; ++n) {
                Real lhs = def2[static_cast<std::size_t>(n % (2 * k))];
                Real rhs = def1[static_cast<std::size_t>(n % k)];
                if (n % 2) rhs = -rhs;
                Real e = abs(lhs - rhs);
                Real e2 = abs(akn_algorithm1(q.base, 2 * k, n, P, cache) - rhs);
                if (e2 > e) e = e2;
                if (e > worst) worst = e;
            }
        }
        d << q.name << " max deviation " << worst.to_string(3) << "; ";
        ok &= worst < tol40();
    }
    d << "odd k <= 99, n <= 2k";
    return {ok, d.str()};
}

// ---------------------------------------------------------------- 7

Outcome criterion7() {
    std::ostringstream d;
    bool ok = true;
    for (const Row& row : kTable1) {
        NormalizedQuotient nq = normalize(parse_spec(row.spec));
        QuotientConstants c = constants(nq.base);
        AkCache cache(nq.base);
        auto truth = etaq_series(nq.base, 1000).second;
        if (c.c1 <= 0) {
            // M(n,N) needs c1 > 0; report the heuristic tail instead.
            bool tail_ok = true;
            for (long n : {50, 200, 1000})
                for (i64 N = 1; N <= 50; ++N) {
                    Real s = partial_sum_internal(nq, n, N, P, cache);
                    tail_ok &= abs(Real(truth[n], P) - s) <= heuristic_tail(c, n, N);
                }
            d << row.name << ": N/A (c1 = 0, M undefined; heuristic tail " << (tail_ok ? "holds" : "violated") << "); ";
            continue;
        }
        int violations = 0;
        for (long n : {50, 200, 1000})
            for (i64 N = 1; N <= 50; ++N) {
                Real s = partial_sum_internal(nq, n, N, P, cache);
                violations += abs(Real(truth[n], P) - s) > error_bound(c, n, N);
            }
        int nonmono = 0;
        for (long n : {50, 200, 1000}) {
            Real prev = error_bound(c, n, 1);
            for (i64 N = 2; N <= 100000; ++N) {
                Real m = error_bound(c, n, N);
                nonmono += !(m < prev);
                prev = std::move(m);
            }
        }
        d << row.name << ": " << violations << " violations, " << nonmono << " non-decreasing steps; ";
        ok &= violations == 0 && nonmono == 0;
    }
    std::string out = d.str();
    return {ok, out.substr(0, out.size() - 2)};
}

// ---------------------------------------------------------------- 8

Outcome criterion8() {
    std::ostringstream d;
    EtaQuotientSpec q = parse_spec("24:-1,48:-1,96:1");
    HrrReduction red = hrr_reduce(q, 80);
    static const char* unit[4] = {"1", "i", "-1", "-i"};
    bool datum = red.k == 80 && red.a == 49 && red.b == 43 && red.prefactor_exp == 3 && red.chi_rho.discriminant() == -10;
    d << "A_80(n) = " << unit[red.prefactor_exp & 3] << " S_" << red.chi_rho.to_string() << "(" << red.a << " - n, "
      << red.b << "; " << red.k << ")";
    Real a80 = akn_definition(q, 80, 16, P);
    int matches = 0;
    for (i64 n1 = 0; n1 < 5; ++n1)
        for (i64 n2 = 0; n2 < 16; ++n2)
            matches += abs(akn_definition(q, 5, n1, P) * akn_definition(q, 16, n2, P) - a80) < tol40();
    bool no_split = !mult_split(q, 5, 16, 16).has_value() && !mult_split(q, 16, 5, 16).has_value();
    d << "; A_80(16) = " << a80.to_string(12) << ", " << matches << " of 80 pairs (n1, n2) factor it; mult_split "
      << (no_split ? "declines" : "ACCEPTS") << " (5, 16)";
    return {datum && matches == 0 && no_split, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"golden value", criterion1},          {"oracle equivalence", criterion2},
        {"A_k engine equivalence", criterion3}, {"constants reproduction", criterion4},
        {"Kloosterman property suite", criterion5}, {"A_2k = (-1)^n A_k", criterion6},
        {"error-bound validity", criterion7},   {"reduction datum at k = 80", criterion8},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && !only.count(id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failures += !out.pass;
        std::printf("%s criterion %d (%s): %s [%.1fs]\n", out.pass ? "PASS" : "FAIL", id, criteria[i].first,
                    out.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures;
}
