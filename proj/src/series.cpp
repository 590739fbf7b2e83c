// SPDX-License-Identifier: Apache-2.0
#include "etaq/series.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

namespace etaq {

const char* to_string(SeriesForm f) {
    switch (f) {
        case SeriesForm::automatic: return "auto";
        case SeriesForm::normalized: return "normalized";
        case SeriesForm::original: return "original";
    }
    return "?";
}

SeriesForm parse_form(const std::string& s) {
    if (s == "auto") return SeriesForm::automatic;
    if (s == "normalized") return SeriesForm::normalized;
    if (s == "original") return SeriesForm::original;
    throw std::invalid_argument("unknown series form: " + s);
}

namespace {

constexpr Precision kBoundPrec = 128;

int bit_length(i64 x) {
    int n = 0;
    while (x > 0) {
        x >>= 1;
        ++n;
    }
    return n;
}

Rational shifted_index(const QuotientConstants& c, const Integer& n) { return Rational(n) - c.n0; }

// Gamma(nu + 1) for nu in (1/2) Z, nu >= 0, by upward recurrence.
Real gamma_plus_one(const Rational& nu, Precision prec) {
    Real g(1L, prec);
    Rational z = 1;
    if (nu.get_den() == 2) {
        g = sqrt(const_pi(prec));
        z = Rational(1, 2);
    }
    while (z < nu + 1) {
        g *= Real(z, prec);
        z += 1;
    }
    return g;
}

// pi sqrt(2/3 c3 n').
Real bessel_scale(const Rational& c3, const Rational& nprime, Precision prec) {
    Rational t = Rational(2, 3) * c3 * nprime;
    return const_pi(prec) * sqrt(Real(t, prec));
}

}  // namespace

Real bessel_i(const Rational& nu, const Real& x, Precision prec) {
    if (x.sign() <= 0) throw std::domain_error("bessel_i: x must be positive");
    if (nu < 1 || Rational(nu * 2).get_den() != 1) throw std::domain_error("bessel_i: nu must be in {1, 3/2, 2, ...}");
    const Precision wp = prec + 24;
    const long p = Rational(nu * 2).get_num().get_si();
    Real xw(x, wp);
    // t_0 = (x/2)^nu / Gamma(nu + 1); t_{m+1} = t_m (x^2/2) / ((m+1)(2m+2+p)).
    Real half = xw / 2L;
    Real t = pow(half, Real(nu, wp)) / gamma_plus_one(nu, wp);
    Real y = xw * xw / 2L;
    Real sum(t);
    for (unsigned long m = 0;; ++m) {
        const unsigned long d1 = m + 1, d2 = 2 * m + 2 + static_cast<unsigned long>(p);
        mpfr_mul(t.get(), t.get(), y.get(), MPFR_RNDN);
        mpfr_div_ui(t.get(), t.get(), d1, MPFR_RNDN);
        mpfr_div_ui(t.get(), t.get(), d2, MPFR_RNDN);
        mpfr_add(sum.get(), sum.get(), t.get(), MPFR_RNDN);
        // Once the ratio drops below 1/2 the tail is bounded by the last term.
        const bool ratio_small = static_cast<double>(d1) * static_cast<double>(d2) >= 2.0 * y.to_double();
        if (ratio_small && (t.is_zero() || t.exponent() < sum.exponent() - static_cast<long>(wp) - 2)) break;
    }
    return Real(sum, prec);
}

Real error_bound(const QuotientConstants& c, const Integer& n, i64 N, Precision prec) {
    if (c.c1 <= 0) throw HypothesisViolated("error_bound: requires c1 > 0");
    if (N < 1) throw std::invalid_argument("error_bound: N must be >= 1");
    const Rational nprime = shifted_index(c, n);
    if (nprime <= 0) throw IndexOutOfRange("error_bound: n must exceed n0");
    prec = std::max<Precision>(prec, 96);
    const Real pi = const_pi(prec);
    const Real c1(c.c1, prec);
    const Real b = bessel_scale(c.C3, nprime, prec);
    const Real n1(static_cast<long>(N + 1), prec);
    Real m = pi * 2L * c.C2(prec) / c1;
    m *= pow(pi * Real(c.C3, prec) / 12L, c1 + Real(1L, prec));
    m *= (n1 + c1) / pow(n1, c1 + Real(1L, prec));
    m *= cosh(b / n1);
    return m;
}

Real heuristic_tail(const QuotientConstants& c, const Integer& n, i64 N, Precision prec) {
    if (c.c1 != 0) throw std::invalid_argument("heuristic_tail: only for c1 = 0");
    const Rational nprime = shifted_index(c, n);
    if (nprime <= 0) throw IndexOutOfRange("heuristic_tail: n must exceed n0");
    const Real pi = const_pi(prec);
    const Real n1(static_cast<long>(N + 1), prec);
    Real shape = pow(n1, Real(Rational(-3, 2), prec));
    shape += pow(n1, Real(Rational(-1, 2), prec)) * 2L / static_cast<long>(c.period);
    Real total(0L, prec);
    for (i64 r = 1; r <= c.period; ++r) {
        if (c.c3_at(r) <= 0) continue;
        Real t = pi * pi / 6L * c.c2_at(r, prec) * Real(c.c3_at(r), prec) * 4L;
        t *= cosh(bessel_scale(c.c3_at(r), nprime, prec) / n1);
        total += t * shape;
    }
    return total;
}

namespace {

template <typename F>
TruncationPlan search_truncation(const QuotientConstants& c, const Integer& n, const Rational& eps, F bound,
                                 bool certified) {
    if (eps <= 0 || eps >= Rational(1, 2)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
    const Real target(Rational(Rational(1, 2) - eps), kBoundPrec);
    auto ok = [&](i64 N) { return bound(N) < target; };
    i64 lo = 0, hi = 1;
    while (!ok(hi)) {
        lo = hi;
        if (hi > (i64(1) << 40)) throw PrecisionExhausted("truncation search did not converge");
        hi *= 2;
    }
    while (hi - lo > 1) {
        i64 mid = lo + (hi - lo) / 2;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    TruncationPlan plan;
    plan.n_internal = n;
    plan.N = hi;
    plan.epsilon = eps;
    plan.bound_value = bound(hi);
    plan.prec = working_precision(c, n, hi);
    plan.certified = certified;
    return plan;
}

}  // namespace

TruncationPlan choose_truncation(const QuotientConstants& c, const Integer& n, const Rational& eps) {
    return search_truncation(c, n, eps, [&](i64 N) { return error_bound(c, n, N, kBoundPrec); }, true);
}

TruncationPlan choose_heuristic_truncation(const QuotientConstants& c, const Integer& n, const Rational& eps) {
    return search_truncation(c, n, eps, [&](i64 N) { return heuristic_tail(c, n, N, kBoundPrec); }, false);
}

namespace {

// Shared pieces of the series for one form at one index.
struct SeriesSetup {
    const QuotientConstants* consts = nullptr;
    Rational nprime;
    Rational nu;
    std::vector<double> log2_coef;  // log2(prefactor * c2(r) c3(r)^((c1+1)/2)), per residue
    std::vector<double> scale;      // pi sqrt(2/3 c3(r) n'), per residue

    SeriesSetup(const QuotientConstants& c, const Integer& n) : consts(&c) {
        nprime = shifted_index(c, n);
        if (nprime <= 0) throw IndexOutOfRange("index must exceed n0");
        nu = c.c1 + 1;
        const Precision p = 64;
        const Real expo(Rational(nu / 2), p);
        const double log2_pref =
            std::log2(2 * M_PI) - log2(pow(Real(Rational(24 * nprime), p), expo)).to_double();
        log2_coef.assign(static_cast<std::size_t>(c.period), 0.0);
        scale.assign(static_cast<std::size_t>(c.period), 0.0);
        for (i64 r = 1; r <= c.period; ++r) {
            if (c.c3_at(r) <= 0) continue;
            Real coef = c.c2_at(r, p) * pow(Real(c.c3_at(r), p), expo);
            log2_coef[static_cast<std::size_t>(r - 1)] = log2_pref + log2(coef).to_double();
            scale[static_cast<std::size_t>(r - 1)] = bessel_scale(c.c3_at(r), nprime, p).to_double();
        }
    }

    bool active(i64 k) const { return consts->c3_at(k) > 0; }

    // log2 of an upper bound for |term k| (using |A_k| <= k, I_nu(x) <= e^x).
    double log2_term_bound(i64 k) const {
        const std::size_t r = static_cast<std::size_t>((k - 1) % consts->period);
        return log2_coef[r] + scale[r] / static_cast<double>(k) * M_LOG2E;
    }
};

Precision precision_for(double log2_bound, i64 N) {
    return static_cast<Precision>(std::ceil(std::max(0.0, log2_bound))) + bit_length(N + 1) + 64;
}

using AkProvider = std::function<Real(i64 k, Precision prec)>;

struct SumResult {
    Real sum;
    i64 terms_nonzero = 0;
    double ak_time = 0;
};

SumResult series_sum(const SeriesSetup& s, i64 N, Precision prec, PrecisionPolicy policy, unsigned threads,
                     const AkProvider& ak) {
    const QuotientConstants& c = *s.consts;
    const Real expo(Rational(s.nu / 2), prec);
    std::vector<std::optional<Real>> coef(static_cast<std::size_t>(c.period));
    std::vector<std::optional<Real>> scale(static_cast<std::size_t>(c.period));
    for (i64 r = 1; r <= std::min(c.period, N); ++r) {
        if (c.c3_at(r) <= 0) continue;
        coef[static_cast<std::size_t>(r - 1)] = c.c2_at(r, prec) * pow(Real(c.c3_at(r), prec), expo);
        scale[static_cast<std::size_t>(r - 1)] = bessel_scale(c.c3_at(r), s.nprime, prec);
    }

    std::vector<std::optional<Real>> terms(static_cast<std::size_t>(N));
    std::atomic<i64> next{1};
    std::vector<double> ak_times(std::max(1u, threads), 0.0);
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&](unsigned id) {
        try {
            for (i64 k = next++; k <= N; k = next++) {
                if (!s.active(k)) continue;
                const std::size_t r = static_cast<std::size_t>((k - 1) % c.period);
                const Precision wp =
                    policy == PrecisionPolicy::uniform ? prec : std::min(prec, precision_for(s.log2_term_bound(k), N));
                auto t0 = std::chrono::steady_clock::now();
                Real a = ak(k, wp);
                ak_times[id] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                if (a.is_zero()) continue;
                Real x = Real(*scale[r], wp) / static_cast<long>(k);
                Real term = Real(*coef[r], wp) * a * bessel_i(s.nu, x, wp);
                term /= static_cast<long>(k);
                terms[static_cast<std::size_t>(k - 1)] = std::move(term);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
            next = N + 1;
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker, i);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    SumResult out;
    out.sum = Real(0L, prec);
    for (const auto& t : terms) {
        if (!t) continue;
        out.sum += *t;
        ++out.terms_nonzero;
    }
    // 2 pi / (24 n')^((c1+1)/2)
    Real pref = const_pi(prec) * 2L / pow(Real(Rational(24 * s.nprime), prec), expo);
    out.sum *= pref;
    for (double t : ak_times) out.ak_time += t;
    return out;
}

struct FormChoice {
    SeriesForm form;
    QuotientConstants consts;
    Integer n;
    TruncationPlan plan;
    std::string why;
    bool usable = false;
    bool index_problem = false;
};

FormChoice prepare_form(const NormalizedQuotient& nq, SeriesForm form, const Integer& n_user,
                        const EvaluateOptions& opts) {
    FormChoice f;
    f.form = form;
    f.consts = form == SeriesForm::normalized ? constants(nq.base) : constants(nq.original);
    f.n = form == SeriesForm::normalized ? index_map(nq, n_user) : n_user;
    HypothesisReport rep = check_hypotheses(f.consts);
    if (!rep.c4_nonnegative) {
        f.why = rep.failure();
        return f;
    }
    if (shifted_index(f.consts, f.n) <= 0) {
        f.why = "index must exceed n0";
        f.index_problem = true;
        return f;
    }
    if (f.consts.c1 > 0) {
        if (opts.N) {
            f.plan.n_internal = f.n;
            f.plan.N = *opts.N;
            f.plan.epsilon = opts.epsilon;
            f.plan.bound_value = error_bound(f.consts, f.n, *opts.N, kBoundPrec);
            f.plan.certified = f.plan.bound_value < Real(Rational(Rational(1, 2) - opts.epsilon), kBoundPrec);
        } else {
            f.plan = choose_truncation(f.consts, f.n, opts.epsilon);
        }
    } else if (f.consts.c1 == 0 && opts.allow_uncertified) {
        if (opts.N) {
            f.plan.n_internal = f.n;
            f.plan.N = *opts.N;
            f.plan.epsilon = opts.epsilon;
            f.plan.bound_value = heuristic_tail(f.consts, f.n, *opts.N, kBoundPrec);
            f.plan.certified = false;
        } else {
            f.plan = choose_heuristic_truncation(f.consts, f.n, opts.epsilon);
        }
    } else {
        f.why = f.consts.c1 == 0 ? "c1 > 0 fails (c1 = 0; rerun with --allow-uncertified for a heuristic truncation)"
                                 : "c1 > 0 fails";
        return f;
    }
    f.plan.prec = working_precision(f.consts, f.n, f.plan.N);
    f.usable = true;
    return f;
}

AkProvider provider_for(const NormalizedQuotient& nq, SeriesForm form, const Integer& n, AkCache& cache) {
    if (form == SeriesForm::normalized)
        return [&nq, n, &cache](i64 k, Precision p) { return akn_algorithm1(nq.base, k, n, p, cache); };
    return [&nq, n, &cache](i64 k, Precision p) { return akn_lifted(nq, k, n, p, cache); };
}

}  // namespace

Precision working_precision(const QuotientConstants& c, const Integer& n, i64 N) {
    SeriesSetup s(c, n);
    double best = 0;
    for (i64 r = 1; r <= std::min(c.period, N); ++r)
        if (s.active(r)) best = std::max(best, s.log2_term_bound(r));
    return precision_for(best, N);
}

EvaluationReport evaluate(const NormalizedQuotient& nq, const Integer& n_user, const EvaluateOptions& opts) {
    auto t_start = std::chrono::steady_clock::now();
    if (opts.epsilon <= 0 || opts.epsilon >= Rational(1, 2)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
    std::vector<FormChoice> candidates;
    if (opts.form == SeriesForm::automatic || opts.form == SeriesForm::normalized)
        candidates.push_back(prepare_form(nq, SeriesForm::normalized, n_user, opts));
    if (opts.form == SeriesForm::automatic || opts.form == SeriesForm::original)
        candidates.push_back(prepare_form(nq, SeriesForm::original, n_user, opts));

    const FormChoice* best = nullptr;
    for (const auto& f : candidates)
        if (f.usable && (!best || f.plan.N < best->plan.N)) best = &f;
    if (!best) {
        bool all_index = std::all_of(candidates.begin(), candidates.end(), [](const FormChoice& f) { return f.index_problem; });
        std::string why;
        for (const auto& f : candidates) why += std::string(why.empty() ? "" : "; ") + to_string(f.form) + ": " + f.why;
        if (all_index) throw IndexOutOfRange(why);
        throw HypothesisFailed(why);
    }

    EvaluationReport rep;
    rep.n_user = n_user;
    rep.n_internal = index_map(nq, n_user);
    rep.form = best->form;
    rep.N = best->plan.N;
    rep.bound = best->plan.bound_value;
    rep.certified = best->plan.certified;
    Precision prec = opts.prec ? *opts.prec : best->plan.prec;
    const Real limit(Rational(Rational(1, 2) - opts.epsilon), 64);

    AkCache cache(nq.base);
    for (int attempt = 0;; ++attempt) {
        SeriesSetup setup(best->consts, best->n);
        AkProvider ak = provider_for(nq, best->form, best->n, cache);
        SumResult s = series_sum(setup, rep.N, prec, opts.policy, std::max(1u, opts.threads), ak);
        rep.value = s.sum.round();
        rep.residual = abs(s.sum - Real(rep.value, prec));
        rep.terms_nonzero = s.terms_nonzero;
        rep.ak_time += s.ak_time;
        rep.prec = prec;
        rep.retries = attempt;
        // The residual only means something when the sum carries fractional bits.
        const bool resolved = s.sum.is_zero() || s.sum.exponent() + 16 <= static_cast<long>(prec);
        if (resolved && rep.residual < limit) break;
        if (attempt >= 1)
            throw PrecisionExhausted(resolved ? "residual " + rep.residual.to_string(6) + " not below 1/2 - epsilon after retry"
                                              : "working precision too small for the size of a(n)");
        prec *= 2;
        // A heuristic truncation may simply be too short; widen it as well.
        if (!rep.certified) rep.N *= 2;
    }
    rep.stats = cache.stats();
    rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return rep;
}

Real partial_sum(const NormalizedQuotient& nq, SeriesForm form, const Integer& n_user, i64 N, Precision prec,
                 AkCache& cache) {
    if (form == SeriesForm::automatic) throw std::invalid_argument("partial_sum: form must be explicit");
    const QuotientConstants c = form == SeriesForm::normalized ? constants(nq.base) : constants(nq.original);
    const Integer n = form == SeriesForm::normalized ? index_map(nq, n_user) : n_user;
    SeriesSetup setup(c, n);
    return series_sum(setup, N, prec, PrecisionPolicy::uniform, 1, provider_for(nq, form, n, cache)).sum;
}

Real partial_sum_internal(const NormalizedQuotient& nq, const Integer& n_internal, i64 N, Precision prec,
                          AkCache& cache) {
    const QuotientConstants c = constants(nq.base);
    SeriesSetup setup(c, n_internal);
    return series_sum(setup, N, prec, PrecisionPolicy::uniform, 1,
                      provider_for(nq, SeriesForm::normalized, n_internal, cache))
        .sum;
}

}  // namespace etaq
