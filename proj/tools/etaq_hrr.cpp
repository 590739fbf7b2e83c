// SPDX-License-Identifier: Apache-2.0
// etaq-hrr: coefficients of eta-quotients by the Rademacher-type series.
#include "etaq/hrr.hpp"
#include "etaq/oracle.hpp"
#include "etaq/series.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

using namespace etaq;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kInternal = 1, kHypothesis = 2, kBadInput = 3 };

class BadInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Integer parse_integer(const std::string& s) {
    Integer v;
    if (s.empty() || v.set_str(s, 10) != 0) throw BadInput("not an integer: " + s);
    return v;
}

// "1/10", "0.1", "1e-3" are all accepted.
Rational parse_rational(const std::string& s) {
    if (s.find('/') != std::string::npos) {
        Rational r;
        if (r.set_str(s, 10) != 0 || r.get_den() == 0) throw BadInput("not a rational: " + s);
        r.canonicalize();
        return r;
    }
    std::string mant = s;
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        mant = s.substr(0, e);
        exp10 = std::stol(s.substr(e + 1));
    }
    std::string digits;
    for (char c : mant) {
        if (c == '.')
            continue;
        digits += c;
    }
    if (auto dot = mant.find('.'); dot != std::string::npos) exp10 -= static_cast<long>(mant.size() - dot - 1);
    Rational r(parse_integer(digits));
    Integer p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 < 0)
        r /= p10;
    else
        r *= p10;
    r.canonicalize();
    return r;
}

std::string str(const Integer& v) { return v.get_str(); }
std::string str(const Rational& v) { return v.get_str(); }

// Common evaluation flags.
struct EvalFlags {
    std::string eps = "1/10";
    int threads = 0;
    long prec = 0;
    std::string form = "auto";
    std::string policy = "uniform";
    bool allow_uncertified = false;
};

EvaluateOptions make_options(const EvalFlags& f) {
    EvaluateOptions o;
    o.epsilon = parse_rational(f.eps);
    o.form = parse_form(f.form);
    o.policy = f.policy == "per-term" ? PrecisionPolicy::per_term : PrecisionPolicy::uniform;
    o.threads = f.threads > 0 ? static_cast<unsigned>(f.threads) : std::max(1u, std::thread::hardware_concurrency());
    if (f.prec > 0) {
        o.prec = f.prec;
    } else if (const char* env = std::getenv("ETAQ_HRR_PREC"); env && *env) {
        long p = std::atol(env);
        if (p < 16) throw BadInput("ETAQ_HRR_PREC must be an integer >= 16");
        o.prec = p;
    }
    o.allow_uncertified = f.allow_uncertified;
    return o;
}

i64 structural_step(const EtaQuotientSpec& spec) {
    i64 g = 0;
    for (const auto& f : spec.pairs) g = gcd(g, f.m);
    return g;
}

int cmd_coeff(const std::string& eta, const std::string& n_str, const EvalFlags& flags, bool as_json) {
    EtaQuotientSpec spec = load_spec(eta);
    Integer n = parse_integer(n_str);
    if (n < 0) throw BadInput("index must be >= 0");
    i64 step = structural_step(spec);
    if (n % static_cast<long>(step) != 0)
        throw BadInput("index " + str(n) + " is structurally zero (every m is divisible by " + std::to_string(step) + ")");
    EvaluationReport r = evaluate(normalize(spec), n, make_options(flags));
    if (as_json) {
        json j = {{"n", str(n)},
                  {"value", str(r.value)},
                  {"N", r.N},
                  {"prec_bits", r.prec},
                  {"residual", r.residual.to_string(6)},
                  {"seconds", r.wall_time},
                  {"ak_seconds", r.ak_time},
                  {"form", to_string(r.form)},
                  {"certified", r.certified},
                  {"terms_nonzero", r.terms_nonzero}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << str(r.value) << "\n";
        if (!r.certified)
            std::cerr << "warning: truncation N = " << r.N << " is heuristic, not certified\n";
    }
    return kOk;
}

int cmd_series(const std::string& eta, i64 upto, bool as_json) {
    if (upto < 0) throw BadInput("--upto must be >= 0");
    EtaQuotientSpec spec = load_spec(eta);
    auto [n0x24, s] = etaq_series(spec, upto);
    if (as_json) {
        json arr = json::array();
        for (const auto& c : s.coeffs) arr.push_back(str(c));
        std::cout << json{{"n0_times_24", str(n0x24)}, {"coeffs", arr}}.dump() << "\n";
    } else {
        for (const auto& c : s.coeffs) std::cout << str(c) << "\n";
    }
    return kOk;
}

int cmd_ak(const std::string& eta, i64 k, const std::string& n_str, const std::string& method, long prec,
           bool as_json) {
    if (k < 1) throw BadInput("-k must be >= 1");
    EtaQuotientSpec spec = load_spec(eta);
    NormalizedQuotient nq = normalize(spec);
    Integer n = parse_integer(n_str);
    const Precision p = prec > 0 ? prec : 128;
    Real value;
    std::optional<HrrReduction> red;
    if (method == "definition") {
        value = akn_definition(spec, k, n, p);
    } else if (method == "kloosterman" || method == "algorithm1") {
        const i64 kk = k * nq.shift;
        const Integer nn = index_map(nq, n);
        Real v = method == "kloosterman" ? akn_kloosterman(nq.base, kk, nn, p + 16)
                                         : [&] {
                                               AkCache cache(nq.base);
                                               return akn_algorithm1(nq.base, kk, nn, p + 16, cache);
                                           }();
        if (nq.shift != 1) v = v * Real(euler_phi(k), p + 16) / Real(euler_phi(kk), p + 16);
        value = Real(v, p);
        red = hrr_reduce(nq.base, kk);
    } else {
        throw BadInput("--method must be definition, kloosterman or algorithm1");
    }
    static const char* unit[4] = {"1", "i", "-1", "-i"};
    if (as_json) {
        json j = {{"k", k}, {"n", str(n)}, {"method", method}, {"value", value.to_string(30)}};
        if (red)
            j["reduction"] = {{"modulus", red->k},  {"a", red->a}, {"b", red->b}, {"prefactor", unit[red->prefactor_exp & 3]},
                              {"character", red->chi_rho.to_string()}};
        std::cout << j.dump() << "\n";
    } else {
        std::cout << value.to_string(30) << "\n";
        if (red)
            std::cout << "reduction: " << unit[red->prefactor_exp & 3] << " * S_" << red->chi_rho.to_string() << "("
                      << red->a << " - n, " << red->b << "; " << red->k << ")\n";
    }
    return kOk;
}

int cmd_bound(const std::string& eta, const std::string& n_str, i64 N, const std::string& eps_str,
              const std::string& form_str, bool as_json) {
    EtaQuotientSpec spec = load_spec(eta);
    NormalizedQuotient nq = normalize(spec);
    Integer n = parse_integer(n_str);
    Rational eps = parse_rational(eps_str);
    SeriesForm want = parse_form(form_str);
    json rows = json::array();
    int usable = 0;
    std::string why;
    for (SeriesForm f : {SeriesForm::normalized, SeriesForm::original}) {
        if (want != SeriesForm::automatic && want != f) continue;
        QuotientConstants c = f == SeriesForm::normalized ? constants(nq.base) : constants(nq.original);
        Integer nf = f == SeriesForm::normalized ? index_map(nq, n) : n;
        HypothesisReport h = check_hypotheses(c);
        if (!h.ok()) {
            why += std::string(to_string(f)) + ": " + h.failure() + "; ";
            continue;
        }
        ++usable;
        json row = {{"form", to_string(f)}, {"n", str(nf)}};
        if (N > 0) {
            Real m = error_bound(c, nf, N);
            row["N"] = N;
            row["bound"] = m.to_string(20);
            if (!as_json) std::cout << to_string(f) << " M(" << str(nf) << ", " << N << ") = " << m.to_string(20) << "\n";
        } else {
            TruncationPlan plan = choose_truncation(c, nf, eps);
            row["N"] = plan.N;
            row["bound"] = plan.bound_value.to_string(20);
            row["prec_bits"] = plan.prec;
            if (!as_json)
                std::cout << to_string(f) << " N = " << plan.N << " (M = " << plan.bound_value.to_string(10)
                          << ", prec = " << plan.prec << ")\n";
        }
        rows.push_back(row);
    }
    if (as_json) std::cout << json{{"eps", str(eps)}, {"forms", rows}}.dump() << "\n";
    if (!usable) throw HypothesisFailed(why);
    return kOk;
}

// Reduced-size invariant suites.
int cmd_selfcheck() {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
        if (!ok) ++failures;
    };
    const Precision p = 128;
    const Real tol = exp2i(-40, p);

    {
        bool ok = true;
        for (i64 k = 1; k <= 60 && ok; ++k)
            for (i64 h = 0; h < k; ++h)
                if (gcd(h, k) == 1 && dedekind_sum(h, k) != dedekind_sum_naive(h, k)) ok = false;
        report("dedekind reciprocity vs definition, k <= 60", ok);
    }
    {
        std::mt19937_64 rng(7);
        bool ok = true;
        for (int it = 0; it < 200 && ok; ++it) {
            i64 k = std::uniform_int_distribution<i64>(1, 200)(rng);
            i64 a = std::uniform_int_distribution<i64>(0, k - 1)(rng);
            i64 b = std::uniform_int_distribution<i64>(0, k - 1)(rng);
            KloostermanQuery q{a, b, k, QuadCharacter{}};
            Complex d = kloosterman_definition(q, p), f = kloosterman_fast(q, p);
            if (abs(d.re - f.re) > tol || abs(d.im - f.im) > tol) ok = false;
        }
        report("Kloosterman fast vs definition, 200 random k <= 200", ok);
    }
    {
        bool ok = true;
        for (const char* s : {"1:-1", "1:-2,2:1", "1:-1,2:1,4:-1"}) {
            NormalizedQuotient nq = normalize(parse_spec(s));
            AkCache cache(nq.base);
            for (i64 k = 1; k <= 48 && ok; ++k)
                for (i64 n = 0; n <= k && ok; ++n) {
                    Real d = akn_definition(nq.base, k, n, p);
                    if (abs(d - akn_kloosterman(nq.base, k, n, p)) > tol) ok = false;
                    if (abs(d - akn_algorithm1(nq.base, k, n, p, cache)) > tol) ok = false;
                }
        }
        report("A_k engines vs definition, k <= 48", ok);
    }
    {
        bool ok = true;
        for (const char* s : {"1:-1", "1:-2,2:1"}) {
            EtaQuotientSpec spec = parse_spec(s);
            NormalizedQuotient nq = normalize(spec);
            auto truth = etaq_series(spec, 120).second;
            EvaluateOptions o;
            for (i64 n = 1; n <= 120 && ok; ++n)
                if (evaluate(nq, n, o).value != truth[n]) ok = false;
        }
        report("series vs q-expansion, n <= 120", ok);
    }
    {
        QuotientConstants c = constants(normalize(parse_spec("1:-5")).base);
        bool ok = true;
        Real prev = error_bound(c, 24 * 1000, 1);
        for (i64 N = 2; N <= 2000 && ok; ++N) {
            Real m = error_bound(c, 24 * 1000, N);
            if (!(m < prev)) ok = false;
            prev = m;
        }
        report("error bound strictly decreasing, N <= 2000", ok);
    }
    return failures ? kInternal : kOk;
}

int cmd_bench(const std::string& eta, const std::string& n_str, std::vector<std::string> methods, i64 N, long prec,
              bool as_json) {
    EtaQuotientSpec spec = load_spec(eta);
    NormalizedQuotient nq = normalize(spec);
    Integer n = parse_integer(n_str);
    if (N <= 0) {
        EvaluateOptions o;
        QuotientConstants c = constants(nq.base);
        if (!check_hypotheses(c).ok()) throw HypothesisFailed(check_hypotheses(c).failure());
        N = choose_truncation(c, index_map(nq, n), o.epsilon).N;
    }
    const Integer nn = index_map(nq, n);
    const Precision p = prec > 0 ? prec : 128;
    json rows = json::array();
    if (!as_json) std::cout << "method        k_max      seconds\n";
    for (const auto& m : methods) {
        auto t0 = std::chrono::steady_clock::now();
        Real sink(0L, p);
        if (m == "definition") {
            for (i64 k = 1; k <= N; ++k) sink += akn_definition(nq.base, k, nn, p);
        } else if (m == "algorithm1") {
            AkCache cache(nq.base);
            for (i64 k = 1; k <= N; ++k) sink += akn_algorithm1(nq.base, k, nn, p, cache);
        } else if (m == "kloosterman") {
            for (i64 k = 1; k <= N; ++k) sink += akn_kloosterman(nq.base, k, nn, p);
        } else {
            throw BadInput("unknown bench method: " + m);
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back({{"method", m}, {"k_max", N}, {"seconds", secs}, {"checksum", sink.to_string(20)}});
        if (!as_json) std::printf("%-12s %7lld %12.3f\n", m.c_str(), static_cast<long long>(N), secs);
    }
    if (as_json) std::cout << json{{"n", str(n)}, {"rows", rows}}.dump() << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact coefficients of eta-quotients via the Rademacher-type series"};
    app.require_subcommand(1);

    std::string eta, n_str = "0";
    bool as_json = false;
    EvalFlags flags;

    auto* coeff = app.add_subcommand("coeff", "compute a(n)");
    coeff->add_option("--eta", eta, "eta-quotient: \"m:d,...\", inline JSON or JSON file")->required();
    coeff->add_option("-n", n_str, "index")->required();
    coeff->add_option("--eps", flags.eps, "safety margin epsilon (default 1/10)");
    coeff->add_option("--threads", flags.threads, "worker threads (default: all cores)");
    coeff->add_option("--prec", flags.prec, "working precision override in bits (also ETAQ_HRR_PREC)");
    coeff->add_option("--form", flags.form, "auto | normalized | original")
        ->check(CLI::IsMember({"auto", "normalized", "original"}));
    coeff->add_option("--precision-policy", flags.policy, "uniform | per-term")
        ->check(CLI::IsMember({"uniform", "per-term"}));
    coeff->add_flag("--allow-uncertified", flags.allow_uncertified, "permit a heuristic truncation when c1 = 0");
    coeff->add_flag("--json", as_json);

    i64 upto = 10;
    auto* series = app.add_subcommand("series", "q-expansion a(0..N) by exact series arithmetic");
    series->add_option("--eta", eta)->required();
    series->add_option("--upto", upto, "last index")->required();
    series->add_flag("--json", as_json);

    i64 k = 1;
    std::string method = "algorithm1";
    long prec = 0;
    auto* ak = app.add_subcommand("ak", "evaluate A_k(n)");
    ak->add_option("--eta", eta)->required();
    ak->add_option("-k", k)->required();
    ak->add_option("-n", n_str);
    ak->add_option("--method", method)->check(CLI::IsMember({"definition", "kloosterman", "algorithm1"}));
    ak->add_option("--prec", prec);
    ak->add_flag("--json", as_json);

    i64 N = 0;
    std::string form = "auto";
    auto* bound = app.add_subcommand("bound", "error bound M(n,N) or the least certified N");
    bound->add_option("--eta", eta)->required();
    bound->add_option("-n", n_str)->required();
    bound->add_option("-N", N, "evaluate M(n,N) at this N instead of searching");
    bound->add_option("--eps", flags.eps);
    bound->add_option("--form", form)->check(CLI::IsMember({"auto", "normalized", "original"}));
    bound->add_flag("--json", as_json);

    auto* selfcheck = app.add_subcommand("selfcheck", "run reduced invariant suites");

    std::vector<std::string> methods{"definition", "algorithm1"};
    auto* bench = app.add_subcommand("bench", "time A_k evaluation for k <= N");
    bench->add_option("--eta", eta)->required();
    bench->add_option("-n", n_str)->required();
    bench->add_option("--methods", methods)->delimiter(',');
    bench->add_option("-N", N, "largest k (default: the certified truncation)");
    bench->add_option("--prec", prec);
    bench->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kBadInput;
    }

    try {
        if (*coeff) return cmd_coeff(eta, n_str, flags, as_json);
        if (*series) return cmd_series(eta, upto, as_json);
        if (*ak) return cmd_ak(eta, k, n_str, method, prec, as_json);
        if (*bound) return cmd_bound(eta, n_str, N, flags.eps, form, as_json);
        if (*selfcheck) return cmd_selfcheck();
        if (*bench) return cmd_bench(eta, n_str, methods, N, prec, as_json);
    } catch (const HypothesisFailed& e) {
        std::cerr << "hypothesis failure: " << e.what() << "\n";
        return kHypothesis;
    } catch (const HypothesisViolated& e) {
        std::cerr << "hypothesis failure: " << e.what() << "\n";
        return kHypothesis;
    } catch (const std::invalid_argument& e) {
        std::cerr << "bad input: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
