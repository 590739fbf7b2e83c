// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "etaq/hrr.hpp"
#include "etaq/quotient.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace etaq {

class HypothesisFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PrecisionExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IndexOutOfRange : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Which eta-quotient the series is summed over. Both give a(n):
// normalized sums A_k of the 24 | m quotient at m0 n; original sums the
// quotient as given, with A_k obtained from the normalized one by lifting.
enum class SeriesForm { automatic, normalized, original };
enum class PrecisionPolicy { uniform, per_term };

const char* to_string(SeriesForm f);
SeriesForm parse_form(const std::string& s);

struct TruncationPlan {
    Integer n_internal;
    i64 N = 1;
    Rational epsilon{1, 10};
    Real bound_value;
    Precision prec = 64;
    bool certified = true;
};

// I_nu(x) by its power series; nu = 1, 3/2, 2, ...
Real bessel_i(const Rational& nu, const Real& x, Precision prec);

// M(n, N); n is an index in the coordinates of consts.
Real error_bound(const QuotientConstants& consts, const Integer& n, i64 N, Precision prec = 96);
// Uncertified tail estimate for c1 = 0, assuming |A_k(n)| <= 4 sqrt(k).
Real heuristic_tail(const QuotientConstants& consts, const Integer& n, i64 N, Precision prec = 96);
TruncationPlan choose_truncation(const QuotientConstants& consts, const Integer& n,
                                 const Rational& epsilon = Rational(1, 10));
TruncationPlan choose_heuristic_truncation(const QuotientConstants& consts, const Integer& n,
                                           const Rational& epsilon = Rational(1, 10));
// Working precision for a sum through N: largest term magnitude plus guards.
Precision working_precision(const QuotientConstants& consts, const Integer& n, i64 N);

struct EvaluateOptions {
    Rational epsilon{1, 10};
    SeriesForm form = SeriesForm::automatic;
    PrecisionPolicy policy = PrecisionPolicy::uniform;
    unsigned threads = 1;
    std::optional<Precision> prec;
    std::optional<i64> N;
    bool allow_uncertified = false;
};

struct EvaluationReport {
    Integer n_user;
    Integer n_internal;
    SeriesForm form = SeriesForm::normalized;
    i64 N = 0;
    Precision prec = 0;
    Integer value;
    Real residual;
    Real bound;
    bool certified = true;
    i64 terms_nonzero = 0;
    int retries = 0;
    double wall_time = 0;
    double ak_time = 0;
    KloostermanStats stats;
};

EvaluationReport evaluate(const NormalizedQuotient& nq, const Integer& n_user, const EvaluateOptions& opts = {});

// Sum of the first N series terms for the given form, at precision prec.
Real partial_sum(const NormalizedQuotient& nq, SeriesForm form, const Integer& n_user, i64 N, Precision prec,
                 AkCache& cache);
// Same, for the normalized quotient at an arbitrary internal index.
Real partial_sum_internal(const NormalizedQuotient& nq, const Integer& n_internal, i64 N, Precision prec,
                          AkCache& cache);

}  // namespace etaq
