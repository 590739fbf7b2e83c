// SPDX-License-Identifier: Apache-2.0
#include "etaq/oracle.hpp"

#include "etaq/numeric.hpp"

#include <stdexcept>

namespace etaq {

TruncatedSeries series_one(i64 N) {
    TruncatedSeries s(N);
    s[0] = 1;
    return s;
}

TruncatedSeries euler_product(i64 N) {
    if (N < 0) throw std::invalid_argument("euler_product: N must be >= 0");
    TruncatedSeries s(N);
    s[0] = 1;
    // sum_j (-1)^j q^{j(3j-1)/2}, j = +-1, +-2, ...
    for (i64 j = 1;; ++j) {
        i64 p1 = j * (3 * j - 1) / 2, p2 = j * (3 * j + 1) / 2;
        if (p1 > N) break;
        int sign = j % 2 ? -1 : 1;
        s[p1] += sign;
        if (p2 <= N) s[p2] += sign;
    }
    return s;
}

TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b, i64 N) {
    TruncatedSeries out(N);
    const i64 na = std::min(a.order(), N), nb = std::min(b.order(), N);
    for (i64 i = 0; i <= na; ++i) {
        if (a[i] == 0) continue;
        for (i64 j = 0; j <= nb && i + j <= N; ++j) {
            if (b[j] == 0) continue;
            mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
    return out;
}

TruncatedSeries series_inv(const TruncatedSeries& s, i64 N) {
    if (s.coeffs.empty() || (s[0] != 1 && s[0] != -1)) throw NotInvertible("series_inv: constant term must be +-1");
    TruncatedSeries out(N);
    const int c0 = s[0] == 1 ? 1 : -1;
    out[0] = c0;
    const i64 ns = s.order();
    for (i64 n = 1; n <= N; ++n) {
        Integer acc = 0;
        for (i64 j = 1; j <= std::min(n, ns); ++j) {
            if (s[j] == 0) continue;
            mpz_addmul(acc.get_mpz_t(), s[j].get_mpz_t(), out[n - j].get_mpz_t());
        }
        out[n] = -acc * c0;
    }
    return out;
}

TruncatedSeries series_pow(const TruncatedSeries& s, const Integer& e, i64 N) {
    TruncatedSeries base = e < 0 ? series_inv(s, N) : s;
    Integer k = abs(e);
    TruncatedSeries result = series_one(N);
    bool first = true;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) {
            result = first ? base : series_mul(result, base, N);
            first = false;
        }
        k >>= 1;
        if (k > 0) base = series_mul(base, base, N);
    }
    if (first) return result;
    result.coeffs.resize(static_cast<std::size_t>(N + 1), Integer(0));
    return result;
}

TruncatedSeries series_dilate(const TruncatedSeries& s, i64 m, i64 N) {
    if (m < 1) throw std::invalid_argument("series_dilate: m must be >= 1");
    TruncatedSeries out(N);
    for (i64 j = 0; j <= s.order() && j * m <= N; ++j) out[j * m] = s[j];
    return out;
}

std::pair<Integer, TruncatedSeries> etaq_series(const EtaQuotientSpec& spec, i64 N) {
    if (N < 0) throw std::invalid_argument("etaq_series: N must be >= 0");
    TruncatedSeries acc = series_one(N);
    Integer sum_md = 0;
    for (const auto& f : spec.pairs) {
        sum_md += Integer(static_cast<long>(f.m)) * f.delta;
        TruncatedSeries e = euler_product(N / f.m);
        TruncatedSeries p = series_pow(e, Integer(static_cast<long>(f.delta)), N / f.m);
        acc = series_mul(acc, series_dilate(p, f.m, N), N);
    }
    return {Integer(-sum_md), std::move(acc)};
}

}  // namespace etaq
