// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "etaq/quotient.hpp"

#include <utility>
#include <vector>

namespace etaq {

// Coefficients of q^0..q^N.
struct TruncatedSeries {
    std::vector<Integer> coeffs;

    TruncatedSeries() = default;
    explicit TruncatedSeries(i64 N) : coeffs(static_cast<std::size_t>(N + 1), Integer(0)) {}

    i64 order() const { return static_cast<i64>(coeffs.size()) - 1; }
    Integer& operator[](i64 j) { return coeffs[static_cast<std::size_t>(j)]; }
    const Integer& operator[](i64 j) const { return coeffs[static_cast<std::size_t>(j)]; }
    bool operator==(const TruncatedSeries&) const = default;
};

TruncatedSeries series_one(i64 N);
// prod_{j >= 1} (1 - q^j) mod q^{N+1}
TruncatedSeries euler_product(i64 N);
TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b, i64 N);
// Constant term must be +1 or -1.
TruncatedSeries series_inv(const TruncatedSeries& s, i64 N);
TruncatedSeries series_pow(const TruncatedSeries& s, const Integer& e, i64 N);
// s(q^m)
TruncatedSeries series_dilate(const TruncatedSeries& s, i64 m, i64 N);

// (24 n0, coefficients of prod (q^m; q^m)^delta through q^N).
std::pair<Integer, TruncatedSeries> etaq_series(const EtaQuotientSpec& spec, i64 N);

}  // namespace etaq
