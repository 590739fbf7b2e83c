// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "etaq/real.hpp"

#include <doctest.h>

#include <random>

namespace etaq::test {

inline bool near(const Real& a, const Real& b, long log2_tol) { return abs(a - b) <= exp2i(log2_tol, 64); }

inline bool near(const Complex& a, const Complex& b, long log2_tol) {
    return near(a.re, b.re, log2_tol) && near(a.im, b.im, log2_tol);
}

inline Real real(double v, Precision p = 128) { return Real(v, p); }

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(20240611);
    return g;
}

inline long uniform(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng());
}

}  // namespace etaq::test
