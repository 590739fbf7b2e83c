// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "etaq/real.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace etaq {

using i64 = std::int64_t;

class NotInvertible : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct EgcdResult {
    Integer g, x, y;
};

struct Congruence {
    Integer r;  // residue
    Integer m;  // modulus >= 1
};

struct PrimePower {
    i64 p;
    int alpha;
    i64 q;  // p^alpha
};

EgcdResult egcd(const Integer& a, const Integer& b);
Integer mod_inverse(const Integer& a, const Integer& m);
// Solution r mod lcm of all moduli, or nullopt if the system is incompatible.
std::optional<Congruence> crt(const std::vector<Congruence>& residues);
int kronecker(const Integer& a, const Integer& n);
int valuation(const Integer& n, const Integer& p);
std::optional<Integer> sqrt_mod_prime_power(const Integer& a, const Integer& p, int alpha);
Rational dedekind_sum(const Integer& h, const Integer& k);
Rational dedekind_sum_naive(const Integer& h, const Integer& k);

// Word-size variants for the hot paths; moduli stay below 2^31 so that
// products fit in 64 bits.
i64 mod(i64 a, i64 m);
i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
i64 mod_inverse(i64 a, i64 m);
i64 mul_mod(i64 a, i64 b, i64 m);
i64 pow_mod(i64 a, i64 e, i64 m);
i64 ipow(i64 b, int e);
int kronecker(i64 a, i64 n);
int valuation(i64 n, i64 p);
std::optional<i64> sqrt_mod_prime_power(i64 a, i64 p, int alpha);
std::optional<Congruence> crt_small(const std::vector<std::pair<i64, i64>>& residues);
// Trial division; k values in practice are far below 2^40.
std::vector<PrimePower> factorize(i64 n);
i64 euler_phi(i64 n);

}  // namespace etaq
