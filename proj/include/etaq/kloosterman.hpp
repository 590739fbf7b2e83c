// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "etaq/numeric.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace etaq {

// Real quadratic character: product of Legendre symbols (h/p) over
// odd_primes times the Kronecker symbol (d2/h).
struct QuadCharacter {
    std::vector<i64> odd_primes;  // nontrivial odd components, sorted, distinct
    int d2 = 1;                   // one of 1, -1, 2, -2
    i64 modulus = 1;

    bool trivial() const { return odd_primes.empty() && d2 == 1; }
    // Restriction to the p-primary part, as a character mod p^alpha.
    QuadCharacter local(i64 p, int alpha) const;
    // Exponent of p in the conductor.
    int conductor_exponent(i64 p) const;
    // Discriminant D with chi(h) = (D/h) on odd units.
    i64 discriminant() const;
    std::string to_string() const;
    bool operator==(const QuadCharacter&) const = default;
};

QuadCharacter make_character(std::vector<i64> odd_primes, int d2, i64 modulus);

struct KloostermanQuery {
    i64 a = 0;
    i64 b = 0;
    i64 k = 1;
    QuadCharacter chi;
};

class HypothesisViolated : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SelbergResult {
    Integer scalar;
    std::optional<KloostermanQuery> reduced;
};

// Caller-owned diagnostics; pass nullptr when not needed.
struct KloostermanStats {
    std::uint64_t prime_powers = 0;
    std::uint64_t closed_forms = 0;
    std::uint64_t definition_fallbacks = 0;
};

int char_eval(const QuadCharacter& chi, i64 h);
Complex kloosterman_definition(const KloostermanQuery& q, Precision prec);
SelbergResult selberg_reduce(i64 a, i64 b, i64 p, int alpha, const QuadCharacter& chi);
// S_chi(a, 1; p^alpha).
Complex prime_power_eval(i64 a, i64 p, int alpha, const QuadCharacter& chi, Precision prec,
                         KloostermanStats* stats = nullptr);
Complex kloosterman_fast(const KloostermanQuery& q, Precision prec, KloostermanStats* stats = nullptr);

// Sum over residues j of w[j] * exp(2 pi i j / q), by a Chebyshev
// recurrence; w.size() == q.
Complex weighted_root_sum(const std::vector<i64>& w, Precision prec);

}  // namespace etaq
