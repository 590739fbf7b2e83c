// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "etaq/numeric.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace etaq {

struct EtaFactor {
    i64 m;
    i64 delta;
    bool operator==(const EtaFactor&) const = default;
};

// eta^delta(q) = prod over pairs of eta(q^m)^delta_m; pairs sorted by m.
struct EtaQuotientSpec {
    std::vector<EtaFactor> pairs;
    std::string label;

    std::string to_string() const;
    bool operator==(const EtaQuotientSpec& o) const { return pairs == o.pairs; }
};

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what + " at position " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class DuplicateModulus : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ZeroExponent : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Validates (m >= 1, delta != 0, distinct m) and sorts.
EtaQuotientSpec make_spec(std::vector<EtaFactor> pairs, std::string label = {});
// Grammar: PAIR ("," PAIR)*, PAIR := m ":" d.
EtaQuotientSpec parse_spec(std::string_view text);
// {"eta": [[m, d], ...], "label": "..."}
EtaQuotientSpec spec_from_json(std::string_view json_text);
// Spec string, inline JSON object, or path to a JSON config file.
EtaQuotientSpec load_spec(std::string_view arg);

struct NormalizedQuotient {
    EtaQuotientSpec base;      // every m divisible by 24
    i64 shift = 1;             // m0
    EtaQuotientSpec original;
};

NormalizedQuotient normalize(const EtaQuotientSpec& spec);
Integer index_map(const NormalizedQuotient& nq, const Integer& n_user);
// Inverse of index_map; nullopt when m0 does not divide n_internal.
std::optional<Integer> index_unmap(const NormalizedQuotient& nq, const Integer& n_internal);

struct QuotientConstants {
    Rational c1;
    Rational n0;
    i64 period = 1;                   // M = lcm of the m values
    std::vector<Rational> c2_squared;  // index k - 1 for k = 1..M
    std::vector<Rational> c3;
    std::vector<Rational> c4;
    Rational C2_squared;
    Rational C3;

    const Rational& c2_squared_at(i64 k) const { return c2_squared[slot(k)]; }
    const Rational& c3_at(i64 k) const { return c3[slot(k)]; }
    const Rational& c4_at(i64 k) const { return c4[slot(k)]; }
    Real c2_at(i64 k, Precision prec) const;
    Real C2(Precision prec) const;

private:
    std::size_t slot(i64 k) const { return static_cast<std::size_t>((k - 1) % period); }
};

// Direct evaluation of the defining formulas at a single k (no periodicity).
Rational c2_squared_direct(const EtaQuotientSpec& spec, i64 k);
Rational c3_direct(const EtaQuotientSpec& spec, i64 k);
Rational c4_direct(const EtaQuotientSpec& spec, i64 k);

QuotientConstants constants(const EtaQuotientSpec& spec);
QuotientConstants constants(const NormalizedQuotient& nq);

struct HypothesisReport {
    bool c1_positive = false;
    bool c4_nonnegative = false;
    bool n0_integral = false;
    std::vector<i64> negative_c4;        // k in 1..M with c4(k) < 0
    std::vector<i64> positive_c3;        // k in 1..M with c3(k) > 0

    // Sussman's hypotheses (c1 > 0 and c4 >= 0); n0 integrality is reported
    // separately since only the normalized form needs it.
    bool ok() const { return c1_positive && c4_nonnegative; }
    std::string failure() const;
};

HypothesisReport check_hypotheses(const QuotientConstants& consts);

}  // namespace etaq
