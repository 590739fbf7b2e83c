// SPDX-License-Identifier: Apache-2.0
#include "etaq/quotient.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace etaq {

std::string EtaQuotientSpec::to_string() const {
    std::string out;
    for (const auto& f : pairs) {
        if (!out.empty()) out += ",";
        out += std::to_string(f.m) + ":" + std::to_string(f.delta);
    }
    return out;
}

EtaQuotientSpec make_spec(std::vector<EtaFactor> pairs, std::string label) {
    if (pairs.empty()) throw std::invalid_argument("eta-quotient must have at least one factor");
    for (const auto& f : pairs) {
        if (f.m < 1) throw std::invalid_argument("eta-quotient modulus must be >= 1");
        if (f.delta == 0) throw ZeroExponent("zero exponent for m = " + std::to_string(f.m));
    }
    std::sort(pairs.begin(), pairs.end(), [](const EtaFactor& x, const EtaFactor& y) { return x.m < y.m; });
    for (std::size_t i = 1; i < pairs.size(); ++i)
        if (pairs[i].m == pairs[i - 1].m) throw DuplicateModulus("duplicate modulus m = " + std::to_string(pairs[i].m));
    return EtaQuotientSpec{std::move(pairs), std::move(label)};
}

namespace {

class SpecParser {
public:
    explicit SpecParser(std::string_view s) : s_(s) {}

    EtaQuotientSpec parse() {
        std::vector<EtaFactor> pairs;
        skip_space();
        if (pos_ == s_.size()) throw ParseError("empty eta-quotient spec", pos_);
        for (;;) {
            i64 m = number(false);
            skip_space();
            expect(':');
            i64 d = number(true);
            pairs.push_back({m, d});
            skip_space();
            if (pos_ == s_.size()) break;
            expect(',');
        }
        return make_spec(std::move(pairs));
    }

private:
    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    void expect(char c) {
        if (pos_ >= s_.size() || s_[pos_] != c)
            throw ParseError(std::string("expected '") + c + "'", pos_);
        ++pos_;
        skip_space();
    }

    i64 number(bool allow_sign) {
        skip_space();
        std::size_t start = pos_;
        bool neg = false;
        if (allow_sign && pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) {
            neg = s_[pos_] == '-';
            ++pos_;
        }
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
            throw ParseError("expected a decimal integer", pos_);
        i64 v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            if (v > (std::numeric_limits<i64>::max() - 9) / 10) throw ParseError("integer too large", start);
            v = v * 10 + (s_[pos_] - '0');
            ++pos_;
        }
        return neg ? -v : v;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

EtaQuotientSpec parse_spec(std::string_view text) { return SpecParser(text).parse(); }

EtaQuotientSpec spec_from_json(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    if (!j.is_object() || !j.contains("eta") || !j["eta"].is_array())
        throw ParseError("JSON config needs an \"eta\" array", 0);
    std::vector<EtaFactor> pairs;
    for (const auto& p : j["eta"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
            throw ParseError("each eta entry must be [m, d] with integers", 0);
        pairs.push_back({p[0].get<i64>(), p[1].get<i64>()});
    }
    std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "";
    return make_spec(std::move(pairs), std::move(label));
}

EtaQuotientSpec load_spec(std::string_view arg) {
    std::size_t first = arg.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && arg[first] == '{') return spec_from_json(arg);
    std::error_code ec;
    std::filesystem::path path{std::string(arg)};
    if (std::filesystem::is_regular_file(path, ec)) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return spec_from_json(ss.str());
    }
    return parse_spec(arg);
}

NormalizedQuotient normalize(const EtaQuotientSpec& spec) {
    i64 m0 = 1;
    for (const auto& f : spec.pairs) m0 = lcm(m0, 24 / gcd(24, f.m));
    std::vector<EtaFactor> base;
    base.reserve(spec.pairs.size());
    for (const auto& f : spec.pairs) base.push_back({f.m * m0, f.delta});
    return NormalizedQuotient{EtaQuotientSpec{std::move(base), spec.label}, m0, spec};
}

Integer index_map(const NormalizedQuotient& nq, const Integer& n_user) {
    return n_user * static_cast<long>(nq.shift);
}

std::optional<Integer> index_unmap(const NormalizedQuotient& nq, const Integer& n_internal) {
    if (n_internal % static_cast<long>(nq.shift) != 0) return std::nullopt;
    return Integer(n_internal / static_cast<long>(nq.shift));
}

Rational c2_squared_direct(const EtaQuotientSpec& spec, i64 k) {
    Rational r = 1;
    for (const auto& f : spec.pairs) {
        Rational base(gcd(f.m, k), f.m);
        base.canonicalize();
        Rational p = 1;
        i64 e = f.delta < 0 ? -f.delta : f.delta;
        for (i64 i = 0; i < e; ++i) p *= base;
        if (f.delta < 0) p = 1 / p;
        r *= p;
    }
    return r;
}

Rational c3_direct(const EtaQuotientSpec& spec, i64 k) {
    Rational r = 0;
    for (const auto& f : spec.pairs) {
        i64 g = gcd(f.m, k);
        Rational t(Integer(static_cast<long>(g)) * g, f.m);
        t.canonicalize();
        r -= t * f.delta;
    }
    return r;
}

Rational c4_direct(const EtaQuotientSpec& spec, i64 k) {
    std::optional<Rational> mn;
    for (const auto& f : spec.pairs) {
        i64 g = gcd(f.m, k);
        Rational t(Integer(static_cast<long>(g)) * g, f.m);
        t.canonicalize();
        if (!mn || t < *mn) mn = t;
    }
    return *mn - c3_direct(spec, k) / 24;
}

Real QuotientConstants::c2_at(i64 k, Precision prec) const { return sqrt(Real(c2_squared_at(k), prec)); }

Real QuotientConstants::C2(Precision prec) const { return sqrt(Real(C2_squared, prec)); }

QuotientConstants constants(const EtaQuotientSpec& spec) {
    QuotientConstants c;
    i64 sum_d = 0;
    Integer sum_md = 0;
    c.period = 1;
    for (const auto& f : spec.pairs) {
        sum_d += f.delta;
        sum_md += Integer(static_cast<long>(f.m)) * f.delta;
        c.period = lcm(c.period, f.m);
    }
    c.c1 = Rational(-sum_d, 2);
    c.c1.canonicalize();
    c.n0 = Rational(-sum_md, 24);
    c.n0.canonicalize();
    c.c2_squared.reserve(static_cast<std::size_t>(c.period));
    bool any = false;
    for (i64 k = 1; k <= c.period; ++k) {
        c.c2_squared.push_back(c2_squared_direct(spec, k));
        c.c3.push_back(c3_direct(spec, k));
        c.c4.push_back(c4_direct(spec, k));
        if (c.c3.back() > 0) {
            if (!any || c.c2_squared.back() > c.C2_squared) c.C2_squared = c.c2_squared.back();
            if (!any || c.c3.back() > c.C3) c.C3 = c.c3.back();
            any = true;
        }
    }
    return c;
}

QuotientConstants constants(const NormalizedQuotient& nq) { return constants(nq.base); }

std::string HypothesisReport::failure() const {
    std::string out;
    if (!c1_positive) out += "c1 > 0 fails";
    if (!c4_nonnegative) {
        if (!out.empty()) out += "; ";
        out += "c4(k) >= 0 fails at k =";
        for (std::size_t i = 0; i < negative_c4.size() && i < 8; ++i) out += " " + std::to_string(negative_c4[i]);
        if (negative_c4.size() > 8) out += " ...";
    }
    if (ok() && positive_c3.empty()) out += "no k with c3(k) > 0";
    return out;
}

HypothesisReport check_hypotheses(const QuotientConstants& consts) {
    HypothesisReport r;
    r.c1_positive = consts.c1 > 0;
    r.n0_integral = consts.n0.get_den() == 1;
    for (i64 k = 1; k <= consts.period; ++k) {
        if (consts.c4_at(k) < 0) r.negative_c4.push_back(k);
        if (consts.c3_at(k) > 0) r.positive_c3.push_back(k);
    }
    r.c4_nonnegative = r.negative_c4.empty();
    return r;
}

}  // namespace etaq
