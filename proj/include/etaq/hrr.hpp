// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "etaq/kloosterman.hpp"
#include "etaq/quotient.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

namespace etaq {

class InternalInconsistency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// A_k(n) = i^prefactor_exp * S_chi_rho(a - n, b; k).
struct HrrReduction {
    i64 k = 1;
    i64 a = 0;
    i64 b = 0;
    int prefactor_exp = 0;
    QuadCharacter chi_rho;
    int c_mod4 = 0;  // exponent c of i^c before folding in psi(1)
    int psi1 = 1;
};

struct MultSplit {
    Integer ell;
    i64 n1;
    i64 n2;
};

// The functions below that take an EtaQuotientSpec use its pairs as given;
// the Kloosterman-based ones require 24 | m for every m.

// A_k(n) summed literally from exact Dedekind sums.
Real akn_definition(const EtaQuotientSpec& spec, i64 k, const Integer& n, Precision prec);
// A_k(n) for n = 0..k-1 from one table of phases.
std::vector<Real> akn_definition_period(const EtaQuotientSpec& spec, i64 k, Precision prec);

HrrReduction hrr_reduce(const EtaQuotientSpec& base, i64 k);
Real akn_kloosterman(const EtaQuotientSpec& base, i64 k, const Integer& n, Precision prec,
                     KloostermanStats* stats = nullptr);
Real akn_from_reduction(const HrrReduction& red, const Integer& n, Precision prec,
                        KloostermanStats* stats = nullptr);

Integer u_bridge(const EtaQuotientSpec& base, i64 k1, i64 k2);
std::optional<MultSplit> mult_split(const EtaQuotientSpec& base, i64 k1, i64 k2, const Integer& n);

// Thread-safe memo of reductions and of A_q values keyed by (q, n mod q).
class AkCache {
public:
    explicit AkCache(EtaQuotientSpec base);

    const EtaQuotientSpec& base() const { return base_; }
    std::shared_ptr<const HrrReduction> reduction(i64 k);
    std::optional<Real> lookup(i64 k, i64 r, Precision prec) const;
    void store(i64 k, i64 r, const Real& value);
    std::size_t size() const;

    KloostermanStats stats() const;
    void add_stats(const KloostermanStats& s);

private:
    EtaQuotientSpec base_;
    mutable std::mutex mu_;
    std::unordered_map<i64, std::shared_ptr<const HrrReduction>> reductions_;
    std::map<std::pair<i64, i64>, Real> values_;
    KloostermanStats stats_;
};

Real akn_algorithm1(const EtaQuotientSpec& base, i64 k, const Integer& n, Precision prec, AkCache& cache);

// A_k0(n) of the original quotient through the normalized one:
// phi(k0) / phi(m0 k0) * A_{m0 k0}(m0 n).
Real akn_lifted(const NormalizedQuotient& nq, i64 k0, const Integer& n_user, Precision prec, AkCache& cache);

}  // namespace etaq
