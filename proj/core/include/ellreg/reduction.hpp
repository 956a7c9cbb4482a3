#pragma once

#include <vector>

#include "ellreg/curve.hpp"
#include "ellreg/errreal.hpp"
#include "ellreg/factor.hpp"
#include "ellreg/minimal.hpp"

namespace ellreg {

enum class ReductionKind { Good, Multiplicative, Additive };

const char* reduction_kind_name(ReductionKind k);

struct ReductionType {
    Int prime;
    ReductionKind kind = ReductionKind::Good;
};

// Good  <=> p does not divide disc_min
// Mult  <=> p | disc_min, p does not divide c4_min   (semi-stable bad)
// Add   <=> p | disc_min, p | c4_min                 (unstable bad)
ReductionType classify_reduction(const MinimalModelResult& min, const Int& p);

struct ConductorNorms {
    ErrReal log_N0;    // sum of log p over bad primes
    ErrReal log_Nst;   // multiplicative part
    ErrReal log_Nuns;  // additive part
    std::vector<ReductionType> factorization;  // bad primes with their kinds
};

ConductorNorms conductor_norms(const MinimalModelResult& min, long prec,
                               const FactorConfig& cfg = {});

}  // namespace ellreg
