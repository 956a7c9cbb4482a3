#pragma once

#include <utility>
#include <vector>

#include "ellreg/analytic.hpp"
#include "ellreg/factor.hpp"
#include "ellreg/minimal.hpp"
#include "ellreg/reduction.hpp"

namespace ellreg {

struct CanonicalHeight {
    ErrReal value;       // normalization: (1/2) lim 4^-n h_x(2^n P)
    CurvePoint point;    // on the minimal model
    bool torsion = false;
};

// log max(|p|, |q|) for x(P) = p/q in lowest terms
ErrReal naive_height(const CurvePoint& P, long prec = 128);

// Canonical heights by local decomposition: the archimedean Neron function
// evaluated through the period lattice plus exact reduction-type corrections
// at the bad primes. All points live on the minimal model.
class HeightEngine {
  public:
    HeightEngine(MinimalModelResult min, long prec, const FactorConfig& fc = {});
    HeightEngine(MinimalModelResult min, AnalyticContext ctx, const FactorConfig& fc = {});

    const AnalyticContext& ctx() const { return ctx_; }
    const MinimalModelResult& minimal() const { return min_; }

    ErrReal height(const CurvePoint& P) const;
    ErrReal pairing(const CurvePoint& P, const CurvePoint& Q) const;

    // archimedean canonical local height (exposed for the duplication-law tests)
    ErrReal lambda_archimedean(const CurvePoint& Q) const;
    // total non-archimedean contribution; Q must reduce to a nonsingular
    // point at every additive prime
    ErrReal lambda_nonarchimedean_total(const CurvePoint& Q) const;
    // smallest k in {1,2,3,4,6,12} with kP nonsingular at all additive primes
    int multiplier_clearing_additive(const CurvePoint& P) const;

    bool singular_reduction(const CurvePoint& Q, const Int& p) const;

  private:
    MinimalModelResult min_;
    AnalyticContext ctx_;
    std::vector<std::pair<Int, int>> disc_fact_;
    long prec_;
};

CanonicalHeight canonical_height(const MinimalModelResult& min, const CurvePoint& P, double tol,
                                 long max_bits = 4096);

// (1/2) 4^-n h_x(2^n P) with a rigorous enclosure of hhat_x - h_x derived
// from the duplication polynomials of the minimal model
ErrReal canonical_height_doubling_oracle(const MinimalModelResult& min, const CurvePoint& P,
                                         int n_steps, long prec = 192);

ErrReal height_pairing(const MinimalModelResult& min, const CurvePoint& P, const CurvePoint& Q,
                       double tol, long max_bits = 4096);

}  // namespace ellreg
