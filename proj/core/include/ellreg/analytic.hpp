#pragma once

#include <array>
#include <string>

#include "ellreg/errreal.hpp"
#include "ellreg/minimal.hpp"
#include "ellreg/verdict.hpp"

namespace ellreg {

// Roots of the normalized cubic 4X^3 - g2 X - g3 (g2 = c4/12, g3 = c6/216),
// certified by exact-rational sign brackets. For positive discriminant all
// three are real with e1 > e2 > e3; otherwise e1 is real and e3 = conj(e2),
// Im(e2) > 0.
struct CubicRoots {
    bool three_real = false;
    ErrComplex e1, e2, e3;
};

CubicRoots cubic_roots(const WeierstrassCurve& E, long prec);

// Basis of the period lattice of the invariant differential, Im(w2/w1) > 0.
struct PeriodBasis {
    ErrComplex omega1, omega2;
};

PeriodBasis period_lattice(const MinimalModelResult& min, long prec);
PeriodBasis period_lattice(const MinimalModelResult& min, const CubicRoots& roots, long prec);

// tau in the SL2(Z) fundamental domain together with the unimodular matrix
// [[a,b],[c,d]] that carried the input there: tau = (a t + b)/(c t + d).
struct TauPoint {
    ErrReal re, im;
    bool reduced = false;
    std::array<long, 4> unimodular{1, 0, 0, 1};  // a, b, c, d
};

TauPoint reduce_tau(const ErrComplex& tau);

// log |Delta(tau)| for reduced tau, tail bound folded into the radius
ErrReal log_modular_discriminant(const TauPoint& tau);

struct FaltingsReport {
    TauPoint tau;
    ErrReal log_mod_disc;   // log |Delta(tau)|
    ErrReal hF_plus;
    ErrReal hF_classical;   // hF_plus - (1/2) log(2 pi^2)
    ErrReal rho_sq_inv;     // = Im tau for reduced tau
    std::string curve_label;
};

// Shared per-curve analytic state reused by heights and the pipeline.
struct AnalyticContext {
    long prec = 0;
    CubicRoots roots;
    PeriodBasis basis;
    TauPoint tau;
    ErrComplex omega1_reduced;  // c*w2 + d*w1, the basis vector matching tau
    ErrReal log_mod_disc;       // at the reduced tau
};

AnalyticContext make_analytic_context(const MinimalModelResult& min, long prec);

FaltingsReport faltings_report(const MinimalModelResult& min, const AnalyticContext& ctx,
                               const std::string& label);
// precision ladder: doubles working bits until hF_plus.err <= tol
FaltingsReport faltings_height(const MinimalModelResult& min, double tol, long max_bits,
                               const std::string& label);

ErrReal injectivity_diameter(const TauPoint& tau);

// rho^-2 <= 16 hF+ + 39 g at g = 1
Verdict matrix_lemma_check(const FaltingsReport& report);

// log|disc_min| + 12 log|w1_red| - 12 log(2 pi) - log|Delta(tau)|;
// vanishes identically, an independent cross-check of periods vs q-series
ErrReal discriminant_identity_residual(const MinimalModelResult& min, const AnalyticContext& ctx);

}  // namespace ellreg
