#include "ellreg/analytic.hpp"

#include <cmath>

namespace ellreg {

const char* verdict_name(Verdict::State s) {
    switch (s) {
        case Verdict::State::Pass: return "Pass";
        case Verdict::State::Fail: return "Fail";
        case Verdict::State::Inconclusive: return "Inconclusive";
        case Verdict::State::Skipped: return "Skipped";
        case Verdict::State::Errored: return "Errored";
    }
    return "?";
}

namespace {

Rat eval_cubic(const Rat& g2, const Rat& g3, const Rat& x) {
    return 4 * x * x * x - g2 * x - g3;
}

// Newton refinement of a simple real root from a double seed, then a
// certified enclosure from exact-rational sign changes at dyadic endpoints.
ErrReal refine_real_root(const Rat& g2, const Rat& g3, double seed, long prec) {
    long work = prec + 32;
    mpfr_t x, fx, dfx, t, g2f, g3f;
    mpfr_init2(x, work);
    mpfr_init2(fx, work);
    mpfr_init2(dfx, work);
    mpfr_init2(t, work);
    mpfr_init2(g2f, work);
    mpfr_init2(g3f, work);
    mpfr_set_d(x, seed, MPFR_RNDN);
    mpfr_set_q(g2f, Rat(g2).get_mpq_t(), MPFR_RNDN);
    mpfr_set_q(g3f, Rat(g3).get_mpq_t(), MPFR_RNDN);
    int newton_steps = 3;
    for (long acc = 48; acc < work; acc *= 2) ++newton_steps;
    for (int i = 0; i < newton_steps; ++i) {
        mpfr_sqr(t, x, MPFR_RNDN);
        mpfr_mul_ui(dfx, t, 12, MPFR_RNDN);
        mpfr_sub(dfx, dfx, g2f, MPFR_RNDN);
        mpfr_mul(fx, t, x, MPFR_RNDN);
        mpfr_mul_ui(fx, fx, 4, MPFR_RNDN);
        mpfr_mul(t, g2f, x, MPFR_RNDN);
        mpfr_sub(fx, fx, t, MPFR_RNDN);
        mpfr_sub(fx, fx, g3f, MPFR_RNDN);
        mpfr_div(fx, fx, dfx, MPFR_RNDN);
        mpfr_sub(x, x, fx, MPFR_RNDN);
    }
    ErrReal mid = ErrReal::from_mpfr(x, prec);
    long scale = mpfr_zero_p(x) ? 0 : mpfr_get_exp(x);
    mpfr_clear(x);
    mpfr_clear(fx);
    mpfr_clear(dfx);
    mpfr_clear(t);
    mpfr_clear(g2f);
    mpfr_clear(g3f);
    Rat xm = mid.mid_rational();
    auto two_pow = [](long e) {
        mpz_class p2;
        mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
        return e >= 0 ? Rat(p2) : Rat(Int(1), Int(p2));
    };
    for (long g = prec - 16; g >= 8; g /= 2) {
        Rat d2 = two_pow(scale - g);
        if (sgn(eval_cubic(g2, g3, xm - d2)) * sgn(eval_cubic(g2, g3, xm + d2)) < 0) {
            return mid.widened(ErrReal::from_rational(d2, 64).upper());
        }
    }
    throw precision_exhausted("real root enclosure failed");
}

}  // namespace

CubicRoots cubic_roots(const WeierstrassCurve& E, long prec) {
    Rat g2 = E.c4 / 12;
    Rat g3 = E.c6 / 216;
    double g2d = g2.get_d(), g3d = g3.get_d();
    double bound = 1.0 + std::max(std::abs(g2d) / 4.0, std::abs(g3d) / 4.0);
    auto f = [&](double x) { return 4 * x * x * x - g2d * x - g3d; };
    auto bisect = [&](double lo, double hi) {
        for (int i = 0; i < 120; ++i) {
            double m = 0.5 * (lo + hi);
            if ((f(lo) <= 0) == (f(m) <= 0))
                lo = m;
            else
                hi = m;
        }
        return 0.5 * (lo + hi);
    };
    CubicRoots out;
    if (E.disc > 0) {
        out.three_real = true;
        double xc = std::sqrt(std::max(g2d, 0.0) / 12.0);
        ErrReal e1 = refine_real_root(g2, g3, bisect(xc, bound), prec);
        ErrReal e2 = refine_real_root(g2, g3, bisect(-xc, xc), prec);
        ErrReal e3 = refine_real_root(g2, g3, bisect(-bound, -xc), prec);
        out.e1 = ErrComplex::from_real(e1);
        out.e2 = ErrComplex::from_real(e2);
        out.e3 = ErrComplex::from_real(e3);
    } else {
        ErrReal e1 = refine_real_root(g2, g3, bisect(-bound, bound), prec);
        // conjugate pair: -e1/2 +- i sqrt(3 e1^2 - g2)/2
        ErrReal g2b = ErrReal::from_rational(g2, prec);
        ErrReal beta = ((e1 * e1).mul_si(3) - g2b).sqrt().div_si(2);
        ErrReal rho = (-e1).div_si(2);
        out.e1 = ErrComplex::from_real(e1);
        out.e2 = ErrComplex{rho, beta};
        out.e3 = ErrComplex{rho, -beta};
    }
    return out;
}

PeriodBasis period_lattice(const MinimalModelResult& min, long prec) {
    return period_lattice(min, cubic_roots(min.curve, prec), prec);
}

PeriodBasis period_lattice(const MinimalModelResult& /*min*/, const CubicRoots& roots, long prec) {
    ErrComplex zero{ErrReal::zero(prec), ErrReal::zero(prec)};
    const ErrComplex &e1 = roots.e1, &e2 = roots.e2, &e3 = roots.e3;
    ErrReal two = ErrReal::from_si(2, prec);
    ErrComplex w1 = carlson_rf(zero, e1 - e2, e1 - e3).mul_real(two);
    ErrComplex w2;
    if (roots.three_real) {
        // second period is purely imaginary: 2 i R_F(e1-e3, e2-e3, 0)
        ErrComplex r2 = carlson_rf(e1 - e3, e2 - e3, zero).mul_real(two);
        w2 = ErrComplex{-r2.im, r2.re};
    } else {
        w2 = carlson_rf(zero, e2 - e1, e2 - e3).mul_real(two);
    }
    // w1 is real for curves over Q; fold any residual imaginary part into the radius
    w1 = ErrComplex{w1.re.widened(w1.im), ErrReal::zero(prec)};
    ErrComplex tau = w2 / w1;
    if (tau.im.definitely_negative())
        w2 = -w2;
    else if (!tau.im.definitely_positive())
        throw precision_exhausted("period basis orientation uncertain");
    return {w1, w2};
}

TauPoint reduce_tau(const ErrComplex& tau_in) {
    long prec = std::max(tau_in.re.precision(), tau_in.im.precision());
    if (!tau_in.im.definitely_positive())
        throw error("reduce_tau requires Im tau > 0 beyond the radius");
    ErrReal re = tau_in.re, im = tau_in.im;
    long a = 1, b = 0, c = 0, d = 1;
    ErrReal one = ErrReal::from_si(1, prec);
    auto apply_S = [&]() {
        ErrReal n2 = re * re + im * im;
        ErrReal nre = (-re) / n2;
        ErrReal nim = im / n2;
        re = nre;
        im = nim;
        long na = -c, nb = -d;
        c = a;
        d = b;
        a = na;
        b = nb;
    };
    bool done = false;
    for (int iter = 0; iter < 20000 && !done; ++iter) {
        long n = re.round_to_long();
        if (n != 0) {
            re = re.add_si(-n);
            a -= n * c;
            b -= n * d;
        }
        ErrReal norm = re * re + im * im;
        if (norm.upper().definitely_lt(one))
            apply_S();
        else if (n == 0)
            done = true;
    }
    if (!done) throw boundary_ambiguity("tau reduction did not settle");
    // Boundary ties resolve to Re = +1/2 and to the Re >= 0 half of the arc,
    // so CM lattices land on their conventional representatives.
    long tie_exp = -(2 * prec) / 5;
    {
        ErrReal gap = (re + ErrReal::from_rational(Rat(1, 2), prec)).abs();
        bool near_half = gap.contains_zero() || gap.mid_exponent() <= tie_exp;
        if (mpfr_sgn(re.mid_raw()) < 0 && near_half) {
            re = re.add_si(1);
            a += c;
            b += d;
        }
    }
    {
        ErrReal gap = (re * re + im * im - one).abs();
        bool on_arc = gap.contains_zero() || gap.mid_exponent() <= tie_exp;
        bool re_interior = !re.contains_zero() && re.mid_exponent() > tie_exp;
        if (on_arc && re_interior && mpfr_sgn(re.mid_raw()) < 0) apply_S();
    }
    TauPoint out;
    out.re = re;
    out.im = im;
    out.unimodular = {a, b, c, d};
    // invariants: |re| <= 1/2 + err and re^2 + im^2 >= 1 - err
    ErrReal half = ErrReal::from_rational(Rat(1, 2), prec);
    bool re_ok = !(re.abs().lower() - half).definitely_positive();
    bool norm_ok = !(re * re + im * im).upper().definitely_lt(one);
    if (!re_ok || !norm_ok) throw boundary_ambiguity("reduced tau fails domain certificates");
    out.reduced = true;
    return out;
}

ErrReal log_modular_discriminant(const TauPoint& tau) {
    long prec = tau.im.precision();
    ErrReal two_pi = ErrReal::pi(prec).mul_si(2);
    ErrReal log_abs_q = -(two_pi * tau.im);
    ErrReal abs_q = log_abs_q.exp();
    ErrReal q_up = abs_q.upper();
    ErrReal one = ErrReal::from_si(1, prec);
    if (!(one - q_up).definitely_positive())
        throw precision_exhausted("|q| not certified below 1");
    ErrComplex q{abs_q * (two_pi * tau.re).cos(), abs_q * (two_pi * tau.re).sin()};
    ErrReal sum = log_abs_q;
    ErrComplex qn = q;
    ErrComplex one_c{one, ErrReal::zero(prec)};
    ErrReal target = ErrReal::from_si(1, 64).mul_2si(-prec - 4);
    ErrReal tail_den = ((one - q_up) * (one - q_up)).lower();
    for (int n = 1; n <= 4 * static_cast<int>(prec) + 64; ++n) {
        sum = sum + (one_c - qn).abs().log().mul_si(24);
        qn = qn * q;
        ErrReal tail = (q_up.pow_si(n + 1).mul_si(24) / tail_den).upper();
        if (tail.definitely_lt(target) || !tail.definitely_positive()) {
            return sum.widened(tail);
        }
    }
    throw precision_exhausted("q-series tail did not clear the target");
}

AnalyticContext make_analytic_context(const MinimalModelResult& min, long prec) {
    AnalyticContext ctx;
    ctx.prec = prec;
    ctx.roots = cubic_roots(min.curve, prec);
    ctx.basis = period_lattice(min, ctx.roots, prec);
    ctx.tau = reduce_tau(ctx.basis.omega2 / ctx.basis.omega1);
    const auto& m = ctx.tau.unimodular;
    ErrReal cs = ErrReal::from_si(m[2], prec), ds = ErrReal::from_si(m[3], prec);
    ctx.omega1_reduced = ctx.basis.omega2.mul_real(cs) + ctx.basis.omega1.mul_real(ds);
    ctx.log_mod_disc = log_modular_discriminant(ctx.tau);
    return ctx;
}

FaltingsReport faltings_report(const MinimalModelResult& min, const AnalyticContext& ctx,
                               const std::string& label) {
    long prec = ctx.prec;
    FaltingsReport rep;
    rep.tau = ctx.tau;
    rep.log_mod_disc = ctx.log_mod_disc;
    ErrReal log_disc = ErrReal::log_integer(abs(min.disc_min), prec);
    ErrReal log_2im = ctx.tau.im.mul_si(2).log();
    rep.hF_plus = (log_disc - ctx.log_mod_disc - log_2im.mul_si(6)).div_si(12);
    ErrReal two_pi_sq = ErrReal::pi(prec).pow_si(2).mul_si(2);
    rep.hF_classical = rep.hF_plus - two_pi_sq.log().div_si(2);
    rep.rho_sq_inv = ctx.tau.im;
    rep.curve_label = label;
    return rep;
}

FaltingsReport faltings_height(const MinimalModelResult& min, double tol, long max_bits,
                               const std::string& label) {
    for (long bits = 128; bits <= max_bits; bits *= 2) {
        try {
            AnalyticContext ctx = make_analytic_context(min, bits);
            FaltingsReport rep = faltings_report(min, ctx, label);
            if (rep.hF_plus.rad_double() <= tol) return rep;
        } catch (const precision_exhausted&) {
        } catch (const boundary_ambiguity&) {
        } catch (const interval_contains_zero&) {
        }
    }
    throw precision_exhausted("faltings_height: tolerance unreachable within max bits");
}

ErrReal injectivity_diameter(const TauPoint& tau) {
    return (ErrReal::from_si(1, tau.im.precision()) / tau.im).sqrt();
}

Verdict matrix_lemma_check(const FaltingsReport& report) {
    ErrReal slack = report.hF_plus.mul_si(16).add_si(39) - report.rho_sq_inv;
    return Verdict::from_slack(slack);
}

ErrReal discriminant_identity_residual(const MinimalModelResult& min, const AnalyticContext& ctx) {
    long prec = ctx.prec;
    ErrReal lhs = ErrReal::log_integer(abs(min.disc_min), prec) +
                  ctx.omega1_reduced.log_abs().mul_si(12);
    ErrReal rhs = ErrReal::pi(prec).mul_si(2).log().mul_si(12) + ctx.log_mod_disc;
    return lhs - rhs;
}

}  // namespace ellreg
