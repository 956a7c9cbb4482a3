#include "ellreg/bounds.hpp"

#include <cmath>
#include <cstdlib>

namespace ellreg {

namespace {

ErrReal euler_e(long prec) { return ErrReal::from_si(1, prec).exp(); }

bool mid_ge(const ErrReal& a, const ErrReal& b) {
    return mpfr_cmp(a.mid_raw(), b.mid_raw()) >= 0;
}

}  // namespace

TowerMagnitude tower_normalize(TowerMagnitude t) {
    long prec = t.top.precision() ? t.top.precision() : 64;
    if (t.sign == 0) {
        t.level = 0;
        t.top = ErrReal::zero(prec);
        t.exact_value = Rat(0);
        return t;
    }
    ErrReal e = euler_e(prec);
    ErrReal one = ErrReal::from_si(1, prec);
    bool recip = t.level < 0;
    long lvl = std::labs(t.level);
    ErrReal top = t.top;
    if (lvl == 0) {
        if (mpfr_sgn(top.mid_raw()) <= 0) throw error("tower magnitude must be positive");
        if (!mid_ge(top, one)) {
            recip = true;
            top = one / top;
        }
    }
    for (int guard = 0; guard < 64; ++guard) {
        if (lvl == 0) {
            if (mid_ge(top, e)) {
                top = top.log();
                lvl = 1;
                continue;
            }
            break;
        }
        if (mid_ge(top, e)) {
            top = top.log();
            ++lvl;
        } else if (!mid_ge(top, one)) {
            top = top.exp();
            --lvl;
        } else {
            break;
        }
    }
    if (lvl == 0 && recip) {
        top = one / top;
        recip = false;
    }
    t.level = recip ? -lvl : lvl;
    t.top = top;
    return t;
}

TowerMagnitude tower_from_rational(const Rat& v, long prec) {
    TowerMagnitude t;
    t.sign = sgn(v);
    t.level = 0;
    t.top = t.sign == 0 ? ErrReal::zero(prec) : ErrReal::from_rational(abs(v), prec);
    t.exact_value = v;
    return tower_normalize(t);
}

TowerMagnitude tower_from_log(int sign, const ErrReal& log_mag) {
    TowerMagnitude t;
    t.sign = sign;
    if (log_mag.definitely_positive()) {
        t.level = 1;
        t.top = log_mag;
    } else if (log_mag.definitely_negative()) {
        t.level = -1;
        t.top = -log_mag;
    } else {
        t.level = 0;
        t.top = log_mag.exp();
    }
    return tower_normalize(t);
}

TowerMagnitude tower_from_loglog(int sign, const ErrReal& ll) {
    TowerMagnitude t;
    t.sign = sign;
    t.level = 2;
    t.top = ll;
    return tower_normalize(t);
}

namespace {

TowerOrder reverse_order(TowerOrder o) {
    if (o == TowerOrder::Less) return TowerOrder::Greater;
    if (o == TowerOrder::Greater) return TowerOrder::Less;
    return TowerOrder::Equal;
}

TowerOrder compare_tops(const ErrReal& a, const ErrReal& b) {
    if (a.definitely_lt(b)) return TowerOrder::Less;
    if (b.definitely_lt(a)) return TowerOrder::Greater;
    double sa = std::max(1.0, std::abs(a.mid_double()));
    double sb = std::max(1.0, std::abs(b.mid_double()));
    if (a.rad_double() <= sa * 0x1p-32 && b.rad_double() <= sb * 0x1p-32)
        return TowerOrder::Equal;
    throw incomparable_within_radius();
}

// positive magnitudes, both normalized
TowerOrder compare_magnitude(const TowerMagnitude& a, const TowerMagnitude& b) {
    if (a.level == b.level) {
        TowerOrder o = compare_tops(a.top, b.top);
        return a.level < 0 ? reverse_order(o) : o;
    }
    if (std::labs(a.level - b.level) >= 2)
        return a.level < b.level ? TowerOrder::Less : TowerOrder::Greater;
    // adjacent levels: express the pair one level down (tops stay below e^e)
    bool a_is_hi = a.level > b.level;
    const TowerMagnitude& hi = a_is_hi ? a : b;
    const TowerMagnitude& lo = a_is_hi ? b : a;
    TowerOrder hi_vs_lo;
    if (hi.level >= 1) {
        hi_vs_lo = compare_tops(hi.top.exp(), lo.top);
    } else if (hi.level == 0) {
        // lo.level == -1: its value is 1/exp(top)
        ErrReal one = ErrReal::from_si(1, lo.top.precision());
        hi_vs_lo = compare_tops(hi.top, one / lo.top.exp());
    } else {
        // both reciprocal: compare the underlying positive towers, reversed
        hi_vs_lo = reverse_order(compare_tops(hi.top, lo.top.exp()));
    }
    return a_is_hi ? hi_vs_lo : reverse_order(hi_vs_lo);
}

}  // namespace

TowerOrder tower_compare(const TowerMagnitude& a, const TowerMagnitude& b) {
    if (a.sign != b.sign) return a.sign < b.sign ? TowerOrder::Less : TowerOrder::Greater;
    if (a.sign == 0) return TowerOrder::Equal;
    TowerOrder mag = compare_magnitude(a, b);
    return a.sign > 0 ? mag : reverse_order(mag);
}

std::string tower_to_string(const TowerMagnitude& t, int digits) {
    if (t.sign == 0) return "0";
    std::string s = t.sign > 0 ? "+" : "-";
    return s + "exp^" + std::to_string(t.level) + "(" + t.top.mid_string(digits) + ")";
}

// ------------------------------------------------------------- constants

namespace {

Int inner_exponent(long g, long mult) {  // 12 * g^(mult * g)
    Int gm;
    mpz_ui_pow_ui(gm.get_mpz_t(), static_cast<unsigned long>(g),
                  static_cast<unsigned long>(mult * g));
    return 12 * gm;
}

// Towers for exp(+-L) with L = 12 g^M log(12 g) + extra. When L itself is
// beyond the floating range, falls back to log L = log 12 + M log g +
// loglog(12 g), absorbing `extra` into the radius (it is invisible at that
// scale).
struct TowerPair {
    TowerMagnitude tiny;  // exp(-L)
    TowerMagnitude huge;  // exp(+L)
};

TowerPair tower_pair(long g, const Int& M, const ErrReal& extra, long prec) {
    ErrReal log_base = ErrReal::from_si(12 * g, prec).log();
    bool direct = mpz_fits_slong_p(M.get_mpz_t()) &&
                  M.get_d() * std::log2(std::max(2.0, double(g))) < 1e17;
    TowerPair out;
    if (direct) {
        ErrReal gM = ErrReal::from_si(g, prec).pow_si(M.get_si());
        ErrReal L = gM.mul_si(12) * log_base + extra;
        out.tiny = tower_from_log(1, -L);
        out.huge = tower_from_log(1, L);
    } else {
        ErrReal logL = ErrReal::from_si(12, prec).log() +
                       ErrReal::from_integer(M, prec) * ErrReal::from_si(g, prec).log() +
                       log_base.log();
        logL = logL.widened(extra.abs().upper().mul_2si(-8 * prec));
        out.huge = tower_from_loglog(1, logL);
        out.tiny = out.huge;
        out.tiny.level = -out.tiny.level;
        out.tiny = tower_normalize(out.tiny);
    }
    return out;
}

TowerMagnitude with_sign(TowerMagnitude t, int sign) {
    t.sign = sign;
    return t;
}

}  // namespace

Thm11Constants thm11_constants(long g, long prec) {
    if (g < 1) throw error("thm11_constants: g >= 1 required");
    Thm11Constants out;
    if (g == 1) {
        Int p12;
        mpz_ui_pow_ui(p12.get_mpz_t(), 12, 12);
        out.c = tower_from_rational(Rat(Int(1), p12), prec);
        out.c0 = tower_from_rational(Rat(-p12), prec);
        return out;
    }
    TowerPair pair = tower_pair(g, inner_exponent(g, 4), ErrReal::zero(prec), prec);
    out.c = pair.tiny;
    out.c0 = with_sign(pair.huge, -1);
    return out;
}

Cor12Constants cor12_constants(long g, long prec) {
    if (g < 1) throw error("cor12_constants: g >= 1 required");
    Cor12Constants out;
    out.c2 = tower_from_rational(Rat(1, 17), prec);
    if (g == 1) {
        Int p12;
        mpz_ui_pow_ui(p12.get_mpz_t(), 12, 12);
        out.c1 = tower_from_rational(Rat(Int(1), 17 * p12), prec);
        out.c3 = tower_from_rational(Rat(-17 * p12), prec);
        return out;
    }
    ErrReal log17 = ErrReal::from_si(17, prec).log();
    TowerPair pair = tower_pair(g, inner_exponent(g, 4), log17, prec);
    out.c1 = pair.tiny;
    out.c3 = with_sign(pair.huge, -1);
    return out;
}

Prop33Constants prop33_constants(long g, bool jacobian, long prec) {
    if (g < 1) throw error("prop33_constants: g >= 1 required");
    Prop33Constants out;
    if (jacobian) {
        out.c5 = tower_from_rational(Rat(1, 12), prec);
        out.c6 = tower_from_rational(Rat(0), prec);
        return out;
    }
    if (g == 1) {
        Int p12;
        mpz_ui_pow_ui(p12.get_mpz_t(), 12, 12);
        out.c5 = tower_from_rational(Rat(Int(1), p12), prec);
        out.c6 = tower_from_rational(Rat(-p12), prec);
        return out;
    }
    TowerPair pair = tower_pair(g, inner_exponent(g, 3), ErrReal::zero(prec), prec);
    out.c5 = pair.tiny;
    out.c6 = with_sign(pair.huge, -1);
    return out;
}

Prop36Constants prop36_constants(long g, bool jacobian, long prec) {
    if (g < 1) throw error("prop36_constants: g >= 1 required");
    Prop36Constants out;
    Int shift_pow;  // 12^{4g^2}
    mpz_ui_pow_ui(shift_pow.get_mpz_t(), 12, static_cast<unsigned long>(4 * g * g));
    if (jacobian) {
        out.c16 = tower_from_rational(Rat(Int(1), 12 * shift_pow), prec);
        out.c17 = tower_from_rational(Rat(0), prec);
        return out;
    }
    if (g == 1) {
        Int p12;
        mpz_ui_pow_ui(p12.get_mpz_t(), 12, 12);
        out.c16 = tower_from_rational(Rat(Int(1), p12 * shift_pow), prec);
        out.c17 = tower_from_rational(Rat(-p12), prec);
        return out;
    }
    ErrReal shift = ErrReal::from_si(12, prec).log().mul_si(4 * g * g);
    TowerPair pair = tower_pair(g, inner_exponent(g, 3), shift, prec);
    out.c16 = pair.tiny;
    out.c17 = with_sign(tower_pair(g, inner_exponent(g, 3), ErrReal::zero(prec), prec).huge, -1);
    return out;
}

ErrReal rank_bound(const RankBoundInputs& in) {
    if (in.g < 1 || in.d < 1) throw error("rank_bound: g, d >= 1 required");
    long prec = in.log_N0.precision();
    ErrReal p8g2 = ErrReal::from_si(1, prec).mul_2si(8 * in.g * in.g);
    ErrReal c1 = ErrReal::from_si(4, prec)
                     .mul_si(in.g).mul_si(in.g).mul_si(in.g)
                     .mul_si(in.d).mul_si(in.d);
    ErrReal term1 = c1 * p8g2 * in.log_N0;
    ErrReal log16 = ErrReal::from_si(16, prec).log();
    ErrReal inner =
        in.log_abs_disc_K + log16.mul_si(in.g * in.g).mul_si(in.d * in.d);
    ErrReal term2 = ErrReal::from_si(in.g, prec).mul_si(in.d) * p8g2 * inner;
    return term1 + term2;
}

TowerMagnitude rank_bound_headline(long g, long d, long prec) {
    if (g < 1 || d < 1) throw error("rank_bound_headline: g, d >= 1 required");
    if (g == 1) {
        Int p12;
        mpz_ui_pow_ui(p12.get_mpz_t(), 12, 12);
        return tower_from_rational(Rat(p12 * d * d * d), prec);
    }
    ErrReal log_d3 = ErrReal::from_si(d, prec).log().mul_si(3);
    return tower_pair(g, inner_exponent(g, 4), log_d3, prec).huge;
}

}  // namespace ellreg
