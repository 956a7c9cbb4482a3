#include "ellreg/errreal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

namespace ellreg {

namespace {
constexpr mpfr_prec_t kRadPrec = 32;

// upper bound for one rounding step: 2^(exp(mid) - prec)
void add_ulp_bound(mpfr_t rad, const mpfr_t mid, long prec) {
    if (mpfr_zero_p(mid)) {
        // a nonzero rounded to zero cannot happen with the widened exponent
        // range unless the op was exact; keep a defensive crumb anyway
        mpfr_t tiny;
        mpfr_init2(tiny, kRadPrec);
        mpfr_set_ui_2exp(tiny, 1, mpfr_get_emin() / 2, MPFR_RNDU);
        mpfr_add(rad, rad, tiny, MPFR_RNDU);
        mpfr_clear(tiny);
        return;
    }
    mpfr_t ulp;
    mpfr_init2(ulp, kRadPrec);
    mpfr_set_ui_2exp(ulp, 1, mpfr_get_exp(mid) - prec, MPFR_RNDU);
    mpfr_add(rad, rad, ulp, MPFR_RNDU);
    mpfr_clear(ulp);
}
}  // namespace

void mpfr_thread_setup() {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
}

ErrReal::ErrReal() : ErrReal(128) {}

ErrReal::ErrReal(long prec) : prec_(prec) {
    mpfr_init2(mid_, prec_);
    mpfr_init2(rad_, kRadPrec);
    mpfr_set_zero(mid_, 1);
    mpfr_set_zero(rad_, 1);
}

ErrReal::ErrReal(const ErrReal& o) : prec_(o.prec_) {
    mpfr_init2(mid_, prec_);
    mpfr_init2(rad_, kRadPrec);
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

ErrReal::ErrReal(ErrReal&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(mid_, 2);
    mpfr_init2(rad_, 2);
    mpfr_swap(mid_, o.mid_);
    mpfr_swap(rad_, o.rad_);
}

ErrReal& ErrReal::operator=(const ErrReal& o) {
    if (this != &o) {
        mpfr_set_prec(mid_, o.prec_);
        mpfr_set(mid_, o.mid_, MPFR_RNDN);
        mpfr_set(rad_, o.rad_, MPFR_RNDU);
        prec_ = o.prec_;
    }
    return *this;
}

ErrReal& ErrReal::operator=(ErrReal&& o) noexcept {
    if (this != &o) {
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
        prec_ = o.prec_;
    }
    return *this;
}

ErrReal::~ErrReal() {
    mpfr_clear(mid_);
    mpfr_clear(rad_);
}

void ErrReal::bump_rounding(int ternary) {
    if (ternary != 0) add_ulp_bound(rad_, mid_, prec_);
}

ErrReal ErrReal::zero(long prec) { return ErrReal(prec); }

ErrReal ErrReal::from_si(long v, long prec) {
    ErrReal r(prec);
    int t = mpfr_set_si(r.mid_, v, MPFR_RNDN);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::from_integer(const mpz_class& z, long prec) {
    ErrReal r(prec);
    int t = mpfr_set_z(r.mid_, z.get_mpz_t(), MPFR_RNDN);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::from_rational(const mpq_class& q, long prec) {
    ErrReal r(prec);
    int t = mpfr_set_q(r.mid_, q.get_mpq_t(), MPFR_RNDN);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::from_double(double d, long prec) {
    ErrReal r(prec);
    int t = mpfr_set_d(r.mid_, d, MPFR_RNDN);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::pi(long prec) {
    ErrReal r(prec);
    int t = mpfr_const_pi(r.mid_, MPFR_RNDN);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::from_mpfr(const mpfr_t m, long prec) {
    ErrReal r(prec);
    int t = mpfr_set(r.mid_, m, MPFR_RNDN);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::log_integer(const mpz_class& z, long prec) {
    return from_integer(z, prec).log();
}

ErrReal ErrReal::log_rational_abs(const mpq_class& q, long prec) {
    mpq_class a = ::abs(q);
    return from_rational(a, prec).log();
}

bool ErrReal::is_zero_exact() const { return mpfr_zero_p(mid_) && mpfr_zero_p(rad_); }

bool ErrReal::contains_zero() const {
    mpfr_t a;
    mpfr_init2(a, kRadPrec);
    mpfr_abs(a, mid_, MPFR_RNDD);
    bool res = mpfr_cmp(a, rad_) <= 0;
    mpfr_clear(a);
    return res;
}

bool ErrReal::definitely_positive() const {
    if (mpfr_sgn(mid_) <= 0) return false;
    mpfr_t lo;
    mpfr_init2(lo, prec_);
    mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
    bool res = mpfr_sgn(lo) > 0;
    mpfr_clear(lo);
    return res;
}

bool ErrReal::definitely_negative() const { return (-*this).definitely_positive(); }

bool ErrReal::definitely_le(const ErrReal& o) const {
    ErrReal u = upper(), l = o.lower();
    return mpfr_cmp(u.mid_, l.mid_) <= 0;
}

bool ErrReal::definitely_lt(const ErrReal& o) const {
    ErrReal u = upper(), l = o.lower();
    return mpfr_cmp(u.mid_, l.mid_) < 0;
}

double ErrReal::mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
double ErrReal::rad_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }

long ErrReal::mid_exponent() const { return mpfr_zero_p(mid_) ? 0 : mpfr_get_exp(mid_); }

mpq_class ErrReal::mid_rational() const {
    if (mpfr_zero_p(mid_)) return mpq_class(0);
    mpz_class z;
    mpfr_exp_t e = mpfr_get_z_2exp(z.get_mpz_t(), mid_);
    mpq_class q(z);
    mpz_class p2;
    mpz_ui_pow_ui(p2.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0)
        q *= p2;
    else
        q /= p2;
    return q;
}

long ErrReal::round_to_long() const {
    mpfr_t r;
    mpfr_init2(r, prec_);
    mpfr_round(r, mid_);
    long v = mpfr_get_si(r, MPFR_RNDN);
    mpfr_clear(r);
    return v;
}

std::string ErrReal::mid_string(int significant_digits) const {
    char fmt[32];
    std::snprintf(fmt, sizeof fmt, "%%.%dRg", significant_digits);
    char* s = nullptr;
    mpfr_asprintf(&s, fmt, mid_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string ErrReal::rad_string() const {
    char* s = nullptr;
    mpfr_asprintf(&s, "%.3Rg", rad_);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

ErrReal ErrReal::operator-() const {
    ErrReal r(*this);
    mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
    return r;
}

ErrReal ErrReal::abs() const {
    ErrReal r(*this);
    mpfr_abs(r.mid_, r.mid_, MPFR_RNDN);
    return r;
}

ErrReal ErrReal::add(const ErrReal& o) const {
    ErrReal r(std::max(prec_, o.prec_));
    int t = mpfr_add(r.mid_, mid_, o.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, rad_, o.rad_, MPFR_RNDU);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::sub(const ErrReal& o) const {
    ErrReal r(std::max(prec_, o.prec_));
    int t = mpfr_sub(r.mid_, mid_, o.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, rad_, o.rad_, MPFR_RNDU);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::mul(const ErrReal& o) const {
    ErrReal r(std::max(prec_, o.prec_));
    int t = mpfr_mul(r.mid_, mid_, o.mid_, MPFR_RNDN);
    // |xy - mm'| <= |m| r' + |m'| r + r r'
    mpfr_t am, bm, acc;
    mpfr_init2(am, kRadPrec);
    mpfr_init2(bm, kRadPrec);
    mpfr_init2(acc, kRadPrec);
    mpfr_abs(am, mid_, MPFR_RNDU);
    mpfr_abs(bm, o.mid_, MPFR_RNDU);
    mpfr_mul(acc, am, o.rad_, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, acc, MPFR_RNDU);
    mpfr_mul(acc, bm, rad_, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, acc, MPFR_RNDU);
    mpfr_mul(acc, rad_, o.rad_, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, acc, MPFR_RNDU);
    mpfr_clear(am);
    mpfr_clear(bm);
    mpfr_clear(acc);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::div(const ErrReal& o) const {
    if (o.contains_zero()) throw interval_contains_zero("division by interval containing zero");
    ErrReal r(std::max(prec_, o.prec_));
    int t = mpfr_div(r.mid_, mid_, o.mid_, MPFR_RNDN);
    // |x/y - m/m'| <= (r |m'| + |m| r') / (|m'| (|m'| - r'))
    mpfr_t am, bm, den, num, acc;
    mpfr_init2(am, kRadPrec);
    mpfr_init2(bm, kRadPrec);
    mpfr_init2(den, kRadPrec);
    mpfr_init2(num, kRadPrec);
    mpfr_init2(acc, kRadPrec);
    mpfr_abs(am, mid_, MPFR_RNDU);
    mpfr_abs(bm, o.mid_, MPFR_RNDD);
    mpfr_sub(den, bm, o.rad_, MPFR_RNDD);         // |m'| - r' > 0
    mpfr_mul(den, den, bm, MPFR_RNDD);
    mpfr_abs(bm, o.mid_, MPFR_RNDU);
    mpfr_mul(num, rad_, bm, MPFR_RNDU);
    mpfr_mul(acc, am, o.rad_, MPFR_RNDU);
    mpfr_add(num, num, acc, MPFR_RNDU);
    mpfr_div(num, num, den, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, num, MPFR_RNDU);
    mpfr_clear(am);
    mpfr_clear(bm);
    mpfr_clear(den);
    mpfr_clear(num);
    mpfr_clear(acc);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::mul_si(long v) const {
    ErrReal r(prec_);
    int t = mpfr_mul_si(r.mid_, mid_, v, MPFR_RNDN);
    mpfr_t av;
    mpfr_init2(av, kRadPrec);
    mpfr_set_si(av, v < 0 ? -v : v, MPFR_RNDU);
    mpfr_mul(r.rad_, rad_, av, MPFR_RNDU);
    mpfr_clear(av);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::div_si(long v) const {
    if (v == 0) throw interval_contains_zero("division by zero integer");
    ErrReal r(prec_);
    int t = mpfr_div_si(r.mid_, mid_, v, MPFR_RNDN);
    mpfr_t av;
    mpfr_init2(av, kRadPrec);
    mpfr_set_si(av, v < 0 ? -v : v, MPFR_RNDD);
    mpfr_div(r.rad_, rad_, av, MPFR_RNDU);
    mpfr_clear(av);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::add_si(long v) const {
    ErrReal r(prec_);
    int t = mpfr_add_si(r.mid_, mid_, v, MPFR_RNDN);
    mpfr_set(r.rad_, rad_, MPFR_RNDU);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::mul_2si(long e) const {
    ErrReal r(*this);
    mpfr_mul_2si(r.mid_, r.mid_, e, MPFR_RNDN);
    mpfr_mul_2si(r.rad_, r.rad_, e, MPFR_RNDU);
    return r;
}

ErrReal ErrReal::monotone(Monotone op) const {
    auto apply = [op](mpfr_t out, const mpfr_t in, mpfr_rnd_t rnd) {
        switch (op) {
            case Monotone::Sqrt: mpfr_sqrt(out, in, rnd); break;
            case Monotone::Log: mpfr_log(out, in, rnd); break;
            case Monotone::Exp: mpfr_exp(out, in, rnd); break;
        }
    };
    ErrReal r(prec_);
    mpfr_t lo, hi, t1;
    mpfr_init2(lo, prec_);
    mpfr_init2(hi, prec_);
    mpfr_init2(t1, kRadPrec);
    mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
    mpfr_add(hi, mid_, rad_, MPFR_RNDU);
    apply(lo, lo, MPFR_RNDD);
    apply(hi, hi, MPFR_RNDU);
    apply(r.mid_, mid_, MPFR_RNDN);
    // rad = max(mid - f(lo), f(hi) - mid)
    mpfr_sub(lo, r.mid_, lo, MPFR_RNDU);
    mpfr_sub(hi, hi, r.mid_, MPFR_RNDU);
    mpfr_max(t1, lo, hi, MPFR_RNDU);
    mpfr_set(r.rad_, t1, MPFR_RNDU);
    mpfr_clear(lo);
    mpfr_clear(hi);
    mpfr_clear(t1);
    return r;
}

ErrReal ErrReal::sqrt() const {
    if (is_zero_exact()) return zero(prec_);
    mpfr_t lo;
    mpfr_init2(lo, prec_);
    mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
    bool neg = mpfr_sgn(lo) < 0;
    mpfr_clear(lo);
    if (neg) throw precision_exhausted("sqrt of interval dipping below zero");
    return monotone(Monotone::Sqrt);
}

ErrReal ErrReal::log() const {
    mpfr_t lo;
    mpfr_init2(lo, prec_);
    mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
    bool bad = mpfr_sgn(lo) <= 0;
    mpfr_clear(lo);
    if (bad) throw interval_contains_zero("log of interval touching zero");
    return monotone(Monotone::Log);
}

ErrReal ErrReal::exp() const { return monotone(Monotone::Exp); }

ErrReal ErrReal::sin() const {
    ErrReal r(prec_);
    int t = mpfr_sin(r.mid_, mid_, MPFR_RNDN);
    mpfr_set(r.rad_, rad_, MPFR_RNDU);  // Lipschitz constant 1
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::cos() const {
    ErrReal r(prec_);
    int t = mpfr_cos(r.mid_, mid_, MPFR_RNDN);
    mpfr_set(r.rad_, rad_, MPFR_RNDU);
    r.bump_rounding(t);
    return r;
}

ErrReal ErrReal::pow_si(long n) const {
    if (n == 0) return from_si(1, prec_);
    bool inv = n < 0;
    unsigned long e = inv ? -n : n;
    ErrReal base(*this), acc = from_si(1, prec_);
    while (e) {
        if (e & 1) acc = acc.mul(base);
        base = base.mul(base);
        e >>= 1;
    }
    if (inv) return from_si(1, prec_).div(acc);
    return acc;
}

ErrReal ErrReal::upper() const {
    ErrReal r(prec_);
    mpfr_add(r.mid_, mid_, rad_, MPFR_RNDU);
    return r;
}

ErrReal ErrReal::lower() const {
    ErrReal r(prec_);
    mpfr_sub(r.mid_, mid_, rad_, MPFR_RNDD);
    return r;
}

ErrReal ErrReal::mid_only() const {
    ErrReal r(prec_);
    mpfr_set(r.mid_, mid_, MPFR_RNDN);
    return r;
}

ErrReal ErrReal::widened(const ErrReal& extra) const {
    ErrReal r(*this);
    ErrReal u = extra.abs().upper();
    mpfr_add(r.rad_, r.rad_, u.mid_, MPFR_RNDU);
    return r;
}

ErrReal ErrReal::max_upper(const ErrReal& a, const ErrReal& b) {
    ErrReal ua = a.upper(), ub = b.upper();
    return mpfr_cmp(ua.mid_raw(), ub.mid_raw()) >= 0 ? ua : ub;
}

ErrReal ErrReal::hypot(const ErrReal& a, const ErrReal& b) {
    ErrReal s = a * a + b * b;
    ErrReal lo = s.lower();
    if (mpfr_sgn(lo.mid_) >= 0) return s.sqrt();
    // the square sum straddles zero only through the radii; the true value
    // is in [0, sqrt(upper)]
    ErrReal hi = s.upper();
    if (mpfr_sgn(hi.mid_) <= 0) return zero(s.prec_).widened(hi.abs().sqrt());
    ErrReal root = hi.sqrt();
    ErrReal half = root.div_si(2);
    return half.widened(half);
}

// ---------------------------------------------------------------- complex

ErrComplex ErrComplex::from_real(const ErrReal& r) {
    return {r, ErrReal::zero(r.precision())};
}

ErrComplex ErrComplex::mul(const ErrComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
}

ErrComplex ErrComplex::div(const ErrComplex& o) const {
    ErrReal d = o.abs_sq();
    ErrComplex num = mul(o.conj());
    return {num.re / d, num.im / d};
}

ErrComplex ErrComplex::sqrt() const {
    long prec = std::max(re.precision(), im.precision());
    if (re.is_zero_exact() && im.is_zero_exact())
        return {ErrReal::zero(prec), ErrReal::zero(prec)};
    if (im.is_zero_exact()) {
        if (!re.contains_zero() && re.definitely_positive())
            return {re.sqrt(), ErrReal::zero(prec)};
        if (re.definitely_negative())
            return {ErrReal::zero(prec), (-re).sqrt()};
        throw precision_exhausted("complex sqrt: real argument straddles zero");
    }
    ErrReal r = abs();
    if (mpfr_sgn(re.mid_raw()) >= 0) {
        ErrReal s = ((r + re).div_si(2)).sqrt();
        return {s, im / (s.mul_si(2))};
    }
    ErrReal u = ((r - re).div_si(2)).sqrt();
    if (im.contains_zero())
        throw precision_exhausted("complex sqrt near branch cut");
    if (im.definitely_positive()) return {im / (u.mul_si(2)), u};
    return {(-im) / (u.mul_si(2)), -u};
}

ErrComplex ErrComplex::unit_circle(const ErrReal& theta) {
    return {theta.cos(), theta.sin()};
}

ErrComplex ErrComplex::exp() const {
    ErrReal m = re.exp();
    ErrComplex circ = unit_circle(im);
    return {m * circ.re, m * circ.im};
}

// ------------------------------------------------------------ Carlson R_F

ErrComplex carlson_rf(ErrComplex x, ErrComplex y, ErrComplex z) {
    long prec = std::max({x.re.precision(), y.re.precision(), z.re.precision()});
    ErrReal third = ErrReal::from_si(1, prec).div_si(3);
    // duplicate until the spread is small enough for the 5-term Taylor tail
    long target_exp = -(prec / 6) - 4;
    ErrComplex X{ErrReal::zero(prec), ErrReal::zero(prec)}, Y = X, Z = X;
    ErrComplex A{ErrReal::zero(prec), ErrReal::zero(prec)};
    bool settled = false;
    for (int iter = 0; iter < 400; ++iter) {
        A = (x + y + z).mul_real(third);
        X = (A - x) / A;
        Y = (A - y) / A;
        Z = (A - z) / A;
        ErrReal eps = ErrReal::max_upper(ErrReal::max_upper(X.abs(), Y.abs()), Z.abs());
        if (!eps.definitely_positive() || eps.mid_exponent() <= target_exp) {
            settled = true;
            break;
        }
        ErrComplex sx = x.sqrt(), sy = y.sqrt(), sz = z.sqrt();
        ErrComplex lam = sx * sy + sy * sz + sz * sx;
        ErrReal quarter = ErrReal::from_si(1, prec).div_si(4);
        x = (x + lam).mul_real(quarter);
        y = (y + lam).mul_real(quarter);
        z = (z + lam).mul_real(quarter);
    }
    if (!settled) throw precision_exhausted("carlson_rf did not contract");
    // R_F ~ A^{-1/2} (1 - E2/10 + E3/14 + E2^2/24 - 3 E2 E3/44),
    // |relative tail| <= eps^6 / (4 (1 - eps))
    ErrComplex E2 = X * Y + Y * Z + Z * X;
    ErrComplex E3 = X * Y * Z;
    ErrReal one = ErrReal::from_si(1, prec);
    ErrComplex series = ErrComplex::from_real(one);
    series = series - E2.mul_real(one.div_si(10));
    series = series + E3.mul_real(one.div_si(14));
    series = series + (E2 * E2).mul_real(one.div_si(24));
    series = series - (E2 * E3).mul_real(one.mul_si(3).div_si(44));
    ErrComplex result = series / A.sqrt();
    ErrReal eps = ErrReal::max_upper(ErrReal::max_upper(X.abs(), Y.abs()), Z.abs()).upper();
    ErrReal tail =
        eps.pow_si(6) / ((one - eps).mul_si(4));
    ErrReal bound = (result.abs() * tail).upper();
    return {result.re.widened(bound), result.im.widened(bound)};
}

}  // namespace ellreg
