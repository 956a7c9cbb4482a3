#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

#include "ellreg/errors.hpp"

namespace ellreg {

// Widens the MPFR exponent range for the calling thread. The pipeline deals in
// quantities like log of 10^5-digit integers next to radii around 2^-4096, so
// the default range is not generous enough once radii of products are squared.
void mpfr_thread_setup();

// A real number carried as midpoint +/- radius. Every operation rounds the
// midpoint to nearest at the operand precision and grows the radius by a
// proven bound on all rounding and propagation error, so the true value is
// always inside [mid - rad, mid + rad].
class ErrReal {
  public:
    ErrReal();
    explicit ErrReal(long prec);
    ErrReal(const ErrReal& o);
    ErrReal(ErrReal&& o) noexcept;
    ErrReal& operator=(const ErrReal& o);
    ErrReal& operator=(ErrReal&& o) noexcept;
    ~ErrReal();

    long precision() const { return prec_; }

    static ErrReal zero(long prec);
    static ErrReal from_si(long v, long prec);
    static ErrReal from_integer(const mpz_class& z, long prec);
    static ErrReal from_rational(const mpq_class& q, long prec);
    static ErrReal from_double(double d, long prec);
    static ErrReal pi(long prec);
    // exact midpoint copy of an mpfr value, radius zero
    static ErrReal from_mpfr(const mpfr_t m, long prec);
    // natural log of a positive integer, outward rounded
    static ErrReal log_integer(const mpz_class& z, long prec);
    static ErrReal log_rational_abs(const mpq_class& q, long prec);

    bool is_zero_exact() const;          // mid == 0 and rad == 0
    bool contains_zero() const;          // |mid| <= rad
    bool definitely_positive() const;    // mid - rad > 0
    bool definitely_negative() const;    // mid + rad < 0
    // certified |*this| <= |other| as intervals (upper(this) <= lower(other))
    bool definitely_le(const ErrReal& o) const;
    bool definitely_lt(const ErrReal& o) const;

    double mid_double() const;
    double rad_double() const;
    long mid_exponent() const;           // mpfr exponent of mid (0 if mid == 0)
    // exact dyadic rational equal to the midpoint
    mpq_class mid_rational() const;
    long round_to_long() const;          // nearest integer to mid (no certification)

    std::string mid_string(int significant_digits = 30) const;
    std::string rad_string() const;

    ErrReal operator-() const;
    ErrReal abs() const;
    ErrReal add(const ErrReal& o) const;
    ErrReal sub(const ErrReal& o) const;
    ErrReal mul(const ErrReal& o) const;
    ErrReal div(const ErrReal& o) const;  // throws interval_contains_zero
    ErrReal mul_si(long v) const;
    ErrReal div_si(long v) const;
    ErrReal add_si(long v) const;
    ErrReal mul_2si(long e) const;        // exact scaling by 2^e
    ErrReal sqrt() const;                 // throws if interval dips below 0
    ErrReal log() const;                  // throws if interval touches 0 or below
    ErrReal exp() const;
    ErrReal sin() const;
    ErrReal cos() const;
    ErrReal pow_si(long n) const;

    // upper/lower bounds of the interval as exact (rad = 0) values
    ErrReal upper() const;
    ErrReal lower() const;
    // midpoint only, radius dropped (for heuristics, never for verdicts)
    ErrReal mid_only() const;

    // inflate the radius by the absolute value of `extra`'s upper bound
    ErrReal widened(const ErrReal& extra) const;

    static ErrReal max_upper(const ErrReal& a, const ErrReal& b);
    static ErrReal hypot(const ErrReal& a, const ErrReal& b);

    // raw access for serialization
    const mpfr_t& mid_raw() const { return mid_; }
    const mpfr_t& rad_raw() const { return rad_; }

  private:
    void bump_rounding(int ternary);
    enum class Monotone { Sqrt, Log, Exp };
    ErrReal monotone(Monotone op) const;

    mpfr_t mid_;
    mpfr_t rad_;
    long prec_;
};

inline ErrReal operator+(const ErrReal& a, const ErrReal& b) { return a.add(b); }
inline ErrReal operator-(const ErrReal& a, const ErrReal& b) { return a.sub(b); }
inline ErrReal operator*(const ErrReal& a, const ErrReal& b) { return a.mul(b); }
inline ErrReal operator/(const ErrReal& a, const ErrReal& b) { return a.div(b); }

// Complex interval with componentwise radii.
struct ErrComplex {
    ErrReal re, im;

    ErrComplex() = default;
    ErrComplex(ErrReal r, ErrReal i) : re(std::move(r)), im(std::move(i)) {}
    static ErrComplex from_real(const ErrReal& r);

    ErrComplex operator-() const { return {-re, -im}; }
    ErrComplex conj() const { return {re, -im}; }
    ErrComplex add(const ErrComplex& o) const { return {re + o.re, im + o.im}; }
    ErrComplex sub(const ErrComplex& o) const { return {re - o.re, im - o.im}; }
    ErrComplex mul(const ErrComplex& o) const;
    ErrComplex div(const ErrComplex& o) const;
    ErrComplex mul_real(const ErrReal& s) const { return {re * s, im * s}; }
    ErrComplex sqrt() const;              // principal branch
    ErrReal abs() const { return ErrReal::hypot(re, im); }
    ErrReal abs_sq() const { return re * re + im * im; }
    ErrReal log_abs() const { return abs().log(); }
    // exp(i * theta) for real theta
    static ErrComplex unit_circle(const ErrReal& theta);
    ErrComplex exp() const;
};

inline ErrComplex operator+(const ErrComplex& a, const ErrComplex& b) { return a.add(b); }
inline ErrComplex operator-(const ErrComplex& a, const ErrComplex& b) { return a.sub(b); }
inline ErrComplex operator*(const ErrComplex& a, const ErrComplex& b) { return a.mul(b); }
inline ErrComplex operator/(const ErrComplex& a, const ErrComplex& b) { return a.div(b); }

// Carlson symmetric elliptic integral R_F with certified tail bound.
// Arguments must stay off the negative real axis (conjugate pairs and
// nonnegative reals are fine); at most one argument may be zero.
ErrComplex carlson_rf(ErrComplex x, ErrComplex y, ErrComplex z);

}  // namespace ellreg
