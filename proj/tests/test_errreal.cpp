#include <doctest.h>

#include <random>

#include "ellreg/curve.hpp"
#include "ellreg/errreal.hpp"

using namespace ellreg;

namespace {
bool contains(const ErrReal& ball, const ErrReal& point) {
    ErrReal d = (ball - point).abs().upper();
    ErrReal r = ErrReal::from_double(ball.rad_double() + point.rad_double(), 64);
    return !(d - r.upper()).definitely_positive();
}
}  // namespace

TEST_CASE("interval containment under add/sub round trips") {
    mpfr_thread_setup();
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 50; ++trial) {
        // random 100-digit integers
        mpz_class a = 1, b = 1;
        for (int i = 0; i < 100; ++i) {
            a = a * 10 + static_cast<long>(rng() % 10);
            b = b * 10 + static_cast<long>(rng() % 10);
        }
        ErrReal x = ErrReal::from_integer(a, 128);
        ErrReal y = ErrReal::from_integer(b, 128);
        ErrReal z = (x + y) - y;
        CHECK(contains(z, x));
    }
}

TEST_CASE("log is the inverse of exp within radii") {
    for (double v : {1.0, 1.001, 0.999, 17.25, 1e-3}) {
        ErrReal x = ErrReal::from_double(v, 256);
        ErrReal back = x.exp().log();
        CHECK(contains(back, x));
    }
}

TEST_CASE("pi at 256 bits has tiny radius") {
    ErrReal p = ErrReal::pi(256);
    CHECK(p.rad_double() <= 0x1p-250);
    CHECK(p.mid_double() == doctest::Approx(3.14159265358979));
}

TEST_CASE("division by an interval containing zero is rejected") {
    ErrReal one = ErrReal::from_si(1, 128);
    ErrReal z = ErrReal::zero(128).widened(ErrReal::from_double(1e-10, 64));
    CHECK_THROWS_AS(one / z, interval_contains_zero);
    CHECK_THROWS_AS(z.log(), interval_contains_zero);
}

TEST_CASE("hypot of a zero-straddling ball stays certified") {
    ErrReal a = ErrReal::zero(128).widened(ErrReal::from_double(1e-20, 64));
    ErrReal h = ErrReal::hypot(a, a);
    CHECK(!h.definitely_negative());
    CHECK(h.upper().mid_double() <= 1e-19);
}

TEST_CASE("exact dyadic midpoint extraction") {
    ErrReal x = ErrReal::from_rational(Rat(3, 8), 128);
    CHECK(x.mid_rational() == Rat(3, 8));
    CHECK(ErrReal::from_si(-7, 64).mid_rational() == Rat(-7));
}

TEST_CASE("mul_2si scales exactly") {
    ErrReal x = ErrReal::from_si(3, 128);
    CHECK(x.mul_2si(4).mid_rational() == Rat(48));
    CHECK(x.mul_2si(-2).mid_rational() == Rat(3, 4));
}

TEST_CASE("complex square root on both half planes") {
    long prec = 192;
    auto mk = [&](double re, double im) {
        return ErrComplex{ErrReal::from_double(re, prec), ErrReal::from_double(im, prec)};
    };
    for (auto [re, im] :
         {std::pair{3.0, 4.0}, std::pair{-3.0, 4.0}, std::pair{-3.0, -4.0}, std::pair{0.25, -1.5}}) {
        ErrComplex z = mk(re, im);
        ErrComplex s = z.sqrt();
        ErrComplex back = s * s;
        CHECK(back.re.mid_double() == doctest::Approx(re).epsilon(1e-12));
        CHECK(back.im.mid_double() == doctest::Approx(im).epsilon(1e-12));
        CHECK(s.re.mid_double() >= 0.0);  // principal branch
    }
}

TEST_CASE("carlson rf matches the lemniscatic closed form") {
    long prec = 256;
    ErrComplex zero{ErrReal::zero(prec), ErrReal::zero(prec)};
    ErrComplex one = ErrComplex::from_real(ErrReal::from_si(1, prec));
    ErrComplex two = ErrComplex::from_real(ErrReal::from_si(2, prec));
    ErrComplex rf = carlson_rf(zero, one, two);
    // 2 R_F(0,1,2) = Gamma(1/4)^2 / (2 sqrt(2 pi)), the lemniscate constant
    mpfr_t g;
    mpfr_init2(g, prec);
    mpfr_set_ui(g, 1, MPFR_RNDN);
    mpfr_div_ui(g, g, 4, MPFR_RNDN);
    mpfr_gamma(g, g, MPFR_RNDN);
    ErrReal gamma_q = ErrReal::from_mpfr(g, prec);
    mpfr_clear(g);
    ErrReal expect = gamma_q * gamma_q / (ErrReal::pi(prec).mul_si(2).sqrt().mul_si(2));
    ErrReal got = rf.re.mul_si(2);
    CHECK((got - expect).abs().upper().mid_double() <= 1e-70);
    CHECK(rf.re.rad_double() <= 1e-70);
}

TEST_CASE("carlson rf handles conjugate complex pairs") {
    long prec = 192;
    ErrComplex zero{ErrReal::zero(prec), ErrReal::zero(prec)};
    ErrComplex w{ErrReal::from_double(1.5, prec), ErrReal::from_double(0.5, prec)};
    ErrComplex rf = carlson_rf(zero, w, w.conj());
    // real output for conjugate-symmetric arguments
    CHECK(std::abs(rf.im.mid_double()) <= 1e-40);
    CHECK(rf.re.mid_double() > 0.0);
}
