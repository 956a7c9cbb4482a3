#include <doctest.h>

#include <random>

#include "ellreg/factor.hpp"
#include "ellreg/minimal.hpp"

using namespace ellreg;

namespace {
WeierstrassCurve curve(long a1, long a2, long a3, long a4, long a6) {
    return WeierstrassCurve::from_ainvs(Rat(a1), Rat(a2), Rat(a3), Rat(a4), Rat(a6));
}
}  // namespace

TEST_CASE("already-minimal model is a fixed point") {
    MinimalModelResult r = minimal_model(curve(0, 0, 1, -1, 0));
    CHECK(r.disc_min == Int(37));
    CHECK(r.transform.is_identity());
}

TEST_CASE("u = 2 reduction of y^2 = x^3 + 16") {
    WeierstrassCurve E = curve(0, 0, 0, 0, 16);
    MinimalModelResult r = minimal_model(E);
    CHECK(r.disc_min == Int(-27));
    CHECK(r.transform.u == Rat(2));
    Rat u12 = r.transform.u;
    for (int i = 0; i < 11; ++i) u12 *= r.transform.u;
    CHECK(E.disc == u12 * Rat(r.disc_min));
}

TEST_CASE("u = 3 reduction of the scaled lemniscatic curve") {
    WeierstrassCurve E = curve(0, 0, 0, -81, 0);
    MinimalModelResult r = minimal_model(E);
    CHECK(r.disc_min == Int(64));
    CHECK(r.transform.u == Rat(3));
    // c4 scales by u^4
    CHECK(E.c4 == Rat(81 * 48));
    CHECK(r.c4_min == Int(48));
}

TEST_CASE("rational input models are scaled to integral ones first") {
    WeierstrassCurve E = WeierstrassCurve::from_ainvs(Rat(0), Rat(0), Rat(0), Rat(-1, 16), Rat(0));
    MinimalModelResult r = minimal_model(E);
    CHECK(r.disc_min == Int(64));
    CHECK(r.curve.integral());
}

TEST_CASE("minimality certificate at every bad prime") {
    for (auto a : {std::array<long, 5>{0, -1, 1, -10, -20}, std::array<long, 5>{0, 0, 0, -4, 4},
                   std::array<long, 5>{1, 1, 1, -10, -10}, std::array<long, 5>{0, 0, 0, 0, 16}}) {
        MinimalModelResult r = minimal_model(curve(a[0], a[1], a[2], a[3], a[4]));
        for (const auto& [p, e] : factorize(r.disc_min)) {
            bool cert = e < 12 || (r.c4_min != 0 && valuation(r.c4_min, p) < 4);
            CHECK(cert);
        }
    }
}

TEST_CASE("minimal model is invariant under unimodular coordinate changes") {
    std::mt19937_64 rng(777);
    WeierstrassCurve base = curve(0, -1, 1, -10, -20);
    MinimalModelResult expect = minimal_model(base);
    for (int trial = 0; trial < 20; ++trial) {
        ModelTransform T;
        long u = std::array<long, 4>{1, 2, 3, 6}[rng() % 4];
        T.u = Rat(1, u);  // scales the model up
        T.r = Rat(static_cast<long>(rng() % 17) - 8);
        T.s = Rat(static_cast<long>(rng() % 17) - 8);
        T.t = Rat(static_cast<long>(rng() % 17) - 8);
        WeierstrassCurve twisted = apply_transform(base, T);
        MinimalModelResult got = minimal_model(twisted);
        CHECK(got.disc_min == expect.disc_min);
        CHECK(got.c4_min == expect.c4_min);
        CHECK(got.c6_min == expect.c6_min);
    }
}

TEST_CASE("points map through the transform both ways") {
    WeierstrassCurve E = curve(0, 0, 1, -1, 0);
    ModelTransform T;
    T.u = Rat(1, 2);
    T.r = Rat(3);
    T.s = Rat(-1);
    T.t = Rat(2);
    WeierstrassCurve E2 = apply_transform(E, T);
    CurvePoint P = CurvePoint::affine(Rat(0), Rat(0));
    CurvePoint Q = map_point(T, P);
    CHECK(on_curve(E2, Q));
    CHECK(map_point_back(T, Q) == P);
}
