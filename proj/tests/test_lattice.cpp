#include <doctest.h>

#include <random>

#include <cmath>

#include "ellreg/lattice.hpp"

using namespace ellreg;

namespace {
MinimalModelResult minimize(long a1, long a2, long a3, long a4, long a6) {
    return minimal_model(
        WeierstrassCurve::from_ainvs(Rat(a1), Rat(a2), Rat(a3), Rat(a4), Rat(a6)));
}
CurvePoint pt(long x, long y) { return CurvePoint::affine(Rat(x), Rat(y)); }

HeightLattice synthetic(const std::vector<std::vector<double>>& rows) {
    HeightLattice lat;
    lat.m = static_cast<int>(rows.size());
    for (const auto& r : rows) {
        std::vector<ErrReal> row;
        for (double v : r) row.push_back(ErrReal::from_double(v, 192));
        lat.gram.push_back(row);
    }
    return lat;
}
}  // namespace

TEST_CASE("rank-1 lattice Gram is the height") {
    auto min = minimize(0, 0, 1, -1, 0);
    HeightLattice lat = build_lattice(min, {pt(0, 0)}, 1e-14);
    REQUIRE(lat.m == 1);
    CHECK(lat.gram[0][0].mid_double() == doctest::Approx(0.02555570411998442).epsilon(1e-10));
    RegulatorReport rep = regulator(lat);
    CHECK(rep.reg_L.mid_double() == doctest::Approx(0.02555570411998442).epsilon(1e-10));
    CHECK(rep.reg_poincare.mid_double() == doctest::Approx(2 * 0.02555570411998442).epsilon(1e-10));
}

TEST_CASE("dependent generators are refused") {
    auto min = minimize(0, 0, 1, -1, 0);
    CurvePoint P = pt(0, 0);
    CurvePoint P2 = point_add(min.curve, P, P);
    CHECK_THROWS_AS(build_lattice(min, {P, P2}, 1e-12), degenerate_lattice);
}

TEST_CASE("torsion generators are refused") {
    auto min = minimize(0, 0, 0, 0, 1);
    CHECK_THROWS_AS(build_lattice(min, {pt(2, 3)}, 1e-12), torsion_generator);
}

TEST_CASE("empty lattice regulator is exactly one") {
    RegulatorReport rep = regulator(HeightLattice{});
    CHECK(rep.reg_L.mid_rational() == Rat(1));
    CHECK(rep.reg_L.rad_double() == 0.0);
    CHECK(rep.reg_poincare.mid_rational() == Rat(1));
    CHECK(rep.m == 0);
    CHECK(rep.zariski_rank == 0);
    CHECK(minkowski_check(rep).state == Verdict::State::Pass);
}

TEST_CASE("synthetic 2x2 regulator and minima") {
    HeightLattice lat = synthetic({{2, 1}, {1, 2}});
    RegulatorReport rep = regulator(lat);
    CHECK(rep.reg_L.mid_double() == doctest::Approx(3.0));
    CHECK(rep.reg_poincare.mid_double() == doctest::Approx(12.0));
    rep.minima_sq = successive_minima(lat, 10);
    REQUIRE(rep.minima_sq.size() == 2);
    CHECK(rep.minima_sq[0].mid_double() == doctest::Approx(2.0));
    CHECK(rep.minima_sq[1].mid_double() == doctest::Approx(2.0));
    // 2 * 2 <= 2^2 * 3
    Verdict mk = minkowski_check(rep);
    CHECK(mk.state == Verdict::State::Pass);
    CHECK(mk.slack.mid_double() == doctest::Approx(8.0));
    CHECK(hadamard_check(lat).state == Verdict::State::Pass);
}

TEST_CASE("diagonal synthetic lattice: minima equal the diagonal") {
    HeightLattice lat = synthetic({{0.75, 0, 0}, {0, 0.75, 0}, {0, 0, 0.75}});
    auto minima = successive_minima(lat, 10);
    REQUIRE(minima.size() == 3);
    for (const auto& l : minima) CHECK(l.mid_double() == doctest::Approx(0.75));
    CHECK(hadamard_check(lat).state == Verdict::State::Pass);  // equality case
}

TEST_CASE("m = 1 minkowski equality passes") {
    auto min = minimize(0, 0, 1, -1, 0);
    HeightLattice lat = build_lattice(min, {pt(0, 0)}, 1e-13);
    RegulatorReport rep = regulator(lat);
    rep.minima_sq = successive_minima(lat, 25);
    CHECK(rep.minima_sq[0].mid_double() == doctest::Approx(rep.reg_L.mid_double()));
    CHECK(minkowski_check(rep).state == Verdict::State::Pass);
}

TEST_CASE("minima match brute force over the full box") {
    auto min = minimize(0, 1, 1, -2, 0);
    HeightLattice lat = build_lattice(min, {pt(0, 0), pt(1, 0)}, 1e-13);
    auto minima = successive_minima(lat, 25);
    // brute force over |n_i| <= 50 on the midpoint form
    std::vector<std::vector<Rat>> Q(2, std::vector<Rat>(2));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) Q[i][j] = lat.gram[i][j].mid_rational();
    Rat best1, best2;
    std::vector<long> v1;
    bool have1 = false, have2 = false;
    for (long a = -50; a <= 50; ++a)
        for (long b = -50; b <= 50; ++b) {
            if (a == 0 && b == 0) continue;
            Rat q = Q[0][0] * a * a + 2 * Q[0][1] * a * b + Q[1][1] * b * b;
            if (!have1 || q < best1) {
                best1 = q;
                v1 = {a, b};
                have1 = true;
            }
        }
    for (long a = -50; a <= 50; ++a)
        for (long b = -50; b <= 50; ++b) {
            if (a == 0 && b == 0) continue;
            if (a * v1[1] - b * v1[0] == 0) continue;  // dependent on the first minimizer
            Rat q = Q[0][0] * a * a + 2 * Q[0][1] * a * b + Q[1][1] * b * b;
            if (!have2 || q < best2) {
                best2 = q;
                have2 = true;
            }
        }
    CHECK(minima[0].mid_double() == doctest::Approx(best1.get_d()).epsilon(1e-20));
    CHECK(minima[1].mid_double() == doctest::Approx(best2.get_d()).epsilon(1e-20));
}

TEST_CASE("basis change invariance of regulator and minima") {
    auto min = minimize(0, 1, 1, -2, 0);
    HeightLattice lat = build_lattice(min, {pt(0, 0), pt(1, 0)}, 1e-13);
    RegulatorReport rep = regulator(lat);
    auto minima = successive_minima(lat, 25);
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        // random unimodular U with entries bounded by 3
        long a = 0, b = 0, c = 0, d = 0;
        do {
            a = long(rng() % 7) - 3;
            b = long(rng() % 7) - 3;
            c = long(rng() % 7) - 3;
            d = long(rng() % 7) - 3;
        } while (a * d - b * c != 1);
        HeightLattice tw;
        tw.m = 2;
        auto G = lat.gram;
        // U G U^T
        std::vector<std::vector<ErrReal>> UG(2, std::vector<ErrReal>(2, ErrReal::zero(192)));
        long U[2][2] = {{a, b}, {c, d}};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                ErrReal s = ErrReal::zero(192);
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) s = s + G[k][l].mul_si(U[i][k] * U[j][l]);
                UG[i][j] = s;
            }
        tw.gram = UG;
        RegulatorReport rep2 = regulator(tw);
        CHECK(std::abs(rep2.reg_L.mid_double() - rep.reg_L.mid_double()) <= 1e-20);
        auto minima2 = successive_minima(tw, 25);
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(minima2[i].mid_double() - minima[i].mid_double()) <= 1e-20);
    }
}

TEST_CASE("bound too small is detected") {
    // nearly-parallel basis: the shortest vector needs coefficients beyond 5
    HeightLattice lat = synthetic({{1.0, 0.999}, {0.999, 1.0}});
    CHECK_THROWS_AS(successive_minima(lat, 5), bound_too_small);
    auto minima = successive_minima(lat, 40);
    CHECK(minima[0].mid_double() == doctest::Approx(0.002).epsilon(1e-6));
}
