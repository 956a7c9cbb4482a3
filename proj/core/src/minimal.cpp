#include "ellreg/minimal.hpp"

#include <algorithm>
#include <optional>

#include "ellreg/factor.hpp"

namespace ellreg {

WeierstrassCurve apply_transform(const WeierstrassCurve& E, const ModelTransform& T) {
    const Rat &u = T.u, &r = T.r, &s = T.s, &t = T.t;
    Rat u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    Rat A1 = (E.a1 + 2 * s) / u;
    Rat A2 = (E.a2 - s * E.a1 + 3 * r - s * s) / u2;
    Rat A3 = (E.a3 + r * E.a1 + 2 * t) / u3;
    Rat A4 = (E.a4 - s * E.a3 + 2 * r * E.a2 - (t + r * s) * E.a1 + 3 * r * r - 2 * s * t) / u4;
    Rat A6 = (E.a6 + r * E.a4 + r * r * E.a2 + r * r * r - t * E.a3 - t * t - r * t * E.a1) / u6;
    return WeierstrassCurve::from_ainvs(A1, A2, A3, A4, A6);
}

CurvePoint map_point(const ModelTransform& T, const CurvePoint& P) {
    if (P.infinity) return P;
    Rat u2 = T.u * T.u, u3 = u2 * T.u;
    Rat xp = (P.x - T.r) / u2;
    Rat yp = (P.y - T.s * (P.x - T.r) - T.t) / u3;
    return CurvePoint::affine(xp, yp);
}

CurvePoint map_point_back(const ModelTransform& T, const CurvePoint& P) {
    if (P.infinity) return P;
    Rat u2 = T.u * T.u, u3 = u2 * T.u;
    Rat x = u2 * P.x + T.r;
    Rat y = u3 * P.y + T.s * u2 * P.x + T.t;
    return CurvePoint::affine(x, y);
}

namespace {

ModelTransform compose(const ModelTransform& T0, const ModelTransform& T1) {
    ModelTransform T;
    T.u = T0.u * T1.u;
    T.r = T0.u * T0.u * T1.r + T0.r;
    T.s = T0.u * T1.s + T0.s;
    T.t = T0.u * T0.u * T0.u * T1.t + T0.s * T0.u * T0.u * T1.r + T0.t;
    return T;
}

long residue(const Int& n, long m) {
    Int r = n % m;
    if (r < 0) r += m;
    return r.get_si();
}

// reduced integral model with the given invariants, if one exists
std::optional<WeierstrassCurve> recover_model(const Int& c4, const Int& c6) {
    for (long rho = -5; rho <= 6; ++rho) {
        Int rr = Int(rho) * rho;
        if ((rr - c4) % 24 != 0) continue;
        long rho4 = ((rho % 4) + 4) % 4;
        if (rho4 != 0 && rho4 != 1) continue;
        Int b4 = (rr - c4) / 24;
        Int num = 36 * rho * b4 - rr * rho - c6;
        if (num % 216 != 0) continue;
        Int b6 = num / 216;
        long b64 = residue(b6, 4);
        if (b64 != 0 && b64 != 1) continue;
        long a1 = rho & 1;
        Int a2 = (Int(rho) - a1) / 4;
        long a3 = residue(b6, 2);
        Int a6 = (b6 - a3) / 4;
        Int b4a = b4 - Int(a1) * a3;
        if (b4a % 2 != 0) continue;
        Int a4 = b4a / 2;
        WeierstrassCurve E = WeierstrassCurve::from_ainvs(Rat(a1), Rat(a2), Rat(a3), Rat(a4), Rat(a6));
        if (E.c4 == Rat(c4) && E.c6 == Rat(c6)) return E;
    }
    return std::nullopt;
}

long val_or_huge(const Int& n, const Int& p) {
    if (n == 0) return 1L << 30;
    return valuation(n, p);
}

}  // namespace

MinimalModelResult minimal_model(const WeierstrassCurve& E) {
    // scale to an integral model first
    Int d = 1;
    for (const Rat* a : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6}) {
        Int den = a->get_den();
        mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), den.get_mpz_t());
    }
    ModelTransform T0;
    T0.u = Rat(1, d);
    WeierstrassCurve Ei = apply_transform(E, T0);

    Int c4(Ei.c4.get_num()), c6(Ei.c6.get_num()), disc(Ei.disc.get_num());
    auto fact = factorize(disc);

    Int u = 1;
    std::vector<std::pair<Int, long>> exps;
    for (const auto& [p, e] : fact) {
        long k = std::min({val_or_huge(c4, p) / 4, val_or_huge(c6, p) / 6, long(e) / 12});
        if (k > 0) exps.push_back({p, k});
    }
    // Kraus conditions only bite at 2 and 3; back off the exponent at the
    // offending prime until the candidate invariants admit an integral model.
    auto kraus3 = [](const Int& c6c) {
        if (c6c == 0) return true;
        long v = valuation(c6c, 3);
        return v != 1 && v != 2;
    };
    auto kraus2 = [](const Int& c4c, const Int& c6c) {
        if (residue(c6c, 4) == 3) return true;
        return residue(c4c, 16) == 0 && (residue(c6c, 32) == 0 || residue(c6c, 32) == 8);
    };
    std::optional<WeierstrassCurve> Em;
    Int c4m, c6m;
    while (true) {
        u = 1;
        for (const auto& [p, k] : exps) {
            Int pk;
            mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k));
            u *= pk;
        }
        Int u4 = u * u * u * u;
        c4m = c4 / u4;
        c6m = c6 / (u4 * u * u);
        Int bad = 0;
        if (!kraus3(c6m)) bad = 3;
        else if (!kraus2(c4m, c6m)) bad = 2;
        if (bad == 0) {
            Em = recover_model(c4m, c6m);
            if (!Em) throw error("minimal model recovery failed on Kraus-valid invariants");
            break;
        }
        bool lowered = false;
        for (auto& [p, k] : exps) {
            if (p == bad && k > 0) {
                k -= 1;
                lowered = true;
                break;
            }
        }
        if (!lowered) throw error("minimal model recovery failed");
    }

    // transformation from the integral model to the minimal one
    ModelTransform T1;
    T1.u = Rat(u);
    T1.s = (T1.u * Em->a1 - Ei.a1) / 2;
    T1.r = (T1.u * T1.u * Em->a2 - Ei.a2 + T1.s * Ei.a1 + T1.s * T1.s) / 3;
    T1.t = (T1.u * T1.u * T1.u * Em->a3 - Ei.a3 - T1.r * Ei.a1) / 2;
    WeierstrassCurve check = apply_transform(Ei, T1);
    if (!(check.a1 == Em->a1 && check.a2 == Em->a2 && check.a3 == Em->a3 &&
          check.a4 == Em->a4 && check.a6 == Em->a6))
        throw error("minimal model transform reconstruction failed");

    MinimalModelResult out;
    out.curve = *Em;
    out.transform = compose(T0, T1);
    out.disc_min = Int(Em->disc.get_num());
    out.c4_min = Int(Em->c4.get_num());
    out.c6_min = Int(Em->c6.get_num());

    // disc(input) = u_total^12 * disc_min, exactly
    Rat ut = out.transform.u;
    Rat u12 = ut;
    for (int i = 0; i < 11; ++i) u12 *= ut;
    if (E.disc != u12 * Rat(out.disc_min)) throw error("minimal model discriminant mismatch");
    return out;
}

}  // namespace ellreg
