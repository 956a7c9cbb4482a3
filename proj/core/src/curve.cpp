#include "ellreg/curve.hpp"

namespace ellreg {

long valuation(const Int& n, const Int& p) {
    if (n == 0) throw error("valuation of zero");
    Int m = ::abs(n);
    long v = 0;
    Int q, r;
    while (true) {
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        if (r != 0) break;
        m = q;
        ++v;
    }
    return v;
}

long valuation(const Rat& q, const Int& p) {
    if (q == 0) throw error("valuation of zero");
    long v = valuation(Int(q.get_num()), p);
    if (q.get_den() != 1) v -= valuation(Int(q.get_den()), p);
    return v;
}

WeierstrassCurve WeierstrassCurve::from_ainvs(const Rat& a1, const Rat& a2, const Rat& a3,
                                              const Rat& a4, const Rat& a6) {
    WeierstrassCurve E;
    E.a1 = a1;
    E.a2 = a2;
    E.a3 = a3;
    E.a4 = a4;
    E.a6 = a6;
    E.b2 = a1 * a1 + 4 * a2;
    E.b4 = 2 * a4 + a1 * a3;
    E.b6 = a3 * a3 + 4 * a6;
    E.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    E.c4 = E.b2 * E.b2 - 24 * E.b4;
    E.c6 = -E.b2 * E.b2 * E.b2 + 36 * E.b2 * E.b4 - 216 * E.b6;
    E.disc = -E.b2 * E.b2 * E.b8 - 8 * E.b4 * E.b4 * E.b4 - 27 * E.b6 * E.b6 + 9 * E.b2 * E.b4 * E.b6;
    if (E.disc == 0) throw singular_curve();
    return E;
}

bool WeierstrassCurve::integral() const {
    return a1.get_den() == 1 && a2.get_den() == 1 && a3.get_den() == 1 && a4.get_den() == 1 &&
           a6.get_den() == 1;
}

bool on_curve(const WeierstrassCurve& E, const CurvePoint& P) {
    if (P.infinity) return true;
    Rat lhs = P.y * P.y + E.a1 * P.x * P.y + E.a3 * P.y;
    Rat rhs = P.x * P.x * P.x + E.a2 * P.x * P.x + E.a4 * P.x + E.a6;
    return lhs == rhs;
}

CurvePoint point_neg(const WeierstrassCurve& E, const CurvePoint& P) {
    if (P.infinity) return P;
    return CurvePoint::affine(P.x, -P.y - E.a1 * P.x - E.a3);
}

CurvePoint point_add(const WeierstrassCurve& E, const CurvePoint& P, const CurvePoint& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    if (P.x == Q.x && P.y + Q.y + E.a1 * Q.x + E.a3 == 0) return CurvePoint::at_infinity();
    Rat lam, nu;
    if (P == Q) {
        Rat den = 2 * P.y + E.a1 * P.x + E.a3;
        lam = (3 * P.x * P.x + 2 * E.a2 * P.x + E.a4 - E.a1 * P.y) / den;
        nu = (-P.x * P.x * P.x + E.a4 * P.x + 2 * E.a6 - E.a3 * P.y) / den;
    } else {
        lam = (Q.y - P.y) / (Q.x - P.x);
        nu = (P.y * Q.x - Q.y * P.x) / (Q.x - P.x);
    }
    Rat x3 = lam * lam + E.a1 * lam - E.a2 - P.x - Q.x;
    Rat y3 = -(lam + E.a1) * x3 - nu - E.a3;
    return CurvePoint::affine(x3, y3);
}

CurvePoint point_mul(const WeierstrassCurve& E, const Int& n, const CurvePoint& P) {
    if (n < 0) return point_neg(E, point_mul(E, Int(-n), P));
    CurvePoint acc = CurvePoint::at_infinity();
    CurvePoint base = P;
    Int m = n;
    while (m > 0) {
        if (mpz_odd_p(m.get_mpz_t())) acc = point_add(E, acc, base);
        base = point_add(E, base, base);
        m >>= 1;
    }
    return acc;
}

Rat two_y_coordinate(const WeierstrassCurve& E, const CurvePoint& P) {
    return 2 * P.y + E.a1 * P.x + E.a3;
}

Rat curve_partial_x(const WeierstrassCurve& E, const CurvePoint& P) {
    return 3 * P.x * P.x + 2 * E.a2 * P.x + E.a4 - E.a1 * P.y;
}

std::optional<int> torsion_order(const WeierstrassCurve& E, const CurvePoint& P) {
    if (P.infinity) return 1;
    CurvePoint Q = P;
    // Mazur: rational torsion has order <= 12
    for (int n = 2; n <= 12; ++n) {
        Q = point_add(E, Q, P);
        if (Q.infinity) return n;
    }
    return std::nullopt;
}

std::string point_to_string(const CurvePoint& P) {
    if (P.infinity) return "O";
    return "(" + P.x.get_str() + "," + P.y.get_str() + ")";
}

}  // namespace ellreg
