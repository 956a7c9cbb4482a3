#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "ellreg/errors.hpp"

namespace ellreg {

using Rat = mpq_class;
using Int = mpz_class;

// Exact p-adic valuation. Throws on zero input.
long valuation(const Int& n, const Int& p);
long valuation(const Rat& q, const Int& p);

// Weierstrass curve over Q with the derived quantities computed once at
// construction. Construction rejects singular equations.
struct WeierstrassCurve {
    Rat a1, a2, a3, a4, a6;
    Rat b2, b4, b6, b8;
    Rat c4, c6, disc;

    static WeierstrassCurve from_ainvs(const Rat& a1, const Rat& a2, const Rat& a3,
                                       const Rat& a4, const Rat& a6);
    bool integral() const;
};

struct CurvePoint {
    bool infinity = true;
    Rat x, y;

    static CurvePoint at_infinity() { return CurvePoint{}; }
    static CurvePoint affine(const Rat& x, const Rat& y) { return CurvePoint{false, x, y}; }
    bool operator==(const CurvePoint& o) const {
        if (infinity || o.infinity) return infinity == o.infinity;
        return x == o.x && y == o.y;
    }
};

bool on_curve(const WeierstrassCurve& E, const CurvePoint& P);

CurvePoint point_neg(const WeierstrassCurve& E, const CurvePoint& P);
CurvePoint point_add(const WeierstrassCurve& E, const CurvePoint& P, const CurvePoint& Q);
CurvePoint point_mul(const WeierstrassCurve& E, const Int& n, const CurvePoint& P);

// 2y + a1 x + a3; vanishes exactly at 2-torsion
Rat two_y_coordinate(const WeierstrassCurve& E, const CurvePoint& P);
// 3x^2 + 2 a2 x + a4 - a1 y; the other partial of the defining equation
Rat curve_partial_x(const WeierstrassCurve& E, const CurvePoint& P);

// Smallest n <= 12 with nP = O (Mazur bound over Q), or nullopt if none.
std::optional<int> torsion_order(const WeierstrassCurve& E, const CurvePoint& P);

std::string point_to_string(const CurvePoint& P);

}  // namespace ellreg
