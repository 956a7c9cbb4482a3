#pragma once

#include <vector>

#include "ellreg/curve.hpp"

namespace ellreg {

// Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t taking the
// source model to the primed model.
struct ModelTransform {
    Rat u = 1, r = 0, s = 0, t = 0;

    static ModelTransform identity() { return {}; }
    bool is_identity() const { return u == 1 && r == 0 && s == 0 && t == 0; }
};

WeierstrassCurve apply_transform(const WeierstrassCurve& E, const ModelTransform& T);
// map a point of the source model to the primed model
CurvePoint map_point(const ModelTransform& T, const CurvePoint& P);
CurvePoint map_point_back(const ModelTransform& T, const CurvePoint& P);

struct MinimalModelResult {
    WeierstrassCurve curve;     // globally minimal over Q
    ModelTransform transform;   // source model -> minimal model
    Int disc_min;
    Int c4_min;
    Int c6_min;
};

// Laska-Kraus-Connell global minimal model over Q.
MinimalModelResult minimal_model(const WeierstrassCurve& E);

}  // namespace ellreg
