#pragma once

#include <optional>
#include <string>

#include "ellreg/curve.hpp"
#include "ellreg/errreal.hpp"

namespace ellreg {

// Iterated-exponential representation of a magnitude: |x| = exp^level(top)
// for level >= 1, |x| = top for level 0, and |x| = 1/exp^{-level}(top) for
// level <= -1. Canonical form keeps top in [1, e) whenever level != 0; the
// exact rational value is carried alongside when the construction allows.
struct TowerMagnitude {
    int sign = 0;  // -1, 0, +1
    long level = 0;
    ErrReal top;
    std::optional<Rat> exact_value;
};

enum class TowerOrder { Less, Equal, Greater };

TowerMagnitude tower_from_rational(const Rat& v, long prec);
// sign * exp(log_mag), log_mag any real ball
TowerMagnitude tower_from_log(int sign, const ErrReal& log_mag);
// sign * exp(exp(loglog_mag)), for magnitudes whose log is itself unrepresentable
TowerMagnitude tower_from_loglog(int sign, const ErrReal& loglog_mag);
TowerMagnitude tower_normalize(TowerMagnitude t);

// total order on real magnitudes; Equal means the representations coincide
// within tight radii, incomparable_within_radius is thrown for loose overlaps
TowerOrder tower_compare(const TowerMagnitude& a, const TowerMagnitude& b);

// "(+|-)exp^level(top)" with the requested significant digits
std::string tower_to_string(const TowerMagnitude& t, int digits = 20);

// Theorem-level constants. g is the abelian-variety dimension.
struct Thm11Constants {
    TowerMagnitude c, c0;  // c = (12g)^{-12 g^{12 g^{4g}}}, c0 = -1/c
};
Thm11Constants thm11_constants(long g, long prec = 256);

struct Cor12Constants {
    TowerMagnitude c1, c2, c3;  // c1 = c/17, c2 = 1/17, c3 = -1/c1
};
Cor12Constants cor12_constants(long g, long prec = 256);

struct Prop33Constants {
    TowerMagnitude c5, c6;  // jacobian: 1/12 and 0
};
Prop33Constants prop33_constants(long g, bool jacobian, long prec = 256);

struct Prop36Constants {
    TowerMagnitude c16, c17;  // c16 = c5 / 12^{4g^2}; jacobian: 1/12^{4g^2+1}, 0
};
Prop36Constants prop36_constants(long g, bool jacobian, long prec = 256);

struct RankBoundInputs {
    long g = 1;
    long d = 1;
    ErrReal log_N0;
    ErrReal log_abs_disc_K;  // 0 over Q
};

// 4 g^3 d^2 2^{8g^2} log N0 + g d 2^{8g^2} (log|disc_K| + g^2 d^2 log 16)
ErrReal rank_bound(const RankBoundInputs& in);
// headline form c4 = (12g)^{12 g^{12 g^{4g}}} d^3
TowerMagnitude rank_bound_headline(long g, long d, long prec = 256);

}  // namespace ellreg
