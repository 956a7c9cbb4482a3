#pragma once

#include <stdexcept>
#include <string>

namespace ellreg {

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct singular_curve : error {
    explicit singular_curve(const std::string& msg = "curve has discriminant zero") : error(msg) {}
};
struct not_prime : error {
    explicit not_prime(const std::string& msg = "argument is not prime") : error(msg) {}
};
struct factorization_failure : error {
    explicit factorization_failure(const std::string& msg) : error(msg) {}
};
struct infinity_point : error {
    explicit infinity_point(const std::string& msg = "point at infinity not allowed here") : error(msg) {}
};
struct interval_contains_zero : error {
    explicit interval_contains_zero(const std::string& msg = "interval contains zero") : error(msg) {}
};
struct precision_exhausted : error {
    explicit precision_exhausted(const std::string& msg = "working precision exhausted") : error(msg) {}
};
struct boundary_ambiguity : error {
    explicit boundary_ambiguity(const std::string& msg = "fundamental-domain boundary within radii") : error(msg) {}
};
struct torsion_generator : error {
    explicit torsion_generator(const std::string& msg = "torsion point used as lattice generator") : error(msg) {}
};
struct degenerate_lattice : error {
    explicit degenerate_lattice(const std::string& msg = "Gram determinant not separated from zero") : error(msg) {}
};
struct bound_too_small : error {
    explicit bound_too_small(const std::string& msg = "enumeration bound does not certify the minima") : error(msg) {}
};
struct no_generators : error {
    explicit no_generators(const std::string& msg = "no generators available") : error(msg) {}
};
struct parse_error : error {
    explicit parse_error(const std::string& msg) : error(msg) {}
};
struct incomparable_within_radius : error {
    explicit incomparable_within_radius(const std::string& msg = "magnitudes overlap within radii") : error(msg) {}
};

}  // namespace ellreg
