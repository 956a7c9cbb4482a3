#pragma once

#include <vector>

#include "ellreg/heights.hpp"
#include "ellreg/verdict.hpp"

namespace ellreg {

struct HeightLattice {
    std::vector<CurvePoint> generators;           // on the minimal model
    std::vector<std::vector<ErrReal>> gram;       // Neron-Tate pairings
    int m = 0;
};

// Gram matrix of the height pairing on the given points. Rejects torsion
// generators and lattices whose determinant is not separated from zero.
HeightLattice build_lattice(const HeightEngine& engine, const std::vector<CurvePoint>& points);
HeightLattice build_lattice(const MinimalModelResult& min, const std::vector<CurvePoint>& points,
                            double tol, long max_bits = 4096);

struct RegulatorReport {
    ErrReal reg_L;
    ErrReal reg_poincare;             // 2^m reg_L (principal polarization, u = 1)
    std::vector<ErrReal> minima_sq;   // filled by successive_minima when requested
    int m = 0;
    int m0 = 0;                       // no strict abelian subvarieties at g = 1
    int zariski_rank = 0;
};

// |det(gram)| with a certified radius: exact determinant of the dyadic
// midpoint matrix plus a Hadamard-style perturbation bound.
RegulatorReport regulator(const HeightLattice& lat);

// lambda_1^2 <= ... <= lambda_m^2 by pruned integer enumeration; the region
// |n_i| <= search_bound must provably contain the minima (dual Gram bound),
// otherwise bound_too_small is thrown.
std::vector<ErrReal> successive_minima(const HeightLattice& lat, long search_bound = 25);

// product(lambda_i^2) <= m^m reg_L; equality counts as a pass
Verdict minkowski_check(const RegulatorReport& report);
// reg_L <= product of diagonal entries
Verdict hadamard_check(const HeightLattice& lat);

}  // namespace ellreg
