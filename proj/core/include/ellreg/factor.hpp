#pragma once

#include <utility>
#include <vector>

#include "ellreg/curve.hpp"

namespace ellreg {

struct FactorConfig {
    unsigned long trial_bound = 1000000;  // trial division first
    unsigned long rho_iterations = 40000000;  // Brent rho budget per cofactor
};

bool is_probable_prime(const Int& n);

// Full factorization of |n|, primes ascending. Throws factorization_failure
// when the rho budget is exhausted on a composite cofactor.
std::vector<std::pair<Int, int>> factorize(const Int& n, const FactorConfig& cfg = {});

}  // namespace ellreg
