#include "ellreg/reduction.hpp"

#include <algorithm>

namespace ellreg {

// ------------------------------------------------------------- factoring

bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

namespace {

void rho_split(const Int& n, std::vector<Int>& out, unsigned long budget);

void push_factor(const Int& f, std::vector<Int>& out, unsigned long budget) {
    if (f == 1) return;
    if (is_probable_prime(f)) {
        out.push_back(f);
        return;
    }
    rho_split(f, out, budget);
}

// Brent's cycle variant of Pollard rho
void rho_split(const Int& n, std::vector<Int>& out, unsigned long budget) {
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        Int r;
        mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
        push_factor(r, out, budget);
        push_factor(r, out, budget);
        return;
    }
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0x5eedul);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Int c = rng.get_z_range(n - 3) + 1;
        Int y = rng.get_z_range(n - 1) + 1;
        Int g = 1, q = 1, x, ys;
        unsigned long r = 1, total = 0;
        const unsigned long m = 128;
        while (g == 1 && total < budget) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = (y * y + c) % n;
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                unsigned long lim = std::min(m, r - k);
                for (unsigned long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    Int diff = x - y;
                    if (diff < 0) diff = -diff;
                    if (diff == 0) continue;
                    q = q * diff % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += lim;
                total += lim;
            }
            r *= 2;
        }
        if (g == n) {
            // backtrack one step at a time
            do {
                ys = (ys * ys + c) % n;
                Int diff = x - ys;
                if (diff < 0) diff = -diff;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != 1 && g != n) {
            push_factor(g, out, budget);
            push_factor(n / g, out, budget);
            return;
        }
    }
    throw factorization_failure("rho budget exhausted on composite " + n.get_str());
}

}  // namespace

std::vector<std::pair<Int, int>> factorize(const Int& n, const FactorConfig& cfg) {
    if (n == 0) throw factorization_failure("factorize(0)");
    Int m = ::abs(n);
    std::vector<Int> primes;
    for (unsigned long p = 2; p <= cfg.trial_bound && m > 1; p += (p == 2 ? 1 : 2)) {
        if (Int(p) * p > m) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            primes.push_back(Int(p));
            m /= p;
        }
    }
    if (m > 1) push_factor(m, primes, cfg.rho_iterations);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<Int, int>> out;
    for (const Int& p : primes) {
        if (!out.empty() && out.back().first == p)
            out.back().second++;
        else
            out.push_back({p, 1});
    }
    return out;
}

// ----------------------------------------------------------- reduction

ReductionType classify_reduction(const MinimalModelResult& min, const Int& p) {
    if (p < 2 || !is_probable_prime(p)) throw not_prime("not a prime: " + p.get_str());
    ReductionType rt;
    rt.prime = p;
    if (!mpz_divisible_p(min.disc_min.get_mpz_t(), p.get_mpz_t())) {
        rt.kind = ReductionKind::Good;
    } else if (min.c4_min != 0 && !mpz_divisible_p(min.c4_min.get_mpz_t(), p.get_mpz_t())) {
        rt.kind = ReductionKind::Multiplicative;
    } else {
        rt.kind = ReductionKind::Additive;
    }
    return rt;
}

ConductorNorms conductor_norms(const MinimalModelResult& min, long prec, const FactorConfig& cfg) {
    ConductorNorms out;
    out.log_N0 = ErrReal::zero(prec);
    out.log_Nst = ErrReal::zero(prec);
    out.log_Nuns = ErrReal::zero(prec);
    for (const auto& [p, e] : factorize(min.disc_min, cfg)) {
        ReductionType rt = classify_reduction(min, p);
        out.factorization.push_back(rt);
        ErrReal lp = ErrReal::log_integer(p, prec);
        out.log_N0 = out.log_N0 + lp;
        if (rt.kind == ReductionKind::Multiplicative)
            out.log_Nst = out.log_Nst + lp;
        else
            out.log_Nuns = out.log_Nuns + lp;
    }
    return out;
}

const char* reduction_kind_name(ReductionKind k) {
    switch (k) {
        case ReductionKind::Good: return "good";
        case ReductionKind::Multiplicative: return "multiplicative";
        case ReductionKind::Additive: return "additive";
    }
    return "?";
}

}  // namespace ellreg
