#include "ellreg/heights.hpp"

#include <algorithm>

namespace ellreg {

namespace {

long val_nonzero(const Rat& q, const Int& p) {
    // treat an exact zero as "divisible as much as needed"
    if (q == 0) return 1L << 30;
    return valuation(q, p);
}

}  // namespace

ErrReal naive_height(const CurvePoint& P, long prec) {
    if (P.infinity) throw infinity_point();
    Int num(P.x.get_num()), den(P.x.get_den());
    Int mx = ::abs(num) > den ? ::abs(num) : den;
    return ErrReal::log_integer(mx == 0 ? Int(1) : mx, prec);
}

HeightEngine::HeightEngine(MinimalModelResult min, long prec, const FactorConfig& fc)
    : HeightEngine(std::move(min), AnalyticContext{}, fc) {
    ctx_ = make_analytic_context(min_, prec);
    prec_ = prec;
}

HeightEngine::HeightEngine(MinimalModelResult min, AnalyticContext ctx, const FactorConfig& fc)
    : min_(std::move(min)), ctx_(std::move(ctx)), prec_(ctx_.prec) {
    disc_fact_ = factorize(min_.disc_min, fc);
}

bool HeightEngine::singular_reduction(const CurvePoint& Q, const Int& p) const {
    if (Q.infinity) return false;
    if (Q.x != 0 && valuation(Q.x, p) < 0) return false;  // formal group, nonsingular
    Rat w = two_y_coordinate(min_.curve, Q);
    Rat t = curve_partial_x(min_.curve, Q);
    return val_nonzero(w, p) >= 1 && val_nonzero(t, p) >= 1;
}

int HeightEngine::multiplier_clearing_additive(const CurvePoint& P) const {
    for (int k : {1, 2, 3, 4, 6, 12}) {
        CurvePoint Q = point_mul(min_.curve, Int(k), P);
        if (Q.infinity) continue;
        bool ok = true;
        for (const auto& [p, e] : disc_fact_) {
            bool additive = (min_.c4_min == 0) || mpz_divisible_p(min_.c4_min.get_mpz_t(), p.get_mpz_t());
            if (additive && singular_reduction(Q, p)) {
                ok = false;
                break;
            }
        }
        if (ok) return k;
    }
    // the component group at an additive prime has exponent dividing 4,
    // so k = 12 always clears it for a nontorsion point
    throw error("no multiplier cleared the additive primes");
}

ErrReal HeightEngine::lambda_archimedean(const CurvePoint& Q) const {
    if (Q.infinity) throw infinity_point();
    long prec = prec_;
    const WeierstrassCurve& E = min_.curve;
    Rat Xq = Q.x + E.b2 / 12;
    ErrReal X = ErrReal::from_rational(Xq, prec);
    if (ctx_.roots.three_real) {
        ErrReal gap = ctx_.roots.e1.re - X;
        if (gap.definitely_positive()) {
            // bounded component: push to the identity component and pull back
            // through lambda(2Q) = 4 lambda(Q) - log|W(Q)| + (1/4) log|disc|
            CurvePoint Q2 = point_add(E, Q, Q);
            if (Q2.infinity) throw error("archimedean local height at a 2-torsion point");
            ErrReal lam2 = lambda_archimedean(Q2);
            ErrReal logw = ErrReal::log_rational_abs(two_y_coordinate(E, Q), prec);
            ErrReal logd = ErrReal::log_integer(abs(min_.disc_min), prec);
            return (lam2 + logw - logd.div_si(4)).div_si(4);
        }
        if (!(X - ctx_.roots.e1.re).definitely_positive())
            throw precision_exhausted("component of point not certified");
    }
    ErrComplex Xc = ErrComplex::from_real(X);
    ErrComplex z = carlson_rf(Xc - ctx_.roots.e1, Xc - ctx_.roots.e2, Xc - ctx_.roots.e3);
    ErrReal alpha = z.re.widened(z.im) / ctx_.basis.omega1.re;
    // rewrite z = alpha w1 in the reduced basis: coefficients transform by
    // the inverse of the recorded unimodular matrix
    const auto& m = ctx_.tau.unimodular;
    ErrReal beta_r = alpha.mul_si(-m[2]);
    ErrReal alpha_r = alpha.mul_si(m[0]);
    // normalize: beta in [0, 1/2] up to radii, using lambda(-z) = lambda(z)
    long nb = beta_r.round_to_long();
    beta_r = beta_r.add_si(-nb);
    if (mpfr_sgn(beta_r.mid_raw()) < 0) {
        beta_r = -beta_r;
        alpha_r = -alpha_r;
    }
    long na = alpha_r.round_to_long();
    alpha_r = alpha_r.add_si(-na);

    const ErrReal& tre = ctx_.tau.re;
    const ErrReal& tim = ctx_.tau.im;
    ErrReal two_pi = ErrReal::pi(prec).mul_si(2);
    ErrReal log_abs_q = -(two_pi * tim);
    ErrReal abs_q = log_abs_q.exp();
    ErrReal q_up = abs_q.upper();
    ErrComplex q{abs_q * (two_pi * tre).cos(), abs_q * (two_pi * tre).sin()};
    // u = exp(2 pi i (alpha + beta tau))
    ErrReal u_angle = two_pi * (alpha_r + beta_r * tre);
    ErrReal u_mag = (log_abs_q * beta_r).exp();
    ErrComplex u = ErrComplex::unit_circle(u_angle).mul_real(u_mag);

    ErrReal one = ErrReal::from_si(1, prec);
    ErrComplex one_c{one, ErrReal::zero(prec)};
    // B2(beta)/2 log|q| + log|1-u| + sum_n log|(1-q^n u)(1-q^n/u)|
    ErrReal b2t = beta_r * beta_r - beta_r + ErrReal::from_rational(Rat(1, 6), prec);
    ErrReal s = (b2t * log_abs_q).div_si(2) + (one_c - u).abs().log();
    ErrComplex qn = q;
    ErrReal quarter_pow = q_up.sqrt().sqrt();  // upper bound for |q|^(1/4)
    ErrReal tail_den = ((one - q_up) * (one - quarter_pow)).lower();
    ErrReal target = ErrReal::from_si(1, 64).mul_2si(-prec - 4);
    bool bounded = false;
    for (int n = 1; n <= 4 * static_cast<int>(prec) + 64; ++n) {
        ErrComplex qnu = qn * u;
        ErrComplex qnv = qn / u;
        s = s + ((one_c - qnu).abs() * (one_c - qnv).abs()).log();
        qn = qn * q;
        // |q^k u| <= |q|^k and |q^k / u| <= |q|^(k - 1/2) for beta <= 1/2
        ErrReal tail = ((q_up.pow_si(n + 1) + q_up.pow_si(n)) / tail_den).upper();
        if (tail.definitely_lt(target) || !tail.definitely_positive()) {
            s = s.widened(tail);
            bounded = true;
            break;
        }
    }
    if (!bounded) throw precision_exhausted("archimedean local height tail");
    return -s;
}

ErrReal HeightEngine::lambda_nonarchimedean_total(const CurvePoint& Q) const {
    if (Q.infinity) throw infinity_point();
    long prec = prec_;
    Int den(Q.x.get_den());
    ErrReal total = ErrReal::log_integer(den == 1 ? Int(1) : den, prec).div_si(2);
    if (den == 1) total = ErrReal::zero(prec);
    for (const auto& [p, e] : disc_fact_) {
        bool additive = (min_.c4_min == 0) || mpz_divisible_p(min_.c4_min.get_mpz_t(), p.get_mpz_t());
        Rat mu(0);
        if (singular_reduction(Q, p)) {
            if (additive)
                throw error("singular reduction at an additive prime; multiply the point first");
            Rat w = two_y_coordinate(min_.curve, Q);
            Rat m(val_nonzero(w, p));
            if (m > Rat(e, 2)) m = Rat(e, 2);
            Rat t = m / e;
            mu = Rat(e, 2) * (t * t - t + Rat(1, 6));
        } else {
            mu = Rat(e) / 12;  // the constant part of (N/2) B2(m/N) at m = 0
        }
        total = total + ErrReal::from_rational(mu, prec) * ErrReal::log_integer(p, prec);
    }
    return total;
}

ErrReal HeightEngine::height(const CurvePoint& P) const {
    if (P.infinity) return ErrReal::zero(prec_);
    if (torsion_order(min_.curve, P)) return ErrReal::zero(prec_);
    int k = multiplier_clearing_additive(P);
    CurvePoint Q = point_mul(min_.curve, Int(k), P);
    ErrReal total = lambda_archimedean(Q) + lambda_nonarchimedean_total(Q);
    return total.div_si(static_cast<long>(k) * k);
}

ErrReal HeightEngine::pairing(const CurvePoint& P, const CurvePoint& Q) const {
    CurvePoint S = point_add(min_.curve, P, Q);
    return (height(S) - height(P) - height(Q)).div_si(2);
}

CanonicalHeight canonical_height(const MinimalModelResult& min, const CurvePoint& P, double tol,
                                 long max_bits) {
    CanonicalHeight out;
    out.point = P;
    if (P.infinity || torsion_order(min.curve, P)) {
        out.value = ErrReal::zero(128);
        out.torsion = true;
        return out;
    }
    for (long bits = 128; bits <= max_bits; bits *= 2) {
        try {
            HeightEngine engine(min, bits);
            ErrReal h = engine.height(P);
            if (h.rad_double() <= tol) {
                out.value = h;
                return out;
            }
        } catch (const precision_exhausted&) {
        } catch (const boundary_ambiguity&) {
        } catch (const interval_contains_zero&) {
        }
    }
    throw precision_exhausted("canonical_height: tolerance unreachable within max bits");
}

ErrReal height_pairing(const MinimalModelResult& min, const CurvePoint& P, const CurvePoint& Q,
                       double tol, long max_bits) {
    for (long bits = 128; bits <= max_bits; bits *= 2) {
        try {
            HeightEngine engine(min, bits);
            ErrReal v = engine.pairing(P, Q);
            if (v.rad_double() <= tol) return v;
        } catch (const precision_exhausted&) {
        } catch (const boundary_ambiguity&) {
        } catch (const interval_contains_zero&) {
        }
    }
    throw precision_exhausted("height_pairing: tolerance unreachable within max bits");
}

// ------------------------------------------------------- doubling oracle

namespace {

// dense polynomials over Q, highest degree last
using Poly = std::vector<Rat>;

Poly trim(Poly p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
    return p;
}

Poly poly_sub(const Poly& a, const Poly& b) {
    Poly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return trim(r);
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// a = q b + r
std::pair<Poly, Poly> poly_divmod(Poly a, const Poly& b) {
    Poly q;
    a = trim(a);
    if (b.empty()) throw error("poly division by zero");
    while (a.size() >= b.size()) {
        Rat coef = a.back() / b.back();
        size_t shift = a.size() - b.size();
        Poly term(shift + 1, Rat(0));
        term[shift] = coef;
        if (q.size() < term.size()) q.resize(term.size(), Rat(0));
        q[shift] += coef;
        a = poly_sub(a, poly_mul(term, b));
    }
    return {trim(q), a};
}

// extended gcd for coprime F, G: returns (U, V, R) with U F + V G = R, all
// integral, R a nonzero integer
std::tuple<Poly, Poly, Int> poly_bezout(const Poly& F, const Poly& G) {
    Poly r0 = F, r1 = G;
    Poly u0 = {Rat(1)}, u1 = {};
    Poly v0 = {}, v1 = {Rat(1)};
    while (!(r1.size() <= 1)) {
        auto [q, r] = poly_divmod(r0, r1);
        Poly u2 = poly_sub(u0, poly_mul(q, u1));
        Poly v2 = poly_sub(v0, poly_mul(q, v1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u2;
        v0 = v1;
        v1 = v2;
    }
    if (r1.empty()) throw error("duplication polynomials not coprime");
    Rat c = r1[0];
    // scale so U F + V G = 1, then clear denominators
    Int lcm = 1;
    auto fold = [&](const Poly& p) {
        for (const Rat& q : p) {
            Rat s = q / c;
            Int den(s.get_den());
            mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
        }
    };
    fold(u1);
    fold(v1);
    Poly U, V;
    for (const Rat& q : u1) U.push_back(q / c * Rat(lcm));
    for (const Rat& q : v1) V.push_back(q / c * Rat(lcm));
    return {U, V, lcm};
}

Rat poly_abs_coeff_sum(const Poly& p) {
    Rat s(0);
    for (const Rat& q : p) s += abs(q);
    return s;
}

Poly reverse_poly(const Poly& p, size_t deg) {
    Poly r(deg + 1, Rat(0));
    for (size_t i = 0; i < p.size(); ++i) r[deg - i] = p[i];
    return trim(r);
}

}  // namespace

ErrReal canonical_height_doubling_oracle(const MinimalModelResult& min, const CurvePoint& P,
                                         int n_steps, long prec) {
    if (n_steps < 0 || n_steps > 12) throw error("doubling oracle: n_steps must be in [0, 12]");
    if (P.infinity) throw infinity_point();
    const WeierstrassCurve& E = min.curve;
    Int b2(E.b2.get_num()), b4(E.b4.get_num()), b6(E.b6.get_num()), b8(E.b8.get_num());

    // x-only doubling ladder on integer numerator/denominator pairs
    Int A(P.x.get_num()), B(P.x.get_den());
    for (int i = 0; i < n_steps; ++i) {
        Int A2 = A * A, B2q = B * B, AB = A * B;
        Int A_next = A2 * A2 - b4 * A2 * B2q - 2 * b6 * AB * B2q - b8 * B2q * B2q;
        Int B_next = B * (4 * A2 * A + b2 * A2 * B + 2 * b4 * AB * B + b6 * B2q * B);
        if (B_next == 0) throw error("doubling oracle hit 2-torsion before n steps");
        A = A_next;
        B = B_next;
    }
    Int g;
    mpz_gcd(g.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
    A /= g;
    B /= g;
    Int mx = ::abs(A) > ::abs(B) ? ::abs(A) : ::abs(B);
    ErrReal hx = ErrReal::log_integer(mx == 0 ? Int(1) : mx, prec);

    // enclosure of hhat_x - h_x from the duplication pair F, G:
    //   F = x^4 - b4 x^2 - 2 b6 x - b8,  G = 4 x^3 + b2 x^2 + 2 b4 x + b6
    Poly F = {Rat(-b8), Rat(-2 * b6), Rat(-b4), Rat(0), Rat(1)};
    Poly G = {Rat(b6), Rat(2 * b4), Rat(b2), Rat(4)};
    auto [U, V, R] = poly_bezout(F, G);
    Poly Fs = reverse_poly(F, 4), Gs = reverse_poly(G, 4);
    auto [Us, Vs, Rs] = poly_bezout(Fs, Gs);

    ErrReal c_upper = ErrReal::from_rational(
        std::max(poly_abs_coeff_sum(F), poly_abs_coeff_sum(G)), prec).log();
    Rat cu = poly_abs_coeff_sum(U) + poly_abs_coeff_sum(V);
    Rat cus = poly_abs_coeff_sum(Us) + poly_abs_coeff_sum(Vs);
    // delta(Q) = h(x(2Q)) - 4 h(x(Q)) obeys
    //   -[log max(CU/R, CU*/R*) + log R + log R*] <= delta <= log c_upper
    ErrReal low1 = ErrReal::from_rational(cu / Rat(R), prec).log();
    ErrReal low2 = ErrReal::from_rational(cus / Rat(Rs), prec).log();
    ErrReal d_defect = ErrReal::max_upper(low1, low2) + ErrReal::log_integer(::abs(R), prec) +
                       ErrReal::log_integer(::abs(Rs), prec);
    if (!d_defect.definitely_positive()) d_defect = ErrReal::zero(prec).widened(d_defect.abs());
    ErrReal u_defect = c_upper;

    // hhat_x(Q) - h_x(Q) lies in [-D/3, U/3]
    ErrReal D3 = d_defect.div_si(3).upper();
    ErrReal U3 = u_defect.div_si(3).upper();
    ErrReal center = (hx + (U3 - D3).div_si(2)).mul_2si(-2 * n_steps).div_si(2);
    ErrReal halfwidth = (U3 + D3).div_si(2).mul_2si(-2 * n_steps).div_si(2).upper();
    return center.widened(halfwidth);
}

}  // namespace ellreg
