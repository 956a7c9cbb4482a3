#include "ellreg/lattice.hpp"

#include <algorithm>
#include <cmath>

namespace ellreg {

namespace {

using RatMat = std::vector<std::vector<Rat>>;

RatMat midpoints(const HeightLattice& lat) {
    RatMat Q(lat.m, std::vector<Rat>(lat.m));
    for (int i = 0; i < lat.m; ++i)
        for (int j = 0; j < lat.m; ++j) Q[i][j] = lat.gram[i][j].mid_rational();
    return Q;
}

Rat max_radius(const HeightLattice& lat) {
    double r = 0;
    for (const auto& row : lat.gram)
        for (const ErrReal& g : row) r = std::max(r, g.rad_double());
    // dyadic upper bound of the largest entry radius
    return ErrReal::from_double(r, 64).upper().mid_rational();
}

Rat exact_det(RatMat A) {
    int n = static_cast<int>(A.size());
    Rat det(1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int row = col; row < n; ++row)
            if (A[row][col] != 0) {
                piv = row;
                break;
            }
        if (piv < 0) return Rat(0);
        if (piv != col) {
            std::swap(A[piv], A[col]);
            det = -det;
        }
        det *= A[col][col];
        for (int row = col + 1; row < n; ++row) {
            Rat f = A[row][col] / A[col][col];
            for (int k = col; k < n; ++k) A[row][k] -= f * A[col][k];
        }
    }
    return det;
}

// |det(A+E) - det(A)| <= (H + eps)^m - H^m with H, eps row-norm bounds
ErrReal det_perturbation(const HeightLattice& lat, long prec) {
    ErrReal H = ErrReal::zero(prec), eps = ErrReal::zero(prec);
    for (int i = 0; i < lat.m; ++i) {
        ErrReal hn = ErrReal::zero(prec), en = ErrReal::zero(prec);
        for (int j = 0; j < lat.m; ++j) {
            ErrReal a = lat.gram[i][j].abs().upper();
            hn = hn + a * a;
            ErrReal r = ErrReal::from_double(lat.gram[i][j].rad_double(), prec);
            en = en + r * r;
        }
        H = ErrReal::max_upper(H, hn.sqrt());
        eps = ErrReal::max_upper(eps, en.sqrt());
    }
    return ((H + eps).pow_si(lat.m) - H.pow_si(lat.m)).upper();
}

}  // namespace

HeightLattice build_lattice(const HeightEngine& engine, const std::vector<CurvePoint>& points) {
    HeightLattice lat;
    lat.generators = points;
    lat.m = static_cast<int>(points.size());
    const WeierstrassCurve& E = engine.minimal().curve;
    for (const CurvePoint& P : points) {
        if (!on_curve(E, P)) throw error("lattice generator not on the minimal model");
        if (P.infinity || torsion_order(E, P)) throw torsion_generator();
    }
    std::vector<ErrReal> h(lat.m);
    for (int i = 0; i < lat.m; ++i) h[i] = engine.height(points[i]);
    lat.gram.assign(lat.m, std::vector<ErrReal>(lat.m, ErrReal::zero(engine.ctx().prec)));
    for (int i = 0; i < lat.m; ++i) {
        lat.gram[i][i] = h[i];
        for (int j = i + 1; j < lat.m; ++j) {
            CurvePoint S = point_add(E, points[i], points[j]);
            ErrReal hs = S.infinity ? ErrReal::zero(engine.ctx().prec) : engine.height(S);
            ErrReal v = (hs - h[i] - h[j]).div_si(2);
            lat.gram[i][j] = v;
            lat.gram[j][i] = v;
        }
    }
    if (lat.m > 0) {
        RegulatorReport rep = regulator(lat);  // throws degenerate_lattice if unseparated
        (void)rep;
    }
    return lat;
}

HeightLattice build_lattice(const MinimalModelResult& min, const std::vector<CurvePoint>& points,
                            double tol, long max_bits) {
    for (long bits = 128; bits <= max_bits; bits *= 2) {
        try {
            HeightEngine engine(min, bits);
            HeightLattice lat = build_lattice(engine, points);
            bool ok = true;
            for (const auto& row : lat.gram)
                for (const ErrReal& g : row) ok = ok && g.rad_double() <= tol;
            if (ok) return lat;
        } catch (const precision_exhausted&) {
        } catch (const boundary_ambiguity&) {
        } catch (const interval_contains_zero&) {
        }
    }
    throw precision_exhausted("build_lattice: tolerance unreachable within max bits");
}

RegulatorReport regulator(const HeightLattice& lat) {
    RegulatorReport rep;
    rep.m = lat.m;
    rep.m0 = 0;
    rep.zariski_rank = lat.m;
    long prec = lat.m > 0 ? lat.gram[0][0].precision() : 128;
    if (lat.m == 0) {
        rep.reg_L = ErrReal::from_si(1, prec);
        rep.reg_poincare = ErrReal::from_si(1, prec);
        return rep;
    }
    Rat det = exact_det(midpoints(lat));
    ErrReal d = ErrReal::from_rational(det, prec).widened(det_perturbation(lat, prec));
    if (d.contains_zero()) throw degenerate_lattice();
    rep.reg_L = d.abs();
    rep.reg_poincare = rep.reg_L.mul_2si(lat.m);
    return rep;
}

namespace {

// exact LDL^T of a positive definite rational matrix: Q = L^T D L with unit
// lower-triangular L
struct Ldl {
    std::vector<Rat> d;
    RatMat l;  // l[i][j] for j < i
};

Ldl ldl_decompose(const RatMat& Q) {
    int n = static_cast<int>(Q.size());
    Ldl out;
    out.d.assign(n, Rat(0));
    out.l.assign(n, std::vector<Rat>(n, Rat(0)));
    RatMat A = Q;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            Rat s = A[i][j];
            for (int k = 0; k < j; ++k) s -= out.l[i][k] * out.l[j][k] * out.d[k];
            out.l[i][j] = s / out.d[j];
        }
        Rat s = A[i][i];
        for (int k = 0; k < i; ++k) s -= out.l[i][k] * out.l[i][k] * out.d[k];
        if (s <= 0) throw degenerate_lattice("midpoint Gram matrix not positive definite");
        out.d[i] = s;
    }
    return out;
}

// all n with q(n) <= bound and |n_i| <= box, up to sign (first nonzero > 0)
void enumerate_rec(const Ldl& ldl, const Rat& bound, long box, int level,
                   std::vector<long>& n, const Rat& partial,
                   std::vector<std::pair<Rat, std::vector<long>>>& out) {
    if (level < 0) {
        bool nonzero = false, leading_pos = false;
        for (long v : n)
            if (v != 0) {
                nonzero = true;
                leading_pos = v > 0;
                break;
            }
        if (nonzero && leading_pos) out.push_back({partial, n});
        return;
    }
    // offset = sum_{j>level} l[j][level] n_j
    Rat offset(0);
    int m = static_cast<int>(n.size());
    for (int j = level + 1; j < m; ++j) offset += ldl.l[j][level] * n[j];
    // d[level] (n_level + offset)^2 <= bound - partial
    Rat room = bound - partial;
    if (room < 0) return;
    double halfwidth = std::sqrt(room.get_d() / ldl.d[level].get_d()) + 1e-9;
    double center = -offset.get_d();
    long lo = static_cast<long>(std::ceil(center - halfwidth - 1));
    long hi = static_cast<long>(std::floor(center + halfwidth + 1));
    lo = std::max(lo, -box);
    hi = std::min(hi, box);
    for (long v = lo; v <= hi; ++v) {
        Rat term = ldl.d[level] * (Rat(v) + offset) * (Rat(v) + offset);
        if (term > room) continue;
        n[level] = v;
        enumerate_rec(ldl, bound, box, level - 1, n, partial + term, out);
        n[level] = 0;
    }
}

int rank_of(const std::vector<std::vector<long>>& vecs, int m) {
    RatMat A;
    for (const auto& v : vecs) {
        std::vector<Rat> row;
        for (long x : v) row.push_back(Rat(x));
        A.push_back(row);
    }
    int rank = 0;
    int rows = static_cast<int>(A.size());
    for (int col = 0; col < m && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (A[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(A[piv], A[rank]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || A[r][col] == 0) continue;
            Rat f = A[r][col] / A[rank][col];
            for (int k = 0; k < m; ++k) A[r][k] -= f * A[rank][k];
        }
        ++rank;
    }
    return rank;
}

RatMat exact_inverse(const RatMat& Q) {
    int n = static_cast<int>(Q.size());
    RatMat A = Q, I(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (A[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw degenerate_lattice();
        std::swap(A[piv], A[col]);
        std::swap(I[piv], I[col]);
        Rat p = A[col][col];
        for (int k = 0; k < n; ++k) {
            A[col][k] /= p;
            I[col][k] /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || A[r][col] == 0) continue;
            Rat f = A[r][col];
            for (int k = 0; k < n; ++k) {
                A[r][k] -= f * A[col][k];
                I[r][k] -= f * I[col][k];
            }
        }
    }
    return I;
}

}  // namespace

std::vector<ErrReal> successive_minima(const HeightLattice& lat, long search_bound) {
    if (lat.m == 0) return {};
    long prec = lat.gram[0][0].precision();
    RatMat Q = midpoints(lat);
    Rat rmax = max_radius(lat);
    Ldl ldl = ldl_decompose(Q);

    // initial radius: the largest diagonal entry always admits m independent
    // vectors (the standard basis), so the true minima lie below it; inflate
    // by the interval uncertainty so midpoint pruning cannot drop a minimizer
    Rat bound(0);
    for (int i = 0; i < lat.m; ++i) bound = std::max(bound, Q[i][i]);
    Rat l1max = Rat(lat.m) * Rat(search_bound);
    bound += 2 * l1max * l1max * rmax;
    std::vector<std::pair<Rat, std::vector<long>>> found;
    std::vector<long> work(lat.m, 0);
    enumerate_rec(ldl, bound, search_bound, lat.m - 1, work, Rat(0), found);
    std::sort(found.begin(), found.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    // greedy extraction of independent minimizers
    std::vector<std::vector<long>> chosen;
    std::vector<Rat> values;
    for (const auto& [val, vec] : found) {
        if (static_cast<int>(chosen.size()) == lat.m) break;
        chosen.push_back(vec);
        if (rank_of(chosen, lat.m) == static_cast<int>(chosen.size()))
            values.push_back(val);
        else
            chosen.pop_back();
    }
    if (static_cast<int>(values.size()) != lat.m)
        throw bound_too_small("enumeration region too small for independent minimizers");

    // certification: any vector with q(n) <= lambda_m^2 satisfies
    // n_j^2 <= q(n) (Q^{-1})_jj (1 + perturbation); the box must contain it
    RatMat Qinv = exact_inverse(Q);
    Rat qinv_max(0);
    for (int j = 0; j < lat.m; ++j) qinv_max = std::max(qinv_max, Qinv[j][j]);
    // inflate for the interval uncertainty of the Gram entries
    ErrReal qinv_b = ErrReal::from_rational(qinv_max, prec);
    ErrReal frob_inv = ErrReal::zero(prec), frob_err = ErrReal::zero(prec);
    for (int i = 0; i < lat.m; ++i)
        for (int j = 0; j < lat.m; ++j) {
            ErrReal a = ErrReal::from_rational(Qinv[i][j], prec);
            frob_inv = frob_inv + a * a;
            ErrReal r = ErrReal::from_rational(rmax, prec);
            frob_err = frob_err + r * r;
        }
    frob_inv = frob_inv.sqrt();
    frob_err = frob_err.sqrt();
    ErrReal eta = (frob_inv * frob_err).upper();
    ErrReal one = ErrReal::from_si(1, prec);
    if (!(one - eta).definitely_positive())
        throw bound_too_small("Gram uncertainty too large to certify the enumeration region");
    ErrReal inflated =
        qinv_b + (frob_inv * frob_inv * frob_err / (one - eta)).upper();
    ErrReal lam_top = ErrReal::from_rational(values.back(), prec)
                          .widened(ErrReal::from_rational(
                              Rat(lat.m * search_bound) * Rat(lat.m * search_bound) * rmax, prec));
    ErrReal need = (lam_top.upper() * inflated).upper();
    ErrReal boxsq = ErrReal::from_si(search_bound, prec).pow_si(2);
    if (!(boxsq - need).definitely_positive())
        throw bound_too_small("search bound does not certify containment of the minima");

    std::vector<ErrReal> out;
    for (int i = 0; i < lat.m; ++i) {
        long l1 = 0;
        for (long v : chosen[i]) l1 += std::abs(v);
        ErrReal e = ErrReal::from_rational(Rat(l1) * Rat(l1) * rmax, prec).upper();
        out.push_back(ErrReal::from_rational(values[i], prec).widened(e));
    }
    return out;
}

Verdict minkowski_check(const RegulatorReport& report) {
    long prec = report.reg_L.precision();
    if (report.m == 0) return Verdict::pass_vacuous(prec, "empty lattice");
    if (static_cast<int>(report.minima_sq.size()) != report.m)
        throw error("minkowski_check needs the successive minima filled in");
    ErrReal prod = ErrReal::from_si(1, prec);
    for (const ErrReal& l : report.minima_sq) prod = prod * l;
    ErrReal mm = ErrReal::from_si(report.m, prec).pow_si(report.m);
    ErrReal slack = mm * report.reg_L - prod;
    Verdict v = Verdict::from_slack(slack);
    // Minkowski's inequality is not strict; equality must pass
    if (v.state == Verdict::State::Inconclusive && !slack.definitely_negative())
        v.state = Verdict::State::Pass;
    return v;
}

Verdict hadamard_check(const HeightLattice& lat) {
    long prec = lat.m > 0 ? lat.gram[0][0].precision() : 128;
    if (lat.m == 0) return Verdict::pass_vacuous(prec, "empty lattice");
    RegulatorReport rep = regulator(lat);
    ErrReal prod = ErrReal::from_si(1, prec);
    for (int i = 0; i < lat.m; ++i) prod = prod * lat.gram[i][i];
    ErrReal slack = prod - rep.reg_L;
    Verdict v = Verdict::from_slack(slack);
    if (v.state == Verdict::State::Inconclusive && !slack.definitely_negative())
        v.state = Verdict::State::Pass;  // diagonal Gram gives exact equality
    return v;
}

}  // namespace ellreg
