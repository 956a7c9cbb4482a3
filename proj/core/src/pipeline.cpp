#include <atomic>
#include <thread>

#include "ellreg/bounds.hpp"
#include "ellreg/corpus.hpp"
#include "ellreg/heights.hpp"

namespace ellreg {

namespace {

// max(1, x) as a certified interval
ErrReal max_one(const ErrReal& x) {
    long prec = x.precision();
    ErrReal one = ErrReal::from_si(1, prec);
    return ((x + one) + (x - one).abs()).div_si(2);
}

struct ParsedEntry {
    WeierstrassCurve curve;
    std::vector<CurvePoint> gens;  // on the input model
};

ParsedEntry parse_entry(const CorpusEntry& entry) {
    ParsedEntry out;
    std::array<Rat, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = parse_rational(entry.ainvs[i]);
    out.curve = WeierstrassCurve::from_ainvs(a[0], a[1], a[2], a[3], a[4]);
    for (const auto& g : entry.generators) {
        CurvePoint P = CurvePoint::affine(parse_rational(g[0]), parse_rational(g[1]));
        if (!on_curve(out.curve, P))
            throw parse_error("generator " + point_to_string(P) + " is not on the curve");
        out.gens.push_back(P);
    }
    return out;
}

}  // namespace

LsScanResult ls_scan_lattice(const HeightLattice& lat, const ErrReal& hF_plus, long box) {
    if (lat.m == 0) throw no_generators();
    if (box <= 0) throw no_generators("empty enumeration box");
    long prec = lat.gram[0][0].precision();
    // hhat(sum n_i P_i + T) equals the Gram quadratic form: torsion shifts
    // leave the canonical height unchanged
    std::vector<long> n(lat.m, -box), best;
    ErrReal best_val = ErrReal::zero(prec);
    bool have = false;
    while (true) {
        bool zero = true;
        for (long v : n) zero = zero && v == 0;
        if (!zero) {
            ErrReal q = ErrReal::zero(prec);
            for (int i = 0; i < lat.m; ++i)
                for (int j = 0; j < lat.m; ++j)
                    if (n[i] != 0 && n[j] != 0) q = q + lat.gram[i][j].mul_si(n[i] * n[j]);
            if (!have || mpfr_cmp(q.mid_raw(), best_val.mid_raw()) < 0) {
                best_val = q;
                best = n;
                have = true;
            }
        }
        int k = lat.m - 1;
        while (k >= 0 && n[k] == box) {
            n[k] = -box;
            --k;
        }
        if (k < 0) break;
        ++n[k];
    }
    LsScanResult out;
    ErrReal denom = max_one(hF_plus);
    out.ratio = best_val / denom;
    out.vector = best;
    out.lambda1_ratio = out.ratio;  // overwritten by the pipeline when minima exist
    return out;
}

LsScanResult ls_scan(const CorpusEntry& entry, long box, const PipelineConfig& cfg) {
    ParsedEntry parsed = parse_entry(entry);
    if (parsed.gens.empty()) throw no_generators();
    MinimalModelResult min = minimal_model(parsed.curve);
    std::vector<CurvePoint> gens;
    for (const CurvePoint& P : parsed.gens) gens.push_back(map_point(min.transform, P));
    HeightLattice lat = build_lattice(min, gens, cfg.tol, cfg.max_bits);
    FaltingsReport rep = faltings_height(min, cfg.tol, cfg.max_bits, entry.label);
    LsScanResult out = ls_scan_lattice(lat, rep.hF_plus, box);
    std::vector<ErrReal> minima = successive_minima(lat, cfg.minima_bound);
    out.lambda1_ratio = minima[0] / max_one(rep.hF_plus);
    return out;
}

CurveReport run_pipeline(const CorpusEntry& entry, const PipelineConfig& cfg) {
    CurveReport rep;
    rep.label = entry.label;
    rep.known_rank = entry.known_rank;
    long prec0 = 128;
    rep.log_N0 = ErrReal::zero(prec0);
    rep.log_Nst = ErrReal::zero(prec0);
    rep.log_Nuns = ErrReal::zero(prec0);
    rep.rank_bound_value = ErrReal::zero(prec0);
    auto record = [&rep](const std::string& stage, const std::exception& e) {
        rep.errors.push_back({stage, e.what()});
    };

    ParsedEntry parsed;
    try {
        parsed = parse_entry(entry);
    } catch (const std::exception& e) {
        record("parse", e);
        return rep;
    }

    MinimalModelResult min;
    try {
        min = minimal_model(parsed.curve);
        rep.disc_min = min.disc_min.get_str();
        rep.u = min.transform.u.get_str();
    } catch (const std::exception& e) {
        record("minimal_model", e);
        return rep;
    }

    ConductorNorms norms;
    bool have_norms = false;
    try {
        norms = conductor_norms(min, 192, cfg.factor);
        rep.log_N0 = norms.log_N0;
        rep.log_Nst = norms.log_Nst;
        rep.log_Nuns = norms.log_Nuns;
        for (const auto& rt : norms.factorization)
            rep.bad_primes.push_back({rt.prime.get_str(), reduction_kind_name(rt.kind)});
        have_norms = true;
    } catch (const std::exception& e) {
        record("conductor", e);
    }

    std::vector<CurvePoint> gens;
    try {
        for (const CurvePoint& P : parsed.gens) {
            CurvePoint Q = map_point(min.transform, P);
            if (!on_curve(min.curve, Q)) throw error("generator does not map to the minimal model");
            gens.push_back(Q);
        }
    } catch (const std::exception& e) {
        record("generators", e);
        gens.clear();
    }

    // precision ladder: tolerance first, then one extra doubling if any
    // verdict is still inconclusive
    int inconclusive_bumps = 0;
    for (long bits = 128; bits <= cfg.max_bits; bits *= 2) {
        rep.bits_used = bits;
        rep.analytic_ok = false;
        rep.lattice_ok = false;
        bool retryable = false;

        FaltingsReport fr;
        try {
            AnalyticContext ctx = make_analytic_context(min, bits);
            fr = faltings_report(min, ctx, entry.label);
            rep.tau_re = fr.tau.re;
            rep.tau_im = fr.tau.im;
            rep.log_mod_disc = fr.log_mod_disc;
            rep.hF_plus = fr.hF_plus;
            rep.hF_classical = fr.hF_classical;
            rep.rho = injectivity_diameter(fr.tau);
            rep.analytic_ok = true;

            if (cfg.enabled("matrix_lemma")) rep.matrix_lemma = matrix_lemma_check(fr);
            if (have_norms && cfg.enabled("height_conductor"))
                rep.height_conductor = Verdict::from_slack(rep.hF_plus - rep.log_N0.div_si(12));

            HeightLattice lat;
            if (!gens.empty()) {
                HeightEngine engine(min, ctx, cfg.factor);
                lat = build_lattice(engine, gens);
                RegulatorReport reg = regulator(lat);
                reg.minima_sq = successive_minima(lat, cfg.minima_bound);
                rep.reg_L = reg.reg_L;
                rep.reg_poincare = reg.reg_poincare;
                rep.minima_sq = reg.minima_sq;
                rep.m = reg.m;
                rep.m0 = reg.m0;
                rep.zariski_rank = reg.zariski_rank;
                rep.lattice_ok = true;
                if (cfg.enabled("minkowski")) rep.minkowski = minkowski_check(reg);
                if (cfg.enabled("hadamard")) rep.hadamard = hadamard_check(lat);
                if (cfg.enabled("ls_scan")) {
                    LsScanResult ls = ls_scan_lattice(lat, rep.hF_plus, cfg.ls_box);
                    ls.lambda1_ratio = reg.minima_sq[0] / max_one(rep.hF_plus);
                    rep.ls = ls;
                }
            } else {
                // rank-0 entries: empty lattice, regulator 1 by convention
                RegulatorReport reg = regulator(HeightLattice{});
                rep.reg_L = reg.reg_L;
                rep.reg_poincare = reg.reg_poincare;
                rep.m = 0;
                rep.m0 = 0;
                rep.zariski_rank = 0;
                rep.lattice_ok = true;
                if (cfg.enabled("minkowski")) rep.minkowski = minkowski_check(reg);
                if (cfg.enabled("hadamard")) rep.hadamard = hadamard_check(lat);
            }
        } catch (const precision_exhausted& e) {
            retryable = true;
            if (bits * 2 > cfg.max_bits) record("analytic", e);
        } catch (const boundary_ambiguity& e) {
            retryable = true;
            if (bits * 2 > cfg.max_bits) record("analytic", e);
        } catch (const interval_contains_zero& e) {
            retryable = true;
            if (bits * 2 > cfg.max_bits) record("analytic", e);
        } catch (const torsion_generator& e) {
            record("lattice", e);
        } catch (const degenerate_lattice& e) {
            record("lattice", e);
        } catch (const bound_too_small& e) {
            record("lattice", e);
        } catch (const std::exception& e) {
            record("pipeline", e);
        }

        if (retryable && bits * 2 <= cfg.max_bits) continue;
        bool tol_ok = !rep.analytic_ok || rep.hF_plus.rad_double() <= cfg.tol;
        if (rep.lattice_ok)
            for (const auto& row : rep.minima_sq)
                tol_ok = tol_ok && row.rad_double() <= cfg.tol * 64;
        bool inconclusive =
            rep.height_conductor.state == Verdict::State::Inconclusive ||
            rep.matrix_lemma.state == Verdict::State::Inconclusive ||
            rep.minkowski.state == Verdict::State::Inconclusive;
        if ((!tol_ok || (inconclusive && inconclusive_bumps < 1)) && bits * 2 <= cfg.max_bits) {
            if (tol_ok && inconclusive) ++inconclusive_bumps;
            continue;
        }
        break;
    }

    // rank bound needs only the conductor norms
    if (have_norms && cfg.enabled("rank_bound")) {
        try {
            RankBoundInputs in;
            in.g = 1;
            in.d = 1;
            in.log_N0 = rep.log_N0;
            in.log_abs_disc_K = ErrReal::zero(rep.log_N0.precision());
            rep.rank_bound_value = rank_bound(in);
            if (entry.known_rank) {
                ErrReal slack =
                    rep.rank_bound_value - ErrReal::from_si(*entry.known_rank, 128);
                rep.rank_bound_check = Verdict::from_slack(slack);
            } else {
                rep.rank_bound_check.state = Verdict::State::Skipped;
                rep.rank_bound_check.detail = "no known rank in the corpus entry";
            }
        } catch (const std::exception& e) {
            record("rank_bound", e);
        }
    }
    return rep;
}

std::vector<CurveReport> run_corpus(const std::vector<CorpusEntry>& entries,
                                    const PipelineConfig& cfg) {
    std::vector<CurveReport> out(entries.size());
    unsigned jobs = std::max(1u, cfg.jobs);
    if (jobs == 1) {
        for (size_t i = 0; i < entries.size(); ++i) out[i] = run_pipeline(entries[i], cfg);
        return out;
    }
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        mpfr_thread_setup();
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= entries.size()) break;
            out[i] = run_pipeline(entries[i], cfg);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace ellreg
