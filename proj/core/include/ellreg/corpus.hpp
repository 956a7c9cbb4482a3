#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ellreg/analytic.hpp"
#include "ellreg/factor.hpp"
#include "ellreg/lattice.hpp"
#include "ellreg/reduction.hpp"
#include "ellreg/verdict.hpp"

namespace ellreg {

enum class Format { Jsonl, Csv };

Format format_from_string(const std::string& s);

struct CorpusEntry {
    std::string label;
    std::array<std::string, 5> ainvs;                    // exact rationals "p/q"
    std::vector<std::array<std::string, 2>> generators;  // (x, y) pairs
    std::optional<long> known_rank;
};

std::vector<CorpusEntry> ingest(const std::string& path, Format format);

struct PipelineConfig {
    double tol = 1e-12;
    long max_bits = 4096;
    long ls_box = 10;
    long minima_bound = 25;
    unsigned jobs = 1;
    std::set<std::string> checks;  // empty set = run everything
    FactorConfig factor;

    bool enabled(const std::string& name) const { return checks.empty() || checks.count(name); }
};

struct StageError {
    std::string stage;
    std::string message;
};

struct LsScanResult {
    ErrReal ratio;             // min hhat over the box / max(1, hF+)
    ErrReal lambda1_ratio;     // lambda_1^2 / max(1, hF+)
    std::vector<long> vector;  // minimizing coefficient vector
};

struct CurveReport {
    std::string label;
    std::string disc_min;
    std::string u;  // scaling of the input model to the minimal one
    std::vector<std::pair<std::string, std::string>> bad_primes;  // (p, kind)
    ErrReal log_N0, log_Nst, log_Nuns;
    ErrReal tau_re, tau_im;
    ErrReal log_mod_disc, hF_plus, hF_classical, rho;
    ErrReal rank_bound_value;
    Verdict height_conductor, matrix_lemma, rank_bound_check, minkowski, hadamard;
    ErrReal reg_L, reg_poincare;
    std::vector<ErrReal> minima_sq;
    std::optional<LsScanResult> ls;
    int m = 0, m0 = 0, zariski_rank = 0;
    std::optional<long> known_rank;
    long bits_used = 0;
    std::vector<StageError> errors;
    bool analytic_ok = false, lattice_ok = false;
};

std::string report_to_json_line(const CurveReport& rep);
std::string reports_to_csv(const std::vector<CurveReport>& reps);
void emit(const std::vector<CurveReport>& reps, const std::string& path, Format format);

// exact-rational parsing with validation ("1/0" and garbage are parse errors)
Rat parse_rational(const std::string& s);

CurveReport run_pipeline(const CorpusEntry& entry, const PipelineConfig& cfg);
LsScanResult ls_scan(const CorpusEntry& entry, long box, const PipelineConfig& cfg);
// internal form used by the pipeline once the lattice exists
LsScanResult ls_scan_lattice(const HeightLattice& lat, const ErrReal& hF_plus, long box);

// per-entry parallelism, results in input order
std::vector<CurveReport> run_corpus(const std::vector<CorpusEntry>& entries,
                                    const PipelineConfig& cfg);

}  // namespace ellreg
