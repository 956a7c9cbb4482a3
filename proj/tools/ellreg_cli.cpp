// Batch verifier for explicit height/regulator inequalities of elliptic
// curves over Q: Faltings heights, conductor norms, Neron-Tate regulators,
// Minkowski chains, and the exponent-tower constants at any dimension g.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "ellreg/bounds.hpp"
#include "ellreg/corpus.hpp"

using namespace ellreg;

namespace {

int print_constants(const std::string& spec) {
    long g = 0;
    if (spec.rfind("g=", 0) == 0)
        g = std::stol(spec.substr(2));
    else
        g = std::stol(spec);
    if (g < 1) {
        std::cerr << "constants: need g >= 1\n";
        return 2;
    }
    auto t11 = thm11_constants(g);
    auto c12 = cor12_constants(g);
    auto p33 = prop33_constants(g, false);
    auto p33j = prop33_constants(g, true);
    auto p36 = prop36_constants(g, false);
    auto p36j = prop36_constants(g, true);
    auto c4 = rank_bound_headline(g, 1);
    std::cout << "g = " << g << "\n";
    std::cout << "height-conductor     c   = " << tower_to_string(t11.c) << "\n";
    std::cout << "                     c0  = " << tower_to_string(t11.c0) << "\n";
    std::cout << "with injectivity     c1  = " << tower_to_string(c12.c1) << "\n";
    std::cout << "                     c2  = " << tower_to_string(c12.c2) << "\n";
    std::cout << "                     c3  = " << tower_to_string(c12.c3) << "\n";
    std::cout << "semi-stable          c5  = " << tower_to_string(p33.c5) << "\n";
    std::cout << "                     c6  = " << tower_to_string(p33.c6) << "\n";
    std::cout << "semi-stable jacobian c5  = " << tower_to_string(p33j.c5) << "\n";
    std::cout << "                     c6  = " << tower_to_string(p33j.c6) << "\n";
    std::cout << "general              c16 = " << tower_to_string(p36.c16) << "\n";
    std::cout << "                     c17 = " << tower_to_string(p36.c17) << "\n";
    std::cout << "general jacobian     c16 = " << tower_to_string(p36j.c16) << "\n";
    std::cout << "                     c17 = " << tower_to_string(p36j.c17) << "\n";
    std::cout << "rank bound (d = 1)   c4  = " << tower_to_string(c4) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    mpfr_thread_setup();
    CLI::App app{"heights, conductors and regulators of elliptic curves over Q"};

    std::string corpus_path, out_path, format_s = "jsonl", checks_s, constants_s;
    double tol = 1e-12;
    long max_bits = 4096, ls_box = 10;
    unsigned jobs = 1;

    app.add_option("--corpus", corpus_path, "corpus file (JSONL or CSV)");
    app.add_option("--out", out_path, "output report path (default: stdout)");
    app.add_option("--format", format_s, "jsonl|csv for both input and output")
        ->check(CLI::IsMember({"jsonl", "csv"}));
    app.add_option("--tol", tol, "target radius for analytic quantities (default 1e-12)");
    app.add_option("--max-bits", max_bits, "working-precision ceiling in bits (default 4096)");
    app.add_option("--checks", checks_s,
                   "comma list of checks to run (default all): "
                   "height_conductor,matrix_lemma,rank_bound,minkowski,hadamard,ls_scan");
    app.add_option("--ls-box", ls_box, "coefficient box for the Lang-Silverman scan (default 10)");
    app.add_option("--jobs", jobs, "worker threads (default 1)");
    app.add_option("--constants", constants_s, "print tower constants for dimension g=G and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!constants_s.empty()) return print_constants(constants_s);
        if (corpus_path.empty()) {
            std::cerr << "nothing to do: pass --corpus or --constants (see --help)\n";
            return 2;
        }
        Format format = format_from_string(format_s);
        PipelineConfig cfg;
        cfg.tol = tol;
        cfg.max_bits = max_bits;
        cfg.ls_box = ls_box;
        cfg.jobs = jobs;
        if (!checks_s.empty()) {
            std::stringstream ss(checks_s);
            std::string item;
            while (std::getline(ss, item, ',')) cfg.checks.insert(item);
        }
        std::vector<CorpusEntry> entries = ingest(corpus_path, format);
        std::vector<CurveReport> reports = run_corpus(entries, cfg);

        if (out_path.empty()) {
            if (format == Format::Jsonl)
                for (const auto& r : reports) std::cout << report_to_json_line(r) << "\n";
            else
                std::cout << reports_to_csv(reports);
        } else {
            emit(reports, out_path, format);
        }

        size_t passes = 0, fails = 0, errored = 0;
        for (const auto& r : reports) {
            for (const Verdict* v : {&r.height_conductor, &r.matrix_lemma, &r.rank_bound_check,
                                     &r.minkowski, &r.hadamard}) {
                if (v->state == Verdict::State::Pass) ++passes;
                if (v->state == Verdict::State::Fail) ++fails;
            }
            if (!r.errors.empty()) ++errored;
        }
        std::cerr << reports.size() << " curves, " << passes << " checks passed, " << fails
                  << " failed, " << errored << " with stage errors\n";
        return fails == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
