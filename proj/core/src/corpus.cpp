#include "ellreg/corpus.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace ellreg {

using ordered_json = nlohmann::ordered_json;

Format format_from_string(const std::string& s) {
    if (s == "jsonl") return Format::Jsonl;
    if (s == "csv") return Format::Csv;
    throw parse_error("unknown format: " + s);
}

Rat parse_rational(const std::string& s) {
    if (s.empty()) throw parse_error("empty rational");
    for (char c : s)
        if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '/'))
            throw parse_error("bad rational: " + s);
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw parse_error("bad rational: " + s);
    if (q.get_den() == 0) throw parse_error("zero denominator: " + s);
    q.canonicalize();
    return q;
}

namespace {

CorpusEntry entry_from_json(const ordered_json& j, size_t lineno) {
    auto fail = [lineno](const std::string& why) {
        throw parse_error("line " + std::to_string(lineno) + ": " + why);
    };
    CorpusEntry e;
    if (!j.is_object()) fail("expected a JSON object");
    if (!j.contains("label") || !j["label"].is_string()) fail("missing label");
    e.label = j["label"].get<std::string>();
    if (!j.contains("ainvs") || !j["ainvs"].is_array() || j["ainvs"].size() != 5)
        fail("ainvs must be an array of 5 strings");
    for (int i = 0; i < 5; ++i) {
        if (!j["ainvs"][i].is_string()) fail("ainvs entries must be strings");
        e.ainvs[i] = j["ainvs"][i].get<std::string>();
        try {
            parse_rational(e.ainvs[i]);
        } catch (const parse_error& pe) {
            fail(pe.what());
        }
    }
    if (j.contains("generators") && !j["generators"].is_null()) {
        if (!j["generators"].is_array()) fail("generators must be an array");
        for (const auto& g : j["generators"]) {
            if (!g.is_array() || g.size() != 2 || !g[0].is_string() || !g[1].is_string())
                fail("each generator must be [x, y] strings");
            std::array<std::string, 2> pt{g[0].get<std::string>(), g[1].get<std::string>()};
            try {
                parse_rational(pt[0]);
                parse_rational(pt[1]);
            } catch (const parse_error& pe) {
                fail(pe.what());
            }
            e.generators.push_back(pt);
        }
    }
    if (j.contains("rank") && !j["rank"].is_null()) {
        if (!j["rank"].is_number_integer()) fail("rank must be an integer");
        e.known_rank = j["rank"].get<long>();
    }
    return e;
}

// minimal CSV splitting with double-quote escaping
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

}  // namespace

std::vector<CorpusEntry> ingest(const std::string& path, Format format) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open corpus file: " + path);
    std::vector<CorpusEntry> out;
    std::string line;
    size_t lineno = 0;
    if (format == Format::Jsonl) {
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            ordered_json j = ordered_json::parse(line, nullptr, false);
            if (j.is_discarded())
                throw parse_error("line " + std::to_string(lineno) + ": invalid JSON");
            out.push_back(entry_from_json(j, lineno));
        }
        return out;
    }
    // CSV: label,a1,a2,a3,a4,a6,generators,rank with generators "x:y;x:y"
    if (!std::getline(in, line)) throw parse_error("empty CSV corpus");
    ++lineno;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() < 6)
            throw parse_error("line " + std::to_string(lineno) + ": too few CSV cells");
        CorpusEntry e;
        e.label = cells[0];
        for (int i = 0; i < 5; ++i) {
            e.ainvs[i] = cells[1 + i];
            try {
                parse_rational(e.ainvs[i]);
            } catch (const parse_error& pe) {
                throw parse_error("line " + std::to_string(lineno) + ": " + pe.what());
            }
        }
        if (cells.size() > 6 && !cells[6].empty()) {
            std::stringstream gs(cells[6]);
            std::string pair;
            while (std::getline(gs, pair, ';')) {
                auto colon = pair.find(':');
                if (colon == std::string::npos)
                    throw parse_error("line " + std::to_string(lineno) + ": bad generator " + pair);
                std::array<std::string, 2> pt{pair.substr(0, colon), pair.substr(colon + 1)};
                try {
                    parse_rational(pt[0]);
                    parse_rational(pt[1]);
                } catch (const parse_error& pe) {
                    throw parse_error("line " + std::to_string(lineno) + ": " + pe.what());
                }
                e.generators.push_back(pt);
            }
        }
        if (cells.size() > 7 && !cells[7].empty()) e.known_rank = std::stol(cells[7]);
        out.push_back(e);
    }
    return out;
}

// --------------------------------------------------------- serialization

namespace {

ordered_json err_to_json(const ErrReal& v) {
    ordered_json j;
    j["value"] = v.mid_string(30);
    j["err"] = v.rad_string();
    j["bits"] = v.precision();
    return j;
}

ordered_json verdict_to_json(const Verdict& v) {
    ordered_json j;
    j["verdict"] = verdict_name(v.state);
    if (v.state == Verdict::State::Pass || v.state == Verdict::State::Fail ||
        v.state == Verdict::State::Inconclusive)
        j["slack"] = err_to_json(v.slack);
    else
        j["slack"] = nullptr;
    if (!v.detail.empty()) j["detail"] = v.detail;
    return j;
}

ordered_json report_to_json(const CurveReport& r) {
    ordered_json j;
    j["label"] = r.label;
    j["disc_min"] = r.disc_min;
    j["u"] = r.u;
    ordered_json primes = ordered_json::array();
    for (const auto& [p, kind] : r.bad_primes) {
        ordered_json e;
        e["p"] = p;
        e["kind"] = kind;
        primes.push_back(e);
    }
    j["bad_primes"] = primes;
    j["log_N0"] = err_to_json(r.log_N0);
    j["log_Nst"] = err_to_json(r.log_Nst);
    j["log_Nuns"] = err_to_json(r.log_Nuns);
    j["tau_re"] = r.analytic_ok ? err_to_json(r.tau_re) : ordered_json(nullptr);
    j["tau_im"] = r.analytic_ok ? err_to_json(r.tau_im) : ordered_json(nullptr);
    j["log_mod_disc"] = r.analytic_ok ? err_to_json(r.log_mod_disc) : ordered_json(nullptr);
    j["hF_plus"] = r.analytic_ok ? err_to_json(r.hF_plus) : ordered_json(nullptr);
    j["hF_classical"] = r.analytic_ok ? err_to_json(r.hF_classical) : ordered_json(nullptr);
    j["rho"] = r.analytic_ok ? err_to_json(r.rho) : ordered_json(nullptr);
    j["rank_bound"] = err_to_json(r.rank_bound_value);
    j["verdicts"] = ordered_json::object();
    j["verdicts"]["height_conductor"] = verdict_to_json(r.height_conductor);
    j["verdicts"]["matrix_lemma"] = verdict_to_json(r.matrix_lemma);
    j["verdicts"]["rank_bound"] = verdict_to_json(r.rank_bound_check);
    j["verdicts"]["minkowski"] = verdict_to_json(r.minkowski);
    j["verdicts"]["hadamard"] = verdict_to_json(r.hadamard);
    j["reg_L"] = r.lattice_ok ? err_to_json(r.reg_L) : ordered_json(nullptr);
    j["reg_poincare"] = r.lattice_ok ? err_to_json(r.reg_poincare) : ordered_json(nullptr);
    ordered_json minima = ordered_json::array();
    for (const ErrReal& l : r.minima_sq) minima.push_back(err_to_json(l));
    j["minima_sq"] = minima;
    if (r.ls) {
        j["ls_ratio"] = err_to_json(r.ls->ratio);
        j["ls_lambda1_ratio"] = err_to_json(r.ls->lambda1_ratio);
        j["ls_vector"] = r.ls->vector;
    } else {
        j["ls_ratio"] = nullptr;
        j["ls_lambda1_ratio"] = nullptr;
        j["ls_vector"] = nullptr;
    }
    j["m"] = r.m;
    j["m0"] = r.m0;
    j["zariski_rank"] = r.zariski_rank;
    if (r.known_rank)
        j["known_rank"] = *r.known_rank;
    else
        j["known_rank"] = nullptr;
    j["bits_used"] = r.bits_used;
    // the number-field dictionary columns
    ordered_json dict;
    dict["dimension_g"] = 1;
    dict["log_discriminant_analogue"] = r.analytic_ok ? err_to_json(r.hF_plus) : ordered_json(nullptr);
    dict["regulator_analogue"] = r.lattice_ok ? err_to_json(r.reg_poincare) : ordered_json(nullptr);
    dict["unit_rank_analogue"] = r.m;
    dict["max_subvariety_rank"] = r.m0;
    dict["zariski_rank"] = r.zariski_rank;
    j["dictionary"] = dict;
    ordered_json errs = ordered_json::array();
    for (const auto& e : r.errors) {
        ordered_json o;
        o["stage"] = e.stage;
        o["message"] = e.message;
        errs.push_back(o);
    }
    j["stage_errors"] = errs;
    return j;
}

}  // namespace

std::string report_to_json_line(const CurveReport& rep) { return report_to_json(rep).dump(); }

std::string reports_to_csv(const std::vector<CurveReport>& reps) {
    // flatten the JSON objects: scalar keys become columns, nested objects
    // dotted paths, arrays one JSON-encoded cell
    std::vector<std::pair<std::string, std::vector<std::string>>> columns;
    auto add = [&](const std::string& key, const std::string& val, size_t row, size_t rows) {
        for (auto& [k, v] : columns)
            if (k == key) {
                v[row] = val;
                return;
            }
        columns.push_back({key, std::vector<std::string>(rows)});
        columns.back().second[row] = val;
    };
    std::function<void(const std::string&, const ordered_json&, size_t, size_t)> flatten =
        [&](const std::string& prefix, const ordered_json& j, size_t row, size_t rows) {
            if (j.is_object()) {
                for (auto it = j.begin(); it != j.end(); ++it)
                    flatten(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(), row,
                            rows);
            } else if (j.is_null()) {
                add(prefix, "", row, rows);
            } else if (j.is_string()) {
                add(prefix, j.get<std::string>(), row, rows);
            } else {
                add(prefix, j.dump(), row, rows);
            }
        };
    size_t rows = reps.size();
    for (size_t i = 0; i < rows; ++i) flatten("", report_to_json(reps[i]), i, rows);
    std::ostringstream out;
    for (size_t c = 0; c < columns.size(); ++c)
        out << (c ? "," : "") << csv_escape(columns[c].first);
    out << "\n";
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c)
            out << (c ? "," : "") << csv_escape(columns[c].second[r]);
        out << "\n";
    }
    return out.str();
}

void emit(const std::vector<CurveReport>& reps, const std::string& path, Format format) {
    std::ofstream out(path);
    if (!out) throw error("cannot open output file: " + path);
    if (format == Format::Jsonl) {
        for (const auto& r : reps) out << report_to_json_line(r) << "\n";
    } else {
        out << reports_to_csv(reps);
    }
}

}  // namespace ellreg
