#include "aet/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aet/congruence.hpp"
#include "aet/energy.hpp"
#include "aet/ffield.hpp"
#include "aet/geometry.hpp"
#include "aet/mpoly.hpp"
#include "aet/sieve.hpp"

namespace aet {

const char* kToolkitVersion = "0.1.0";

using nlohmann::json;

std::string ExperimentConfig::canonical() const {
    std::string out = "command=" + command + "\n";
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

std::string ExperimentConfig::digest() const { return to_hex(fnv1a64(canonical())); }

std::string ExperimentConfig::str(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw parse_error(0, "missing config key '" + key + "'");
    return it->second;
}

std::string ExperimentConfig::str_or(const std::string& key, const std::string& fb) const {
    auto it = kv.find(key);
    return it == kv.end() ? fb : it->second;
}

long ExperimentConfig::num(const std::string& key) const {
    try {
        return std::stol(str(key));
    } catch (const std::logic_error&) {
        throw parse_error(0, "config key '" + key + "' is not an integer");
    }
}

long ExperimentConfig::num_or(const std::string& key, long fb) const {
    return has(key) ? num(key) : fb;
}

mpz_class ExperimentConfig::big(const std::string& key) const {
    try {
        return mpz_class(str(key));
    } catch (const std::invalid_argument&) {
        throw parse_error(0, "config key '" + key + "' is not an integer");
    }
}

mpz_class ExperimentConfig::big_or(const std::string& key, long fb) const {
    return has(key) ? big(key) : mpz_class(fb);
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    // JSON object?
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j = json::parse(text, nullptr, false);
        if (j.is_discarded()) throw parse_error(first, "malformed JSON config");
        for (auto& [k, v] : j.items()) {
            std::string s = v.is_string() ? v.get<std::string>() : v.dump();
            if (k == "command")
                cfg.command = s;
            else
                cfg.kv[k] = s;
        }
    } else {
        std::istringstream in(text);
        std::string line;
        size_t off = 0;
        while (std::getline(in, line)) {
            size_t here = off;
            off += line.size() + 1;
            if (line.empty() || line[0] == '#') continue;
            size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw parse_error(here, "expected key=value");
            std::string k = line.substr(0, eq), v = line.substr(eq + 1);
            if (k == "command")
                cfg.command = v;
            else
                cfg.kv[k] = v;
        }
    }
    if (cfg.command.empty()) throw parse_error(0, "config missing 'command'");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(0, "cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

std::vector<std::string> XY{"x", "y"};

Budget budget_from(const ExperimentConfig& cfg) {
    Budget b;
    if (cfg.has("max-items")) b.max_items = (u64)cfg.num("max-items");
    if (cfg.has("max-seconds")) b.max_seconds = (double)cfg.num("max-seconds");
    return b;
}

GeneralInstance instance_from(const ExperimentConfig& cfg) {
    if (cfg.has("poly")) {
        Poly1 p = parse_poly1(cfg.str("poly"), "x");
        return energy_to_general(p, cfg.big_or("k", 1), cfg.num_or("B", 10));
    }
    GeneralInstance gi;
    gi.f = parse_poly(cfg.str("f"), XY);
    gi.g = parse_poly(cfg.str("g"), XY);
    gi.a = cfg.big_or("a", 1);
    gi.b = cfg.big_or("b", 1);
    gi.k = cfg.big_or("k", 1);
    gi.B = cfg.num_or("B", 10);
    gi.validate();
    return gi;
}

json count_result_json(const ExperimentConfig& cfg, const CountResult& r) {
    return json{{"instance_hash", cfg.digest()},
                {"count", r.count.get_str()},
                {"algo", r.algorithm},
                {"millis", r.millis}};
}

json expsum_json(const std::string& kind, const json& params, const ExpSumValue& v) {
    json j{{"kind", kind},
           {"params", params},
           {"re", v.re},
           {"im", v.im},
           {"summands", v.summands},
           {"millis", v.millis}};
    j["exact"] = v.exact ? json(v.exact->get_str()) : json(nullptr);
    return j;
}

json cmd_count(const ExperimentConfig& cfg) {
    Budget budget = budget_from(cfg);
    std::string algo = cfg.str_or("algo", "mitm");
    if (cfg.has("F")) {
        // curve mode: #{(x,y) in [1,B]^2 : F = l}
        MPoly F = parse_poly(cfg.str("F"), XY);
        CountResult r = curve_count_in_box(F, cfg.big_or("l", 0), cfg.num("B"), budget);
        return count_result_json(cfg, r);
    }
    if (cfg.has("g") || cfg.str_or("general", "") == "1") {
        CountResult r = general_count(instance_from(cfg), budget);
        return count_result_json(cfg, r);
    }
    EnergyInstance inst{parse_poly1(cfg.str("poly"), "x"), cfg.big_or("k", 0),
                        cfg.num("B")};
    CountResult r;
    if (algo == "brute")
        r = energy_bruteforce(inst, budget);
    else if (algo == "mitm")
        r = energy_mitm(inst, budget, (unsigned)cfg.num_or("threads", 1));
    else
        throw parse_error(0, "unknown algo '" + algo + "'");
    return count_result_json(cfg, r);
}

json cmd_scan(const ExperimentConfig& cfg) {
    Budget budget = budget_from(cfg);
    std::vector<i64> Bs;
    {
        std::stringstream ss(cfg.str("B-list"));
        std::string tok;
        while (std::getline(ss, tok, ',')) Bs.push_back(std::stol(tok));
    }
    Poly1 f = parse_poly1(cfg.str("poly"), "x");
    auto pts = exponent_scan(f, cfg.big_or("k", 0), Bs, budget,
                             (unsigned)cfg.num_or("threads", 1));
    json rows = json::array();
    std::vector<std::pair<double, mpz_class>> data;
    std::string csv = "B,count,log10B,log10count\n";
    for (auto& p : pts) {
        data.push_back({(double)p.B, p.count});
        rows.push_back({{"B", p.B}, {"count", p.count.get_str()}, {"millis", p.millis}});
        double l10b = std::log10((double)p.B);
        double l10c = p.count > 0 ? std::log10(p.count.get_d()) : -1.0;
        csv += std::to_string(p.B) + "," + p.count.get_str() + "," +
               std::to_string(l10b) + "," + std::to_string(l10c) + "\n";
    }
    json out{{"points", rows}, {"csv", csv}};
    try {
        ExponentFit fit = fit_exponent(data);
        out["fit"] = {{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"stderr", fit.stderr_slope},
                      {"used_points", fit.used_points},
                      {"dropped_zeros", fit.dropped_zeros}};
    } catch (const invariant_error& e) {
        out["fit"] = {{"error", e.what()}};
    }
    if (cfg.has("csv")) {
        std::ofstream f_out(cfg.str("csv"));
        f_out << csv;
    }
    return out;
}

json cmd_expsum(const ExperimentConfig& cfg) {
    std::string kind = cfg.str("kind");
    GeneralInstance inst = instance_from(cfg);
    if (kind == "sigma") {
        SieveSurface s = build_sieve_surface(inst, cfg.big_or("h", 1));
        ExpSumValue v = sigma_t(s, (int)cfg.num_or("t", 1), cfg.num("p"),
                                cfg.num_or("M", 0), cfg.num_or("N", 0));
        return expsum_json("sigma", json{{"t", cfg.num_or("t", 1)},
                                         {"p", cfg.num("p")},
                                         {"M", cfg.num_or("M", 0)},
                                         {"N", cfg.num_or("N", 0)},
                                         {"h", cfg.str_or("h", "1")}},
                           v);
    }
    if (kind == "phi") {
        ExpSumValue v = phi_sum(inst, cfg.num("h"), cfg.num_or("M", 0), cfg.num_or("N", 0));
        return expsum_json("phi", json{{"h", cfg.num("h")},
                                       {"M", cfg.num_or("M", 0)},
                                       {"N", cfg.num_or("N", 0)}},
                           v);
    }
    if (kind == "psi") {
        SieveSurface s = build_sieve_surface(inst, cfg.big_or("h", 1));
        i64 p = cfg.num("p"), q = cfg.num("q");
        ExpSumValue v;
        if (cfg.str_or("method", "factored") == "direct") {
            PsiContext ctx = make_psi_context(s, p, q);
            v = psi_direct(ctx, (int)cfg.num_or("i", 0), (int)cfg.num_or("j", 0),
                           cfg.num_or("m", 0), cfg.num_or("n", 0));
        } else {
            v = psi_factored(s, (int)cfg.num_or("i", 0), (int)cfg.num_or("j", 0),
                             cfg.num_or("m", 0), cfg.num_or("n", 0), p, q);
        }
        return expsum_json("psi", json{{"i", cfg.num_or("i", 0)},
                                       {"j", cfg.num_or("j", 0)},
                                       {"m", cfg.num_or("m", 0)},
                                       {"n", cfg.num_or("n", 0)},
                                       {"p", p},
                                       {"q", q},
                                       {"h", cfg.str_or("h", "1")}},
                           v);
    }
    throw parse_error(0, "unknown expsum kind '" + kind + "'");
}

json cmd_congruence(const ExperimentConfig& cfg) {
    CongruenceQuery q{parse_poly1(cfg.str("Q"), "x"), cfg.num("p"), (int)cfg.num("l")};
    mpz_class cnt = count_roots_mod_prime_power(q, budget_from(cfg));
    return json{{"poly", print_poly(q.Q)},
                {"p", q.p},
                {"l", q.l},
                {"count", cnt.get_str()}};
}

json cmd_delta(const ExperimentConfig& cfg) {
    MPoly f = cfg.has("f") ? parse_poly(cfg.str("f"), XY)
                           : instance_from(cfg).f;
    mpz_class k = cfg.big_or("k", 1);
    DeltaCertificate cert = delta_f(f, k, cfg.big("M"), cfg.big("N"));
    return json{{"M", cfg.str("M")},
                {"N", cfg.str("N")},
                {"k", k.get_str()},
                {"case", delta_case_name(cert.kind)},
                {"delta", cert.value.get_str()},
                {"bound_ratio", cert.bound_ratio},
                {"swapped", cert.swapped}};
}

json cmd_lines(const ExperimentConfig& cfg) {
    if (cfg.has("gamma-n")) {
        GeneralInstance inst = instance_from(cfg);
        GammaLineReport rep = gamma_n_line_report(inst, cfg.num("gamma-n"));
        json entries = json::array();
        for (auto& e : rep.entries)
            entries.push_back({{"case", e.case_id},
                               {"line", e.description},
                               {"integer_points", e.integer_points.get_str()}});
        return json{{"n", rep.n},
                    {"entries", entries},
                    {"points_cases12", rep.points_cases12.get_str()}};
    }
    if (cfg.has("f")) {
        MPoly f = parse_poly(cfg.str("f"), XY);
        LevelLineReport rep = classify_level_lines(f);
        json fams = json::array();
        for (auto& fam : rep.families)
            fams.push_back({{"modulus", print_poly(clear_denominators(fam.ring->modulus))},
                            {"genuine", fam.genuine}});
        json out{{"families", fams}};
        out["vertical"] = rep.vertical.exists
                              ? json{{"gamma", rep.vertical.gamma.get_str()},
                                     {"genuine", rep.vertical.genuine}}
                              : json(nullptr);
        return out;
    }
    Poly1 p = parse_poly1(cfg.str("poly"), "x");
    CurveLineSearch s = rational_line_check(p, cfg.big_or("k", 0));
    json lines = json::array();
    for (auto& fam : s.lines)
        lines.push_back({{"modulus", print_poly(clear_denominators(fam.ring->modulus))}});
    return json{{"any_line", s.any_line},
                {"candidates_checked", s.candidates_checked},
                {"lines", lines}};
}

json cmd_census(const ExperimentConfig& cfg) {
    GeneralInstance inst = instance_from(cfg);
    std::string fam = cfg.str("family");
    CensusFamily cf;
    if (fam == "gamma")
        cf = CensusFamily::Gamma;
    else if (fam == "K")
        cf = CensusFamily::K;
    else if (fam == "P")
        cf = CensusFamily::P;
    else
        throw parse_error(0, "unknown census family '" + fam + "'");
    SingularCensus c = singular_census(inst, cf, cfg.num_or("B", inst.B));
    json roots = json::array(), degen = json::array();
    for (auto& r : c.integer_roots) roots.push_back(r.get_str());
    for (auto& r : c.degenerate_values) degen.push_back(r.get_str());
    return json{{"family", fam},
                {"parameter", c.parameter},
                {"disc_degree", c.disc_polynomial.degree()},
                {"leading_coeff", c.leading_coefficient.get_str()},
                {"predicted_leading_coeff", c.predicted_leading.get_str()},
                {"integer_roots", roots},
                {"degenerate_values", degen}};
}

json cmd_sieve(const ExperimentConfig& cfg) {
    GeneralInstance inst = instance_from(cfg);
    SieveContext ctx = make_sieve_context(inst, cfg.big_or("h", 1),
                                          cfg.num_or("Q", 20), (int)cfg.num_or("alpha", 1));
    SieveReport rep = sieve_bound(ctx, budget_from(cfg));
    json pairs = json::array();
    for (auto& t : rep.per_pair) pairs.push_back({t.p, t.q, t.combined});
    return json{{"h", rep.h.get_str()},
                {"Q", rep.Q},
                {"alpha", rep.alpha},
                {"primes_used", rep.primes_used},
                {"lhs", rep.lhs.get_str()},
                {"rhs", rep.rhs},
                {"ratio", rep.ratio},
                {"main_display_alpha", rep.main_display_alpha},
                {"main_display_alpha0", rep.main_display_alpha0},
                {"detector_main_alpha", rep.detector_main_alpha},
                {"detector_main_alpha0", rep.detector_main_alpha0},
                {"cancellation_ratio", rep.cancellation_ratio},
                {"per_pair", pairs}};
}

json cmd_exponents(const ExperimentConfig& cfg) {
    if (cfg.has("dmax")) {
        int bad = exponent_sweep((int)cfg.num("dmax"));
        return json{{"dmax", cfg.num("dmax")}, {"first_failure", bad}, {"ok", bad == 0}};
    }
    ExponentSummary s = exponent_calculator((int)cfg.num("d"));
    return json{{"d", s.d},
                {"sieve_exponent", s.sieve_exponent.get_str()},
                {"determinant_exponent", s.determinant_exponent},
                {"target", s.target.get_str()},
                {"sieve_below_target", s.sieve_below_target},
                {"determinant_below_target", s.determinant_below_target},
                {"balance_identity", s.balance_identity}};
}

} // namespace

json run_command(const ExperimentConfig& cfg) {
    if (cfg.command == "count") return cmd_count(cfg);
    if (cfg.command == "scan") return cmd_scan(cfg);
    if (cfg.command == "expsum") return cmd_expsum(cfg);
    if (cfg.command == "congruence") return cmd_congruence(cfg);
    if (cfg.command == "delta") return cmd_delta(cfg);
    if (cfg.command == "lines") return cmd_lines(cfg);
    if (cfg.command == "census") return cmd_census(cfg);
    if (cfg.command == "sieve") return cmd_sieve(cfg);
    if (cfg.command == "exponents") return cmd_exponents(cfg);
    throw parse_error(0, "unknown command '" + cfg.command + "'");
}

RunResult run_with_cache(const ExperimentConfig& cfg, const std::string& cache_dir) {
    RunResult out;
    std::string hash = cfg.digest();
    std::filesystem::path file;
    if (!cache_dir.empty()) {
        std::filesystem::create_directories(cache_dir);
        file = std::filesystem::path(cache_dir) / (cfg.command + ".jsonl");
        std::ifstream in(file);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json rec = json::parse(line, nullptr, false);
            if (rec.is_discarded()) continue;
            if (rec.value("config_hash", "") == hash) {
                out.record = rec;
                out.cache_hit = true;
                return out;
            }
        }
    }
    json payload = run_command(cfg);
    auto now = std::chrono::system_clock::now().time_since_epoch();
    json rec{{"config_hash", hash},
             {"command", cfg.command},
             {"payload", payload},
             {"timestamp_ms",
              std::chrono::duration_cast<std::chrono::milliseconds>(now).count()},
             {"version", kToolkitVersion}};
    out.record = rec;
    if (!cache_dir.empty()) {
        std::ofstream app(file, std::ios::app);
        app << rec.dump() << "\n";
    }
    return out;
}

} // namespace aet
