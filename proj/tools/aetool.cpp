// Command-line frontend for the counting toolkit. Subcommands map onto the
// library experiments; results are emitted as JSON-lines records and cached
// per command keyed by the config digest.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "aet/cli.hpp"

using aet::ExperimentConfig;

namespace {

struct Common {
    std::string out_path;
    std::string cache_dir = "aetool-cache";
    bool no_cache = false;
    std::string config_path;
};

void add_common(CLI::App* app, Common& c) {
    app->set_help_flag("--help", "print help");
    app->add_option("--out", c.out_path, "append the JSON record to this file");
    app->add_option("--cache-dir", c.cache_dir, "result cache directory");
    app->add_flag("--no-cache", c.no_cache, "disable the result cache");
}

int emit(const ExperimentConfig& cfg, const Common& common) {
    aet::RunResult res =
        aet::run_with_cache(cfg, common.no_cache ? std::string() : common.cache_dir);
    nlohmann::json rec = res.record;
    rec["cache_hit"] = res.cache_hit;
    std::string line = rec.dump();
    std::cout << line << "\n";
    if (!common.out_path.empty()) {
        std::ofstream out(common.out_path, std::ios::app);
        out << line << "\n";
    }
    return 0;
}

// collect an option into the config map when supplied
struct KV {
    ExperimentConfig* cfg;
    void set(const std::string& key, const std::string& value) { cfg->kv[key] = value; }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact counting toolkit for polynomial additive energy"};
    app.require_subcommand(0, 1);
    app.set_help_flag("--help", "print help");

    ExperimentConfig cfg;
    Common common;
    KV kv{&cfg};

    // options shared by instance-based commands
    auto add_instance_opts = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print help");
        for (const char* key : {"poly", "f", "g", "a", "b", "k", "B", "h"}) {
            std::string k = key;
            sub->add_option_function<std::string>(
                "--" + k, [&kv, k](const std::string& v) { kv.set(k, v); });
        }
        add_common(sub, common);
    };

    auto* count = app.add_subcommand("count", "exact solution counts");
    add_instance_opts(count);
    for (const char* key : {"algo", "F", "l", "threads", "general", "max-items"}) {
        std::string k = key;
        count->add_option_function<std::string>(
            "--" + k, [&kv, k](const std::string& v) { kv.set(k, v); });
    }

    auto* scan = app.add_subcommand("scan", "log-log growth exponent fits");
    add_instance_opts(scan);
    for (const char* key : {"B-list", "csv", "threads"}) {
        std::string k = key;
        scan->add_option_function<std::string>(
            "--" + k, [&kv, k](const std::string& v) { kv.set(k, v); });
    }

    auto* expsum = app.add_subcommand("expsum", "complete exponential sums");
    add_instance_opts(expsum);
    for (const char* key : {"kind", "t", "p", "q", "M", "N", "i", "j", "m", "n", "method"}) {
        std::string k = key;
        expsum->add_option_function<std::string>(
            "--" + k, [&kv, k](const std::string& v) { kv.set(k, v); });
    }

    auto* cong = app.add_subcommand("congruence", "root counts mod prime powers");
    add_common(cong, common);
    for (const char* key : {"Q", "p", "l", "max-items"}) {
        std::string k = key;
        cong->add_option_function<std::string>(
            "--" + k, [&kv, k](const std::string& v) { kv.set(k, v); });
    }

    auto* delta = app.add_subcommand("delta", "line-obstruction certificates");
    add_instance_opts(delta);
    for (const char* key : {"M", "N"}) {
        std::string k = key;
        delta->add_option_function<std::string>(
            "--" + k, [&kv, k](const std::string& v) { kv.set(k, v); });
    }

    auto* lines = app.add_subcommand("lines", "line classification reports");
    add_instance_opts(lines);
    lines->add_option_function<std::string>(
        "--gamma-n", [&kv](const std::string& v) { kv.set("gamma-n", v); });

    auto* census = app.add_subcommand("census", "parametric singularity censuses");
    add_instance_opts(census);
    census->add_option_function<std::string>(
        "--family", [&kv](const std::string& v) { kv.set("family", v); });

    auto* sieve = app.add_subcommand("sieve", "polynomial sieve report");
    add_instance_opts(sieve);
    for (const char* key : {"Q", "alpha", "max-items"}) {
        std::string k = key;
        sieve->add_option_function<std::string>(
            "--" + k, [&kv, k](const std::string& v) { kv.set(k, v); });
    }

    auto* expo = app.add_subcommand("exponents", "final exponent comparisons");
    add_common(expo, common);
    for (const char* key : {"d", "dmax"}) {
        std::string k = key;
        expo->add_option_function<std::string>(
            "--" + k, [&kv, k](const std::string& v) { kv.set(k, v); });
    }

    auto* runcfg = app.add_subcommand("run", "run an experiment from a config file");
    runcfg->add_option("--config", common.config_path, "JSON or key=value config")
        ->required();
    add_common(runcfg, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (runcfg->parsed()) {
            ExperimentConfig file_cfg = aet::parse_config_file(common.config_path);
            return emit(file_cfg, common);
        }
        for (auto* sub : {count, scan, expsum, cong, delta, lines, census, sieve, expo}) {
            if (sub->parsed()) {
                cfg.command = sub->get_name();
                return emit(cfg, common);
            }
        }
        std::cout << app.help() << "\n";
        return 0;
    } catch (const aet::parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const aet::budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const aet::invariant_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
