#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "aet/cli.hpp"
#include "aet/energy.hpp"
#include "aet/mpoly.hpp"

using namespace aet;

TEST_CASE("config parsing: JSON and key=value agree") {
    ExperimentConfig a = parse_config_text(
        R"({"command":"count","poly":"x^3","k":"1","B":"20","algo":"mitm"})");
    ExperimentConfig b = parse_config_text(
        "command=count\npoly=x^3\nk=1\nB=20\nalgo=mitm\n");
    CHECK(a.command == "count");
    CHECK(a.canonical() == b.canonical());
    CHECK(a.digest() == b.digest());

    CHECK_THROWS_AS(parse_config_text("poly=x^3\n"), parse_error);   // no command
    CHECK_THROWS_AS(parse_config_text("command=count\nbroken line\n"), parse_error);
}

TEST_CASE("digest is stable and order-independent") {
    ExperimentConfig a = parse_config_text("command=count\npoly=x^3\nB=10\n");
    ExperimentConfig b = parse_config_text("command=count\nB=10\npoly=x^3\n");
    CHECK(a.digest() == b.digest());
    ExperimentConfig c = parse_config_text("command=count\npoly=x^3\nB=11\n");
    CHECK(a.digest() != c.digest());
}

TEST_CASE("run_command: count matches the library counter") {
    ExperimentConfig cfg = parse_config_text(
        "command=count\npoly=x^3\nk=1\nB=20\nalgo=brute\n");
    nlohmann::json payload = run_command(cfg);
    EnergyInstance inst{parse_poly1("x^3", "x"), 1, 20};
    CHECK(payload["count"].get<std::string>() ==
          energy_bruteforce(inst).count.get_str());
}

TEST_CASE("run_command: scan emits the CSV header and a fit") {
    ExperimentConfig cfg = parse_config_text(
        "command=scan\npoly=x^3\nk=0\nB-list=20,40,80\n");
    nlohmann::json payload = run_command(cfg);
    std::string csv = payload["csv"].get<std::string>();
    CHECK(csv.rfind("B,count,log10B,log10count\n", 0) == 0);
    double slope = payload["fit"]["slope"].get<double>();
    CHECK(slope > 1.5);
    CHECK(slope < 2.5);
}

TEST_CASE("run_command: unknown command and bad polynomial raise parse errors") {
    CHECK_THROWS_AS(run_command(parse_config_text("command=nonsense\n")), parse_error);
    ExperimentConfig cfg = parse_config_text("command=count\npoly=x^^3\nB=5\n");
    CHECK_THROWS_AS(run_command(cfg), parse_error);
}

TEST_CASE("cache: identical configs short-circuit, payloads byte-identical") {
    std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "aet-cache-test";
    std::filesystem::remove_all(dir);
    ExperimentConfig cfg = parse_config_text(
        "command=count\npoly=x^4-2*x\nk=3\nB=25\nalgo=mitm\n");
    RunResult first = run_with_cache(cfg, dir.string());
    CHECK_FALSE(first.cache_hit);
    RunResult second = run_with_cache(cfg, dir.string());
    CHECK(second.cache_hit);
    CHECK(first.record["payload"].dump() == second.record["payload"].dump());
    // a fresh computation with caching disabled matches too
    RunResult third = run_with_cache(cfg, "");
    nlohmann::json p1 = first.record["payload"], p3 = third.record["payload"];
    p1.erase("millis");
    p3.erase("millis");
    CHECK(p1.dump() == p3.dump());
    std::filesystem::remove_all(dir);
}

TEST_CASE("run_command: exponents payload") {
    nlohmann::json payload =
        run_command(parse_config_text("command=exponents\nd=3\n"));
    CHECK(payload["sieve_exponent"].get<std::string>() == "17/9");
    CHECK(payload["balance_identity"].get<bool>());
}
