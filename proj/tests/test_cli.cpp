#include "doctest.h"
#include "json.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int status;
    std::string out;
};

Run cli(const std::string& args) {
    std::string cmd = std::string(QTW_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

}  // namespace

TEST_CASE("qchar output") {
    auto r = cli("qchar --type A2^2 --kr 1,1,q^0 --trunc 2");
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["terms"].size() == 3);
    CHECK(j["type"] == "A2^2");
    CHECK(nlohmann::json::parse(cli("qchar --type A2^2 --kr 1,1,q^0 --trunc 0").out)["terms"].size() == 1);
    // negative prefundamental window: (i, j) with i <= j, i + j <= 2
    CHECK(nlohmann::json::parse(cli("qchar --neg-prefund 1 --trunc 2").out)["terms"].size() == 4);
}

TEST_CASE("output is byte-stable") {
    std::string args = "qchar --type D4^3 --kr 2,1,1 --trunc 3";
    CHECK(cli(args).out == cli(args).out);
    CHECK(cli("verify-all --only tq").out == cli("verify-all --only tq").out);
}

TEST_CASE("config file mirrors the options") {
    std::string path = "test_cli_config.ini";
    std::ofstream(path) << "type=A3^2\ntrunc=2\nnode=2\n";
    auto from_file = cli("qq-verify --config " + path);
    auto from_flags = cli("qq-verify --type A3^2 --trunc 2 --node 2");
    CHECK(from_file.status == 0);
    CHECK(from_file.out == from_flags.out);
    auto j = nlohmann::json::parse(from_file.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["status"] == "pass");
    CHECK(j[0].contains("relation"));
    CHECK(j[0].contains("vectors_checked"));
}

TEST_CASE("suite runner") {
    auto r = cli("verify-all --only tq,bae");
    CHECK(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["summary"]["failed"] == 0);
    for (const auto& c : j["checks"]) {
        CHECK_FALSE(c["anchor"].get<std::string>().empty());
        CHECK((c["group"] == "tq" || c["group"] == "bae"));
    }
    CHECK(cli("verify-all --only nonsense").status == 2);
}

TEST_CASE("failures and errors set the exit status") {
    // the listed E6^(2) factor disagrees with the computed determinant
    auto r = cli("detf --type E6^2 --k 2");
    CHECK(r.status == 1);
    CHECK(nlohmann::json::parse(r.out)[0]["status"] == "fail");
    CHECK(cli("detf --type D4^3 --k 3").status == 0);
    CHECK(cli("qchar --monomial 'Z[1,1]*Z[1,q'").status == 2);
    CHECK(cli("qchar --type B2^2 --kr 1,1,1").status == 2);
    CHECK(cli("repcheck --module neg_prefund_A2t --bound 6").status == 0);
}
