#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(HJW_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("hjw_cli_test_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("exact prints the value and writes a verifiable certificate") {
    TempDir tmp;
    const std::string cert = tmp.file("cert.json");
    const auto r = run_cli("exact --kind hj --dim 1 --alphabet 2 --colors 2 --out " + cert);
    CHECK(r.code == 0);
    CHECK(r.out == "2\n");
    const nlohmann::json j = nlohmann::json::parse(slurp(cert));
    CHECK(j.at("value") == 2);
    CHECK(j.at("format") == 1);
    CHECK(j.at("bad_coloring").is_array());

    const auto chk = run_cli("check --certificate " + cert);
    CHECK(chk.code == 0);
}

TEST_CASE("bound renders canonical tower strings") {
    const auto r = run_cli("bound --kind gowers --r 2 --m 3");
    CHECK(r.code == 0);
    CHECK(r.out == "2^(2^(2^(2^(2^12))))\n");

    const auto g = run_cli("bound --kind grzegorczyk --level 1 --args 3");
    CHECK(g.code == 0);
    CHECK(g.out == "11\n");

    const auto p = run_cli("bound --kind par-alpha --target 2 --alphabet 2 --colors 2");
    CHECK(p.code == 0);
    CHECK(p.out == "33\n");
}

TEST_CASE("check accepts the singleton counterexample sweep") {
    const auto r = run_cli("check --counterexample --m 3 --alphabet 2 --base 0");
    CHECK(r.code == 0);
    CHECK(r.out == "no singleton-block subspace monochromatic\n");
}

TEST_CASE("gen, witness, and check round-trip through files") {
    TempDir tmp;
    const std::string coloring = tmp.file("c.json");
    const std::string witness = tmp.file("w.json");

    const auto g = run_cli(
        "gen --type word --family random --ground 4 --alphabet 2 --colors 2 --seed 7 --out " +
        coloring);
    CHECK(g.code == 0);
    CHECK(std::filesystem::exists(coloring));
    CHECK(!std::filesystem::exists(coloring + ".tmp"));  // temp-rename left no residue

    const auto w =
        run_cli("witness --find subspace --dim 1 --coloring " + coloring + " --out " + witness);
    CHECK(w.code == 0);
    const nlohmann::json wj = nlohmann::json::parse(slurp(witness));
    CHECK(wj.at("found") == true);
    CHECK(wj.at("witness").at("type") == "subspace");

    const auto c = run_cli("check --witness " + witness + " --coloring " + coloring);
    CHECK(c.code == 0);
    CHECK(c.out == "witness valid\n");

    // an unrelated coloring rejects the same witness or reports invalid
    const std::string other = tmp.file("other.json");
    run_cli("gen --type word --family parity --ground 4 --alphabet 2 --colors 2 --base 0 --out " +
            other);
    const auto bad = run_cli("check --witness " + witness + " --coloring " + other);
    CHECK((bad.code == 0 || bad.code == 1));  // parity may or may not share the witness
}

TEST_CASE("exit codes separate none, budget, and usage") {
    // proven none: a random coloring with many colors has no size-2 invariance
    const auto none = run_cli(
        "witness --find par --family random --ground 3 --alphabet 2 --colors 8 --seed 1 "
        "--size 2 --out \"\"");
    CHECK(none.code == 1);

    const auto budget = run_cli(
        "exact --kind vdw --dim 1 --side 3 --colors 2 --budget-nodes 5 --out \"\"");
    CHECK(budget.code == 2);

    CHECK(run_cli("exact --kind nope --colors 2").code == 3);
    CHECK(run_cli("frobnicate").code == 3);
    CHECK(run_cli("witness --find subspace").code == 3);  // no coloring source
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("environment variables supply default budgets") {
    const std::string cmd = std::string("HJW_BUDGET_NODES=5 ") + HJW_CLI_PATH +
                            " exact --kind vdw --dim 1 --side 3 --colors 2 --out \"\" "
                            "2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[256];
    while (std::fread(buf, 1, sizeof buf, pipe) > 0) {
    }
    const int status = pclose(pipe);
    CHECK(WEXITSTATUS(status) == 2);
}

TEST_CASE("worker count does not change the certificate bytes") {
    TempDir tmp;
    const std::string a = tmp.file("a.json");
    const std::string b = tmp.file("b.json");
    CHECK(run_cli("exact --kind ramsey --target 3 --tuple 2 --colors 2 --workers 1 --out " +
                  a).code == 0);
    CHECK(run_cli("exact --kind ramsey --target 3 --tuple 2 --colors 2 --workers 8 --out " +
                  b).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
}

TEST_CASE("interrupted exact runs resume to the uninterrupted certificate") {
    TempDir tmp;
    const std::string fresh = tmp.file("fresh.json");
    const std::string resumed = tmp.file("resumed.json");
    const std::string journal = tmp.file("journal.jsonl");

    CHECK(run_cli("exact --kind vdw --dim 1 --side 3 --colors 2 --out " + fresh).code == 0);
    CHECK(run_cli("exact --kind vdw --dim 1 --side 3 --colors 2 --budget-nodes 12 "
                  "--checkpoint " + journal + " --out \"\"").code == 2);
    CHECK(run_cli("exact --kind vdw --dim 1 --side 3 --colors 2 --checkpoint " + journal +
                  " --out " + resumed).code == 0);
    CHECK(slurp(fresh) == slurp(resumed));
}

TEST_CASE("bound expression files carry the dag and display form") {
    TempDir tmp;
    const std::string out = tmp.file("bound.json");
    const auto r = run_cli("bound --kind hj --dim 1 --alphabet 2 --colors 2 --out " + out);
    CHECK(r.code == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("format") == 1);
    CHECK(j.contains("display"));
}
