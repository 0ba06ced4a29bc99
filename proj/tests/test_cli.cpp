#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "support/fixtures.hpp"

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

const fs::path& scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("causord-tests-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string cli_path() {
    const char* path = std::getenv("CAUSORD_CLI");
    REQUIRE_MESSAGE(path != nullptr, "CAUSORD_CLI must point at the causord binary");
    return path;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path write_file(const std::string& name, std::string_view content) {
    fs::path p = scratch_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

RunResult run_cli(const std::string& args, const std::string& stdin_data = "") {
    static int counter = 0;
    const fs::path out_file = scratch_dir() / ("out" + std::to_string(counter));
    const fs::path err_file = scratch_dir() / ("err" + std::to_string(counter));
    const fs::path in_file = scratch_dir() / ("in" + std::to_string(counter));
    ++counter;

    std::string command = cli_path() + " " + args;
    if (!stdin_data.empty()) {
        std::ofstream in(in_file, std::ios::binary);
        in << stdin_data;
        command += " < " + in_file.string();
    } else {
        command += " < /dev/null";
    }
    command += " > " + out_file.string() + " 2> " + err_file.string();

    RunResult result;
    const int raw = std::system(command.c_str());
    result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

const std::string& seven_file() {
    static const std::string path =
        write_file("seven.cop", causord::testing::kSevenEquationText).string();
    return path;
}

const std::string& triangle_file() {
    static const std::string path =
        write_file("triangle.cop", causord::testing::kTriangleAnchorText).string();
    return path;
}

}  // namespace

TEST_CASE("cli validate: complete fixture") {
    RunResult r = run_cli("validate " + seven_file());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("structural: yes") != std::string::npos);
    CHECK(r.out.find("complete: yes") != std::string::npos);
    CHECK(r.out.find("density: 16") != std::string::npos);
    CHECK(r.err.empty());
}

TEST_CASE("cli validate: incomplete input exits 1 with the exact message") {
    const std::string path = write_file("incomplete.cop", "f1: x1 x2\n").string();
    RunResult r = run_cli("validate " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.err == "not complete: 1 equation, 2 variables\n");
}

TEST_CASE("cli validate: non-structural input names the violator") {
    const std::string path = write_file("nonstructural.cop", "f1: x1\nf2: x1\n").string();
    RunResult r = run_cli("validate " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("not structural") != std::string::npos);
    CHECK(r.err.find("f1 f2") != std::string::npos);
}

TEST_CASE("cli validate: reads stdin with '-'") {
    RunResult r = run_cli("validate -", std::string(causord::testing::kSevenEquationText));
    CHECK(r.exit_code == 0);
}

TEST_CASE("cli: parse errors exit 2") {
    const std::string path = write_file("broken.cop", "f1 x1\n").string();
    RunResult r = run_cli("validate " + path);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error:") != std::string::npos);

    CHECK(run_cli("nonsense").exit_code == 2);
    CHECK(run_cli("csdp " + seven_file()).exit_code == 2);  // --size required
}

TEST_CASE("cli order: json reproduces the fixture counts") {
    RunResult r = run_cli("order " + seven_file() + " --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["direct"].size() == 9);
    CHECK(doc["closure"].size() == 18);
    REQUIRE(doc["clusters"].size() == 6);
    bool found_coupled = false;
    for (const auto& cluster : doc["clusters"]) {
        if (cluster.size() == 2) {
            CHECK(cluster[0] == "x4");
            CHECK(cluster[1] == "x5");
            found_coupled = true;
        }
    }
    CHECK(found_coupled);
}

TEST_CASE("cli order: dfs and floyd closures coincide") {
    RunResult dfs = run_cli("order " + seven_file() + " --closure dfs --format json");
    RunResult floyd = run_cli("order " + seven_file() + " --closure floyd --format json");
    CHECK(dfs.exit_code == 0);
    CHECK(floyd.exit_code == 0);
    CHECK(dfs.out == floyd.out);
}

TEST_CASE("cli order: summary output") {
    RunResult r = run_cli("order " + seven_file());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("direct edges: 9\n") != std::string::npos);
    CHECK(r.out.find("closure edges: 18\n") != std::string::npos);
    CHECK(r.out.find("clusters: 6\n") != std::string::npos);
    CHECK(r.out.find("largest cluster: 2\n") != std::string::npos);
}

TEST_CASE("cli order: dot output") {
    RunResult r = run_cli("order " + seven_file() + " --format dot");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("subgraph cluster_0") != std::string::npos);
    CHECK(r.out.find("\"x1\" -> \"x4\";") != std::string::npos);
}

TEST_CASE("cli order: incomplete input is a domain error") {
    const std::string path = write_file("incomplete2.cop", "f1: x1 x2\n").string();
    RunResult r = run_cli("order " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("not complete") != std::string::npos);
}

TEST_CASE("cli map: both algorithms produce the fixture identity") {
    for (const std::string algo : {"nayak", "simon"}) {
        RunResult r = run_cli("map " + seven_file() + " --algo " + algo);
        CHECK(r.exit_code == 0);
        CHECK(r.out.find("f1 -> x1\n") != std::string::npos);
        CHECK(r.out.find("f7 -> x7\n") != std::string::npos);
    }
}

TEST_CASE("cli map: json format") {
    RunResult r = run_cli("map " + triangle_file() + " --format json");
    REQUIRE(r.exit_code == 0);
    auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["mapping"]["f4"] == "x4");
}

TEST_CASE("cli clusters: text output") {
    RunResult r = run_cli("clusters " + seven_file());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "x1\nx2\nx3\nx4 x5\nx6\nx7\n");
}

TEST_CASE("cli csdp: triangle witness through both routes") {
    for (const std::string via : {"bruteforce", "biclique"}) {
        RunResult r = run_cli("csdp " + triangle_file() + " --size 3 --via " + via);
        CHECK(r.exit_code == 0);
        CHECK(r.out == "yes\nwitness: f1 f2 f3\n");
    }
    RunResult no = run_cli("csdp " + seven_file() + " --size 4");
    CHECK(no.exit_code == 0);
    CHECK(no.out == "no\n");
}

TEST_CASE("cli minimal: fixture substructures") {
    RunResult r = run_cli("minimal " + seven_file());
    CHECK(r.exit_code == 0);
    CHECK(r.out == "f1\nf2\nf3\n");

    RunResult json = run_cli("minimal " + triangle_file() + " --format json");
    CHECK(json.exit_code == 0);
    CHECK(json.out.find("\"size\": 3") != std::string::npos);
    CHECK(json.out.find("[\"f1\", \"f2\", \"f3\"]") != std::string::npos);
}

TEST_CASE("cli gen: output feeds every other subcommand") {
    const fs::path generated = scratch_dir() / "generated.cop";
    RunResult gen = run_cli("gen --equations 30 --extra 2 --seed 7 -o " + generated.string());
    REQUIRE(gen.exit_code == 0);

    CHECK(run_cli("validate " + generated.string()).exit_code == 0);
    CHECK(run_cli("order " + generated.string()).exit_code == 0);
    CHECK(run_cli("map " + generated.string()).exit_code == 0);
    CHECK(run_cli("clusters " + generated.string()).exit_code == 0);
}

TEST_CASE("cli gen: byte-identical for a fixed seed") {
    RunResult a = run_cli("gen --equations 50 --extra 3 --seed 11");
    RunResult b = run_cli("gen --equations 50 --extra 3 --seed 11");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    RunResult c = run_cli("gen --equations 50 --extra 3 --seed 12");
    CHECK(a.out != c.out);
}

TEST_CASE("cli: json structure input is auto-detected") {
    const std::string json_structure =
        "{\"equations\": [{\"id\": \"f1\", \"vars\": [\"x1\"]}]}";
    const std::string path = write_file("structure.json", json_structure).string();
    RunResult r = run_cli("validate " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("complete: yes") != std::string::npos);
}

TEST_CASE("cli: deterministic output across runs") {
    for (const std::string& invocation : {
             "order " + seven_file() + " --format json",
             "order " + seven_file() + " --format dot",
             "map " + seven_file() + " --algo simon",
             "csdp " + triangle_file() + " --size 3 --via biclique",
             "minimal " + seven_file() + " --format json",
             "clusters " + seven_file() + " --format json",
         }) {
        RunResult a = run_cli(invocation);
        RunResult b = run_cli(invocation);
        CHECK(a.exit_code == b.exit_code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("cli bench: header-only CSV for an empty algo list") {
    RunResult r = run_cli("bench --algos '' --sizes 5");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "algo,size,density,seed,millis,status\n");
}

TEST_CASE("cli bench: rows per algo and size") {
    RunResult r = run_cli("bench --algos nayak --sizes 5,10 --extra 1 --seed 4");
    REQUIRE(r.exit_code == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "algo,size,density,seed,millis,status");
    std::getline(lines, line);
    CHECK(line.rfind("nayak,5,1,4,", 0) == 0);
    CHECK(line.find(",ok") != std::string::npos);
    std::getline(lines, line);
    CHECK(line.rfind("nayak,10,1,4,", 0) == 0);
}

TEST_CASE("cli: guard env variable tightens the brute-force bound") {
    const std::string command = "CAUSORD_MAX_BRUTEFORCE=5 " + cli_path() + " minimal " +
                                seven_file() + " > /dev/null 2> " +
                                (scratch_dir() / "guard_err").string();
    const int raw = std::system(command.c_str());
    CHECK(WEXITSTATUS(raw) == 1);
    CHECK(slurp(scratch_dir() / "guard_err").find("brute-force bound") != std::string::npos);
}

TEST_CASE("cli: --force-exponential overrides the guard") {
    const fs::path generated = scratch_dir() / "g26.cop";
    REQUIRE(run_cli("gen --equations 26 --seed 3 -o " + generated.string()).exit_code == 0);
    CHECK(run_cli("minimal " + generated.string()).exit_code == 1);
    CHECK(run_cli("minimal " + generated.string() + " --force-exponential").exit_code == 0);
}
