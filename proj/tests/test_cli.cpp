#include "fdprop/cli.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace fdprop;

namespace {

struct TempModel {
    std::string path;
    explicit TempModel(const std::string& name, const std::string& content)
        : path("cli_" + name + ".csp") {
        std::ofstream f(path, std::ios::binary);
        f << content;
    }
    ~TempModel() { std::remove(path.c_str()); }
};

struct CliOutcome {
    int code;
    std::string out;
    std::string err;
};

CliOutcome run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const std::string triangle_src = "var x in {0, 1, 2};\n"
                                 "var y in {0, 1, 2};\n"
                                 "var z in {0, 1, 2};\n"
                                 "constraint x < y;\n"
                                 "constraint y < z;\n"
                                 "constraint z < x;\n";

const std::string leq_src = "var x in {0, 1};\n"
                            "var y in {0, 1};\n"
                            "constraint table(x, y) { (0, 0), (0, 1), (1, 1) };\n";

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("solve reports the failure and the emptied variable") {
    TempModel m("triangle", triangle_src);
    CliOutcome r = run_cli({"solve", m.path});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out.find("status: FAILED") != std::string::npos);
    CHECK(r.out.find("emptied") != std::string::npos);

    CliOutcome full = run_cli({"solve", m.path, "--no-stop-on-failure"});
    CHECK(full.code == cli::exit_ok);
    CHECK(full.out.find("x in {}") != std::string::npos);
    CHECK(full.out.find("status: CLOSED") != std::string::npos);
}

TEST_CASE("solve accepts scripts and writes traces") {
    TempModel m("triangle", triangle_src);
    const std::string trace_path = "cli_trace.txt";
    CliOutcome r = run_cli({"solve", m.path, "--script", "r5,r3,r1", "--trace", trace_path});
    CHECK(r.code == cli::exit_ok);
    std::ifstream f(trace_path);
    REQUIRE(f.good());
    std::string first_line;
    std::getline(f, first_line);
    CHECK(first_line == "1\tr5\tz=2\t0");
    f.close();
    std::remove(trace_path.c_str());

    CliOutcome bad = run_cli({"solve", m.path, "--script", "r99"});
    CHECK(bad.code == cli::exit_diagnostics);
    CHECK(bad.err.find("unknown rule") != std::string::npos);
}

TEST_CASE("explain prints existence and the proof tree") {
    TempModel m("triangle", triangle_src);
    CliOutcome r = run_cli({"explain", m.path, "--var", "x", "--value", "0", "--text"});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out.find("explanation exists for (0, x): yes") != std::string::npos);
    CHECK(r.out.find("(0, x)") != std::string::npos);

    TempModel leq("leq", leq_src);
    CliOutcome no = run_cli({"explain", leq.path, "--var", "x", "--value", "0"});
    CHECK(no.code == cli::exit_ok);
    CHECK(no.out.find("explanation exists for (0, x): no") != std::string::npos);

    CliOutcome bad = run_cli({"explain", leq.path, "--var", "x", "--value", "9"});
    CHECK(bad.code == cli::exit_diagnostics);
}

TEST_CASE("explain agrees with the unfailed solve on membership") {
    TempModel m("triangle", triangle_src);
    CliOutcome solve = run_cli({"solve", m.path, "--no-stop-on-failure"});
    const bool absent = solve.out.find("x in {}") != std::string::npos;
    CliOutcome explain = run_cli({"explain", m.path, "--var", "x", "--value", "0"});
    CHECK(absent == (explain.out.find(": yes") != std::string::npos));
}

TEST_CASE("check passes on sane models") {
    TempModel leq("leq", leq_src);
    CliOutcome r = run_cli({"check", leq.path, "--strategies", "8"});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out.find("all checks passed") != std::string::npos);

    TempModel tri("triangle", triangle_src);
    CHECK(run_cli({"check", tri.path}).code == cli::exit_ok);
}

TEST_CASE("oracle prints the brute-force solutions") {
    TempModel leq("leq", leq_src);
    CliOutcome r = run_cli({"oracle", leq.path});
    CHECK(r.code == cli::exit_ok);
    CHECK(r.out == "x=0 y=0\nx=0 y=1\nx=1 y=1\n3 solutions\n");

    TempModel tri("triangle", triangle_src);
    CliOutcome none = run_cli({"oracle", tri.path});
    CHECK(none.out == "0 solutions\n");
}

TEST_CASE("diagnostics and bad usage exit with code 1") {
    CliOutcome missing = run_cli({"solve", "no_such_file.csp"});
    CHECK(missing.code == cli::exit_diagnostics);

    TempModel bad("bad", "var x in {};\n");
    CliOutcome parse = run_cli({"solve", bad.path});
    CHECK(parse.code == cli::exit_diagnostics);
    CHECK(parse.err.find(":1:") != std::string::npos);

    CliOutcome usage = run_cli({"frobnicate"});
    CHECK(usage.code == cli::exit_diagnostics);

    TempModel leq("leq", leq_src);
    CliOutcome strat = run_cli({"solve", leq.path, "--strategy", "psychic"});
    CHECK(strat.code == cli::exit_diagnostics);
}

TEST_CASE("bounds mode is accepted where defined") {
    TempModel m("offsets", "var a in {0, 1, 2, 3, 4};\n"
                           "var b in {0, 2, 4};\n"
                           "constraint a = b + 1;\n");
    CliOutcome full = run_cli({"solve", m.path, "--mode", "full"});
    CliOutcome bounds = run_cli({"solve", m.path, "--mode", "bounds"});
    CHECK(full.code == cli::exit_ok);
    CHECK(bounds.code == cli::exit_ok);
    // Bounds reasoning keeps the hole at a=2; full support checking prunes it.
    CHECK(full.out.find("a in {1, 3}") != std::string::npos);
    CHECK(bounds.out.find("a in {1, 2, 3}") != std::string::npos);
}

TEST_SUITE_END();
