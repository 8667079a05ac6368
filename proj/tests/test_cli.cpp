#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliResult {
    int code;
    std::string out;
};

std::string sample(const std::string& name) { return std::string(MLTK_SAMPLES_DIR) + "/" + name; }

std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

// Runs the CLI with the given arguments, capturing stdout and stderr together.
CliResult run(const std::vector<std::string>& args) {
    std::string cmd = quote(MLTK_CLI_PATH);
    for (const auto& a : args) cmd += " " + quote(a);
    cmd += " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return {-1, ""};
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

std::string last_line(const std::string& s, std::size_t back = 0) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    return lines.size() > back ? lines[lines.size() - 1 - back] : "";
}

}  // namespace

TEST(Cli, CheckPrintsTypes) {
    CliResult r = run({"check", sample("montague.mltk")});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "dere : S -> T")) << r.out;
}

TEST(Cli, Equality) {
    CliResult r = run({"eq", sample("montague.mltk"), "dere", "dere_src"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "equal")) << r.out;
    r = run({"eq", sample("montague.mltk"), "dere", "\\v0:S. b v0 (\\v1:S. cc v1 (d v0))"});
    EXPECT_EQ(r.code, 0) << r.out;
    r = run({"eq", sample("montague.mltk"), "dere", "ident"});
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_TRUE(contains(r.out, "unequal")) << r.out;
}

TEST(Cli, ReduceUnblocksByRenaming) {
    CliResult r = run({"reduce", sample("enough_variables.mltk"), "unblocked", "--mode", "beta", "--trace"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(last_line(r.out, 1), "\\v1:B. v3 v1 v0") << r.out;
    EXPECT_TRUE(contains(r.out, "[alpha]")) << r.out;
    // With a single variable of the state type the redex stays blocked.
    r = run({"reduce", sample("lack_of_variables.mltk"), "blocked", "--mode", "beta"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "after 0 steps")) << r.out;
}

TEST(Cli, SideConditionAndParseErrors) {
    CliResult r = run({"check", sample("cardinal.mltk")});
    EXPECT_EQ(r.code, 2) << r.out;
    EXPECT_TRUE(contains(r.out, "SideConditionViolated")) << r.out;

    auto bad = std::filesystem::temp_directory_path() / "mltk_cli_bad.mltk";
    std::ofstream(bad) << "entity E;\nlet x = \\v0:E. ;\n";
    r = run({"check", bad.string()});
    EXPECT_EQ(r.code, 2) << r.out;
    EXPECT_TRUE(contains(r.out, "SyntaxError: 2:")) << r.out;
    std::filesystem::remove(bad);
}

TEST(Cli, Translations) {
    CliResult r = run({"roundtrip", sample("montague.mltk"), "dere"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "roundtrip holds")) << r.out;
    r = run({"wnf", sample("combinators.mltk"), "kjc"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(last_line(r.out), "j");
}

TEST(Cli, Frames) {
    CliResult r = run({"frame-verify", sample("punctured.frame.json")});
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_TRUE(contains(r.out, "not a model")) << r.out;
    EXPECT_TRUE(contains(r.out, "witness:")) << r.out;
    r = run({"frame-verify", sample("generated.frame.json")});
    EXPECT_EQ(r.code, 0) << r.out;
    r = run({"model-check", sample("standard.frame.json"), sample("montague.mltk"), "dere", "dere_src"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "valid")) << r.out;
}

TEST(Cli, ConfluenceSearch) {
    CliResult r = run({"cr-search", "--system", "cl", "--iters", "1000", "--seed", "7"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "0 join failures")) << r.out;
}

TEST(Cli, Selftest) {
    CliResult r = run({"selftest"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_FALSE(contains(r.out, "FAIL")) << r.out;
}
