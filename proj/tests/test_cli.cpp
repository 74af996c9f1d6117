#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>

#include "pipecheck/bench.hpp"
#include "support.hpp"

using namespace pipecheck;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string out;
};

// `args` goes through /bin/sh; stderr is discarded so `out` holds stdout only.
CliResult run(const std::string& args, const std::string& env = "env -u PIPECHECK_KB") {
    const std::string cmd = env + " " + PIPECHECK_CLI + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (p == nullptr) return {-1, {}};
    std::string out;
    char buf[4096];
    for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const std::string& name) { return (testing_support::kFixtureDir / name).string(); }
std::string golden_kb() { return fixture("golden_kb.json"); }

std::string write_temp(const std::string& name, const std::string& text) {
    auto path = testing_support::temp_path(name);
    std::ofstream(path) << text;
    return path.string();
}

std::string case_study_file() {
    return write_temp("case_study.json", serialize(make_pipeline("case-study", {"ReplaceMissingValues", "PeriodicSampling",
                                                                               "NumericToNominal", "PrincipalComponents",
                                                                               "LinearRegressor"})));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Cli, HelpExitsZero) {
    EXPECT_EQ(run("--help").exit_code, 0);
    CliResult r = run("bench --help");
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("--include-timeouts"), std::string::npos);
}

TEST(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run("").exit_code, 1);
    EXPECT_EQ(run("frobnicate").exit_code, 1);
    EXPECT_EQ(run("eval --pipeline x.json --bogus").exit_code, 1);
    EXPECT_EQ(run("--format yaml extract-features --data " + fixture("car_toy.arff")).exit_code, 1);
    // No --kb and no PIPECHECK_KB.
    EXPECT_EQ(run("eval --pipeline " + case_study_file() + " --data " + fixture("gcredit_toy.arff")).exit_code, 1);
    // Both or neither of --data and --features.
    EXPECT_EQ(run("--kb " + golden_kb() + " eval --pipeline " + case_study_file()).exit_code, 1);
}

TEST(Cli, DataErrorsExitTwo) {
    EXPECT_EQ(run("extract-features --data /nonexistent/file.arff").exit_code, 2);
    const auto bogus = write_temp("bogus.json", R"({"id":"b","start":{},"steps":[{"component":"Bogus"}],"end":{}})");
    EXPECT_EQ(run("exec --pipeline " + bogus + " --data " + fixture("gcredit_toy.arff")).exit_code, 2);
    const auto bad_kb = write_temp("bad_kb.json", R"({"components":{"X":{}}})");
    EXPECT_EQ(run("--kb " + bad_kb + " eval --pipeline " + case_study_file() + " --data " + fixture("gcredit_toy.arff"))
                  .exit_code,
              2);
}

TEST(Cli, ExtractFeatures) {
    CliResult r = run("extract-features --data " + fixture("gcredit_toy.arff"));
    ASSERT_EQ(r.exit_code, 0);
    BinaryVector v = deserialize_feature_vector<Binary>(r.out);
    EXPECT_EQ(v, extract_features(testing_support::load_fixture("gcredit_toy")));
}

TEST(Cli, GenKbMatchesGolden) {
    CliResult r = run("gen-kb");
    ASSERT_EQ(r.exit_code, 0);
    KnowledgeBase kb = deserialize_knowledge_base(r.out);
    EXPECT_TRUE(kb_diff(kb, load_knowledge_base(golden_kb())).empty());
    const auto out = testing_support::temp_path("gen_kb.json");
    fs::remove(out);
    ASSERT_EQ(run("gen-kb --strict --out " + out.string()).exit_code, 0);
    EXPECT_EQ(deserialize_knowledge_base(slurp(out)), kb);
}

TEST(Cli, EvalCaseStudy) {
    CliResult r = run("--kb " + golden_kb() + " eval --pipeline " + case_study_file() + " --data " + fixture("gcredit_toy.arff"));
    ASSERT_EQ(r.exit_code, 0);
    auto j = nlohmann::ordered_json::parse(r.out);
    EXPECT_EQ(j["valid"], false);
    EXPECT_EQ(j["failing_step"], 3);
    EXPECT_EQ(j["failing_component"], "PrincipalComponents");
    EXPECT_EQ(j["violated_features"], nlohmann::ordered_json({"BINARY_ATTRIBUTES", "NOMINAL_ATTRIBUTES"}));
}

TEST(Cli, EvalFromFeaturesAndEnvironmentKb) {
    const auto features =
        write_temp("gcredit_features.json", serialize(extract_features(testing_support::load_fixture("gcredit_toy"))));
    const auto majority = write_temp("majority.json", serialize(make_pipeline("m", {"MajorityClassifier"})));
    CliResult r = run("eval --pipeline " + majority + " --features " + features, "env PIPECHECK_KB=" + golden_kb());
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_EQ(nlohmann::ordered_json::parse(r.out)["valid"], true);

    CliResult md = run("--format markdown eval --pipeline " + case_study_file() + " --features " + features,
                 "env PIPECHECK_KB=" + golden_kb());
    ASSERT_EQ(md.exit_code, 0);
    EXPECT_NE(md.out.find("PrincipalComponents"), std::string::npos);
    EXPECT_NE(md.out.find('|'), std::string::npos);
}

TEST(Cli, ExecCaseStudy) {
    CliResult r = run("exec --pipeline " + case_study_file() + " --data " + fixture("gcredit_toy.arff"));
    ASSERT_EQ(r.exit_code, 0);
    auto j = nlohmann::ordered_json::parse(r.out);
    EXPECT_EQ(j["valid"], false);
    EXPECT_EQ(j["failure_kind"], "incompatible-data");
    EXPECT_EQ(j["failing_step"], 3);
    EXPECT_TRUE(j.contains("artifact"));
}

TEST(Cli, BenchWritesReportAndLog) {
    const auto dir = testing_support::temp_path("bench_default");
    fs::remove_all(dir);
    fs::create_directories(dir);
    CliResult r = run("bench --n 1000 --seed 42 --data " + fixture("gcredit_toy.arff"), "cd " + dir.string() + " && env -u PIPECHECK_KB");
    ASSERT_EQ(r.exit_code, 0);
    ComparisonReport rep = deserialize_report(slurp(dir / "pipecheck_report.json"));
    ASSERT_EQ(rep.datasets.size(), 1u);
    EXPECT_EQ(rep.datasets[0].surrogate.total(), 1000u);
    EXPECT_GE(rep.datasets[0].accuracy_percent(), 99.0);
    const std::string log = slurp(dir / "pipecheck_audit.jsonl");
    EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 1000);
}

TEST(Cli, BenchIsReproducible) {
    const std::string common = "--kb " + golden_kb() + " --seed 5 bench --n 80 --data " + fixture("car_toy.arff") +
                               " --data " + fixture("abalone_toy.arff");
    const auto log_a = testing_support::temp_path("a.jsonl"), log_b = testing_support::temp_path("b.jsonl");
    CliResult a = run(common + " --out - --log " + log_a.string());
    CliResult b = run(common + " --jobs 2 --out - --log " + log_b.string());
    ASSERT_EQ(a.exit_code, 0);
    ASSERT_EQ(b.exit_code, 0);
    EXPECT_EQ(strip_timing(nlohmann::ordered_json::parse(a.out)), strip_timing(nlohmann::ordered_json::parse(b.out)));
    EXPECT_EQ(deserialize_report(a.out).datasets.size(), 2u);
}

TEST(Cli, ReportRendersMarkdown) {
    const auto saved = testing_support::temp_path("saved_report.json");
    const auto log = testing_support::temp_path("saved_report.jsonl");
    ASSERT_EQ(run("--kb " + golden_kb() + " bench --n 20 --data " + fixture("car_toy.arff") + " --out " + saved.string() +
                  " --log " + log.string())
                  .exit_code,
              0);
    CliResult md = run("--format markdown report --in " + saved.string());
    ASSERT_EQ(md.exit_code, 0);
    EXPECT_EQ(md.out, render_report(deserialize_report(slurp(saved)), ReportFormat::Markdown));
    EXPECT_EQ(md.out.rfind("| Dataset | Criterion | T-method | Surrogate |", 0), 0u);
    CliResult js = run("report --in " + saved.string());
    ASSERT_EQ(js.exit_code, 0);
    EXPECT_EQ(deserialize_report(js.out), deserialize_report(slurp(saved)));
    EXPECT_EQ(run("report --in /nonexistent.json").exit_code, 2);
}
