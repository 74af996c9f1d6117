// pipecheck command-line entry point.
//
// Exit status: 0 success, 1 usage error, 2 data error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pipecheck/bench.hpp"
#include "pipecheck/dataset.hpp"
#include "pipecheck/dataset_io.hpp"
#include "pipecheck/knowledge_base.hpp"
#include "pipecheck/pipeline.hpp"
#include "pipecheck/surrogate.hpp"
#include "pipecheck/synthetic.hpp"
#include "pipecheck/tmethod.hpp"

using namespace pipecheck;

namespace {

constexpr int kUsage = 1;
constexpr int kData = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string kb;
    std::uint64_t seed = 42;
    std::string format = "json";
};

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw NotFound("cannot write '" + path + "'");
    f << text;
}

KnowledgeBase require_kb(const Globals& g) {
    if (g.kb.empty()) throw UsageError("--kb is required (or set PIPECHECK_KB)");
    return load_knowledge_base(g.kb);
}

std::string render_verdict(const nlohmann::ordered_json& j, const std::string& format) {
    if (format == "json") return j.dump(2) + "\n";
    std::string out = "| Field | Value |\n|---|---|\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
        out += "| " + it.key() + " | " + (it->is_string() ? it->get<std::string>() : it->dump()) + " |\n";
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pipeline validity checking with a Petri-net surrogate and an execution oracle"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    if (const char* env = std::getenv("PIPECHECK_KB")) g.kb = env;
    app.add_option("--kb", g.kb, "knowledge base JSON (default: $PIPECHECK_KB)");
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "markdown"}))->capture_default_str();

    std::string data, features_path, pipeline_path, out, in;
    std::string bench_out = "pipecheck_report.json", log_path = "pipecheck_audit.jsonl";
    std::vector<std::string> datasets;
    std::size_t max_len = kDefaultMaxSteps, n = 1000, jobs = 1;
    long timeout_ms = 0;
    bool strict = false, include_timeouts = false;

    auto* extract = app.add_subcommand("extract-features", "print the transformed-feature vector of a dataset");
    extract->add_option("--data", data, "dataset (.arff or .csv with <stem>.schema.json)")->required();

    auto* gen = app.add_subcommand("gen-kb", "induce the knowledge base from the synthetic probe suite");
    gen->add_option("--out", out, "output path (default: stdout)");
    gen->add_flag("--strict", strict, "fail if a component succeeds on no probe dataset");

    auto* eval = app.add_subcommand("eval", "judge a pipeline with the surrogate");
    eval->add_option("--pipeline", pipeline_path, "pipeline JSON")->required();
    auto* eval_data = eval->add_option("--data", data, "dataset");
    auto* eval_features = eval->add_option("--features", features_path, "precomputed feature-vector JSON");
    eval_data->excludes(eval_features);
    eval->add_option("--max-len", max_len, "maximum pipeline length")->capture_default_str();

    auto* exec = app.add_subcommand("exec", "judge a pipeline by executing it");
    exec->add_option("--pipeline", pipeline_path, "pipeline JSON")->required();
    exec->add_option("--data", data, "dataset")->required();
    exec->add_option("--timeout-ms", timeout_ms, "execution budget, 0 for none")->capture_default_str();
    exec->add_option("--max-len", max_len, "maximum pipeline length")->capture_default_str();

    auto* bench = app.add_subcommand("bench", "compare both methods over random pipelines");
    bench->add_option("--data", datasets, "datasets (repeatable)")->required();
    bench->add_option("--n", n, "pipelines per dataset")->capture_default_str();
    bench->add_option("--max-len", max_len, "maximum pipeline length")->capture_default_str();
    bench->add_option("--timeout-ms", timeout_ms, "execution budget per pipeline, 0 for none")->capture_default_str();
    bench->add_option("--jobs", jobs, "worker threads")->capture_default_str();
    bench->add_flag("--include-timeouts", include_timeouts, "count timeouts in verdict agreement");
    bench->add_option("--out", bench_out, "report path, - for stdout")->capture_default_str();
    bench->add_option("--log", log_path, "JSONL audit log path")->capture_default_str();

    auto* report = app.add_subcommand("report", "render a saved JSON report");
    report->add_option("--in", in, "report JSON")->required();
    report->add_option("--out", out, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*extract) {
            BinaryVector v = extract_features(load_dataset(data));
            write_output("", render_verdict(to_json(v), g.format));
        } else if (*gen) {
            GenerationLog log;
            auto suite = generate_synthetic_suite();
            KnowledgeBase kb = generate_knowledge_base(registry(), suite, &log, strict);
            for (const auto& w : log.warnings) std::cerr << "warning: " << w << "\n";
            for (const auto& c : log.conflicts) {
                std::cerr << "effect conflict: " << c.component << " on " << c.dataset << " " << name_of(c.feature)
                          << " kept " << c.kept << ", observed " << c.observed << "\n";
            }
            write_output(out, serialize(kb) + "\n");
        } else if (*eval) {
            if (data.empty() && features_path.empty()) throw UsageError("eval needs --data or --features");
            KnowledgeBase kb = require_kb(g);
            PipelineSpec p = parse_pipeline(read_file(pipeline_path), max_len);
            BinaryVector features = data.empty()
                                        ? deserialize_feature_vector<Binary>(read_file(features_path))
                                        : extract_features(load_dataset(data));
            write_output("", render_verdict(to_json(check_pipeline(p, features, kb)), g.format));
        } else if (*exec) {
            PipelineSpec p = parse_pipeline(read_file(pipeline_path), max_len);
            ExecutionReport r = execute_pipeline(p, load_dataset(data), std::chrono::milliseconds(timeout_ms));
            auto j = to_json(r.verdict, true);
            j["artifact"] = r.artifact;
            write_output("", render_verdict(j, g.format));
        } else if (*bench) {
            KnowledgeBase kb;
            if (g.kb.empty()) {
                std::cerr << "note: no --kb given, inducing the knowledge base in process\n";
                kb = generate_knowledge_base();
            } else {
                kb = load_knowledge_base(g.kb);
            }
            std::vector<Dataset> loaded;
            for (const auto& path : datasets) loaded.push_back(load_dataset(path));
            std::ofstream log(log_path, std::ios::binary);
            if (!log) throw NotFound("cannot write '" + log_path + "'");
            ComparisonOptions opt;
            opt.pipelines = n;
            opt.seed = g.seed;
            opt.max_steps = max_len;
            opt.timeout = std::chrono::milliseconds(timeout_ms);
            opt.include_timeouts = include_timeouts;
            opt.jobs = jobs;
            opt.audit_log = &log;
            ComparisonReport r = run_comparison(loaded, kb, opt);
            write_output(bench_out, render_report(r, g.format == "json" ? ReportFormat::Json : ReportFormat::Markdown));
            if (bench_out != "-") std::cerr << "report: " << bench_out << "\naudit log: " << log_path << "\n";
        } else if (*report) {
            ComparisonReport r = deserialize_report(read_file(in));
            write_output(out, render_report(r, g.format == "json" ? ReportFormat::Json : ReportFormat::Markdown));
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    return 0;
}
