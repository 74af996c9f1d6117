#pragma once

// Side-by-side comparison of surrogate and execution-based validation over
// random pipelines, with the aggregate report and per-pipeline audit log.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipecheck/components.hpp"
#include "pipecheck/dataset.hpp"
#include "pipecheck/knowledge_base.hpp"
#include "pipecheck/pipeline.hpp"
#include "pipecheck/surrogate.hpp"
#include "pipecheck/tmethod.hpp"

namespace pipecheck {

struct MethodTotals {
    std::size_t invalid = 0;
    std::size_t valid = 0;
    std::int64_t invalid_micros = 0;
    std::int64_t valid_micros = 0;
    std::int64_t invalid_nanos = 0;
    std::int64_t valid_nanos = 0;

    std::size_t total() const noexcept { return invalid + valid; }

    // Share of evaluation time spent on pipelines judged invalid.
    double wasted_percent() const noexcept {
        const std::int64_t all = invalid_micros + valid_micros;
        return all == 0 ? 0.0 : 100.0 * static_cast<double>(invalid_micros) / static_cast<double>(all);
    }

    void add(const Verdict& v) {
        (v.valid ? valid : invalid) += 1;
        (v.valid ? valid_micros : invalid_micros) += v.micros();
        (v.valid ? valid_nanos : invalid_nanos) += v.duration.count();
    }

    friend bool operator==(const MethodTotals&, const MethodTotals&) = default;
};

struct DatasetComparison {
    std::string dataset;
    std::size_t rows = 0;
    BinaryVector features;
    MethodTotals tmethod;
    MethodTotals surrogate;
    std::size_t different = 0;
    std::size_t similar = 0;
    std::size_t excluded_timeouts = 0;

    double accuracy_percent() const noexcept {
        const std::size_t n = different + similar;
        return n == 0 ? 0.0 : 100.0 * static_cast<double>(similar) / static_cast<double>(n);
    }

    friend bool operator==(const DatasetComparison&, const DatasetComparison&) = default;
};

struct Divergence {
    std::string dataset;
    std::size_t index = 0;
    std::string structure;
    nlohmann::ordered_json surrogate;  // verdict plus firing trace
    nlohmann::ordered_json tmethod;    // verdict plus error text and artifact
    std::string explanation;

    friend bool operator==(const Divergence&, const Divergence&) = default;
};

struct ComparisonReport {
    std::uint64_t seed = 0;
    std::size_t pipelines_per_dataset = 0;
    std::size_t max_steps = kDefaultMaxSteps;
    bool include_timeouts = false;
    std::vector<DatasetComparison> datasets;
    std::vector<Divergence> divergences;

    friend bool operator==(const ComparisonReport&, const ComparisonReport&) = default;
};

struct PipelineRecord {
    std::string dataset;
    std::size_t index = 0;
    std::uint64_t seed = 0;
    PipelineSpec pipeline;
    Verdict surrogate;
    SurrogateTrace trace;
    ExecutionReport tmethod;

    bool agree() const noexcept { return surrogate.valid == tmethod.verdict.valid; }
    bool timed_out() const noexcept {
        return tmethod.verdict.failure && tmethod.verdict.failure->kind == FailureKind::Timeout;
    }
};

struct ComparisonOptions {
    std::size_t pipelines = 1000;
    std::uint64_t seed = 42;
    std::size_t max_steps = kDefaultMaxSteps;
    std::chrono::milliseconds timeout = kNoTimeout;
    bool include_timeouts = false;
    std::size_t jobs = 1;
    std::ostream* audit_log = nullptr;  // JSONL, one record per pipeline
};

// Seed of pipeline `index`; the same pipelines are drawn for every dataset.
inline std::uint64_t pipeline_seed(std::uint64_t seed, std::size_t index) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

inline nlohmann::ordered_json token_trace_json(const SurrogateTrace& t) {
    nlohmann::ordered_json places = nlohmann::ordered_json::array();
    for (const auto& tok : t.tokens) {
        nlohmann::ordered_json active = nlohmann::ordered_json::array();
        for (Feature f : tok.active_features()) active.push_back(std::string(name_of(f)));
        places.push_back(active);
    }
    return places;
}

inline nlohmann::ordered_json to_json(const PipelineRecord& r) {
    nlohmann::ordered_json s = to_json(r.surrogate);
    s["nanos"] = r.surrogate.duration.count();
    s["trace"] = token_trace_json(r.trace);
    nlohmann::ordered_json t = to_json(r.tmethod.verdict, true);
    t["nanos"] = r.tmethod.verdict.duration.count();
    t["artifact"] = r.tmethod.artifact;
    nlohmann::ordered_json j;
    j["dataset"] = r.dataset;
    j["index"] = r.index;
    j["seed"] = r.seed;
    j["structure"] = describe_structure(r.pipeline);
    j["pipeline"] = to_json(r.pipeline);
    j["surrogate"] = s;
    j["tmethod"] = t;
    j["agree"] = r.agree();
    return j;
}

inline std::string explain_divergence(const PipelineRecord& r) {
    const auto& tv = r.tmethod.verdict;
    const auto& sv = r.surrogate;
    if (tv.failure && tv.failure->kind == FailureKind::Timeout) {
        return "execution exceeded the time budget at step " + std::to_string(tv.failure->step_index) +
               "; resource limits are not modelled by the surrogate";
    }
    if (tv.failure && tv.failure->kind == FailureKind::Degenerate) {
        return "execution hit a degenerate data condition at step " + std::to_string(tv.failure->step_index) + " (" +
               tv.failure->error_text + ") that transformed-features cannot express";
    }
    if (!sv.valid && tv.valid) {
        std::string features;
        for (Feature f : sv.failure->violated_features) features += " " + std::string(name_of(f));
        return "surrogate rejected" + features + " at step " + std::to_string(sv.failure->step_index) +
               " but execution succeeded: the knowledge base is stricter than the component on this data";
    }
    if (sv.valid && !tv.valid) {
        return "execution failed at step " + std::to_string(tv.failure->step_index) + " (" + tv.failure->error_text +
               ") on a condition the knowledge base does not capture";
    }
    return "verdicts differ";
}

namespace detail {

// Surrogate verdict and trace only; the execution is filled in separately so
// surrogate timings are not taken right after a heavy execution has evicted
// the cache.
inline PipelineRecord judge_one(const Dataset& d, const BinaryVector& features, const KnowledgeBase& kb,
                                const ComparisonOptions& opt, std::size_t index) {
    PipelineRecord rec;
    rec.dataset = d.name();
    rec.index = index;
    rec.seed = pipeline_seed(opt.seed, index);
    rec.pipeline = random_pipeline(rec.seed, registry(), opt.max_steps);
    rec.surrogate = check_pipeline(rec.pipeline, features, kb);
    rec.trace = trace_surrogate(map_to_surrogate(rec.pipeline, features, kb).net, features);
    return rec;
}

}  // namespace detail

// Draws `pipelines` random pipelines and validates each one against every
// dataset with both methods. Timeouts are left out of verdict agreement
// unless `include_timeouts` is set.
inline ComparisonReport run_comparison(std::span<const Dataset> datasets, const KnowledgeBase& kb,
                                       const ComparisonOptions& opt, std::vector<PipelineRecord>* records = nullptr) {
    for (const auto& c : registry()) {
        if (kb.find(c.id) == nullptr) throw MissingKnowledge(c.id);
    }
    ComparisonReport report;
    report.seed = opt.seed;
    report.pipelines_per_dataset = opt.pipelines;
    report.max_steps = opt.max_steps;
    report.include_timeouts = opt.include_timeouts;

    for (const auto& d : datasets) {
        DatasetComparison row;
        row.dataset = d.name();
        row.rows = d.row_count();
        row.features = extract_features(d);

        std::vector<PipelineRecord> batch(opt.pipelines);
        for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = detail::judge_one(d, row.features, kb, opt, i);
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next++; i < batch.size(); i = next++) {
                batch[i].tmethod = execute_pipeline(batch[i].pipeline, d, opt.timeout);
            }
        };
        const std::size_t jobs = std::clamp<std::size_t>(opt.jobs, 1, std::max<std::size_t>(1, batch.size()));
        if (jobs == 1) {
            worker();
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        }

        for (auto& rec : batch) {
            row.surrogate.add(rec.surrogate);
            row.tmethod.add(rec.tmethod.verdict);
            if (rec.timed_out() && !opt.include_timeouts) {
                ++row.excluded_timeouts;
            } else if (rec.agree()) {
                ++row.similar;
            } else {
                ++row.different;
                nlohmann::ordered_json s = to_json(rec.surrogate);
                s["trace"] = token_trace_json(rec.trace);
                nlohmann::ordered_json t = to_json(rec.tmethod.verdict, true);
                t["artifact"] = rec.tmethod.artifact;
                report.divergences.push_back(
                    {rec.dataset, rec.index, describe_structure(rec.pipeline), s, t, explain_divergence(rec)});
            }
            if (opt.audit_log != nullptr) *opt.audit_log << to_json(rec).dump() << '\n';
        }
        report.datasets.push_back(std::move(row));
        if (records != nullptr) std::move(batch.begin(), batch.end(), std::back_inserter(*records));
    }
    return report;
}

// --- rendering -------------------------------------------------------------

inline nlohmann::ordered_json to_json(const MethodTotals& m) {
    return {{"invalid", m.invalid},
            {"valid", m.valid},
            {"invalid_micros", m.invalid_micros},
            {"valid_micros", m.valid_micros},
            {"invalid_nanos", m.invalid_nanos},
            {"valid_nanos", m.valid_nanos},
            {"invalid_seconds", static_cast<double>(m.invalid_micros) / 1e6},
            {"valid_seconds", static_cast<double>(m.valid_micros) / 1e6},
            {"wasted_percent", m.wasted_percent()}};
}

inline nlohmann::ordered_json to_json(const ComparisonReport& r) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& d : r.datasets) {
        rows.push_back({{"dataset", d.dataset},
                        {"rows", d.rows},
                        {"features", to_json(d.features)},
                        {"tmethod", to_json(d.tmethod)},
                        {"surrogate", to_json(d.surrogate)},
                        {"different", d.different},
                        {"similar", d.similar},
                        {"excluded_timeouts", d.excluded_timeouts},
                        {"accuracy_percent", d.accuracy_percent()}});
    }
    nlohmann::ordered_json divs = nlohmann::ordered_json::array();
    for (const auto& v : r.divergences) {
        divs.push_back({{"dataset", v.dataset},
                        {"index", v.index},
                        {"structure", v.structure},
                        {"surrogate", v.surrogate},
                        {"tmethod", v.tmethod},
                        {"explanation", v.explanation}});
    }
    return {{"seed", r.seed},
            {"pipelines_per_dataset", r.pipelines_per_dataset},
            {"max_steps", r.max_steps},
            {"include_timeouts", r.include_timeouts},
            {"datasets", rows},
            {"divergences", divs}};
}

namespace detail {

template <typename T>
T required(const nlohmann::ordered_json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw DeserializeError(path + "/" + key, "missing key");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw DeserializeError(path + "/" + key, e.what());
    }
}

inline MethodTotals method_totals_from_json(const nlohmann::ordered_json& j, const std::string& path) {
    MethodTotals m;
    m.invalid = required<std::size_t>(j, "invalid", path);
    m.valid = required<std::size_t>(j, "valid", path);
    m.invalid_micros = required<std::int64_t>(j, "invalid_micros", path);
    m.valid_micros = required<std::int64_t>(j, "valid_micros", path);
    m.invalid_nanos = required<std::int64_t>(j, "invalid_nanos", path);
    m.valid_nanos = required<std::int64_t>(j, "valid_nanos", path);
    return m;
}

}  // namespace detail

inline ComparisonReport report_from_json(const nlohmann::ordered_json& j) {
    using detail::required;
    ComparisonReport r;
    r.seed = required<std::uint64_t>(j, "seed", "");
    r.pipelines_per_dataset = required<std::size_t>(j, "pipelines_per_dataset", "");
    r.max_steps = required<std::size_t>(j, "max_steps", "");
    r.include_timeouts = required<bool>(j, "include_timeouts", "");
    if (!j.contains("datasets") || !j["datasets"].is_array()) throw DeserializeError("/datasets", "expected an array");
    for (std::size_t i = 0; i < j["datasets"].size(); ++i) {
        const auto& d = j["datasets"][i];
        const std::string path = "/datasets/" + std::to_string(i);
        DatasetComparison row;
        row.dataset = required<std::string>(d, "dataset", path);
        row.rows = required<std::size_t>(d, "rows", path);
        if (!d.contains("features")) throw DeserializeError(path + "/features", "missing key");
        row.features = feature_vector_from_json<Binary>(d["features"], path + "/features");
        if (!d.contains("tmethod")) throw DeserializeError(path + "/tmethod", "missing key");
        if (!d.contains("surrogate")) throw DeserializeError(path + "/surrogate", "missing key");
        row.tmethod = detail::method_totals_from_json(d["tmethod"], path + "/tmethod");
        row.surrogate = detail::method_totals_from_json(d["surrogate"], path + "/surrogate");
        row.different = required<std::size_t>(d, "different", path);
        row.similar = required<std::size_t>(d, "similar", path);
        row.excluded_timeouts = required<std::size_t>(d, "excluded_timeouts", path);
        r.datasets.push_back(std::move(row));
    }
    if (j.contains("divergences")) {
        if (!j["divergences"].is_array()) throw DeserializeError("/divergences", "expected an array");
        for (std::size_t i = 0; i < j["divergences"].size(); ++i) {
            const auto& v = j["divergences"][i];
            const std::string path = "/divergences/" + std::to_string(i);
            r.divergences.push_back({required<std::string>(v, "dataset", path), required<std::size_t>(v, "index", path),
                                     required<std::string>(v, "structure", path), v.value("surrogate", nlohmann::ordered_json{}),
                                     v.value("tmethod", nlohmann::ordered_json{}),
                                     required<std::string>(v, "explanation", path)});
        }
    }
    return r;
}

inline ComparisonReport deserialize_report(std::string_view text) {
    try {
        return report_from_json(nlohmann::ordered_json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw DeserializeError("", e.what());
    }
}

// Drops every field derived from wall-clock time, for golden comparisons.
inline nlohmann::ordered_json strip_timing(nlohmann::ordered_json j) {
    if (j.is_object()) {
        nlohmann::ordered_json out = nlohmann::ordered_json::object();
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            auto ends_with = [&](std::string_view s) { return k.size() >= s.size() && k.compare(k.size() - s.size(), s.size(), s) == 0; };
            if (ends_with("micros") || ends_with("nanos") || ends_with("seconds") || k == "wasted_percent") continue;
            out[k] = strip_timing(it.value());
        }
        return out;
    }
    if (j.is_array()) {
        for (auto& x : j) x = strip_timing(x);
    }
    return j;
}

enum class ReportFormat { Json, Markdown };

namespace detail {

inline std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

inline std::string seconds_pair(const MethodTotals& m) {
    return fixed(static_cast<double>(m.invalid_micros) / 1e6, 6) + "/" + fixed(static_cast<double>(m.valid_micros) / 1e6, 6);
}

}  // namespace detail

// Markdown: one row per (dataset, criterion) with a column per method.
inline std::string render_report(const ComparisonReport& r, ReportFormat format) {
    if (format == ReportFormat::Json) return to_json(r).dump(2) + "\n";
    std::ostringstream out;
    out << "| Dataset | Criterion | T-method | Surrogate |\n";
    out << "|---|---|---|---|\n";
    for (const auto& d : r.datasets) {
        const std::string& n = d.dataset;
        out << "| " << n << " | Invalid/valid pipelines | " << d.tmethod.invalid << "/" << d.tmethod.valid << " | "
            << d.surrogate.invalid << "/" << d.surrogate.valid << " |\n";
        out << "| " << n << " | Total evaluation time of invalid/valid pipelines (s) | "
            << detail::seconds_pair(d.tmethod) << " | " << detail::seconds_pair(d.surrogate) << " |\n";
        out << "| " << n << " | Pipelines with different/similar verdicts | - | " << d.different << "/" << d.similar
            << " |\n";
        out << "| " << n << " | Surrogate verdicts matching execution (%) | - | "
            << detail::fixed(d.accuracy_percent(), 2) << " |\n";
        out << "| " << n << " | Wasted evaluation time (%) | " << detail::fixed(d.tmethod.wasted_percent(), 2) << " | "
            << detail::fixed(d.surrogate.wasted_percent(), 2) << " |\n";
    }
    if (!r.divergences.empty()) {
        out << "\nDivergent verdicts:\n\n";
        for (const auto& v : r.divergences) {
            out << "- " << v.dataset << " #" << v.index << " `" << v.structure << "`: " << v.explanation << "\n";
        }
    }
    return out.str();
}

}  // namespace pipecheck
