#pragma once

// Execution-based validity: run every step for real and call the pipeline
// valid iff a predictive model comes out of the last one.

#include <chrono>
#include <optional>
#include <string>
#include <variant>

#include "pipecheck/components.hpp"
#include "pipecheck/dataset.hpp"
#include "pipecheck/pipeline.hpp"

namespace pipecheck {

struct ExecutionReport {
    Verdict verdict;
    std::string artifact;  // description of the final output
    std::optional<PredictiveModel> model;
};

inline constexpr std::chrono::milliseconds kNoTimeout{0};

// `timeout` of zero disables the budget. The budget is checked after each
// step, so a step that overruns is reported as the timed-out step.
inline ExecutionReport execute_pipeline(const PipelineSpec& p, const Dataset& d,
                                        std::chrono::milliseconds timeout = kNoTimeout) {
    const auto t0 = std::chrono::steady_clock::now();
    ExecutionReport report;
    std::variant<Dataset, PredictiveModel> current = d;
    auto fail = [&](FailureKind kind, std::size_t i, std::string text) {
        report.verdict.failure =
            Failure{kind, i, i < p.steps.size() ? p.steps[i].component : std::string(), {}, std::move(text)};
    };

    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto& step = p.steps[i];
        const auto* input = std::get_if<Dataset>(&current);
        if (input == nullptr) {
            fail(FailureKind::IncompatibleData, i, "IncompatibleData(input is a predictive model, not a dataset)");
            break;
        }
        const auto* desc = find_component(step.component);
        if (desc == nullptr) {
            fail(FailureKind::IncompatibleData, i, "unknown component '" + step.component + "'");
            break;
        }
        ExecutionResult r = execute_component(*desc, *input, step.params);
        if (const auto* err = std::get_if<ExecutionError>(&r)) {
            fail(err->kind == ExecutionError::Kind::IncompatibleData ? FailureKind::IncompatibleData
                                                                     : FailureKind::Degenerate,
                 i, err->describe());
            break;
        }
        if (auto* ds = std::get_if<Dataset>(&r)) {
            current = std::move(*ds);
        } else {
            current = std::get<PredictiveModel>(std::move(r));
        }
        if (timeout > kNoTimeout && std::chrono::steady_clock::now() - t0 > timeout) {
            fail(FailureKind::Timeout, i, "Timeout(exceeded " + std::to_string(timeout.count()) + " ms)");
            break;
        }
    }

    if (const auto* m = std::get_if<PredictiveModel>(&current)) {
        report.artifact = "PredictiveModel(" + m->component_id + ")";
        report.model = *m;
    } else {
        const auto& ds = std::get<Dataset>(current);
        report.artifact = "Dataset(" + std::to_string(ds.row_count()) + " rows, " +
                          std::to_string(ds.attribute_count()) + " attributes)";
    }
    if (!report.verdict.failure) {
        if (report.model) {
            report.verdict.valid = true;
        } else {
            fail(FailureKind::NoModel, p.steps.empty() ? 0 : p.steps.size() - 1, "final output is a dataset, not a predictive model");
        }
    }
    report.verdict.duration = std::chrono::steady_clock::now() - t0;
    return report;
}

}  // namespace pipecheck
