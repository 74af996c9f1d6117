#pragma once

// Sequential pipeline descriptions (BPMN-flavoured: start event, ordered
// component steps, end event), their JSON form, the random generator used
// by the benchmark, and the Verdict shared by both validity methods.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipecheck/components.hpp"
#include "pipecheck/errors.hpp"
#include "pipecheck/feature.hpp"

namespace pipecheck {

inline constexpr std::size_t kDefaultMaxSteps = 6;

struct PipelineStep {
    std::string component;
    Hyperparameters params;  // overrides only

    friend bool operator==(const PipelineStep&, const PipelineStep&) = default;
};

struct PipelineSpec {
    std::string id;
    std::vector<PipelineStep> steps;
    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

    std::size_t size() const noexcept { return steps.size(); }

    friend bool operator==(const PipelineSpec&, const PipelineSpec&) = default;
};

// --- verdicts --------------------------------------------------------------

enum class FailureKind {
    Capability,        // surrogate: a feature the component cannot handle
    NoModel,           // the pipeline ends without a predictive model
    IncompatibleData,  // execution: component rejected its input
    Degenerate,        // execution: component could not fit/transform
    Timeout,           // execution: time budget exceeded
};

inline std::string_view to_string(FailureKind k) {
    switch (k) {
        case FailureKind::Capability: return "capability";
        case FailureKind::NoModel: return "no-model";
        case FailureKind::IncompatibleData: return "incompatible-data";
        case FailureKind::Degenerate: return "degenerate";
        case FailureKind::Timeout: return "timeout";
    }
    return "?";
}

inline std::optional<FailureKind> failure_kind_from_string(std::string_view s) {
    for (auto k : {FailureKind::Capability, FailureKind::NoModel, FailureKind::IncompatibleData,
                   FailureKind::Degenerate, FailureKind::Timeout}) {
        if (to_string(k) == s) return k;
    }
    return std::nullopt;
}

struct Failure {
    FailureKind kind;
    std::size_t step_index;  // 0-based
    std::string component;
    std::vector<Feature> violated_features;
    std::string error_text;

    friend bool operator==(const Failure&, const Failure&) = default;
};

struct Verdict {
    bool valid = false;
    std::optional<Failure> failure;  // present iff !valid
    std::chrono::nanoseconds duration{0};

    std::int64_t micros() const noexcept {
        return std::chrono::duration_cast<std::chrono::microseconds>(duration).count();
    }
};

inline nlohmann::ordered_json to_json(const Verdict& v, bool with_error_text = false) {
    nlohmann::ordered_json j;
    j["valid"] = v.valid;
    if (v.failure) {
        j["failing_step"] = v.failure->step_index;
        j["failing_component"] = v.failure->component;
        j["failure_kind"] = std::string(to_string(v.failure->kind));
        nlohmann::ordered_json features = nlohmann::ordered_json::array();
        for (Feature f : v.failure->violated_features) features.push_back(std::string(name_of(f)));
        j["violated_features"] = features;
    } else {
        j["failing_step"] = nullptr;
        j["failing_component"] = nullptr;
        j["failure_kind"] = nullptr;
        j["violated_features"] = nlohmann::ordered_json::array();
    }
    j["micros"] = v.micros();
    if (with_error_text) j["error_text"] = v.failure ? nlohmann::ordered_json(v.failure->error_text) : nlohmann::ordered_json(nullptr);
    return j;
}

// --- JSON form -------------------------------------------------------------

inline nlohmann::ordered_json to_json(const PipelineSpec& p) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const auto& s : p.steps) {
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        for (const auto& [k, v] : s.params) params[k] = v;
        steps.push_back({{"component", s.component}, {"params", params}});
    }
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["start"] = nlohmann::ordered_json::object();
    j["steps"] = steps;
    j["end"] = nlohmann::ordered_json::object();
    if (!p.metadata.empty()) j["metadata"] = p.metadata;
    return j;
}

inline std::string serialize(const PipelineSpec& p, int indent = -1) { return to_json(p).dump(indent); }

// Structural validation only: shape, component ids, hyperparameter names and
// ranges, and the length bound.
inline PipelineSpec pipeline_from_json(const nlohmann::ordered_json& j, std::size_t max_steps = kDefaultMaxSteps) {
    if (!j.is_object()) throw ParseError("pipeline must be a JSON object");
    PipelineSpec p;
    if (!j.contains("id") || !j["id"].is_string()) throw ParseError("pipeline needs a string \"id\"");
    p.id = j["id"].get<std::string>();
    for (const char* event : {"start", "end"}) {
        if (!j.contains(event) || !j[event].is_object()) {
            throw ParseError(std::string("pipeline needs a \"") + event + "\" event object");
        }
    }
    if (!j.contains("steps") || !j["steps"].is_array()) throw ParseError("pipeline needs a \"steps\" array");
    const auto& steps = j["steps"];
    if (steps.empty()) throw ParseError("pipeline has no steps");
    if (steps.size() > max_steps) throw LengthExceeded(steps.size(), max_steps);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& s = steps[i];
        const std::string where = "steps[" + std::to_string(i) + "]";
        if (!s.is_object() || !s.contains("component") || !s["component"].is_string()) {
            throw ParseError(where + " needs a string \"component\"");
        }
        PipelineStep step{s["component"].get<std::string>(), {}};
        const auto* desc = find_component(step.component);
        if (desc == nullptr) throw UnknownComponent(step.component);
        if (s.contains("params")) {
            if (!s["params"].is_object()) throw ParseError(where + ".params must be an object");
            for (auto it = s["params"].begin(); it != s["params"].end(); ++it) {
                if (!it.value().is_number()) throw ParseError(where + ".params." + it.key() + " must be a number");
                step.params[it.key()] = it.value().get<double>();
            }
        }
        try {
            resolve_hyperparameters(*desc, step.params);
        } catch (const std::invalid_argument& e) {
            throw ParseError(where + ": " + e.what());
        }
        p.steps.push_back(std::move(step));
    }
    if (j.contains("metadata")) {
        if (!j["metadata"].is_object()) throw ParseError("\"metadata\" must be an object");
        p.metadata = j["metadata"];
    }
    return p;
}

inline PipelineSpec parse_pipeline(std::string_view text, std::size_t max_steps = kDefaultMaxSteps) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what());
    }
    return pipeline_from_json(j, max_steps);
}

// Convenience for tests and tools: steps with default hyperparameters.
inline PipelineSpec make_pipeline(std::string id, std::initializer_list<std::string_view> components) {
    PipelineSpec p{std::move(id), {}, nlohmann::ordered_json::object()};
    for (auto c : components) p.steps.push_back({std::string(c), {}});
    return p;
}

// --- random generation -----------------------------------------------------

// Unbiased draw in [0, bound) from a 64-bit engine; identical on every
// standard library.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Length uniform in [1, max_steps]; a uniformly chosen predictor last and
// uniformly chosen filters (repeats allowed) before it.
inline PipelineSpec random_pipeline(std::uint64_t seed, std::span<const ComponentDescriptor> components,
                                    std::size_t max_steps = kDefaultMaxSteps) {
    std::vector<const ComponentDescriptor*> filters, predictors;
    for (const auto& c : components) (c.is_predictor() ? predictors : filters).push_back(&c);
    if (filters.empty() || predictors.empty() || max_steps == 0) {
        throw std::invalid_argument("random_pipeline needs at least one filter, one predictor and max_steps >= 1");
    }
    std::mt19937_64 rng(seed);
    const std::size_t length = 1 + bounded_draw(rng, max_steps);
    PipelineSpec p{"random-" + std::to_string(seed), {}, nlohmann::ordered_json::object()};
    for (std::size_t i = 0; i + 1 < length; ++i) p.steps.push_back({filters[bounded_draw(rng, filters.size())]->id, {}});
    p.steps.push_back({predictors[bounded_draw(rng, predictors.size())]->id, {}});
    return p;
}

inline std::string describe_structure(const PipelineSpec& p) {
    std::string out;
    for (std::size_t i = 0; i < p.steps.size(); ++i) out += (i ? " -> " : "") + p.steps[i].component;
    return out;
}

}  // namespace pipecheck
