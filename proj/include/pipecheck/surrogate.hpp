#pragma once

// Petri-net surrogate of a sequential pipeline. A single token, the
// dataset's transformed-feature vector, travels from the start place to the
// end place; each transition checks the component's capabilities against the
// token and then applies its effects.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pipecheck/feature.hpp"
#include "pipecheck/knowledge_base.hpp"
#include "pipecheck/pipeline.hpp"

namespace pipecheck {

using Token = BinaryVector;

struct Place {
    std::string name;
    friend bool operator==(const Place&, const Place&) = default;
};

struct Transition {
    std::string component;
    KnowledgeEntry knowledge;
    friend bool operator==(const Transition&, const Transition&) = default;
};

struct Arc {
    enum class Direction { PlaceToTransition, TransitionToPlace };
    Direction direction;
    std::size_t place;
    std::size_t transition;
    friend bool operator==(const Arc&, const Arc&) = default;
};

// places[0] is the start place and places.back() the end place; transition i
// consumes from place i and produces into place i + 1.
struct SurrogateNet {
    std::vector<Place> places;
    std::vector<Transition> transitions;
    std::vector<Arc> arcs;
};

struct SurrogateModel {
    SurrogateNet net;
    Token initial_token;
};

inline SurrogateModel map_to_surrogate(const PipelineSpec& p, const BinaryVector& dataset_features,
                                       const KnowledgeBase& kb) {
    SurrogateModel m;
    auto& net = m.net;
    net.places.reserve(p.steps.size() + 1);
    net.transitions.reserve(p.steps.size());
    net.arcs.reserve(2 * p.steps.size());
    net.places.push_back({"start"});
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
        const auto* entry = kb.find(p.steps[i].component);
        if (entry == nullptr) throw MissingKnowledge(p.steps[i].component);
        net.transitions.push_back({p.steps[i].component, *entry});
        net.places.push_back({i + 1 == p.steps.size() ? "end" : "p" + std::to_string(i + 1)});
        net.arcs.push_back({Arc::Direction::PlaceToTransition, i, i});
        net.arcs.push_back({Arc::Direction::TransitionToPlace, i + 1, i});
    }
    m.initial_token = dataset_features;
    return m;
}

struct InvalidFiring {
    std::vector<Feature> violated;
    friend bool operator==(const InvalidFiring&, const InvalidFiring&) = default;
};

using FiringResult = std::variant<Token, InvalidFiring>;

// Capability check: every feature set in the token must be set in the
// capabilities; all offenders are reported. Otherwise the output token is
// clamp(token + effects, 0, 1) slot by slot.
inline FiringResult fire_transition(const Transition& t, const Token& token) {
    const auto& in = token.values();
    const auto& caps = t.knowledge.capabilities.values();
    const auto& eff = t.knowledge.effects.values();
    bool ok = true;
    for (std::size_t i = 0; i < kFeatureCount; ++i) ok &= !(in[i] == 1 && caps[i] == 0);
    if (!ok) {
        InvalidFiring bad;
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            if (in[i] == 1 && caps[i] == 0) bad.violated.push_back(kAllFeatures[i]);
        }
        return bad;
    }
    Token out;
    for (std::size_t i = 0; i < kFeatureCount; ++i) out.set(kAllFeatures[i], std::clamp(in[i] + eff[i], 0, 1));
    return out;
}

struct SurrogateTrace {
    Verdict verdict;
    std::vector<Token> tokens;  // tokens[i] sits in place i; one per reached place
};

namespace detail {

template <typename OnToken>
Verdict run_surrogate(const SurrogateNet& net, const Token& start, OnToken&& on_token) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    Token token = start;
    on_token(token);
    for (std::size_t i = 0; i < net.transitions.size(); ++i) {
        FiringResult r = fire_transition(net.transitions[i], token);
        if (auto* bad = std::get_if<InvalidFiring>(&r)) {
            v.failure = Failure{FailureKind::Capability, i, net.transitions[i].component, std::move(bad->violated), {}};
            break;
        }
        token = std::get<Token>(r);
        on_token(token);
    }
    if (!v.failure) {
        if (token[Feature::PredictiveModel] == 1) {
            v.valid = true;
        } else {
            const std::size_t last = net.transitions.empty() ? 0 : net.transitions.size() - 1;
            v.failure = Failure{FailureKind::NoModel, last,
                                net.transitions.empty() ? std::string() : net.transitions[last].component,
                                {Feature::PredictiveModel}, "final token has no PREDICTIVE_MODEL"};
        }
    } else {
        std::string text = "component cannot handle";
        for (Feature f : v.failure->violated_features) text += " " + std::string(name_of(f));
        v.failure->error_text = std::move(text);
    }
    v.duration = std::chrono::steady_clock::now() - t0;
    return v;
}

}  // namespace detail

// Fires transitions in chain order; the first invalid firing ends the run.
// A run that fires every transition is valid iff the final token carries
// PREDICTIVE_MODEL.
inline Verdict evaluate_surrogate(const SurrogateNet& net, const Token& token) {
    return detail::run_surrogate(net, token, [](const Token&) {});
}

inline SurrogateTrace trace_surrogate(const SurrogateNet& net, const Token& token) {
    SurrogateTrace t;
    t.tokens.reserve(net.places.size());
    t.verdict = detail::run_surrogate(net, token, [&](const Token& tok) { t.tokens.push_back(tok); });
    return t;
}

// Mapping plus evaluation; the returned duration covers both.
inline Verdict check_pipeline(const PipelineSpec& p, const BinaryVector& dataset_features, const KnowledgeBase& kb) {
    const auto t0 = std::chrono::steady_clock::now();
    SurrogateModel m = map_to_surrogate(p, dataset_features, kb);
    Verdict v = evaluate_surrogate(m.net, m.initial_token);
    v.duration = std::chrono::steady_clock::now() - t0;
    return v;
}

}  // namespace pipecheck
