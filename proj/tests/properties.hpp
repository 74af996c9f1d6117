#pragma once

// Property checks that need no fixtures. Each returns an empty string on
// success and a description of the first counterexample otherwise.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pipecheck/bench.hpp"
#include "pipecheck/components.hpp"
#include "pipecheck/dataset_io.hpp"
#include "pipecheck/feature.hpp"
#include "pipecheck/knowledge_base.hpp"
#include "pipecheck/pipeline.hpp"
#include "pipecheck/surrogate.hpp"
#include "pipecheck/synthetic.hpp"

namespace properties {

using namespace pipecheck;

inline std::uint32_t to_mask(const BinaryVector& v) {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < kFeatureCount; ++i) m |= static_cast<std::uint32_t>(v.values()[i] == 1) << i;
    return m;
}

inline BinaryVector from_mask(std::uint32_t m) {
    BinaryVector v;
    for (std::size_t i = 0; i < kFeatureCount; ++i) v.set(kAllFeatures[i], static_cast<int>((m >> i) & 1u));
    return v;
}

inline Effects random_effects(std::mt19937_64& rng) {
    Effects e;
    for (Feature f : kAllFeatures) e.set(f, static_cast<int>(bounded_draw(rng, 3)) - 1);
    return e;
}

// Every one of the 2^16 tokens against the given capability masks: the
// verdict, the violated list and the output token are recomputed with
// bit arithmetic and compared with fire_transition.
inline std::string capability_rule_matches_enumeration(const std::vector<KnowledgeEntry>& entries) {
    for (const auto& entry : entries) {
        const Transition t{"probe", entry};
        const std::uint32_t caps = to_mask(entry.capabilities);
        for (std::uint32_t token = 0; token < (1u << kFeatureCount); ++token) {
            const std::uint32_t offending = token & ~caps;
            FiringResult r = fire_transition(t, from_mask(token));
            if (offending != 0) {
                const auto* bad = std::get_if<InvalidFiring>(&r);
                if (bad == nullptr) return "token " + std::to_string(token) + " should be rejected";
                std::uint32_t listed = 0;
                for (Feature f : bad->violated) listed |= 1u << index_of(f);
                if (listed != offending || bad->violated.size() != static_cast<std::size_t>(__builtin_popcount(offending))) {
                    return "token " + std::to_string(token) + " reports the wrong violated set";
                }
                continue;
            }
            const auto* out = std::get_if<Token>(&r);
            if (out == nullptr) return "token " + std::to_string(token) + " should be accepted";
            for (std::size_t i = 0; i < kFeatureCount; ++i) {
                int expected = static_cast<int>((token >> i) & 1u) + entry.effects.values()[i];
                expected = expected < 0 ? 0 : expected > 1 ? 1 : expected;
                if (out->values()[i] != expected) return "token " + std::to_string(token) + " slot " + std::to_string(i);
            }
        }
    }
    return {};
}

inline std::vector<KnowledgeEntry> enumeration_entries(const KnowledgeBase& kb, std::size_t random_count,
                                                       std::uint64_t seed) {
    std::vector<KnowledgeEntry> out;
    for (const auto& [id, e] : kb.entries) out.push_back(e);
    std::mt19937_64 rng(seed);
    out.push_back({from_mask(0), Effects{}});
    out.push_back({from_mask((1u << kFeatureCount) - 1), random_effects(rng)});
    for (std::size_t i = 0; i < random_count; ++i) {
        out.push_back({from_mask(static_cast<std::uint32_t>(bounded_draw(rng, 1u << kFeatureCount))), random_effects(rng)});
    }
    return out;
}

// Random nets (random capabilities and effects per transition) fired from
// random tokens; every reached token must stay binary.
inline std::string token_domain_closure(std::size_t sequences, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t s = 0; s < sequences; ++s) {
        SurrogateNet net;
        const std::size_t k = 1 + bounded_draw(rng, kDefaultMaxSteps);
        net.places.push_back({"start"});
        for (std::size_t i = 0; i < k; ++i) {
            // Dense capabilities so most sequences fire several transitions.
            std::uint32_t caps = static_cast<std::uint32_t>(bounded_draw(rng, 1u << kFeatureCount)) |
                                 static_cast<std::uint32_t>(bounded_draw(rng, 1u << kFeatureCount));
            net.transitions.push_back({"t" + std::to_string(i), {from_mask(caps), random_effects(rng)}});
            net.places.push_back({"p" + std::to_string(i + 1)});
        }
        const Token start = from_mask(static_cast<std::uint32_t>(bounded_draw(rng, 1u << kFeatureCount)));
        SurrogateTrace trace = trace_surrogate(net, start);
        for (const auto& tok : trace.tokens) {
            for (auto x : tok.values()) {
                if (x != 0 && x != 1) return "sequence " + std::to_string(s) + " left the binary domain";
            }
        }
        const std::size_t fired = trace.tokens.size() - 1;
        if (fired > k) return "sequence " + std::to_string(s) + " fired more transitions than it has";
        if (trace.verdict.valid && fired != k) return "valid sequence " + std::to_string(s) + " skipped a transition";
        if (trace.verdict.failure && trace.verdict.failure->kind == FailureKind::Capability &&
            fired != trace.verdict.failure->step_index) {
            return "sequence " + std::to_string(s) + " fired past its first invalid transition";
        }
    }
    return {};
}

inline std::string mapping_shape(const KnowledgeBase& kb, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto& reg = registry();
    for (std::size_t k = 1; k <= kDefaultMaxSteps; ++k) {
        for (int trial = 0; trial < 20; ++trial) {
            PipelineSpec p{"shape", {}, nlohmann::ordered_json::object()};
            for (std::size_t i = 0; i < k; ++i) p.steps.push_back({reg[bounded_draw(rng, reg.size())].id, {}});
            const Token token = from_mask(static_cast<std::uint32_t>(bounded_draw(rng, 1u << kFeatureCount)));
            SurrogateModel m = map_to_surrogate(p, token, kb);
            const auto& net = m.net;
            const std::string where = "length " + std::to_string(k);
            if (net.places.size() != k + 1) return where + ": place count";
            if (net.transitions.size() != k) return where + ": transition count";
            if (net.arcs.size() != 2 * k) return where + ": arc count";
            if (net.places.front().name != "start" || net.places.back().name != "end") return where + ": end places";
            if (!(m.initial_token == token)) return where + ": initial token";
            for (std::size_t i = 0; i < k; ++i) {
                if (net.transitions[i].component != p.steps[i].component) return where + ": transition order";
                if (!(net.transitions[i].knowledge == *kb.find(p.steps[i].component))) return where + ": knowledge";
                const Arc& in = net.arcs[2 * i];
                const Arc& out = net.arcs[2 * i + 1];
                if (in.direction != Arc::Direction::PlaceToTransition || in.place != i || in.transition != i) {
                    return where + ": input arc " + std::to_string(i);
                }
                if (out.direction != Arc::Direction::TransitionToPlace || out.place != i + 1 || out.transition != i) {
                    return where + ": output arc " + std::to_string(i);
                }
            }
        }
    }
    return {};
}

inline std::string predictor_last(std::size_t samples, std::uint64_t seed) {
    for (std::size_t i = 0; i < samples; ++i) {
        PipelineSpec p = random_pipeline(splitmix64(seed + i), registry());
        if (p.steps.empty() || p.steps.size() > kDefaultMaxSteps) return "sample " + std::to_string(i) + ": length";
        for (std::size_t s = 0; s < p.steps.size(); ++s) {
            const bool predictor = lookup(p.steps[s].component).is_predictor();
            if (predictor != (s + 1 == p.steps.size())) return "sample " + std::to_string(i) + ": step " + std::to_string(s);
        }
    }
    return {};
}

// Runs generation twice and recomputes every filter effect slot as the
// first non-zero difference in suite order.
inline std::string kb_idempotent_and_write_once() {
    auto suite = generate_synthetic_suite();
    KnowledgeBase a = generate_knowledge_base(registry(), suite);
    KnowledgeBase b = generate_knowledge_base(registry(), suite);
    if (!(a == b) || serialize(a) != serialize(b)) return "generation is not idempotent";
    for (const auto& c : registry()) {
        if (c.is_predictor()) continue;
        Effects first;
        for (const auto& probe : suite) {
            ExecutionResult r = execute_component(c, probe.dataset);
            const auto* out = std::get_if<Dataset>(&r);
            if (out == nullptr) continue;
            BinaryVector after = extract_features(*out);
            for (Feature f : kAllFeatures) {
                if (first[f] == 0) first.set(f, after[f] - probe.features[f]);
            }
        }
        if (!(first == a.find(c.id)->effects)) return c.id + ": effects differ from first-written differences";
    }
    return {};
}

// Feature vectors, knowledge bases, pipelines, datasets and reports, each
// written and read back.
inline std::string serialization_round_trips(std::size_t samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < samples; ++i) {
        BinaryVector b = from_mask(static_cast<std::uint32_t>(bounded_draw(rng, 1u << kFeatureCount)));
        if (!(deserialize_feature_vector<Binary>(serialize(b)) == b)) return "binary vector " + std::to_string(i);
        Effects e = random_effects(rng);
        if (!(deserialize_feature_vector<Signed>(serialize(e)) == e)) return "signed vector " + std::to_string(i);

        KnowledgeBase kb;
        kb.provenance = {"random", std::to_string(i)};
        for (const auto& c : registry()) {
            kb.entries[c.id] = {from_mask(static_cast<std::uint32_t>(bounded_draw(rng, 1u << kFeatureCount))),
                                random_effects(rng)};
        }
        if (!(deserialize_knowledge_base(serialize(kb)) == kb)) return "knowledge base " + std::to_string(i);

        PipelineSpec p = random_pipeline(rng(), registry());
        for (auto& step : p.steps) {
            if (step.component == "PeriodicSampling") step.params = {{"k", 1.0 + static_cast<double>(bounded_draw(rng, 5))}};
        }
        p.metadata["sample"] = i;
        if (!(parse_pipeline(serialize(p)) == p)) return "pipeline " + std::to_string(i);
    }
    for (const auto& entry : generate_synthetic_suite()) {
        if (!(parse_arff(write_arff(entry.dataset)) == entry.dataset)) return "dataset " + entry.dataset.name();
    }
    ComparisonReport r;
    r.seed = seed;
    r.pipelines_per_dataset = 3;
    DatasetComparison row;
    row.dataset = "d";
    row.rows = 7;
    row.features = from_mask(0x1234);
    row.tmethod = {1, 2, 30, 40, 30001, 40002};
    row.surrogate = {1, 2, 0, 1, 120, 1001};
    row.similar = 3;
    r.datasets.push_back(row);
    if (!(deserialize_report(render_report(r, ReportFormat::Json)) == r)) return "report";
    return {};
}

}  // namespace properties
