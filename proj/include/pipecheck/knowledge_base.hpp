#pragma once

// Capabilities/effects knowledge base: data model, JSON persistence,
// induction by probing components on the synthetic suite, and diffing.

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipecheck/components.hpp"
#include "pipecheck/dataset_io.hpp"
#include "pipecheck/errors.hpp"
#include "pipecheck/feature.hpp"
#include "pipecheck/synthetic.hpp"

namespace pipecheck {

using Capabilities = BinaryVector;
using Effects = SignedVector;

inline constexpr std::string_view kGeneratorVersion = "pipecheck-kb/1";

struct KnowledgeEntry {
    Capabilities capabilities;
    Effects effects;

    friend bool operator==(const KnowledgeEntry&, const KnowledgeEntry&) = default;
};

struct Provenance {
    std::string generator;
    std::string suite_hash;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct KnowledgeBase {
    std::map<std::string, KnowledgeEntry> entries;
    Provenance provenance;

    const KnowledgeEntry* find(std::string_view id) const {
        auto it = entries.find(std::string(id));
        return it == entries.end() ? nullptr : &it->second;
    }

    friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

// FNV-1a over the ARFF rendering of every probe dataset, in suite order.
inline std::string suite_hash(std::span<const SuiteEntry> suite) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](std::string_view s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& e : suite) mix(write_arff(e.dataset));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct EffectConflict {
    std::string component;
    std::string dataset;
    Feature feature;
    int kept;
    int observed;
};

struct GenerationLog {
    std::vector<std::string> warnings;
    std::vector<EffectConflict> conflicts;
};

// Induction of one component's entry:
//   1. capabilities and effects start at 0;
//   2. the component runs on every probe, in suite order;
//   3. each successful run sets the capabilities of every feature active in
//      the probe;
//   4. a predictor's effects get PREDICTIVE_MODEL = 1; a filter's effect for
//      feature f, while still 0, becomes clamp(out[f] - in[f], -1, 1).
// Effects are write-once; later disagreeing differences are recorded in
// `log` as conflicts.
inline KnowledgeEntry probe_component(const ComponentDescriptor& c, std::span<const SuiteEntry> suite,
                                      GenerationLog* log = nullptr, std::size_t* successes = nullptr) {
    KnowledgeEntry entry;
    std::size_t ok = 0;
    for (const auto& probe : suite) {
        ExecutionResult result = execute_component(c, probe.dataset);
        if (!succeeded(result)) continue;
        ++ok;
        for (Feature f : probe.features.active_features()) entry.capabilities.set(f, 1);
        if (c.is_predictor()) {
            entry.effects.set(Feature::PredictiveModel, 1);
            continue;
        }
        const auto* out = std::get_if<Dataset>(&result);
        if (out == nullptr) continue;
        BinaryVector after = extract_features(*out);
        for (Feature f : kAllFeatures) {
            int diff = std::clamp(after[f] - probe.features[f], -1, 1);
            if (entry.effects[f] == 0) {
                entry.effects.set(f, diff);
            } else if (diff != 0 && diff != entry.effects[f] && log != nullptr) {
                log->conflicts.push_back({c.id, probe.dataset.name(), f, entry.effects[f], diff});
            }
        }
    }
    if (successes != nullptr) *successes = ok;
    return entry;
}

// A component that fails on every probe keeps an all-zero entry and a
// warning; with `strict` it raises ProbeError instead.
inline KnowledgeBase generate_knowledge_base(std::span<const ComponentDescriptor> components,
                                             std::span<const SuiteEntry> suite, GenerationLog* log = nullptr,
                                             bool strict = false) {
    KnowledgeBase kb;
    kb.provenance = {std::string(kGeneratorVersion), suite_hash(suite)};
    for (const auto& c : components) {
        std::size_t successes = 0;
        kb.entries[c.id] = probe_component(c, suite, log, &successes);
        if (successes == 0) {
            std::string msg = c.id + " failed on every probe dataset";
            if (strict) throw ProbeError(msg);
            if (log != nullptr) log->warnings.push_back(msg);
        }
    }
    return kb;
}

inline KnowledgeBase generate_knowledge_base() {
    auto suite = generate_synthetic_suite();
    return generate_knowledge_base(registry(), suite);
}

// --- JSON ------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const KnowledgeBase& kb) {
    nlohmann::ordered_json components = nlohmann::ordered_json::object();
    for (const auto& [id, e] : kb.entries) {
        components[id] = {{"capabilities", to_json(e.capabilities)}, {"effects", to_json(e.effects)}};
    }
    return {{"components", components},
            {"provenance", {{"generator", kb.provenance.generator}, {"suite_hash", kb.provenance.suite_hash}}}};
}

inline std::string serialize(const KnowledgeBase& kb, int indent = 2) { return to_json(kb).dump(indent); }

inline KnowledgeBase knowledge_base_from_json(const nlohmann::ordered_json& j) {
    if (!j.is_object()) throw DeserializeError("", "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() != "components" && it.key() != "provenance") throw DeserializeError("/" + it.key(), "unknown key");
    }
    auto comps = j.find("components");
    if (comps == j.end() || !comps->is_object()) throw DeserializeError("/components", "expected an object");
    KnowledgeBase kb;
    for (auto it = comps->begin(); it != comps->end(); ++it) {
        const std::string path = "/components/" + it.key();
        const auto& e = it.value();
        if (!e.is_object()) throw DeserializeError(path, "expected an object");
        for (auto k = e.begin(); k != e.end(); ++k) {
            if (k.key() != "capabilities" && k.key() != "effects") throw DeserializeError(path + "/" + k.key(), "unknown key");
        }
        if (!e.contains("capabilities")) throw DeserializeError(path + "/capabilities", "missing key");
        if (!e.contains("effects")) throw DeserializeError(path + "/effects", "missing key");
        kb.entries[it.key()] = {feature_vector_from_json<Binary>(e["capabilities"], path + "/capabilities"),
                                feature_vector_from_json<Signed>(e["effects"], path + "/effects")};
    }
    if (auto p = j.find("provenance"); p != j.end()) {
        if (!p->is_object()) throw DeserializeError("/provenance", "expected an object");
        for (const char* key : {"generator", "suite_hash"}) {
            if (p->contains(key)) {
                if (!(*p)[key].is_string()) throw DeserializeError(std::string("/provenance/") + key, "expected a string");
                (key[0] == 'g' ? kb.provenance.generator : kb.provenance.suite_hash) = (*p)[key].get<std::string>();
            }
        }
    }
    return kb;
}

inline KnowledgeBase deserialize_knowledge_base(std::string_view text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DeserializeError("", e.what());
    }
    return knowledge_base_from_json(j);
}

inline KnowledgeBase load_knowledge_base(const std::filesystem::path& path) {
    return deserialize_knowledge_base(read_file(path));
}

// --- diff ------------------------------------------------------------------

struct KbDifference {
    std::string component;
    std::string aspect;  // "capabilities" or "effects"
    Feature feature;
    std::optional<int> a;  // nullopt when the component is absent on that side
    std::optional<int> b;

    friend bool operator==(const KbDifference&, const KbDifference&) = default;
};

// Entry-wise comparison; provenance is ignored.
inline std::vector<KbDifference> kb_diff(const KnowledgeBase& a, const KnowledgeBase& b) {
    std::vector<KbDifference> out;
    std::map<std::string, std::pair<const KnowledgeEntry*, const KnowledgeEntry*>> ids;
    for (const auto& [id, e] : a.entries) ids[id].first = &e;
    for (const auto& [id, e] : b.entries) ids[id].second = &e;
    for (const auto& [id, pair] : ids) {
        auto [ea, eb] = pair;
        for (Feature f : kAllFeatures) {
            std::optional<int> ca = ea ? std::optional<int>(ea->capabilities[f]) : std::nullopt;
            std::optional<int> cb = eb ? std::optional<int>(eb->capabilities[f]) : std::nullopt;
            if (ca != cb) out.push_back({id, "capabilities", f, ca, cb});
        }
        for (Feature f : kAllFeatures) {
            std::optional<int> xa = ea ? std::optional<int>(ea->effects[f]) : std::nullopt;
            std::optional<int> xb = eb ? std::optional<int>(eb->effects[f]) : std::nullopt;
            if (xa != xb) out.push_back({id, "effects", f, xa, xb});
        }
    }
    return out;
}

inline std::string describe(const KbDifference& d) {
    auto v = [](std::optional<int> x) { return x ? std::to_string(*x) : std::string("absent"); };
    return d.component + " " + d.aspect + "." + std::string(name_of(d.feature)) + ": " + v(d.a) + " vs " + v(d.b);
}

}  // namespace pipecheck
