#pragma once

// Transformed-features: the 16 dataset characteristics that components can
// require or change. A FeatureVector holds one small integer per feature and
// is used with two value domains:
//   Binary {0,1}    dataset abstraction, surrogate token, capability mask
//   Signed {-1,0,1} effect delta

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipecheck/errors.hpp"

namespace pipecheck {

enum class Feature : std::uint8_t {
    BinaryClass,
    NumericClass,
    DateClass,
    MissingClassValues,
    NominalClass,
    SymbolicClass,
    StringClass,
    UnaryClass,
    BinaryAttributes,
    DateAttributes,
    EmptyNominalAttributes,
    MissingValues,
    NominalAttributes,
    NumericAttributes,
    UnaryAttributes,
    PredictiveModel,
};

inline constexpr std::size_t kFeatureCount = 16;

// Canonical order; also the serialization order.
inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::BinaryClass,        Feature::NumericClass,       Feature::DateClass,
    Feature::MissingClassValues, Feature::NominalClass,       Feature::SymbolicClass,
    Feature::StringClass,        Feature::UnaryClass,         Feature::BinaryAttributes,
    Feature::DateAttributes,     Feature::EmptyNominalAttributes, Feature::MissingValues,
    Feature::NominalAttributes,  Feature::NumericAttributes,  Feature::UnaryAttributes,
    Feature::PredictiveModel,
};

inline constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "BINARY_CLASS",        "NUMERIC_CLASS",      "DATE_CLASS",
    "MISSING_CLASS_VALUES", "NOMINAL_CLASS",     "SYMBOLIC_CLASS",
    "STRING_CLASS",        "UNARY_CLASS",        "BINARY_ATTRIBUTES",
    "DATE_ATTRIBUTES",     "EMPTY_NOMINAL_ATTRIBUTES", "MISSING_VALUES",
    "NOMINAL_ATTRIBUTES",  "NUMERIC_ATTRIBUTES", "UNARY_ATTRIBUTES",
    "PREDICTIVE_MODEL",
};

constexpr std::size_t index_of(Feature f) noexcept { return static_cast<std::size_t>(f); }

constexpr std::string_view name_of(Feature f) noexcept { return kFeatureNames[index_of(f)]; }

inline std::optional<Feature> feature_from_name(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (kFeatureNames[i] == name) return kAllFeatures[i];
    }
    return std::nullopt;
}

// The class-kind slots; exactly one is set for any dataset.
inline constexpr std::array<Feature, 7> kClassKindFeatures = {
    Feature::UnaryClass,  Feature::BinaryClass,  Feature::NominalClass, Feature::NumericClass,
    Feature::DateClass,   Feature::StringClass,  Feature::SymbolicClass,
};

constexpr bool is_class_kind(Feature f) noexcept {
    return std::find(kClassKindFeatures.begin(), kClassKindFeatures.end(), f) != kClassKindFeatures.end();
}

struct Binary {
    static constexpr std::int8_t min = 0;
    static constexpr std::int8_t max = 1;
    static constexpr std::string_view name = "binary";
};

struct Signed {
    static constexpr std::int8_t min = -1;
    static constexpr std::int8_t max = 1;
    static constexpr std::string_view name = "signed";
};

template <typename Domain>
class FeatureVector {
public:
    using domain = Domain;

    constexpr FeatureVector() noexcept = default;

    // Vector with the given features set to 1.
    static FeatureVector with(std::initializer_list<Feature> active) {
        FeatureVector v;
        for (Feature f : active) v.set(f, 1);
        return v;
    }

    static constexpr bool in_domain(int value) noexcept { return value >= Domain::min && value <= Domain::max; }

    constexpr std::int8_t operator[](Feature f) const noexcept { return values_[index_of(f)]; }

    // Throws std::out_of_range when `value` is outside the domain.
    void set(Feature f, int value) {
        if (!in_domain(value)) {
            throw std::out_of_range("value " + std::to_string(value) + " outside " + std::string(Domain::name) +
                                    " domain for " + std::string(name_of(f)));
        }
        values_[index_of(f)] = static_cast<std::int8_t>(value);
    }

    bool active(Feature f) const noexcept { return values_[index_of(f)] != 0; }

    std::vector<Feature> active_features() const {
        std::vector<Feature> out;
        for (Feature f : kAllFeatures) {
            if (active(f)) out.push_back(f);
        }
        return out;
    }

    std::size_t count_active() const noexcept {
        return static_cast<std::size_t>(std::count_if(values_.begin(), values_.end(), [](auto v) { return v != 0; }));
    }

    const std::array<std::int8_t, kFeatureCount>& values() const noexcept { return values_; }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

private:
    std::array<std::int8_t, kFeatureCount> values_{};
};

using BinaryVector = FeatureVector<Binary>;
using SignedVector = FeatureVector<Signed>;

// Serialized form: an object with all 16 keys in canonical order.
template <typename Domain>
nlohmann::ordered_json to_json(const FeatureVector<Domain>& v) {
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (Feature f : kAllFeatures) out[std::string(name_of(f))] = static_cast<int>(v[f]);
    return out;
}

template <typename Domain, typename Json>
FeatureVector<Domain> feature_vector_from_json(const Json& j, const std::string& path = "") {
    if (!j.is_object()) throw DeserializeError(path, "expected an object of 16 transformed-features");
    FeatureVector<Domain> v;
    std::array<bool, kFeatureCount> seen{};
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto f = feature_from_name(it.key());
        if (!f) throw DeserializeError(path + "/" + it.key(), "unknown transformed-feature");
        const auto& value = it.value();
        if (!value.is_number_integer()) throw DeserializeError(path + "/" + it.key(), "expected an integer");
        auto n = value.template get<long long>();
        if (n < Domain::min || n > Domain::max) {
            throw DeserializeError(path + "/" + it.key(),
                                   "value " + std::to_string(n) + " outside " + std::string(Domain::name) + " domain");
        }
        v.set(*f, static_cast<int>(n));
        seen[index_of(*f)] = true;
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (!seen[i]) throw DeserializeError(path + "/" + std::string(kFeatureNames[i]), "missing key");
    }
    return v;
}

template <typename Domain>
std::string serialize(const FeatureVector<Domain>& v, int indent = -1) {
    return to_json(v).dump(indent);
}

template <typename Domain>
FeatureVector<Domain> deserialize_feature_vector(std::string_view text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DeserializeError("", e.what());
    }
    return feature_vector_from_json<Domain>(j);
}

}  // namespace pipecheck
