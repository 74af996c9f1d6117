#include <gtest/gtest.h>

#include <random>
#include <set>
#include <string>

#include "pipecheck/feature.hpp"
#include "properties.hpp"

using namespace pipecheck;

TEST(FeatureNames, CanonicalOrderAndUnique) {
    const char* expected[] = {"BINARY_CLASS",        "NUMERIC_CLASS",      "DATE_CLASS",
                              "MISSING_CLASS_VALUES", "NOMINAL_CLASS",     "SYMBOLIC_CLASS",
                              "STRING_CLASS",        "UNARY_CLASS",        "BINARY_ATTRIBUTES",
                              "DATE_ATTRIBUTES",     "EMPTY_NOMINAL_ATTRIBUTES", "MISSING_VALUES",
                              "NOMINAL_ATTRIBUTES",  "NUMERIC_ATTRIBUTES", "UNARY_ATTRIBUTES",
                              "PREDICTIVE_MODEL"};
    std::set<std::string_view> seen;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        EXPECT_EQ(name_of(kAllFeatures[i]), expected[i]);
        EXPECT_EQ(feature_from_name(expected[i]), kAllFeatures[i]);
        seen.insert(name_of(kAllFeatures[i]));
    }
    EXPECT_EQ(seen.size(), kFeatureCount);
    EXPECT_FALSE(feature_from_name("binary_class").has_value());
}

TEST(FeatureNames, SevenClassKinds) {
    std::size_t n = 0;
    for (Feature f : kAllFeatures) n += is_class_kind(f) ? 1 : 0;
    EXPECT_EQ(n, 7u);
    EXPECT_FALSE(is_class_kind(Feature::MissingClassValues));
    EXPECT_FALSE(is_class_kind(Feature::PredictiveModel));
}

TEST(FeatureVectorJson, AllZeroBinaryRoundTrip) {
    BinaryVector v;
    auto j = to_json(v);
    ASSERT_EQ(j.size(), 16u);
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        EXPECT_EQ(it.key(), kFeatureNames[i]);
        EXPECT_EQ(it.value(), 0);
    }
    EXPECT_EQ(deserialize_feature_vector<Binary>(serialize(v)), v);
}

TEST(FeatureVectorJson, SignedMinusOneRoundTrips) {
    SignedVector v;
    v.set(Feature::NominalAttributes, -1);
    SignedVector back = deserialize_feature_vector<Signed>(serialize(v));
    EXPECT_EQ(back, v);
    EXPECT_EQ(back[Feature::NominalAttributes], -1);
}

TEST(FeatureVectorJson, FifteenKeysRejected) {
    auto j = to_json(BinaryVector{});
    j.erase("UNARY_ATTRIBUTES");
    try {
        feature_vector_from_json<Binary>(j);
        FAIL() << "expected DeserializeError";
    } catch (const DeserializeError& e) {
        EXPECT_EQ(e.path(), "/UNARY_ATTRIBUTES");
    }
}

TEST(FeatureVectorJson, UnknownKeyRejected) {
    auto j = to_json(BinaryVector{});
    j["EXTRA"] = 0;
    EXPECT_THROW(feature_vector_from_json<Binary>(j), DeserializeError);
}

TEST(FeatureVectorJson, OutOfDomainRejected) {
    auto j = to_json(BinaryVector{});
    j["MISSING_VALUES"] = 2;
    EXPECT_THROW(feature_vector_from_json<Binary>(j), DeserializeError);
    j["MISSING_VALUES"] = -1;
    EXPECT_THROW(feature_vector_from_json<Binary>(j), DeserializeError);
    EXPECT_NO_THROW(feature_vector_from_json<Signed>(j));
    j["MISSING_VALUES"] = 2;
    EXPECT_THROW(feature_vector_from_json<Signed>(j), DeserializeError);
    j["MISSING_VALUES"] = 0.5;
    EXPECT_THROW(feature_vector_from_json<Signed>(j), DeserializeError);
    j["MISSING_VALUES"] = "1";
    EXPECT_THROW(feature_vector_from_json<Signed>(j), DeserializeError);
}

TEST(FeatureVectorJson, MalformedTextRejected) {
    EXPECT_THROW(deserialize_feature_vector<Binary>("{"), DeserializeError);
    EXPECT_THROW(deserialize_feature_vector<Binary>("[]"), DeserializeError);
}

TEST(FeatureVector, SetOutsideDomainThrows) {
    BinaryVector b;
    EXPECT_THROW(b.set(Feature::BinaryClass, -1), std::out_of_range);
    EXPECT_THROW(b.set(Feature::BinaryClass, 2), std::out_of_range);
    SignedVector s;
    EXPECT_NO_THROW(s.set(Feature::BinaryClass, -1));
    EXPECT_THROW(s.set(Feature::BinaryClass, -2), std::out_of_range);
}

TEST(FeatureVector, ActiveFeaturesInCanonicalOrder) {
    auto v = BinaryVector::with({Feature::PredictiveModel, Feature::BinaryClass, Feature::MissingValues});
    std::vector<Feature> expected{Feature::BinaryClass, Feature::MissingValues, Feature::PredictiveModel};
    EXPECT_EQ(v.active_features(), expected);
    EXPECT_EQ(v.count_active(), 3u);
}

TEST(FeatureVectorJson, RandomVectorsRoundTrip) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        BinaryVector b = properties::from_mask(static_cast<std::uint32_t>(bounded_draw(rng, 1u << 16)));
        ASSERT_EQ(deserialize_feature_vector<Binary>(serialize(b, 2)), b);
        SignedVector s = properties::random_effects(rng);
        ASSERT_EQ(deserialize_feature_vector<Signed>(serialize(s)), s);
    }
}
