#include <gtest/gtest.h>

#include "pipecheck/tmethod.hpp"
#include "support.hpp"

using namespace pipecheck;
using namespace std::chrono_literals;

namespace {

const Dataset& gcredit() {
    static const Dataset d = testing_support::load_fixture("gcredit_toy");
    return d;
}

}  // namespace

TEST(ExecutePipeline, MajorityOnGcredit) {
    ExecutionReport r = execute_pipeline(make_pipeline("m", {"MajorityClassifier"}), gcredit());
    EXPECT_TRUE(r.verdict.valid);
    EXPECT_FALSE(r.verdict.failure);
    EXPECT_EQ(r.artifact, "PredictiveModel(MajorityClassifier)");
    ASSERT_TRUE(r.model);
    EXPECT_EQ(r.model->component_id, "MajorityClassifier");
}

TEST(ExecutePipeline, FilterOnlyHasNoModel) {
    ExecutionReport r = execute_pipeline(make_pipeline("f", {"ReplaceMissingValues"}), gcredit());
    EXPECT_FALSE(r.verdict.valid);
    ASSERT_TRUE(r.verdict.failure);
    EXPECT_EQ(r.verdict.failure->kind, FailureKind::NoModel);
    EXPECT_EQ(r.artifact, "Dataset(700 rows, 21 attributes)");
    EXPECT_FALSE(r.model);
}

TEST(ExecutePipeline, CaseStudyIncompatible) {
    ExecutionReport r = execute_pipeline(make_pipeline("cs", {"ReplaceMissingValues", "PeriodicSampling",
                                                              "NumericToNominal", "PrincipalComponents",
                                                              "LinearRegressor"}),
                                         gcredit());
    EXPECT_FALSE(r.verdict.valid);
    ASSERT_TRUE(r.verdict.failure);
    EXPECT_EQ(r.verdict.failure->kind, FailureKind::IncompatibleData);
    EXPECT_EQ(r.verdict.failure->step_index, 3u);
    EXPECT_EQ(r.verdict.failure->component, "PrincipalComponents");
    EXPECT_NE(r.verdict.failure->error_text.find("IncompatibleData"), std::string::npos);
    EXPECT_EQ(r.artifact, "Dataset(350 rows, 21 attributes)");
}

TEST(ExecutePipeline, LinearRegressorRejectsNominalClass) {
    ExecutionReport r =
        execute_pipeline(make_pipeline("lr", {"ReplaceMissingValues", "NominalToNumeric", "LinearRegressor"}), gcredit());
    ASSERT_TRUE(r.verdict.failure);
    EXPECT_EQ(r.verdict.failure->kind, FailureKind::IncompatibleData);
    EXPECT_EQ(r.verdict.failure->step_index, 2u);
}

TEST(ExecutePipeline, PredictorMidPipeline) {
    ExecutionReport r = execute_pipeline(make_pipeline("mid", {"MajorityClassifier", "RemoveUseless"}), gcredit());
    ASSERT_TRUE(r.verdict.failure);
    EXPECT_EQ(r.verdict.failure->kind, FailureKind::IncompatibleData);
    EXPECT_EQ(r.verdict.failure->step_index, 1u);
    EXPECT_FALSE(r.verdict.valid);
}

TEST(ExecutePipeline, Deterministic) {
    auto d = testing_support::load_fixture("abalone_toy");
    for (std::uint64_t s = 0; s < 40; ++s) {
        PipelineSpec p = random_pipeline(s, registry());
        ExecutionReport a = execute_pipeline(p, d);
        ExecutionReport b = execute_pipeline(p, d);
        EXPECT_EQ(a.verdict.valid, b.verdict.valid);
        EXPECT_EQ(a.verdict.failure, b.verdict.failure);
        EXPECT_EQ(a.artifact, b.artifact);
        ASSERT_EQ(a.model.has_value(), b.model.has_value());
        if (a.model) {
            EXPECT_EQ(a.model->parameters, b.model->parameters);
            EXPECT_EQ(a.model->training_features, b.model->training_features);
        }
    }
}

// A failure at step i reproduces on the prefix ending at i; every strict
// prefix of any pipeline ends in NoModel when it fails nowhere earlier.
TEST(ExecutePipeline, PrefixProperty) {
    for (std::uint64_t s = 0; s < 60; ++s) {
        PipelineSpec p = random_pipeline(splitmix64(s), registry());
        ExecutionReport full = execute_pipeline(p, gcredit());
        const std::size_t stop = full.verdict.failure ? full.verdict.failure->step_index : p.size() - 1;
        for (std::size_t len = 1; len <= stop; ++len) {
            PipelineSpec prefix = p;
            prefix.steps.resize(len);
            ExecutionReport r = execute_pipeline(prefix, gcredit());
            ASSERT_TRUE(r.verdict.failure) << describe_structure(prefix);
            EXPECT_EQ(r.verdict.failure->kind, FailureKind::NoModel) << describe_structure(prefix);
        }
        if (full.verdict.failure && full.verdict.failure->kind != FailureKind::NoModel) {
            PipelineSpec prefix = p;
            prefix.steps.resize(stop + 1);
            EXPECT_EQ(execute_pipeline(prefix, gcredit()).verdict.failure, full.verdict.failure);
        }
    }
}

TEST(ExecutePipeline, Timeout) {
    auto convex = testing_support::load_fixture("convex_toy");
    PipelineSpec heavy = make_pipeline("heavy", {"NumericToNominal", "NominalToNumeric", "PrincipalComponents",
                                                 "DecisionStump"});
    ExecutionReport r = execute_pipeline(heavy, convex, 1ms);
    ASSERT_GT(r.verdict.duration, 1ms);
    ASSERT_TRUE(r.verdict.failure);
    EXPECT_EQ(r.verdict.failure->kind, FailureKind::Timeout);
    EXPECT_FALSE(r.verdict.valid);
    EXPECT_EQ(r.verdict.failure->error_text, "Timeout(exceeded 1 ms)");

    ExecutionReport unlimited = execute_pipeline(make_pipeline("m", {"MajorityClassifier"}), convex, kNoTimeout);
    EXPECT_TRUE(unlimited.verdict.valid);
}
