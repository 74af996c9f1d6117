#pragma once

// Helpers shared by the test binaries: fixture lookup and a reference
// feature extractor written independently of the library's.

#include <array>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "pipecheck/dataset.hpp"
#include "pipecheck/dataset_io.hpp"
#include "pipecheck/feature.hpp"

namespace testing_support {

inline const std::filesystem::path kFixtureDir = PIPECHECK_FIXTURES;

// The five comparison fixtures; wineqw_toy is the 5000-row one.
inline const std::array<const char*, 5> kComparisonFixtures = {"abalone_toy", "car_toy", "convex_toy", "gcredit_toy",
                                                                "wineqw_toy"};

inline pipecheck::Dataset load_fixture(const std::string& name) {
    return pipecheck::load_dataset(kFixtureDir / (name + ".arff"));
}

// Per-column scan into a set of feature names, then a lookup. Kept deliberately
// naive so it can serve as an oracle for extract_features.
inline std::set<std::string> reference_features(const pipecheck::Dataset& d) {
    using namespace pipecheck;
    std::set<std::string> out;
    auto arity_name = [](std::size_t n, const char* suffix) {
        const char* prefix = n == 1 ? "UNARY" : n == 2 ? "BINARY" : "NOMINAL";
        return std::string(prefix) + suffix;
    };
    for (std::size_t c = 0; c < d.attribute_count(); ++c) {
        const Attribute& a = d.attribute(c);
        std::size_t missing = 0;
        for (std::size_t r = 0; r < d.row_count(); ++r) missing += d.cell(r, c).index() == 0 ? 1 : 0;
        const bool is_class = c == d.class_index();
        if (is_class) {
            if (missing > 0) out.insert("MISSING_CLASS_VALUES");
            if (a.is_numeric()) out.insert("NUMERIC_CLASS");
            if (a.is_date()) out.insert("DATE_CLASS");
            if (a.is_string()) out.insert("STRING_CLASS");
            if (a.is_nominal()) out.insert(d.symbolic_class() ? "SYMBOLIC_CLASS" : arity_name(a.labels().size(), "_CLASS"));
            continue;
        }
        if (a.is_nominal()) {
            const bool empty = a.labels().empty() || (d.row_count() > 0 && missing == d.row_count());
            if (empty) {
                out.insert("EMPTY_NOMINAL_ATTRIBUTES");
                continue;
            }
            out.insert(arity_name(a.labels().size(), "_ATTRIBUTES"));
        }
        if (a.is_numeric()) out.insert("NUMERIC_ATTRIBUTES");
        if (a.is_date()) out.insert("DATE_ATTRIBUTES");
        if (missing > 0) out.insert("MISSING_VALUES");
    }
    return out;
}

inline std::set<std::string> active_names(const pipecheck::BinaryVector& v) {
    std::set<std::string> out;
    for (auto f : v.active_features()) out.insert(std::string(pipecheck::name_of(f)));
    return out;
}

inline std::filesystem::path temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "pipecheck_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace testing_support
