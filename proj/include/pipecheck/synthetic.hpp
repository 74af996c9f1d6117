#pragma once

// Tiny probe datasets, each activating as few transformed-features as
// possible: one attribute configuration crossed with one class kind.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pipecheck/dataset.hpp"
#include "pipecheck/feature.hpp"

namespace pipecheck {

struct SuiteEntry {
    Dataset dataset;
    BinaryVector features;
};

enum class ProbeAttributes { Numeric, Nominal, Binary, Unary, Date, EmptyNominal, NumericMissing, NominalMissing };
enum class ProbeClass { Unary, Binary, Nominal, Numeric, Date, String, Symbolic };

inline constexpr std::size_t kProbeRows = 12;

namespace detail {

inline std::string probe_name(ProbeAttributes a) {
    switch (a) {
        case ProbeAttributes::Numeric: return "num";
        case ProbeAttributes::Nominal: return "nom";
        case ProbeAttributes::Binary: return "bin";
        case ProbeAttributes::Unary: return "una";
        case ProbeAttributes::Date: return "date";
        case ProbeAttributes::EmptyNominal: return "empty";
        case ProbeAttributes::NumericMissing: return "num-missing";
        case ProbeAttributes::NominalMissing: return "nom-missing";
    }
    return "?";
}

inline std::string probe_name(ProbeClass c) {
    switch (c) {
        case ProbeClass::Unary: return "unary";
        case ProbeClass::Binary: return "binary";
        case ProbeClass::Nominal: return "nominal";
        case ProbeClass::Numeric: return "numeric";
        case ProbeClass::Date: return "date";
        case ProbeClass::String: return "string";
        case ProbeClass::Symbolic: return "symbolic";
    }
    return "?";
}

constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kEpoch2020 = 18262 * kDay;

}  // namespace detail

// Missing cells always sit in row 0 so that periodic sampling keeps them.
inline Dataset make_probe_dataset(ProbeAttributes attrs, ProbeClass cls, bool missing_class) {
    std::vector<Attribute> attributes;
    switch (attrs) {
        case ProbeAttributes::Numeric:
        case ProbeAttributes::NumericMissing:
            attributes.push_back({"a1", Numeric{}});
            attributes.push_back({"a2", Numeric{}});
            break;
        case ProbeAttributes::Nominal:
        case ProbeAttributes::NominalMissing:
            attributes.push_back({"a1", Nominal{{"x", "y", "z"}}});
            break;
        case ProbeAttributes::Binary: attributes.push_back({"a1", Nominal{{"f", "t"}}}); break;
        case ProbeAttributes::Unary: attributes.push_back({"a1", Nominal{{"only"}}}); break;
        case ProbeAttributes::Date: attributes.push_back({"a1", DateKind{}}); break;
        case ProbeAttributes::EmptyNominal: attributes.push_back({"a1", Nominal{{"p", "q"}}}); break;
    }
    switch (cls) {
        case ProbeClass::Unary: attributes.push_back({"class", Nominal{{"c"}}}); break;
        case ProbeClass::Binary: attributes.push_back({"class", Nominal{{"no", "yes"}}}); break;
        case ProbeClass::Nominal: attributes.push_back({"class", Nominal{{"c0", "c1", "c2"}}}); break;
        case ProbeClass::Numeric: attributes.push_back({"class", Numeric{}}); break;
        case ProbeClass::Date: attributes.push_back({"class", DateKind{}}); break;
        case ProbeClass::String: attributes.push_back({"class", StringKind{}}); break;
        case ProbeClass::Symbolic: attributes.push_back({"class", Nominal{{"s0", "s1"}}}); break;
    }

    std::vector<Row> rows;
    for (std::size_t r = 0; r < kProbeRows; ++r) {
        const auto i = static_cast<std::uint32_t>(r);
        const double x = static_cast<double>(r);
        Row row;
        switch (attrs) {
            case ProbeAttributes::Numeric:
            case ProbeAttributes::NumericMissing:
                if (attrs == ProbeAttributes::NumericMissing && r == 0) {
                    row.emplace_back(Missing{});
                } else {
                    row.emplace_back(1.5 * x + static_cast<double>(r % 3));
                }
                row.emplace_back(static_cast<double>((r * 7) % 11));
                break;
            case ProbeAttributes::Nominal:
            case ProbeAttributes::NominalMissing:
                if (attrs == ProbeAttributes::NominalMissing && r == 0) {
                    row.emplace_back(Missing{});
                } else {
                    row.emplace_back(Label{i % 3});
                }
                break;
            case ProbeAttributes::Binary: row.emplace_back(Label{(i / 2) % 2}); break;
            case ProbeAttributes::Unary: row.emplace_back(Label{0}); break;
            case ProbeAttributes::Date: row.emplace_back(Date{detail::kEpoch2020 + static_cast<std::int64_t>(r) * detail::kDay}); break;
            case ProbeAttributes::EmptyNominal: row.emplace_back(Missing{}); break;
        }
        if (missing_class && r == 0) {
            row.emplace_back(Missing{});
        } else {
            switch (cls) {
                case ProbeClass::Unary: row.emplace_back(Label{0}); break;
                case ProbeClass::Binary:
                case ProbeClass::Symbolic: row.emplace_back(Label{i % 2}); break;
                case ProbeClass::Nominal: row.emplace_back(Label{i % 3}); break;
                case ProbeClass::Numeric: row.emplace_back(2.5 * x + static_cast<double>(r % 4)); break;
                case ProbeClass::Date: row.emplace_back(Date{detail::kEpoch2020 + static_cast<std::int64_t>(30 * r) * detail::kDay}); break;
                case ProbeClass::String: row.emplace_back("s" + std::to_string(r)); break;
            }
        }
        rows.push_back(std::move(row));
    }
    std::string name = "syn_" + detail::probe_name(attrs) + "_" + detail::probe_name(cls) +
                       (missing_class ? "_missing-class" : "");
    const std::size_t class_index = attributes.size() - 1;
    return Dataset(std::move(name), std::move(attributes), class_index, std::move(rows),
                   cls == ProbeClass::Symbolic);
}

// Every attribute configuration with every class kind, plus missing-class
// variants of the numeric and nominal configurations. Ordered by number of
// active features (fewest first), ties kept in construction order.
inline std::vector<SuiteEntry> generate_synthetic_suite() {
    constexpr ProbeAttributes kAttrs[] = {
        ProbeAttributes::Numeric, ProbeAttributes::Nominal,      ProbeAttributes::Binary,
        ProbeAttributes::Unary,   ProbeAttributes::Date,         ProbeAttributes::EmptyNominal,
        ProbeAttributes::NumericMissing, ProbeAttributes::NominalMissing,
    };
    constexpr ProbeClass kClasses[] = {
        ProbeClass::Unary, ProbeClass::Binary, ProbeClass::Nominal, ProbeClass::Numeric,
        ProbeClass::Date,  ProbeClass::String, ProbeClass::Symbolic,
    };
    std::vector<SuiteEntry> suite;
    for (auto a : kAttrs) {
        for (auto c : kClasses) {
            Dataset d = make_probe_dataset(a, c, false);
            BinaryVector v = extract_features(d);
            suite.push_back({std::move(d), v});
        }
    }
    for (auto a : {ProbeAttributes::Numeric, ProbeAttributes::Nominal}) {
        for (auto c : kClasses) {
            Dataset d = make_probe_dataset(a, c, true);
            BinaryVector v = extract_features(d);
            suite.push_back({std::move(d), v});
        }
    }
    std::stable_sort(suite.begin(), suite.end(), [](const SuiteEntry& x, const SuiteEntry& y) {
        return x.features.count_active() < y.features.count_active();
    });
    return suite;
}

}  // namespace pipecheck
