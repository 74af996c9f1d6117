#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pipecheck/errors.hpp"
#include "pipecheck/feature.hpp"

namespace pipecheck {

struct Numeric {
    friend bool operator==(const Numeric&, const Numeric&) = default;
};
struct Nominal {
    std::vector<std::string> values;
    friend bool operator==(const Nominal&, const Nominal&) = default;
};
struct DateKind {
    friend bool operator==(const DateKind&, const DateKind&) = default;
};
struct StringKind {
    friend bool operator==(const StringKind&, const StringKind&) = default;
};

using AttributeKind = std::variant<Numeric, Nominal, DateKind, StringKind>;

struct Attribute {
    std::string name;
    AttributeKind kind;

    bool is_numeric() const noexcept { return std::holds_alternative<Numeric>(kind); }
    bool is_nominal() const noexcept { return std::holds_alternative<Nominal>(kind); }
    bool is_date() const noexcept { return std::holds_alternative<DateKind>(kind); }
    bool is_string() const noexcept { return std::holds_alternative<StringKind>(kind); }
    const std::vector<std::string>& labels() const { return std::get<Nominal>(kind).values; }

    friend bool operator==(const Attribute&, const Attribute&) = default;
};

struct Missing {
    friend bool operator==(const Missing&, const Missing&) = default;
};

// Index into the attribute's declared nominal values.
struct Label {
    std::uint32_t index;
    friend auto operator<=>(const Label&, const Label&) = default;
};

// Seconds since 1970-01-01T00:00:00 UTC.
struct Date {
    std::int64_t seconds;
    friend auto operator<=>(const Date&, const Date&) = default;
};

using Cell = std::variant<Missing, double, Label, Date, std::string>;
using Row = std::vector<Cell>;

inline bool is_missing(const Cell& c) noexcept { return std::holds_alternative<Missing>(c); }

inline std::string kind_name(const AttributeKind& k) {
    struct {
        std::string operator()(const Numeric&) const { return "numeric"; }
        std::string operator()(const Nominal&) const { return "nominal"; }
        std::string operator()(const DateKind&) const { return "date"; }
        std::string operator()(const StringKind&) const { return "string"; }
    } v;
    return std::visit(v, k);
}

inline bool conforms(const Cell& cell, const AttributeKind& kind) {
    if (is_missing(cell)) return true;
    if (std::holds_alternative<Numeric>(kind)) return std::holds_alternative<double>(cell);
    if (const auto* n = std::get_if<Nominal>(&kind)) {
        const auto* l = std::get_if<Label>(&cell);
        return l != nullptr && l->index < n->values.size();
    }
    if (std::holds_alternative<DateKind>(kind)) return std::holds_alternative<Date>(cell);
    return std::holds_alternative<std::string>(cell);
}

// Tabular data with a designated class attribute. Immutable once built;
// the constructor enforces every structural invariant.
class Dataset {
public:
    // `symbolic_class` marks a nominal class declared as symbolic; it only
    // changes which class-kind feature the dataset activates.
    Dataset(std::string name, std::vector<Attribute> attributes, std::size_t class_index, std::vector<Row> rows,
            bool symbolic_class = false)
        : name_(std::move(name)),
          attributes_(std::move(attributes)),
          class_index_(class_index),
          rows_(std::move(rows)),
          symbolic_class_(symbolic_class) {
        validate();
    }

    const std::string& name() const noexcept { return name_; }
    const std::vector<Attribute>& attributes() const noexcept { return attributes_; }
    const Attribute& attribute(std::size_t i) const { return attributes_.at(i); }
    std::size_t class_index() const noexcept { return class_index_; }
    const Attribute& class_attribute() const { return attributes_[class_index_]; }
    const std::vector<Row>& rows() const noexcept { return rows_; }
    std::size_t row_count() const noexcept { return rows_.size(); }
    std::size_t attribute_count() const noexcept { return attributes_.size(); }
    bool symbolic_class() const noexcept { return symbolic_class_; }

    const Cell& cell(std::size_t row, std::size_t column) const { return rows_[row][column]; }

    // Non-class attribute indices in order.
    std::vector<std::size_t> predictor_columns() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < attributes_.size(); ++i) {
            if (i != class_index_) out.push_back(i);
        }
        return out;
    }

    bool column_all_missing(std::size_t column) const {
        return !rows_.empty() &&
               std::all_of(rows_.begin(), rows_.end(), [&](const Row& r) { return is_missing(r[column]); });
    }

    bool column_has_missing(std::size_t column) const {
        return std::any_of(rows_.begin(), rows_.end(), [&](const Row& r) { return is_missing(r[column]); });
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    void validate() const {
        if (attributes_.empty()) throw SchemaError("dataset '" + name_ + "' has no attributes");
        if (class_index_ >= attributes_.size()) {
            throw SchemaError("class index " + std::to_string(class_index_) + " out of range");
        }
        if (const auto* n = std::get_if<Nominal>(&class_attribute().kind); n != nullptr && n->values.empty()) {
            throw SchemaError("nominal class '" + class_attribute().name + "' declares no values");
        }
        if (symbolic_class_ && !class_attribute().is_nominal()) {
            throw SchemaError("only a nominal class can be declared symbolic");
        }
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const auto& row = rows_[r];
            if (row.size() != attributes_.size()) {
                throw SchemaError("row " + std::to_string(r) + " has " + std::to_string(row.size()) +
                                  " cells, expected " + std::to_string(attributes_.size()));
            }
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (!conforms(row[c], attributes_[c].kind)) {
                    throw SchemaError("row " + std::to_string(r) + ", column '" + attributes_[c].name +
                                      "': value does not conform to " + kind_name(attributes_[c].kind));
                }
            }
        }
    }

    std::string name_;
    std::vector<Attribute> attributes_;
    std::size_t class_index_;
    std::vector<Row> rows_;
    bool symbolic_class_;
};

namespace detail {

inline Feature nominal_arity_feature(std::size_t declared, bool is_class) {
    if (declared == 1) return is_class ? Feature::UnaryClass : Feature::UnaryAttributes;
    if (declared == 2) return is_class ? Feature::BinaryClass : Feature::BinaryAttributes;
    return is_class ? Feature::NominalClass : Feature::NominalAttributes;
}

}  // namespace detail

// Abstraction of a dataset onto the transformed-features.
//
// Class kind (exactly one slot): nominal classes map to UNARY/BINARY/NOMINAL
// by number of declared values (1, 2, 3+), or SYMBOLIC when so declared.
// Attributes follow the same arity rule. A nominal attribute whose cells are
// all missing counts only as EMPTY_NOMINAL_ATTRIBUTES, and its cells do not
// count towards MISSING_VALUES. PREDICTIVE_MODEL is never set.
inline BinaryVector extract_features(const Dataset& d) {
    BinaryVector v;
    const auto& cls = d.class_attribute();
    if (d.symbolic_class()) {
        v.set(Feature::SymbolicClass, 1);
    } else if (const auto* n = std::get_if<Nominal>(&cls.kind)) {
        v.set(detail::nominal_arity_feature(n->values.size(), true), 1);
    } else if (cls.is_numeric()) {
        v.set(Feature::NumericClass, 1);
    } else if (cls.is_date()) {
        v.set(Feature::DateClass, 1);
    } else {
        v.set(Feature::StringClass, 1);
    }
    if (d.column_has_missing(d.class_index())) v.set(Feature::MissingClassValues, 1);

    for (std::size_t c : d.predictor_columns()) {
        const auto& a = d.attribute(c);
        if (const auto* n = std::get_if<Nominal>(&a.kind)) {
            if (n->values.empty() || d.column_all_missing(c)) {
                v.set(Feature::EmptyNominalAttributes, 1);
                continue;
            }
            v.set(detail::nominal_arity_feature(n->values.size(), false), 1);
        } else if (a.is_numeric()) {
            v.set(Feature::NumericAttributes, 1);
        } else if (a.is_date()) {
            v.set(Feature::DateAttributes, 1);
        }
        if (d.column_has_missing(c)) v.set(Feature::MissingValues, 1);
    }
    return v;
}

}  // namespace pipecheck
