#pragma once

// Built-in executable components. They serve two roles: probe targets for
// knowledge-base induction and the substrate of execution-based validation.
// Every component is a pure function of (hyperparameters, input dataset).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pipecheck/dataset.hpp"
#include "pipecheck/errors.hpp"
#include "pipecheck/feature.hpp"

namespace pipecheck {

enum class ComponentKind { Filter, Predictor };

enum class Category {
    MissingValueHandling,
    DimensionalityReduction,
    OutlierRemoval,
    DataTransformation,
    DataSampling,
    Predictor,
};

inline std::string_view to_string(ComponentKind k) { return k == ComponentKind::Filter ? "filter" : "predictor"; }

inline std::string_view to_string(Category c) {
    switch (c) {
        case Category::MissingValueHandling: return "missing-value-handling";
        case Category::DimensionalityReduction: return "dimensionality-reduction";
        case Category::OutlierRemoval: return "outlier-removal";
        case Category::DataTransformation: return "data-transformation";
        case Category::DataSampling: return "data-sampling";
        case Category::Predictor: return "predictor";
    }
    return "?";
}

using Hyperparameters = std::map<std::string, double>;

struct ComponentDescriptor {
    std::string id;
    ComponentKind kind;
    Category category;
    Hyperparameters hyperparameters;  // defaults

    bool is_predictor() const noexcept { return kind == ComponentKind::Predictor; }

    friend bool operator==(const ComponentDescriptor&, const ComponentDescriptor&) = default;
};

struct PredictiveModel {
    std::string component_id;
    std::vector<double> parameters;
    BinaryVector training_features;

    friend bool operator==(const PredictiveModel&, const PredictiveModel&) = default;
};

struct ExecutionError {
    enum class Kind { IncompatibleData, Degenerate };
    Kind kind;
    std::string reason;

    std::string describe() const {
        return std::string(kind == Kind::IncompatibleData ? "IncompatibleData" : "Degenerate") + "(" + reason + ")";
    }

    friend bool operator==(const ExecutionError&, const ExecutionError&) = default;
};

using ExecutionResult = std::variant<Dataset, PredictiveModel, ExecutionError>;

inline bool succeeded(const ExecutionResult& r) noexcept { return !std::holds_alternative<ExecutionError>(r); }

// The eleven built-ins, in a fixed order.
inline const std::vector<ComponentDescriptor>& registry() {
    static const std::vector<ComponentDescriptor> kRegistry = {
        {"ReplaceMissingValues", ComponentKind::Filter, Category::MissingValueHandling, {}},
        {"PeriodicSampling", ComponentKind::Filter, Category::DataSampling, {{"k", 2}}},
        {"NumericToNominal", ComponentKind::Filter, Category::DataTransformation, {{"bins", 10}}},
        {"NominalToNumeric", ComponentKind::Filter, Category::DataTransformation, {}},
        {"PrincipalComponents", ComponentKind::Filter, Category::DimensionalityReduction, {{"variance_covered", 0.95}}},
        {"RemoveUseless", ComponentKind::Filter, Category::DataTransformation, {}},
        {"IQROutlierRemoval", ComponentKind::Filter, Category::OutlierRemoval, {{"factor", 1.5}}},
        {"LinearRegressor", ComponentKind::Predictor, Category::Predictor, {}},
        {"NaiveBayesNominal", ComponentKind::Predictor, Category::Predictor, {{"laplace", 1}}},
        {"MajorityClassifier", ComponentKind::Predictor, Category::Predictor, {}},
        {"DecisionStump", ComponentKind::Predictor, Category::Predictor, {}},
    };
    return kRegistry;
}

inline const ComponentDescriptor* find_component(std::string_view id) {
    const auto& r = registry();
    auto it = std::find_if(r.begin(), r.end(), [&](const ComponentDescriptor& c) { return c.id == id; });
    return it == r.end() ? nullptr : &*it;
}

inline const ComponentDescriptor& lookup(std::string_view id) {
    if (const auto* c = find_component(id)) return *c;
    throw NotFound("no component named '" + std::string(id) + "'");
}

// Defaults overlaid with `overrides`. Throws std::invalid_argument on an
// unknown name or an out-of-range value.
inline Hyperparameters resolve_hyperparameters(const ComponentDescriptor& c, const Hyperparameters& overrides) {
    Hyperparameters out = c.hyperparameters;
    for (const auto& [name, value] : overrides) {
        auto it = out.find(name);
        if (it == out.end()) throw std::invalid_argument(c.id + " has no hyperparameter '" + name + "'");
        it->second = value;
    }
    auto require = [&](const char* name, bool ok, const char* rule) {
        if (!ok) throw std::invalid_argument(c.id + "." + name + " must be " + rule);
    };
    auto integral = [](double x) { return std::isfinite(x) && std::floor(x) == x; };
    if (auto it = out.find("k"); it != out.end()) require("k", integral(it->second) && it->second >= 1, "an integer >= 1");
    if (auto it = out.find("bins"); it != out.end()) {
        require("bins", integral(it->second) && it->second >= 3 && it->second <= 1000, "an integer in [3, 1000]");
    }
    if (auto it = out.find("variance_covered"); it != out.end()) {
        require("variance_covered", it->second > 0 && it->second <= 1, "in (0, 1]");
    }
    if (auto it = out.find("factor"); it != out.end()) require("factor", it->second > 0, "positive");
    if (auto it = out.find("laplace"); it != out.end()) require("laplace", it->second >= 0, "non-negative");
    return out;
}

namespace detail {

struct Reject {
    ExecutionError error;
};

[[noreturn]] inline void incompatible(std::string reason) {
    throw Reject{{ExecutionError::Kind::IncompatibleData, std::move(reason)}};
}

[[noreturn]] inline void degenerate(std::string reason) {
    throw Reject{{ExecutionError::Kind::Degenerate, std::move(reason)}};
}

inline bool nominal_is_empty(const Dataset& d, std::size_t c) {
    return d.attribute(c).labels().empty() || d.column_all_missing(c);
}

inline void reject_date_and_string(const Dataset& d) {
    for (std::size_t c : d.predictor_columns()) {
        const auto& a = d.attribute(c);
        if (a.is_date()) incompatible("date attribute '" + a.name + "'");
        if (a.is_string()) incompatible("string attribute '" + a.name + "'");
    }
}

inline void reject_missing_attribute_values(const Dataset& d) {
    for (std::size_t c : d.predictor_columns()) {
        if (d.column_has_missing(c)) incompatible("missing values in attribute '" + d.attribute(c).name + "'");
    }
}

inline void reject_missing_class_values(const Dataset& d) {
    if (d.column_has_missing(d.class_index())) incompatible("missing class values");
}

inline void require_numeric_attributes(const Dataset& d) {
    for (std::size_t c : d.predictor_columns()) {
        const auto& a = d.attribute(c);
        if (!a.is_numeric()) incompatible(kind_name(a.kind) + " attribute '" + a.name + "'");
    }
}

// Binary or multi-valued nominal class, not symbolic.
inline void require_classification_class(const Dataset& d, bool allow_unary) {
    const auto& cls = d.class_attribute();
    if (!cls.is_nominal()) incompatible("class not nominal");
    if (d.symbolic_class()) incompatible("symbolic class");
    if (!allow_unary && cls.labels().size() < 2) incompatible("unary class");
}

inline double numeric(const Dataset& d, std::size_t r, std::size_t c) { return std::get<double>(d.cell(r, c)); }

inline Dataset with_rows(const Dataset& d, std::vector<Row> rows) {
    return Dataset(d.name(), d.attributes(), d.class_index(), std::move(rows), d.symbolic_class());
}

inline std::vector<double> class_counts(const Dataset& d) {
    std::vector<double> counts(d.class_attribute().labels().size(), 0.0);
    for (const auto& row : d.rows()) {
        if (const auto* l = std::get_if<Label>(&row[d.class_index()])) counts[l->index] += 1;
    }
    return counts;
}

inline std::size_t argmax(const std::vector<double>& v) {
    return v.empty() ? 0 : static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Linear-interpolated quantile of sorted data.
inline double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0;
    double pos = q * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// --- filters --------------------------------------------------------------

inline Dataset replace_missing_values(const Dataset& d) {
    std::vector<Row> rows = d.rows();
    for (std::size_t c : d.predictor_columns()) {
        const auto& a = d.attribute(c);
        if (!d.column_has_missing(c)) continue;
        Cell fill;
        if (a.is_numeric()) {
            double sum = 0;
            std::size_t n = 0;
            for (const auto& row : d.rows()) {
                if (const auto* x = std::get_if<double>(&row[c])) sum += *x, ++n;
            }
            fill = n == 0 ? 0.0 : sum / static_cast<double>(n);
        } else if (a.is_nominal()) {
            if (nominal_is_empty(d, c)) continue;
            std::vector<double> counts(a.labels().size(), 0.0);
            for (const auto& row : d.rows()) {
                if (const auto* l = std::get_if<Label>(&row[c])) counts[l->index] += 1;
            }
            fill = Label{static_cast<std::uint32_t>(argmax(counts))};
        } else {
            continue;  // date and string columns are left as they are
        }
        for (auto& row : rows) {
            if (is_missing(row[c])) row[c] = fill;
        }
    }
    return with_rows(d, std::move(rows));
}

inline Dataset periodic_sampling(const Dataset& d, std::size_t k) {
    std::vector<Row> rows;
    for (std::size_t r = 0; r < d.row_count(); r += k) rows.push_back(d.rows()[r]);
    return with_rows(d, std::move(rows));
}

inline Dataset numeric_to_nominal(const Dataset& d, std::size_t bins) {
    reject_date_and_string(d);
    std::vector<std::string> labels;
    for (std::size_t b = 0; b < bins; ++b) labels.push_back("b" + std::to_string(b));
    std::vector<Attribute> attrs = d.attributes();
    std::vector<Row> rows = d.rows();
    for (std::size_t c : d.predictor_columns()) {
        if (!attrs[c].is_numeric()) continue;
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& row : d.rows()) {
            if (const auto* x = std::get_if<double>(&row[c])) lo = std::min(lo, *x), hi = std::max(hi, *x);
        }
        double width = (hi - lo) / static_cast<double>(bins);
        for (auto& row : rows) {
            if (is_missing(row[c])) continue;
            double x = std::get<double>(row[c]);
            std::size_t b = width > 0 ? static_cast<std::size_t>(std::floor((x - lo) / width)) : 0;
            row[c] = Label{static_cast<std::uint32_t>(std::min(b, bins - 1))};
        }
        attrs[c].kind = Nominal{labels};
    }
    return Dataset(d.name(), std::move(attrs), d.class_index(), std::move(rows), d.symbolic_class());
}

inline Dataset nominal_to_numeric(const Dataset& d) {
    reject_date_and_string(d);
    std::vector<Attribute> attrs = d.attributes();
    std::vector<Row> rows = d.rows();
    for (std::size_t c : d.predictor_columns()) {
        if (!attrs[c].is_nominal()) continue;
        if (nominal_is_empty(d, c)) incompatible("empty nominal attribute '" + attrs[c].name + "'");
        for (auto& row : rows) {
            if (const auto* l = std::get_if<Label>(&row[c])) row[c] = static_cast<double>(l->index);
        }
        attrs[c].kind = Numeric{};
    }
    return Dataset(d.name(), std::move(attrs), d.class_index(), std::move(rows), d.symbolic_class());
}

inline Dataset principal_components(const Dataset& d, double variance_covered) {
    reject_date_and_string(d);
    require_numeric_attributes(d);
    reject_missing_attribute_values(d);
    const auto cols = d.predictor_columns();
    const auto n = static_cast<Eigen::Index>(d.row_count());
    const auto p = static_cast<Eigen::Index>(cols.size());
    if (n < 2) degenerate("principal components need at least 2 rows");

    Eigen::MatrixXd x(n, p);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index j = 0; j < p; ++j) x(r, j) = numeric(d, static_cast<std::size_t>(r), cols[j]);
    }
    Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;

    Eigen::Index keep = 0;
    Eigen::MatrixXd projected(n, 0);
    if (p > 0) {
        Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
        Eigen::VectorXd values = eig.eigenvalues().reverse().cwiseMax(0.0);
        Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();
        double total = values.sum();
        double acc = 0;
        keep = 1;
        if (total > 0) {
            for (keep = 0; keep < p;) {
                acc += values(keep++);
                if (acc >= variance_covered * total - 1e-12) break;
            }
        }
        projected = x * vectors.leftCols(keep);
    }

    std::vector<Attribute> attrs;
    for (Eigen::Index j = 0; j < keep; ++j) attrs.push_back({"pc" + std::to_string(j + 1), Numeric{}});
    attrs.push_back(d.class_attribute());
    std::vector<Row> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index r = 0; r < n; ++r) {
        Row row;
        row.reserve(static_cast<std::size_t>(keep) + 1);
        for (Eigen::Index j = 0; j < keep; ++j) row.emplace_back(projected(r, j));
        row.push_back(d.cell(static_cast<std::size_t>(r), d.class_index()));
        rows.push_back(std::move(row));
    }
    return Dataset(d.name(), std::move(attrs), static_cast<std::size_t>(keep), std::move(rows), d.symbolic_class());
}

inline Dataset remove_useless(const Dataset& d) {
    reject_date_and_string(d);
    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < d.attribute_count(); ++c) {
        const auto& a = d.attribute(c);
        bool useless = c != d.class_index() && a.is_nominal() && (a.labels().size() == 1 || nominal_is_empty(d, c));
        if (!useless) kept.push_back(c);
    }
    std::vector<Attribute> attrs;
    std::size_t class_index = 0;
    for (std::size_t c : kept) {
        if (c == d.class_index()) class_index = attrs.size();
        attrs.push_back(d.attribute(c));
    }
    std::vector<Row> rows;
    rows.reserve(d.row_count());
    for (const auto& row : d.rows()) {
        Row out;
        out.reserve(kept.size());
        for (std::size_t c : kept) out.push_back(row[c]);
        rows.push_back(std::move(out));
    }
    return Dataset(d.name(), std::move(attrs), class_index, std::move(rows), d.symbolic_class());
}

inline Dataset iqr_outlier_removal(const Dataset& d, double factor) {
    reject_date_and_string(d);
    reject_missing_attribute_values(d);
    reject_missing_class_values(d);
    std::vector<bool> keep(d.row_count(), true);
    for (std::size_t c : d.predictor_columns()) {
        if (!d.attribute(c).is_numeric()) continue;
        std::vector<double> v;
        v.reserve(d.row_count());
        for (std::size_t r = 0; r < d.row_count(); ++r) v.push_back(numeric(d, r, c));
        std::sort(v.begin(), v.end());
        double q1 = quantile(v, 0.25), q3 = quantile(v, 0.75);
        double lo = q1 - factor * (q3 - q1), hi = q3 + factor * (q3 - q1);
        for (std::size_t r = 0; r < d.row_count(); ++r) {
            double x = numeric(d, r, c);
            if (x < lo || x > hi) keep[r] = false;
        }
    }
    std::vector<Row> rows;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        if (keep[r]) rows.push_back(d.rows()[r]);
    }
    return with_rows(d, std::move(rows));
}

// --- predictors -----------------------------------------------------------

// Least squares with intercept; column-pivoting QR tolerates rank deficiency.
inline std::vector<double> linear_regression(const Dataset& d) {
    if (!d.class_attribute().is_numeric()) incompatible("class not numeric");
    reject_missing_class_values(d);
    reject_date_and_string(d);
    require_numeric_attributes(d);
    reject_missing_attribute_values(d);
    if (d.row_count() == 0) degenerate("no training rows");
    const auto cols = d.predictor_columns();
    const auto n = static_cast<Eigen::Index>(d.row_count());
    const auto p = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd x(n, p + 1);
    Eigen::VectorXd y(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        auto row = static_cast<std::size_t>(r);
        x(r, 0) = 1.0;
        for (Eigen::Index j = 0; j < p; ++j) x(r, j + 1) = numeric(d, row, cols[j]);
        y(r) = numeric(d, row, d.class_index());
    }
    Eigen::VectorXd beta = x.colPivHouseholderQr().solve(y);
    if (!beta.allFinite()) degenerate("least-squares solution is not finite");
    return {beta.data(), beta.data() + beta.size()};
}

inline std::vector<double> naive_bayes(const Dataset& d, double laplace) {
    require_classification_class(d, false);
    reject_date_and_string(d);
    for (std::size_t c : d.predictor_columns()) {
        const auto& a = d.attribute(c);
        if (!a.is_nominal()) incompatible(kind_name(a.kind) + " attribute '" + a.name + "'");
    }
    const std::size_t k = d.class_attribute().labels().size();
    std::vector<double> counts = class_counts(d);
    double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    std::vector<double> params;
    for (double cnt : counts) params.push_back(std::log((cnt + laplace) / (total + laplace * static_cast<double>(k))));
    for (std::size_t c : d.predictor_columns()) {
        const std::size_t m = d.attribute(c).labels().size();
        std::vector<double> joint(k * m, 0.0);
        for (const auto& row : d.rows()) {
            const auto* cl = std::get_if<Label>(&row[d.class_index()]);
            const auto* v = std::get_if<Label>(&row[c]);
            if (cl != nullptr && v != nullptr) joint[cl->index * m + v->index] += 1;
        }
        for (std::size_t ci = 0; ci < k; ++ci) {
            double row_total = 0;
            for (std::size_t vi = 0; vi < m; ++vi) row_total += joint[ci * m + vi];
            for (std::size_t vi = 0; vi < m; ++vi) {
                double denom = row_total + laplace * static_cast<double>(m);
                params.push_back(denom > 0 ? std::log((joint[ci * m + vi] + laplace) / denom) : 0.0);
            }
        }
    }
    return params;
}

inline std::vector<double> majority_class(const Dataset& d) {
    require_classification_class(d, true);
    auto counts = class_counts(d);
    return {static_cast<double>(argmax(counts))};
}

// One-level tree: best single split by misclassified-row count.
// Parameters: {column, split value, is_numeric, left class, right class}.
inline std::vector<double> decision_stump(const Dataset& d) {
    require_classification_class(d, false);
    reject_missing_class_values(d);
    reject_date_and_string(d);
    reject_missing_attribute_values(d);
    const std::size_t k = d.class_attribute().labels().size();
    const std::size_t n = d.row_count();
    auto label = [&](std::size_t r) { return std::get<Label>(d.cell(r, d.class_index())).index; };
    auto majority_of = [&](const std::vector<double>& cnt) {
        std::size_t best = argmax(cnt);
        return std::pair{best, std::accumulate(cnt.begin(), cnt.end(), 0.0) - (cnt.empty() ? 0.0 : cnt[best])};
    };
    std::vector<double> all(k, 0.0);
    for (std::size_t r = 0; r < n; ++r) all[label(r)] += 1;
    auto [fallback, best_err] = majority_of(all);
    std::vector<double> best = {-1, 0, 0, static_cast<double>(fallback), static_cast<double>(fallback)};

    for (std::size_t c : d.predictor_columns()) {
        const auto& a = d.attribute(c);
        if (a.is_numeric()) {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](auto x, auto y) { return numeric(d, x, c) < numeric(d, y, c); });
            std::vector<double> left(k, 0.0), right = all;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                left[label(order[i])] += 1;
                right[label(order[i])] -= 1;
                double v = numeric(d, order[i], c), next = numeric(d, order[i + 1], c);
                if (v == next) continue;
                auto [lc, le] = majority_of(left);
                auto [rc, re] = majority_of(right);
                if (le + re < best_err) {
                    best_err = le + re;
                    best = {static_cast<double>(c), (v + next) / 2, 1, static_cast<double>(lc), static_cast<double>(rc)};
                }
            }
        } else {
            const std::size_t m = a.labels().size();
            std::vector<double> joint(m * k, 0.0);
            for (std::size_t r = 0; r < n; ++r) joint[std::get<Label>(d.cell(r, c)).index * k + label(r)] += 1;
            for (std::size_t v = 0; v < m; ++v) {
                std::vector<double> in(joint.begin() + static_cast<std::ptrdiff_t>(v * k),
                                       joint.begin() + static_cast<std::ptrdiff_t>((v + 1) * k));
                std::vector<double> out(k);
                for (std::size_t ci = 0; ci < k; ++ci) out[ci] = all[ci] - in[ci];
                auto [lc, le] = majority_of(in);
                auto [rc, re] = majority_of(out);
                if (le + re < best_err) {
                    best_err = le + re;
                    best = {static_cast<double>(c), static_cast<double>(v), 0, static_cast<double>(lc),
                            static_cast<double>(rc)};
                }
            }
        }
    }
    return best;
}

}  // namespace detail

// Runs one component. Data the component cannot handle yields an
// ExecutionError value; invalid hyperparameters throw std::invalid_argument.
inline ExecutionResult execute_component(const ComponentDescriptor& c, const Dataset& d,
                                         const Hyperparameters& overrides = {}) {
    const Hyperparameters hp = resolve_hyperparameters(c, overrides);
    try {
        const std::string& id = c.id;
        if (id == "ReplaceMissingValues") return detail::replace_missing_values(d);
        if (id == "PeriodicSampling") return detail::periodic_sampling(d, static_cast<std::size_t>(hp.at("k")));
        if (id == "NumericToNominal") return detail::numeric_to_nominal(d, static_cast<std::size_t>(hp.at("bins")));
        if (id == "NominalToNumeric") return detail::nominal_to_numeric(d);
        if (id == "PrincipalComponents") return detail::principal_components(d, hp.at("variance_covered"));
        if (id == "RemoveUseless") return detail::remove_useless(d);
        if (id == "IQROutlierRemoval") return detail::iqr_outlier_removal(d, hp.at("factor"));

        std::vector<double> params;
        if (id == "LinearRegressor") {
            params = detail::linear_regression(d);
        } else if (id == "NaiveBayesNominal") {
            params = detail::naive_bayes(d, hp.at("laplace"));
        } else if (id == "MajorityClassifier") {
            params = detail::majority_class(d);
        } else if (id == "DecisionStump") {
            params = detail::decision_stump(d);
        } else {
            throw NotFound("no implementation for component '" + id + "'");
        }
        return PredictiveModel{id, std::move(params), extract_features(d)};
    } catch (const detail::Reject& r) {
        return r.error;
    }
}

}  // namespace pipecheck
