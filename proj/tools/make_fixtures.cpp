// Regenerates the fixture datasets under fixtures/. The output is committed;
// rerunning with the same seed reproduces it byte for byte on one toolchain.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "pipecheck/dataset.hpp"
#include "pipecheck/dataset_io.hpp"

using namespace pipecheck;

namespace {

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

// Rounded to 3 decimals so the ARFF text stays short.
double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}
    double normal(double mu, double sigma) { return std::normal_distribution<double>(mu, sigma)(rng); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    std::uint32_t pick(std::size_t n) { return static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)); }
};

Dataset abalone(std::size_t rows) {
    Gen g(1);
    std::vector<Attribute> attrs{{"sex", Nominal{{"M", "F", "I"}}}};
    for (const char* n : {"length", "diameter", "height", "whole_weight", "shucked_weight", "viscera_weight", "shell_weight"}) {
        attrs.push_back({n, Numeric{}});
    }
    attrs.push_back({"rings", Nominal{numbered("r", 26)}});
    std::vector<Row> data;
    for (std::size_t r = 0; r < rows; ++r) {
        double size = g.uniform(0.1, 0.8);
        Row row{Label{g.pick(3)}};
        row.emplace_back(round3(size));
        row.emplace_back(round3(size * 0.8 + g.normal(0, 0.02)));
        row.emplace_back(round3(size * 0.25 + g.normal(0, 0.01)));
        for (double k : {1.6, 0.7, 0.35, 0.45}) row.emplace_back(round3(k * size * size + std::abs(g.normal(0, 0.02))));
        auto rings = static_cast<std::uint32_t>(std::clamp(size * 30.0 + g.normal(0, 2.0), 0.0, 25.0));
        row.emplace_back(Label{rings});
        data.push_back(std::move(row));
    }
    return Dataset("abalone_toy", std::move(attrs), 8, std::move(data));
}

Dataset car(std::size_t rows) {
    Gen g(2);
    std::vector<Attribute> attrs{
        {"buying", Nominal{{"vhigh", "high", "med", "low"}}},  {"maint", Nominal{{"vhigh", "high", "med", "low"}}},
        {"doors", Nominal{{"2", "3", "4", "5more"}}},         {"persons", Nominal{{"2", "4", "more"}}},
        {"lug_boot", Nominal{{"small", "med", "big"}}},       {"safety", Nominal{{"low", "med", "high"}}},
        {"class", Nominal{{"unacc", "acc", "good", "vgood"}}},
    };
    std::vector<Row> data;
    for (std::size_t r = 0; r < rows; ++r) {
        Row row;
        std::uint32_t score = 0;
        for (std::size_t c = 0; c < 6; ++c) {
            auto v = g.pick(attrs[c].labels().size());
            score += v;
            row.emplace_back(Label{v});
        }
        row.emplace_back(Label{std::min<std::uint32_t>(3, score / 4)});
        data.push_back(std::move(row));
    }
    return Dataset("car_toy", std::move(attrs), 6, std::move(data));
}

Dataset convex(std::size_t rows, std::size_t width) {
    Gen g(3);
    std::vector<Attribute> attrs;
    for (const auto& n : numbered("px", width)) attrs.push_back({n, Numeric{}});
    attrs.push_back({"class", Nominal{{"convex", "nonconvex"}}});
    std::vector<Row> data;
    for (std::size_t r = 0; r < rows; ++r) {
        Row row;
        double s = 0;
        for (std::size_t c = 0; c < width; ++c) {
            double x = round3(g.uniform(0, 1));
            s += x;
            row.emplace_back(x);
        }
        row.emplace_back(Label{s > 0.5 * static_cast<double>(width) ? 1u : 0u});
        data.push_back(std::move(row));
    }
    return Dataset("convex_toy", std::move(attrs), width, std::move(data));
}

// Missing values in two numeric columns, always including row 0.
Dataset gcredit(std::size_t rows) {
    Gen g(4);
    std::vector<Attribute> attrs;
    for (const char* n : {"duration", "credit_amount", "installment_rate", "residence_since", "age", "existing_credits",
                          "num_dependents"}) {
        attrs.push_back({n, Numeric{}});
    }
    const std::vector<std::pair<const char*, std::vector<std::string>>> nominal{
        {"checking_status", {"lt0", "0to200", "ge200", "none"}},
        {"credit_history", {"critical", "paid", "delayed", "all_paid", "none"}},
        {"purpose", {"car_new", "car_used", "furniture", "radio_tv", "education", "business"}},
        {"savings_status", {"lt100", "100to500", "500to1000", "ge1000", "unknown"}},
        {"employment", {"unemployed", "lt1", "1to4", "4to7", "ge7"}},
        {"personal_status", {"male_div", "female_div", "male_single", "male_mar"}},
        {"other_parties", {"none", "co_applicant", "guarantor"}},
        {"property_magnitude", {"real_estate", "life_insurance", "car", "unknown"}},
        {"other_payment_plans", {"bank", "stores", "none"}},
        {"housing", {"rent", "own", "free"}},
        {"job", {"unskilled", "skilled", "management", "unemployed"}},
        {"own_telephone", {"none", "yes"}},
        {"foreign_worker", {"yes", "no"}},
    };
    for (const auto& [n, v] : nominal) attrs.push_back({n, Nominal{v}});
    attrs.push_back({"class", Nominal{{"good", "bad"}}});
    std::vector<Row> data;
    for (std::size_t r = 0; r < rows; ++r) {
        Row row;
        double duration = std::round(std::clamp(g.normal(21, 12), 4.0, 72.0));
        double amount = std::round(std::clamp(duration * 150 + g.normal(0, 1500), 250.0, 18000.0));
        row.emplace_back(duration);
        row.emplace_back(amount);
        row.emplace_back(static_cast<double>(1 + g.pick(4)));
        row.emplace_back(static_cast<double>(1 + g.pick(4)));
        row.emplace_back(std::round(std::clamp(g.normal(35, 11), 19.0, 75.0)));
        row.emplace_back(static_cast<double>(1 + g.pick(4)));
        row.emplace_back(static_cast<double>(1 + g.pick(2)));
        if (r == 0 || g.uniform(0, 1) < 0.05) row[1] = Missing{};
        if (r == 0 || g.uniform(0, 1) < 0.05) row[4] = Missing{};
        for (const auto& [n, v] : nominal) row.emplace_back(Label{g.pick(v.size())});
        bool bad = duration > 30 ? g.uniform(0, 1) < 0.5 : g.uniform(0, 1) < 0.2;
        row.emplace_back(Label{bad ? 1u : 0u});
        data.push_back(std::move(row));
    }
    return Dataset("gcredit_toy", std::move(attrs), 20, std::move(data));
}

Dataset wine(std::size_t rows, const std::string& name) {
    Gen g(5);
    std::vector<Attribute> attrs;
    for (const char* n : {"fixed_acidity", "volatile_acidity", "citric_acid", "residual_sugar", "chlorides",
                          "free_sulfur_dioxide", "total_sulfur_dioxide", "density", "pH", "sulphates", "alcohol"}) {
        attrs.push_back({n, Numeric{}});
    }
    attrs.push_back({"quality", Nominal{{"3", "4", "5", "6", "7", "8", "9"}}});
    const double mu[] = {6.9, 0.28, 0.33, 6.4, 0.046, 35, 138, 0.994, 3.19, 0.49, 10.5};
    const double sd[] = {0.84, 0.1, 0.12, 5.1, 0.022, 17, 42, 0.003, 0.15, 0.11, 1.2};
    std::vector<Row> data;
    for (std::size_t r = 0; r < rows; ++r) {
        Row row;
        for (std::size_t c = 0; c < 11; ++c) row.emplace_back(round3(std::max(0.0, g.normal(mu[c], sd[c]))));
        double alcohol = std::get<double>(row[10]);
        auto q = static_cast<std::uint32_t>(std::clamp(std::round((alcohol - 10.5) * 0.8 + 3 + g.normal(0, 0.8)), 0.0, 6.0));
        row.emplace_back(Label{q});
        data.push_back(std::move(row));
    }
    return Dataset(name, std::move(attrs), 11, std::move(data));
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path out = argc > 1 ? argv[1] : "fixtures";
    std::filesystem::create_directories(out);
    const std::vector<Dataset> all{
        abalone(2924), car(1210), convex(2000, 64), gcredit(700), wine(5000, "wineqw_toy"), wine(500, "wineqw_toy_500"),
    };
    for (const auto& d : all) {
        std::ofstream f(out / (d.name() + ".arff"), std::ios::binary);
        f << write_arff(d);
        std::cout << d.name() << ": " << d.row_count() << " rows, " << d.attribute_count() << " attributes\n";
    }
}
