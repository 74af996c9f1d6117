#pragma once

// Dataset readers and writers.
//
// ARFF subset: `@relation`, `@attribute name {v1,v2}|numeric|real|integer|
// date ["fmt"]|string`, `@data`, `?` for missing, `%` comments. The last
// attribute is the class unless a `%class: <name>` comment names another;
// a `%symbolic-class` comment marks a nominal class as symbolic.
//
// CSV with schema: a header row of attribute names plus a JSON sidecar
// `{"relation": ..., "attributes": [{"name": ..., "type": "numeric" |
// "nominal" | "date" | "string", "values": [...]}], "class": ...,
// "symbolic_class": false}`.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "pipecheck/dataset.hpp"
#include "pipecheck/errors.hpp"

namespace pipecheck {

enum class DatasetFormat { Arff, CsvWithSchema };

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

inline std::string unquote(std::string_view s) {
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
        std::string out;
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            if (s[i] == '\\' && i + 2 < s.size()) ++i;
            out += s[i];
        }
        return out;
    }
    return std::string(s);
}

// Splits on `sep` outside single or double quotes; pieces are trimmed but
// keep their quotes.
inline std::vector<std::string_view> split_quoted(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    char quote = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (quote != 0) {
            if (c == '\\') {
                ++i;
            } else if (c == quote) {
                quote = 0;
            }
        } else if (c == '\'' || c == '"') {
            quote = c;
        } else if (c == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) noexcept {
    y -= m <= 2 ? 1 : 0;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

constexpr void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) noexcept {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<std::int64_t>(yoe) + era * 400 + (m <= 2 ? 1 : 0);
}

}  // namespace detail

// Accepts `yyyy-MM-dd`, optionally followed by `T` or a space and `HH:mm:ss`.
inline std::optional<Date> parse_date(std::string_view text) {
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    auto digits = [&](std::size_t pos, std::size_t n, auto& out) {
        if (pos + n > text.size()) return false;
        auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + n, out);
        return ec == std::errc{} && p == text.data() + pos + n;
    };
    if (text.size() != 10 && text.size() != 19) return std::nullopt;
    if (!digits(0, 4, y) || text[4] != '-' || !digits(5, 2, mo) || text[7] != '-' || !digits(8, 2, d)) {
        return std::nullopt;
    }
    if (text.size() == 19) {
        if ((text[10] != 'T' && text[10] != ' ') || !digits(11, 2, h) || text[13] != ':' || !digits(14, 2, mi) ||
            text[16] != ':' || !digits(17, 2, s)) {
            return std::nullopt;
        }
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 59) return std::nullopt;
    return Date{detail::days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s};
}

inline std::string format_date(Date date) {
    std::int64_t days = date.seconds >= 0 ? date.seconds / 86400 : -((-date.seconds + 86399) / 86400);
    std::int64_t rem = date.seconds - days * 86400;
    std::int64_t y = 0;
    unsigned m = 0, d = 0;
    detail::civil_from_days(days, y, m, d);
    char buf[96];
    if (rem == 0) {
        std::snprintf(buf, sizeof buf, "%04lld-%02u-%02u", static_cast<long long>(y), m, d);
    } else {
        std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld", static_cast<long long>(y), m, d,
                      static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                      static_cast<long long>(rem % 60));
    }
    return buf;
}

inline std::string format_number(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

namespace detail {

// Converts one textual cell; throws SchemaError naming row and column.
inline Cell parse_cell(std::string_view raw, const Attribute& attr, std::size_t row, std::size_t line) {
    std::string_view t = trim(raw);
    if (t == "?") return Missing{};
    auto fail = [&](const std::string& why) -> Cell {
        throw SchemaError("line " + std::to_string(line) + ", row " + std::to_string(row) + ", column '" +
                          attr.name + "': " + why);
    };
    if (attr.is_numeric()) {
        double x = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
        if (ec != std::errc{} || p != t.data() + t.size()) return fail("'" + std::string(t) + "' is not numeric");
        return x;
    }
    std::string v = unquote(t);
    if (attr.is_nominal()) {
        const auto& labels = attr.labels();
        auto it = std::find(labels.begin(), labels.end(), v);
        if (it == labels.end()) return fail("'" + v + "' is not a declared value");
        return Label{static_cast<std::uint32_t>(it - labels.begin())};
    }
    if (attr.is_date()) {
        auto d = parse_date(v);
        if (!d) return fail("'" + v + "' is not a date");
        return *d;
    }
    return v;
}

inline bool needs_quotes(std::string_view s) {
    return s.empty() ||
           s.find_first_of(" ,'\"{}%\t") != std::string_view::npos || s == "?";
}

inline std::string quote_if_needed(std::string_view s) {
    if (!needs_quotes(s)) return std::string(s);
    std::string out = "'";
    for (char c : s) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    return out + "'";
}

inline std::string cell_text(const Cell& c, const Attribute& a) {
    if (is_missing(c)) return "?";
    if (const auto* x = std::get_if<double>(&c)) return format_number(*x);
    if (const auto* l = std::get_if<Label>(&c)) return quote_if_needed(a.labels()[l->index]);
    if (const auto* d = std::get_if<Date>(&c)) return format_date(*d);
    return quote_if_needed(std::get<std::string>(c));
}

}  // namespace detail

inline Dataset parse_arff(std::string_view text, std::string fallback_name = "dataset") {
    std::string relation = std::move(fallback_name);
    std::vector<Attribute> attributes;
    std::optional<std::string> class_name;
    bool symbolic = false;
    std::vector<Row> rows;
    bool in_data = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = detail::trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (line.front() == '%') {
            std::string_view body = detail::trim(line.substr(1));
            if (detail::lower(body.substr(0, 6)) == "class:") class_name = detail::unquote(detail::trim(body.substr(6)));
            if (detail::lower(body) == "symbolic-class") symbolic = true;
            continue;
        }
        if (in_data) {
            auto cells = detail::split_quoted(line, ',');
            if (cells.size() != attributes.size()) {
                throw ParseError("expected " + std::to_string(attributes.size()) + " values, found " +
                                     std::to_string(cells.size()),
                                 line_no);
            }
            Row row;
            row.reserve(cells.size());
            for (std::size_t c = 0; c < cells.size(); ++c) {
                row.push_back(detail::parse_cell(cells[c], attributes[c], rows.size(), line_no));
            }
            rows.push_back(std::move(row));
            continue;
        }
        if (line.front() != '@') throw ParseError("unexpected text before @data", line_no);
        std::size_t ws = line.find_first_of(" \t");
        std::string keyword = detail::lower(line.substr(0, ws));
        std::string_view rest = ws == std::string_view::npos ? std::string_view{} : detail::trim(line.substr(ws));
        if (keyword == "@relation") {
            if (rest.empty()) throw ParseError("@relation needs a name", line_no);
            relation = detail::unquote(rest);
        } else if (keyword == "@data") {
            if (attributes.empty()) throw ParseError("@data before any @attribute", line_no);
            in_data = true;
        } else if (keyword == "@attribute") {
            std::string name;
            std::string_view type;
            if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
                std::size_t close = rest.find(rest.front(), 1);
                if (close == std::string_view::npos) throw ParseError("unterminated attribute name", line_no);
                name = std::string(rest.substr(1, close - 1));
                type = detail::trim(rest.substr(close + 1));
            } else {
                std::size_t sp = rest.find_first_of(" \t{");
                if (sp == std::string_view::npos) throw ParseError("@attribute needs a name and a type", line_no);
                name = std::string(rest.substr(0, sp));
                type = detail::trim(rest.substr(sp));
            }
            if (name.empty() || type.empty()) throw ParseError("@attribute needs a name and a type", line_no);
            AttributeKind kind;
            if (type.front() == '{') {
                if (type.back() != '}') throw ParseError("unterminated nominal value list", line_no);
                Nominal n;
                std::string_view inner = detail::trim(type.substr(1, type.size() - 2));
                if (!inner.empty()) {
                    for (auto v : detail::split_quoted(inner, ',')) {
                        std::string value = detail::unquote(v);
                        if (std::find(n.values.begin(), n.values.end(), value) != n.values.end()) {
                            throw ParseError("duplicate nominal value '" + value + "'", line_no);
                        }
                        n.values.push_back(std::move(value));
                    }
                }
                kind = std::move(n);
            } else {
                std::string t = detail::lower(type.substr(0, type.find_first_of(" \t")));
                if (t == "numeric" || t == "real" || t == "integer") {
                    kind = Numeric{};
                } else if (t == "date") {
                    kind = DateKind{};
                } else if (t == "string") {
                    kind = StringKind{};
                } else {
                    throw ParseError("unsupported attribute type '" + std::string(type) + "'", line_no);
                }
            }
            for (const auto& a : attributes) {
                if (a.name == name) throw ParseError("duplicate attribute '" + name + "'", line_no);
            }
            attributes.push_back({std::move(name), std::move(kind)});
        } else {
            throw ParseError("unknown directive '" + keyword + "'", line_no);
        }
    }
    if (!in_data) throw ParseError("missing @data section", line_no);

    std::size_t class_index = attributes.size() - 1;
    if (class_name) {
        auto it = std::find_if(attributes.begin(), attributes.end(), [&](const Attribute& a) { return a.name == *class_name; });
        if (it == attributes.end()) throw SchemaError("class attribute '" + *class_name + "' is not declared");
        class_index = static_cast<std::size_t>(it - attributes.begin());
    }
    return Dataset(std::move(relation), std::move(attributes), class_index, std::move(rows), symbolic);
}

inline std::string write_arff(const Dataset& d) {
    std::ostringstream out;
    out << "@relation " << detail::quote_if_needed(d.name()) << "\n";
    if (d.class_index() + 1 != d.attribute_count()) out << "%class: " << d.class_attribute().name << "\n";
    if (d.symbolic_class()) out << "%symbolic-class\n";
    out << "\n";
    for (const auto& a : d.attributes()) {
        out << "@attribute " << detail::quote_if_needed(a.name) << ' ';
        if (a.is_nominal()) {
            out << '{';
            const auto& labels = a.labels();
            for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? "," : "") << detail::quote_if_needed(labels[i]);
            out << '}';
        } else {
            out << kind_name(a.kind);
        }
        out << "\n";
    }
    out << "\n@data\n";
    for (const auto& row : d.rows()) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << detail::cell_text(row[c], d.attribute(c));
        }
        out << "\n";
    }
    return out.str();
}

inline Dataset parse_csv_with_schema(std::string_view csv, const nlohmann::json& schema,
                                     std::string fallback_name = "dataset") {
    auto bad = [](const std::string& path, const std::string& why) { return DeserializeError("schema" + path, why); };
    if (!schema.is_object()) throw bad("", "expected an object");
    std::string relation = schema.value("relation", fallback_name);
    const auto it = schema.find("attributes");
    if (it == schema.end() || !it->is_array() || it->empty()) throw bad("/attributes", "expected a non-empty array");
    std::vector<Attribute> attributes;
    for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& a = (*it)[i];
        std::string path = "/attributes/" + std::to_string(i);
        if (!a.is_object() || !a.contains("name") || !a["name"].is_string() || !a.contains("type") ||
            !a["type"].is_string()) {
            throw bad(path, "expected {\"name\": string, \"type\": string}");
        }
        std::string type = a["type"];
        AttributeKind kind;
        if (type == "numeric") {
            kind = Numeric{};
        } else if (type == "date") {
            kind = DateKind{};
        } else if (type == "string") {
            kind = StringKind{};
        } else if (type == "nominal") {
            if (!a.contains("values") || !a["values"].is_array()) throw bad(path + "/values", "expected an array");
            Nominal n;
            for (const auto& v : a["values"]) {
                if (!v.is_string()) throw bad(path + "/values", "expected strings");
                n.values.push_back(v.get<std::string>());
            }
            kind = std::move(n);
        } else {
            throw bad(path + "/type", "unknown type '" + type + "'");
        }
        attributes.push_back({a["name"].get<std::string>(), std::move(kind)});
    }
    std::size_t class_index = attributes.size() - 1;
    if (schema.contains("class")) {
        if (!schema["class"].is_string()) throw bad("/class", "expected a string");
        std::string name = schema["class"];
        auto c = std::find_if(attributes.begin(), attributes.end(), [&](const Attribute& a) { return a.name == name; });
        if (c == attributes.end()) throw SchemaError("class attribute '" + name + "' is not declared");
        class_index = static_cast<std::size_t>(c - attributes.begin());
    }
    bool symbolic = schema.value("symbolic_class", false);

    std::vector<Row> rows;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool header_seen = false;
    while (pos <= csv.size()) {
        std::size_t end = csv.find('\n', pos);
        if (end == std::string_view::npos) end = csv.size();
        std::string_view line = detail::trim(csv.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        auto cells = detail::split_quoted(line, ',');
        if (!header_seen) {
            if (cells.size() != attributes.size()) throw ParseError("header does not match schema", line_no);
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (detail::unquote(cells[c]) != attributes[c].name) {
                    throw ParseError("header column '" + detail::unquote(cells[c]) + "' does not match schema '" +
                                         attributes[c].name + "'",
                                     line_no);
                }
            }
            header_seen = true;
            continue;
        }
        if (cells.size() != attributes.size()) {
            throw ParseError("expected " + std::to_string(attributes.size()) + " values, found " +
                                 std::to_string(cells.size()),
                             line_no);
        }
        Row row;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            row.push_back(detail::parse_cell(cells[c], attributes[c], rows.size(), line_no));
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError("missing header row", line_no);
    return Dataset(std::move(relation), std::move(attributes), class_index, std::move(rows), symbolic);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw NotFound("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// For CSV the schema is read from `<stem>.schema.json` next to the file.
inline Dataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
    std::string text = read_file(path);
    std::string stem = path.stem().string();
    if (format == DatasetFormat::Arff) return parse_arff(text, stem);
    auto schema_path = path;
    schema_path.replace_filename(stem + ".schema.json");
    nlohmann::json schema;
    try {
        schema = nlohmann::json::parse(read_file(schema_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(schema_path.string() + ": " + e.what());
    }
    return parse_csv_with_schema(text, schema, stem);
}

// Picks the format from the extension: `.csv` is CSV with schema, anything
// else is ARFF.
inline Dataset load_dataset(const std::filesystem::path& path) {
    return load_dataset(path, detail::lower(path.extension().string()) == ".csv" ? DatasetFormat::CsvWithSchema
                                                                                   : DatasetFormat::Arff);
}

}  // namespace pipecheck
