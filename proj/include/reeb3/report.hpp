#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "reeb3/errors.hpp"

namespace reeb3 {

/// Minimal JSON tree with insertion-ordered objects. Numbers are printed
/// with 17 significant digits so every double round-trips exactly.
class Json {
public:
    using Array = std::vector<Json>;
    using Object = std::vector<std::pair<std::string, Json>>;

    Json() : value_(nullptr) {}
    Json(std::nullptr_t) : value_(nullptr) {}
    Json(bool b) : value_(b) {}
    Json(int v) : value_(std::int64_t(v)) {}
    Json(std::int64_t v) : value_(v) {}
    Json(double v) : value_(v) {}
    Json(const char* s) : value_(std::string(s)) {}
    Json(std::string s) : value_(std::move(s)) {}
    Json(Array a) : value_(std::move(a)) {}

    static Json object() {
        Json j;
        j.value_ = Object{};
        return j;
    }

    Json& set(const std::string& key, Json v) {
        auto& obj = std::get<Object>(value_);
        obj.emplace_back(key, std::move(v));
        return *this;
    }

    void push(Json v) { std::get<Array>(value_).push_back(std::move(v)); }

    std::string dump(int indent = 2) const {
        std::string out;
        write(out, indent, 0);
        return out;
    }

private:
    static std::string format_double(double v) {
        if (std::isnan(v)) return "null";
        if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    static void escape(std::string& out, const std::string& s) {
        out += '"';
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                case '\r': out += "\\r"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof buf, "\\u%04x", c);
                        out += buf;
                    } else {
                        out += c;
                    }
            }
        }
        out += '"';
    }

    void write(std::string& out, int indent, int depth) const {
        const std::string pad(std::size_t(indent) * (depth + 1), ' ');
        const std::string padc(std::size_t(indent) * depth, ' ');
        if (std::holds_alternative<std::nullptr_t>(value_)) {
            out += "null";
        } else if (std::holds_alternative<bool>(value_)) {
            out += std::get<bool>(value_) ? "true" : "false";
        } else if (std::holds_alternative<std::int64_t>(value_)) {
            out += std::to_string(std::get<std::int64_t>(value_));
        } else if (std::holds_alternative<double>(value_)) {
            out += format_double(std::get<double>(value_));
        } else if (std::holds_alternative<std::string>(value_)) {
            escape(out, std::get<std::string>(value_));
        } else if (std::holds_alternative<Array>(value_)) {
            const auto& a = std::get<Array>(value_);
            if (a.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < a.size(); ++i) {
                out += pad;
                a[i].write(out, indent, depth + 1);
                out += (i + 1 < a.size()) ? ",\n" : "\n";
            }
            out += padc + "]";
        } else {
            const auto& o = std::get<Object>(value_);
            if (o.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            for (std::size_t i = 0; i < o.size(); ++i) {
                out += pad;
                escape(out, o[i].first);
                out += ": ";
                o[i].second.write(out, indent, depth + 1);
                out += (i + 1 < o.size()) ? ",\n" : "\n";
            }
            out += padc + "}";
        }
    }

    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> value_;
};

/// One row of the residual table: measured value against its tolerance.
struct ResidualEntry {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;

    bool pass() const { return value <= tolerance; }
};

inline Json residual_table_json(const std::vector<ResidualEntry>& entries) {
    Json arr{Json::Array{}};
    for (const auto& e : entries) {
        Json row = Json::object();
        row.set("name", e.name);
        row.set("value", e.value);
        row.set("tolerance", e.tolerance);
        row.set("pass", e.pass());
        arr.push(std::move(row));
    }
    return arr;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    require(bool(out), ErrorCode::InvalidInput, "cannot open " + path + " for writing");
    out << content;
}

/// curves.csv with the fixed header; series that do not apply to the current
/// run are written as nan.
inline void write_curves_csv(const std::string& path, const std::vector<double>& z,
                             const std::vector<double>& theta, const std::vector<double>& phi,
                             const std::vector<double>& f, const std::vector<double>& g,
                             const std::vector<double>& density) {
    std::string out = "z,theta,phi,f,g,density\n";
    char buf[40];
    auto cell = [&](const std::vector<double>& v, std::size_t j) {
        if (j >= v.size() || std::isnan(v[j])) {
            out += "nan";
        } else {
            std::snprintf(buf, sizeof buf, "%.17g", v[j]);
            out += buf;
        }
    };
    for (std::size_t j = 0; j < z.size(); ++j) {
        cell(z, j);
        out += ',';
        cell(theta, j);
        out += ',';
        cell(phi, j);
        out += ',';
        cell(f, j);
        out += ',';
        cell(g, j);
        out += ',';
        cell(density, j);
        out += '\n';
    }
    write_text_file(path, out);
}

} // namespace reeb3
