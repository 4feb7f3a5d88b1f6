#pragma once
// Deterministic CSV / JSON emission. Floating-point values are printed with
// 17 significant digits (round-trip exact for doubles), CSV headers have a
// fixed column order, and JSON objects keep insertion order, so identical
// inputs produce identical bytes.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qtow/errors.hpp"

namespace qtow {

inline std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
}

inline std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
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
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

// Insertion-ordered JSON object builder.
class JsonObject {
public:
    JsonObject& field(std::string_view name, double v) { return raw(name, fmt_double(v)); }
    JsonObject& field(std::string_view name, std::uint64_t v) { return raw(name, std::to_string(v)); }
    JsonObject& field(std::string_view name, int v) { return raw(name, std::to_string(v)); }
    JsonObject& field(std::string_view name, bool v) { return raw(name, v ? "true" : "false"); }
    JsonObject& field(std::string_view name, std::string_view v) {
        return raw(name, "\"" + json_escape(v) + "\"");
    }
    JsonObject& field(std::string_view name, const char* v) {
        return field(name, std::string_view(v));
    }
    JsonObject& field(std::string_view name, const std::optional<double>& v) {
        return v ? field(name, *v) : raw(name, "null");
    }
    JsonObject& raw(std::string_view name, std::string_view json) {
        body_ += first_ ? "\"" : ",\"";
        first_ = false;
        body_ += json_escape(name);
        body_ += "\":";
        body_ += json;
        return *this;
    }
    std::string str() const { return "{" + body_ + "}"; }

private:
    std::string body_;
    bool first_ = true;
};

class JsonArray {
public:
    JsonArray& push_raw(std::string_view json) {
        if (!first_) body_ += ",";
        first_ = false;
        body_ += json;
        return *this;
    }
    JsonArray& push(double v) { return push_raw(fmt_double(v)); }
    std::string str() const { return "[" + body_ + "]"; }

private:
    std::string body_;
    bool first_ = true;
};

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace qtow
