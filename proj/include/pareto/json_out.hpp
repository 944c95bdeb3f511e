#pragma once

#include "pareto/types.hpp"

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace pareto {

/// Minimal JSON emitter with insertion-ordered objects and floats printed at
/// 17 significant digits, so identical runs produce byte-identical artifacts.
class JsonOut {
public:
    static std::string number(Scalar x) {
        if (std::isnan(x)) return "\"nan\"";
        if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return buf;
    }

    JsonOut() = default;

    static JsonOut scalar(Scalar x) { return JsonOut(number(x)); }
    static JsonOut integer(long long x) { return JsonOut(std::to_string(x)); }
    static JsonOut boolean(bool b) { return JsonOut(b ? "true" : "false"); }
    static JsonOut string(const std::string& s) { return JsonOut(quote(s)); }

    static JsonOut array() {
        JsonOut j;
        j.kind_ = Kind::array;
        return j;
    }
    static JsonOut object() {
        JsonOut j;
        j.kind_ = Kind::object;
        return j;
    }
    static JsonOut array(const Vector& v) {
        JsonOut j = array();
        for (int i = 0; i < v.size(); ++i) j.push(scalar(v(i)));
        return j;
    }

    JsonOut& push(JsonOut item) {
        items_.emplace_back("", std::move(item));
        return *this;
    }
    JsonOut& set(const std::string& key, JsonOut value) {
        items_.emplace_back(key, std::move(value));
        return *this;
    }
    JsonOut& set(const std::string& key, Scalar x) { return set(key, scalar(x)); }
    JsonOut& set(const std::string& key, int x) { return set(key, integer(x)); }
    JsonOut& set(const std::string& key, long long x) { return set(key, integer(x)); }
    JsonOut& set(const std::string& key, bool b) { return set(key, boolean(b)); }
    JsonOut& set(const std::string& key, const char* s) { return set(key, string(s)); }
    JsonOut& set(const std::string& key, const std::string& s) { return set(key, string(s)); }

    [[nodiscard]] std::string dump(int indent = 2, int depth = 0) const {
        if (kind_ == Kind::literal) return literal_;
        const std::string pad(static_cast<size_t>(indent * (depth + 1)), ' ');
        const std::string close_pad(static_cast<size_t>(indent * depth), ' ');
        const char open = kind_ == Kind::array ? '[' : '{';
        const char close = kind_ == Kind::array ? ']' : '}';
        if (items_.empty()) return std::string(1, open) + close;
        std::string out(1, open);
        out += '\n';
        for (size_t i = 0; i < items_.size(); ++i) {
            out += pad;
            if (kind_ == Kind::object) out += quote(items_[i].first) + ": ";
            out += items_[i].second.dump(indent, depth + 1);
            if (i + 1 < items_.size()) out += ',';
            out += '\n';
        }
        out += close_pad;
        out += close;
        return out;
    }

private:
    enum class Kind { literal, array, object };

    explicit JsonOut(std::string lit) : literal_(std::move(lit)) {}

    static std::string quote(const std::string& s) {
        std::string out = "\"";
        for (char c : s) {
            switch (c) {
                case '"': out += "\\\""; break;
                case '\\': out += "\\\\"; break;
                case '\n': out += "\\n"; break;
                case '\t': out += "\\t"; break;
                default: out += c;
            }
        }
        out += '"';
        return out;
    }

    Kind kind_ = Kind::literal;
    std::string literal_ = "null";
    std::vector<std::pair<std::string, JsonOut>> items_;
};

}  // namespace pareto
