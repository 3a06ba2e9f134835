#pragma once

#include "effho/errors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace effho::keyenc {

// Printable, unambiguous nested encodings for generator identities.
// Components are escaped so that '(' ')' ',' never appear unescaped inside a
// field; splitting at top level is then well defined.

inline std::string esc(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '(' || c == ')' || c == ',' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

inline std::string unesc(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\') {
            if (++i == s.size()) throw ParseError("dangling escape in key: " + s);
        }
        out.push_back(s[i]);
    }
    return out;
}

// tag(field,field,...) with escaped fields.
inline std::string node(const std::string& tag, const std::vector<std::string>& fields) {
    std::string out = tag;
    out.push_back('(');
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += esc(fields[i]);
    }
    out.push_back(')');
    return out;
}

struct Parsed {
    std::string tag;
    std::vector<std::string> fields;
};

inline std::optional<Parsed> try_parse_node(const std::string& s) {
    Parsed p;
    size_t open = std::string::npos;
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\') { ++i; continue; }
        if (s[i] == '(') { open = i; break; }
    }
    if (open == std::string::npos || s.back() != ')') return std::nullopt;
    p.tag = s.substr(0, open);
    std::string cur;
    bool any = false;
    for (size_t i = open + 1; i + 1 < s.size(); ++i) {
        any = true;
        if (s[i] == '\\') {
            if (i + 2 >= s.size()) return std::nullopt;
            cur.push_back(s[i + 1]);
            ++i;
        } else if (s[i] == ',') {
            p.fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(s[i]);
        }
    }
    if (any) p.fields.push_back(cur);
    return p;
}

inline Parsed parse_node(const std::string& s) {
    auto p = try_parse_node(s);
    if (!p) throw ParseError("not a key node: " + s);
    return *p;
}

inline bool is_node(const std::string& s, const std::string& tag) {
    return s.size() > tag.size() + 1 && s.compare(0, tag.size(), tag) == 0 &&
           s[tag.size()] == '(' && s.back() == ')';
}

inline std::string join_ints(const std::vector<int>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out.push_back('.');
        out += std::to_string(v[i]);
    }
    return out;
}

inline std::vector<int> split_ints(const std::string& s) {
    std::vector<int> out;
    if (s.empty()) return out;
    size_t pos = 0;
    while (pos <= s.size()) {
        size_t dot = s.find('.', pos);
        if (dot == std::string::npos) dot = s.size();
        out.push_back(std::stoi(s.substr(pos, dot - pos)));
        pos = dot + 1;
        if (dot == s.size()) break;
    }
    return out;
}

}  // namespace effho::keyenc
