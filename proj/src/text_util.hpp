#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fairmiss/error.hpp"

namespace fairmiss::detail {

inline std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Drops a trailing `#` comment and surrounding whitespace.
inline std::string strip_comment(std::string_view line) {
    auto hash = line.find('#');
    return trim(hash == std::string_view::npos ? line : line.substr(0, hash));
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
    return v;
}

inline std::optional<long long> parse_ll(std::string_view s) {
    long long v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) return std::nullopt;
    return v;
}

inline std::optional<int> parse_int(std::string_view s) {
    auto v = parse_ll(s);
    if (!v) return std::nullopt;
    return static_cast<int>(*v);
}

// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
}

}  // namespace fairmiss::detail
