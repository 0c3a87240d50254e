#include "ohmscope/textio.hpp"

#include <charconv>
#include <cstdio>
#include <system_error>

#include "ohmscope/errors.hpp"

namespace ohmscope {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw IoError("format_double: conversion failed");
    return std::string(buf, ptr);
}

double parse_double(const std::string& token, const std::string& what) {
    std::string t = trim(token);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw IoError(what + ": not a number: '" + token + "'");
    return value;
}

long long parse_integer(const std::string& token, const std::string& what) {
    std::string t = trim(token);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw IoError(what + ": not an integer: '" + token + "'");
    return value;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        std::size_t end = line.find(sep, begin);
        if (end == std::string::npos) {
            parts.push_back(line.substr(begin));
            return parts;
        }
        parts.push_back(line.substr(begin, end - begin));
        begin = end + 1;
    }
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void log_warning(const std::string& message) { std::fprintf(stderr, "warning: %s\n", message.c_str()); }

}  // namespace ohmscope
