// SPDX-License-Identifier: MIT
// JSON encoding of exponent sets and complex numbers ([re, im] pairs), and
// parsing of "re,im" command-line values.
#pragma once

#include "params.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <stdexcept>
#include <string>

namespace hgforge
{

template <typename T> nlohmann::json complex_to_json(const cplx<T> &z)
{
    return nlohmann::json::array({static_cast<double>(z.real()), static_cast<double>(z.imag())});
}

template <typename T> cplx<T> complex_from_json(const nlohmann::json &j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw std::invalid_argument("expected a complex number as [re, im]");
    }
    return {static_cast<T>(j[0].get<double>()), static_cast<T>(j[1].get<double>())};
}

template <typename T> nlohmann::json exponent_set_to_json(const exponent_set<T> &e)
{
    nlohmann::json j;
    j["m"] = e.m;
    j["a1"] = complex_to_json(e.a1);
    j["a2"] = complex_to_json(e.a2);
    j["b"] = nlohmann::json::array();
    j["c"] = nlohmann::json::array();
    for (const auto &x : e.b) {
        j["b"].push_back(complex_to_json(x));
    }
    for (const auto &x : e.c) {
        j["c"].push_back(complex_to_json(x));
    }
    j["k1"] = complex_to_json(e.k1);
    j["k2"] = complex_to_json(e.k2);
    return j;
}

// Reads the parameter-file format. a1 is taken as given; callers may check
// trace_residual() to detect inconsistent files.
template <typename T> exponent_set<T> exponent_set_from_json(const nlohmann::json &j)
{
    for (const char *key : {"m", "a1", "a2", "b", "c", "k1", "k2"}) {
        if (!j.contains(key)) {
            throw std::invalid_argument(std::string("parameter file: missing key '") + key + "'");
        }
    }
    exponent_set<T> e;
    e.m = j.at("m").get<int>();
    e.a1 = complex_from_json<T>(j.at("a1"));
    e.a2 = complex_from_json<T>(j.at("a2"));
    e.k1 = complex_from_json<T>(j.at("k1"));
    e.k2 = complex_from_json<T>(j.at("k2"));
    for (const auto &x : j.at("b")) {
        e.b.push_back(complex_from_json<T>(x));
    }
    for (const auto &x : j.at("c")) {
        e.c.push_back(complex_from_json<T>(x));
    }
    if (e.m < 1 || e.b.size() != e.size() || e.c.size() != e.size()) {
        throw std::invalid_argument("parameter file: m must match the lengths of b and c");
    }
    return e;
}

// "re,im" or "re" into a complex number.
inline cplx<double> parse_complex(const std::string &s)
{
    auto parse = [&](const std::string &part) {
        double v = 0;
        const auto *first = part.data(), *last = part.data() + part.size();
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last) {
            throw std::invalid_argument("malformed number '" + part + "' in '" + s + "'");
        }
        return v;
    };
    const auto comma = s.find(',');
    if (comma == std::string::npos) {
        return {parse(s), 0.0};
    }
    return {parse(s.substr(0, comma)), parse(s.substr(comma + 1))};
}

} // namespace hgforge
