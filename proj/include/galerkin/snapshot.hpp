#pragma once

// Spectrum snapshot files: {dimension, shape, K_max, modes: [{k, re, im}]}
// listing the canonical half. Floats are written with 17 significant digits
// so write -> read -> write reproduces the same bytes.

#include "galerkin/errors.hpp"
#include "galerkin/state.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace galerkin {

inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline void append_parts(std::string& out, const Complex& a, bool imag) {
    out += format_double(imag ? a.imag() : a.real());
}

inline void append_parts(std::string& out, const CVec3& a, bool imag) {
    for (int i = 0; i < 3; ++i) {
        if (i) out += ",";
        out += format_double(imag ? a[i].imag() : a[i].real());
    }
}

} // namespace detail

template <int D>
std::string write_snapshot(const Spectrum<D>& s) {
    const auto& z = s.truncation();
    std::string out = "{\"dimension\":" + std::to_string(D) + ",\"shape\":\"" + to_string(z.shape()) +
                      "\",\"K_max\":" + format_double(z.k_max()) + ",\"modes\":[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += i ? ",\n" : "\n";
        out += "{\"k\":[";
        const auto& k = s.wave(i);
        for (int d = 0; d < D; ++d) {
            if (d) out += ",";
            out += std::to_string(k[d]);
        }
        out += "],\"re\":[";
        detail::append_parts(out, s[i], false);
        out += "],\"im\":[";
        detail::append_parts(out, s[i], true);
        out += "]}";
    }
    out += "\n]}\n";
    return out;
}

inline int snapshot_dimension(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    return j.at("dimension").get<int>();
}

template <int D>
Spectrum<D> read_snapshot(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Io, std::string("malformed snapshot: ") + e.what());
    }
    if (j.at("dimension").get<int>() != D)
        throw Error(ErrorCode::DimensionMismatch, "snapshot dimension does not match");
    auto z = make_truncation<D>(parse_shape(j.at("shape").get<std::string>()), j.at("K_max").get<double>());
    Spectrum<D> s(z);
    for (const auto& mode : j.at("modes")) {
        WaveVector<D> k;
        const auto& kk = mode.at("k");
        if (kk.size() != static_cast<std::size_t>(D)) throw Error(ErrorCode::DimensionMismatch, "mode index has wrong length");
        for (int d = 0; d < D; ++d) k[d] = kk[static_cast<std::size_t>(d)].get<int>();
        const auto& re = mode.at("re");
        const auto& im = mode.at("im");
        if constexpr (D == 2) {
            s.set(k, Complex(re.at(0).get<double>(), im.at(0).get<double>()));
        } else {
            CVec3 v;
            for (std::size_t d = 0; d < 3; ++d) v[d] = Complex(re.at(d).get<double>(), im.at(d).get<double>());
            s.set(k, v);
        }
    }
    return s;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    f << text;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace galerkin
