#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "green.hpp"
#include "measure.hpp"
#include "rearrange.hpp"

namespace polarsym {

namespace detail {

inline std::vector<double> read_number_array(const nlohmann::json& node, const char* field) {
    if (!node.is_array()) throw Error(Errc::parse, std::string("\"") + field + "\" must be an array");
    std::vector<double> out;
    out.reserve(node.size());
    for (const auto& v : node) {
        if (!v.is_number()) throw Error(Errc::parse, std::string("\"") + field + "\" must contain numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

inline double read_number(const nlohmann::json& node, const char* field) {
    auto it = node.find(field);
    if (it == node.end() || !it->is_number()) {
        throw Error(Errc::parse, std::string("atom field \"") + field + "\" missing or not a number");
    }
    return it->get<double>();
}

}  // namespace detail

/// Raw fields of the measure JSON document. Both "density" and "atoms" are optional.
inline RawMeasure parse_raw_measure(const std::string& text) {
    nlohmann::json doc;
    bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
    if (blank) return {};
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::parse, e.what());
    }
    if (!doc.is_object()) throw Error(Errc::parse, "measure document must be a JSON object");

    RawMeasure raw;
    if (auto it = doc.find("density"); it != doc.end() && !it->is_null()) {
        if (!it->is_object()) throw Error(Errc::parse, "\"density\" must be an object");
        auto bp = it->find("breakpoints");
        auto vals = it->find("values");
        if (bp == it->end() || vals == it->end()) {
            throw Error(Errc::parse, "\"density\" needs \"breakpoints\" and \"values\"");
        }
        raw.breakpoints = detail::read_number_array(*bp, "breakpoints");
        raw.values = detail::read_number_array(*vals, "values");
    }
    if (auto it = doc.find("atoms"); it != doc.end() && !it->is_null()) {
        if (!it->is_array()) throw Error(Errc::parse, "\"atoms\" must be an array");
        for (const auto& a : *it) {
            if (!a.is_object()) throw Error(Errc::parse, "each atom must be an object");
            raw.atoms.push_back({detail::read_number(a, "x"), detail::read_number(a, "mass")});
        }
    }
    return raw;
}

inline Measure parse_measure(const std::string& text) { return canonicalize(parse_raw_measure(text)); }

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(Errc::io, "cannot read " + path);
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot open " + path + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(Errc::io, "cannot write " + path);
}

inline Measure load_measure(const std::string& path) { return parse_measure(read_text_file(path)); }

inline nlohmann::json measure_to_json(const Measure& m) {
    nlohmann::json doc = nlohmann::json::object();
    if (!m.density().is_zero()) {
        auto bp = m.density().breakpoints();
        auto vals = m.density().values();
        doc["density"] = {{"breakpoints", std::vector<double>(bp.begin(), bp.end())},
                          {"values", std::vector<double>(vals.begin(), vals.end())}};
    }
    nlohmann::json atoms = nlohmann::json::array();
    for (const Atom& a : m.atoms().atoms()) atoms.push_back({{"x", a.x}, {"mass", a.mass}});
    doc["atoms"] = std::move(atoms);
    return doc;
}

inline std::string format_measure(const Measure& m) { return measure_to_json(m).dump(2) + "\n"; }

inline void save_measure(const std::string& path, const Measure& m) { write_text_file(path, format_measure(m)); }

/// Rows x,u on a uniform grid of `samples` points from -pi to pi inclusive.
inline void write_solution_csv(std::ostream& os, const Solution& s, std::size_t samples) {
    if (samples < 2) throw Error(Errc::invalid_argument, "samples must be at least 2");
    os << "x,u\n";
    for (std::size_t i = 0; i < samples; ++i) {
        double x = i + 1 == samples ? kPi : -kPi + kTwoPi * static_cast<double>(i) / static_cast<double>(samples - 1);
        os << format_double(x) << ',' << format_double(s(x)) << '\n';
    }
}

inline void write_trace_csv(std::ostream& os, std::span<const PolarizationStep> trace) {
    os << "iter,b,l1_distance\n";
    for (const auto& step : trace) {
        os << step.iter << ',' << format_double(step.b) << ',' << format_double(step.l1_distance) << '\n';
    }
}

}  // namespace polarsym
