#pragma once

#include <cstddef>
#include <cstdlib>
#include <sstream>
#include <string>
#include <string_view>

#include "dagclust/dag.hpp"
#include "dagclust/error.hpp"

namespace dagclust {

/// Guard caps for the exhaustive routines.
struct Caps {
    std::size_t brute_nodes = 12;
    std::size_t matchings = 1'000'000;
    std::size_t paths = kDefaultPathCap;
};

/// Parses `nodes=12,matchings=1000000,paths=1000000`; any subset of keys,
/// unspecified keys keep their defaults.
inline Caps parse_caps(std::string_view spec, Caps base = {}) {
    std::stringstream in{std::string(spec)};
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(Errc::ParseError, "caps entry '" + item + "' lacks '='");
        std::string key = item.substr(0, eq);
        std::size_t value = 0;
        try {
            std::size_t used = 0;
            value = std::stoull(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw Error(Errc::ParseError, "caps entry '" + item + "' has a non-numeric value");
        }
        if (key == "nodes") base.brute_nodes = value;
        else if (key == "matchings") base.matchings = value;
        else if (key == "paths") base.paths = value;
        else throw Error(Errc::ParseError, "unknown caps key '" + key + "'");
    }
    return base;
}

/// Caps from the DAGCLUST_CAPS environment variable, defaults if unset.
inline Caps caps_from_env() {
    const char* v = std::getenv("DAGCLUST_CAPS");
    return v ? parse_caps(v) : Caps{};
}

} // namespace dagclust
