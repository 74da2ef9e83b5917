#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "dagclust/dagclust.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(DAGCLUST_DATA_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline dagclust::Instance load(const std::string& name) { return dagclust::parse_instance(slurp(data_path(name))); }

/// a..f with a->c, a->d, a->e, b->d, b->e, b->f, c->d, c->e, d->f, d->e.
inline dagclust::Dag fig1() { return load("fig1.json").dag; }

/// s, a, b, c, d, t with unit weights and delays, d=1, D=2, capacity 2.
inline dagclust::Instance fig2() { return load("fig2.json"); }

inline dagclust::Instance unit(dagclust::Dag g, dagclust::Delay d = 1, dagclust::Delay D = 2) {
    return dagclust::make_instance(std::move(g), dagclust::unit_params(d, D));
}

} // namespace fixtures
