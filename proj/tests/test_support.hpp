#pragma once

#include <map>

#include "stokes/spectral_solver.hpp"

namespace stokes::fixtures {

// Converged waves are reused across tests; each (s, starting N) pair is solved once.
inline const ConformalSolution& wave(double s, int modes = 256) {
    static std::map<std::pair<double, int>, ConformalSolution> cache;
    auto key = std::make_pair(s, modes);
    auto it = cache.find(key);
    if (it == cache.end()) {
        WaveConfig cfg;
        cfg.mode_count = modes;
        it = cache.emplace(key, solve_steepness(s, cfg).solution).first;
    }
    return it->second;
}

}  // namespace stokes::fixtures
