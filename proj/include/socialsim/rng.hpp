#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace socialsim {

// Deterministic random source shared by every simulator in the library.
//
// Engine: std::mt19937_64 seeded directly with the 64-bit seed. The standard
// fixes the engine's output sequence, so identical seeds reproduce identical
// traces on any conforming platform. Standard-library distributions are
// implementation defined and deliberately avoided; the two mappings below
// are part of the reproducibility contract:
//
//   uniform01():    (next() >> 11) * 2^-53, a double in [0, 1)
//   categorical(p): smallest index i with p[0] + ... + p[i] > u, u ~ uniform01
//
// Simulators that run many independent replications derive the engine for
// replication r by seeding with (seed + r).
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // pmf entries must be nonnegative. Any rounding deficit below 1 falls on
    // the last index.
    int categorical(const std::vector<double>& pmf) {
        const double u = uniform01();
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < pmf.size(); ++i) {
            cum += pmf[i];
            if (u < cum) return static_cast<int>(i);
        }
        return static_cast<int>(pmf.size()) - 1;
    }

    // Same scan against a matrix row, avoiding a copy in hot loops.
    int categorical_row(const double* row, int n) {
        const double u = uniform01();
        double cum = 0.0;
        for (int i = 0; i + 1 < n; ++i) {
            cum += row[i];
            if (u < cum) return i;
        }
        return n - 1;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace socialsim
