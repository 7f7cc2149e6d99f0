#pragma once

#include <cstdint>

namespace lti {

// Deterministic splittable generator: an xoshiro-style splitmix64 core with
// hand-rolled uniform and normal draws, so sequences are bit-reproducible
// across platforms and standard-library versions.  Streams derived with
// split() are statistically independent of the parent.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    // uniform in [0, 1)
    double uniform();
    double uniform(double lo, double hi);

    // standard normal via Box-Muller (both draws consumed, one cached)
    double normal();

    // independent child stream
    Rng split(std::uint64_t stream) const;

private:
    std::uint64_t state_;
    std::uint64_t seed_, stream_;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace lti
