#include "lti/rng.hpp"

#include <cmath>

namespace lti {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
    std::uint64_t x = seed;
    std::uint64_t a = splitmix64(x);
    x ^= stream * 0xda942042e4dd58b5ULL;
    std::uint64_t b = splitmix64(x);
    state_ = a ^ (b + 0x9e3779b97f4a7c15ULL);
    if (state_ == 0) state_ = 0x6a09e667f3bcc909ULL;
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * M_PI * u2;
    cached_normal_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
}

Rng Rng::split(std::uint64_t stream) const {
    return Rng(seed_ ^ (stream_ * 0x9e3779b97f4a7c15ULL + 0x165667b19e3779f9ULL),
               stream);
}

}  // namespace lti
