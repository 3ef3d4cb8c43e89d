#include "starbm/random.hpp"

#include <cmath>
#include <stdexcept>

namespace starbm {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// SplitMix64 finalizer; full 64-bit avalanche.
std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id), base_(mix(stream_id + mix(seed))) {}

RandomStream RandomStream::fork(std::uint64_t stream_id) const {
    return RandomStream(seed_, stream_id);
}

std::uint64_t RandomStream::next_word() { return mix(counter_++ + base_); }

double RandomStream::uniform() {
    // 53-bit mantissa; the +0.5 offset keeps the result strictly inside (0,1).
    return (static_cast<double>(next_word() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double RandomStream::exponential(double rate) {
    if (!(rate > 0.0)) throw std::domain_error("exponential rate must be > 0");
    return -std::log(uniform()) / rate;
}

int RandomStream::categorical(const std::vector<double>& probs) {
    if (probs.empty()) throw std::invalid_argument("empty categorical");
    double u = uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(probs.size()) - 1;
}

}  // namespace starbm
