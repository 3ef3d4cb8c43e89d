#pragma once

#include <cstdint>
#include <vector>

// Counter-based randomness: every draw is a pure function of
// (seed, stream id, counter), so parallel Monte Carlo results are
// reproducible and independent of scheduling and worker count.

namespace starbm {

class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    // A fresh, statistically independent stream under the same seed.
    RandomStream fork(std::uint64_t stream_id) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

    // Uniform on (0, 1), never exactly 0 or 1.
    double uniform();

    // Standard normal via Box-Muller (fixed, platform-stable choice: the
    // cosine branch of one uniform pair per draw; the sine branch is
    // discarded to keep draws a pure function of the counter).
    double normal();

    double exponential(double rate);

    // Index in [0, probs.size()) with the given probabilities (need not be
    // exactly normalized; the last cell absorbs rounding).
    int categorical(const std::vector<double>& probs);

  private:
    std::uint64_t next_word();

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace starbm
