#pragma once

// Counter-based random stream: each (seed, side, n, episode) tuple names an
// independent stream, and draw k of a stream is a pure function of the key and
// k. Episodes can therefore be distributed across any number of threads and
// still reproduce the serial run bit for bit.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace advtest {

namespace detail {

// 64-bit finalizer with full avalanche (the splitmix64 output stage).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b,
               std::uint64_t episode)
        : key_(derive(seed, stream_a, stream_b, episode)) {}

    // k-th raw 64-bit word of the stream.
    std::uint64_t bits() { return detail::mix64(key_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

    // uniform in [0, 1) with 53 random bits
    double uniform() { return double(bits() >> 11) * 0x1.0p-53; }

    // index into a probability vector (assumed to sum to 1 within rounding)
    std::size_t sample(const std::vector<double>& probs) {
        const double u = uniform();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
            acc += probs[i];
            if (u < acc) return i;
        }
        return probs.size() - 1;
    }

private:
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                std::uint64_t episode) {
        std::uint64_t k = detail::mix64(seed);
        k = detail::mix64(k ^ (a * 0xD6E8FEB86659FD93ull));
        k = detail::mix64(k ^ (b * 0xCA5A826395121157ull));
        return detail::mix64(k ^ episode);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace advtest
