#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace satent {

// Identifies one independent random stream. Every phase screen of every
// Monte Carlo run draws from its own stream, so results never depend on
// which worker thread evaluated them.
struct StreamKey {
    std::uint64_t master_seed = 0;
    std::uint64_t run_index = 0;
    std::uint64_t stream_index = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
std::uint64_t derive_seed(const StreamKey& key) noexcept;

class RngStream {
public:
    explicit RngStream(const StreamKey& key) : engine_(derive_seed(key)) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::uint64_t next() { return engine_(); }
    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(const StreamKey& key) noexcept {
    std::uint64_t h = splitmix64(key.master_seed);
    h = splitmix64(h ^ key.run_index);
    h = splitmix64(h ^ (key.stream_index + 0x632be59bd9b4e019ULL));
    return h;
}

} // namespace satent
