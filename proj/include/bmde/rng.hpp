#pragma once

#include <array>
#include <cstdint>

namespace bmde {

/// Deterministic, index-addressable random stream: xoshiro256++ whose state
/// is filled from splitmix64 outputs keyed by (master_seed, stream_index).
/// Identical lineage gives identical draws on every platform; distinct
/// indices never share state. A stream is single-owner: move it between
/// threads, never share one concurrently.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_(master_seed), index_(stream_index) {
        std::uint64_t sm = mix64(master_seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1)));
        bool all_zero = true;
        for (auto& word : s_) {
            sm += 0x9E3779B97F4A7C15ULL;
            word = mix64(sm);
            all_zero = all_zero && word == 0;
        }
        if (all_zero) {
            s_[0] = 1;
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream_index() const { return index_; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t mix64(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::array<std::uint64_t, 4> s_{};
    std::uint64_t master_;
    std::uint64_t index_;
};

inline RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_index) {
    return RngStream(master_seed, stream_index);
}

} // namespace bmde
