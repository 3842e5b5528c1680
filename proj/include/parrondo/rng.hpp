#pragma once

#include <cstdint>

namespace parrondo {

// splitmix64; used only to expand a user seed into generator state
struct SplitMix64 {
    std::uint64_t x;

    std::uint64_t next() {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ (Blackman & Vigna).  Replica k of a run uses the stream
// obtained by k jump() calls from the seeded state, so per-replica streams
// are disjoint (each jump advances 2^128 steps) and fully determined by
// (seed, replica index).  No libc or libstdc++ distribution functions are
// involved, so sequences are identical across platforms.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& si : s_) si = sm.next();
    }

    std::uint64_t next() {
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

    void jump() {
        static constexpr std::uint64_t kJump[4] = {
            0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL,
            0xa9582618e03fc9aaULL, 0x39abdc4529b1661cULL};
        std::uint64_t s0 = 0, s1 = 0, s2 = 0, s3 = 0;
        for (std::uint64_t word : kJump) {
            for (int b = 0; b < 64; ++b) {
                if (word & (std::uint64_t{1} << b)) {
                    s0 ^= s_[0];
                    s1 ^= s_[1];
                    s2 ^= s_[2];
                    s3 ^= s_[3];
                }
                next();
            }
        }
        s_[0] = s0;
        s_[1] = s1;
        s_[2] = s2;
        s_[3] = s3;
    }

    // uniform on [0,1) with 53 random bits
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform on {0, ..., bound-1}; multiply-shift, bias < bound / 2^64
    int uniform_int(int bound) {
        return static_cast<int>(
            (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(bound)) >> 64);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
};

// The stream for replica `replica` of a run seeded with `seed`.
inline Xoshiro256pp replica_stream(std::uint64_t seed, int replica) {
    Xoshiro256pp g(seed);
    for (int k = 0; k < replica; ++k) g.jump();
    return g;
}

}  // namespace parrondo
