#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Core>

namespace gpkl {

// Deterministic random number generation. The standard <random> distributions
// are implementation-defined, so everything randomized in this library goes
// through this generator: results are bit-identical across platforms and
// across serial/parallel schedules as long as streams are derived from
// (seed, stream id).

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// xoshiro256++ generator with Box-Muller normals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = detail::splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform index in [0, n). n must be positive.
    Eigen::Index next_index(Eigen::Index n) {
        return static_cast<Eigen::Index>(
            (static_cast<unsigned __int128>(next_u64()) * static_cast<std::uint64_t>(n)) >> 64);
    }

    /// Standard normal via Box-Muller (pairs cached).
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    Eigen::VectorXd gaussian_vector(Eigen::Index n) {
        Eigen::VectorXd out(n);
        for (Eigen::Index i = 0; i < n; ++i) out[i] = next_gaussian();
        return out;
    }

    /// n draws with replacement from [0, n).
    std::vector<Eigen::Index> sample_with_replacement(Eigen::Index n) {
        std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
        for (auto& i : idx) i = next_index(n);
        return idx;
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (Eigen::Index i = static_cast<Eigen::Index>(v.size()) - 1; i > 0; --i) {
            const Eigen::Index j = next_index(i + 1);
            std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Derives an independent stream from a master seed and a stream id
/// (replicate index, split index, ...).
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t sm = seed;
    const std::uint64_t a = detail::splitmix64(sm);
    sm = stream ^ 0xd1b54a32d192ed03ULL;
    const std::uint64_t b = detail::splitmix64(sm);
    return Rng(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

/// Stream id for nested experiment loops (scenario, n, p, replicate, ...).
inline std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (std::uint64_t v : parts) {
        std::uint64_t sm = h ^ v;
        h = detail::splitmix64(sm);
    }
    return h;
}

}  // namespace gpkl
