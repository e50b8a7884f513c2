#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace courseval {

/// splitmix64 finalizer. Used to derive independent child seeds; good
/// avalanche even for small consecutive inputs.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// FNV-1a over bytes. Turns identifiers into stable salts so derived seeds
/// depend on the identity of a record, not on iteration order.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ull;
    }
    return h;
}

/// Seeded generator with deterministic child derivation. Children depend only
/// on the base seed and the salt, never on how much of the parent stream was
/// consumed, so parallel fan-out stays reproducible regardless of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : base_(seed), eng_(mix64(seed)) {}

    Rng child(std::uint64_t salt) const { return Rng(mix64(base_ ^ mix64(salt))); }
    Rng child(std::uint64_t salt_a, std::uint64_t salt_b) const {
        return child(mix64(salt_a) ^ (salt_b + 0x632BE59BD9B4E019ull));
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampled, unbiased.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0)
            throw std::invalid_argument("Rng::below: n must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

    /// k distinct indices drawn from [0, n), in draw order.
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        if (k > n)
            throw std::invalid_argument("Rng::sample_indices: k > n");
        std::vector<std::size_t> pool(n);
        for (std::size_t i = 0; i < n; ++i)
            pool[i] = i;
        for (std::size_t i = 0; i < k; ++i)
            std::swap(pool[i], pool[i + below(n - i)]);
        pool.resize(k);
        return pool;
    }

    std::uint64_t base_seed() const { return base_; }

private:
    std::uint64_t base_;
    std::mt19937_64 eng_;
};

} // namespace courseval
