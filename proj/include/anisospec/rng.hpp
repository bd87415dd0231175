#pragma once

#include <cmath>
#include <cstdint>

namespace aniso {

// Small deterministic RNG (splitmix64 core). Randomized suites must replay
// bit-identically for a given master seed on any platform, which rules out
// the implementation-defined std:: distributions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Log-uniform over [lo, hi], lo > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // Standard normal via Box-Muller; one value per call keeps replay simple.
    double gaussian() {
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Decorrelated child stream, used to give sweep trials independent,
    // order-free seeds.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t index) {
        Rng g(master ^ (0x632be59bd9b4e019ULL * (index + 1)));
        return g.next_u64();
    }

  private:
    std::uint64_t state_;
};

}  // namespace aniso
