#ifndef GRADSEM_RNG_HPP
#define GRADSEM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace gradsem {

// One SplitMix64 step.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Documented stream-split function: the seed for stream `salt` under
// `master` is one SplitMix64 step of (master XOR salt * golden ratio).
// Used for rejection-sampling workers, per-stimulus statistics streams,
// and mock-backend noise, so independent streams never share state.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
    std::uint64_t state = master ^ (salt * 0x9e3779b97f4a7c15ULL);
    return splitmix64(state);
}

// Deterministic random stream. All derived draws are built from raw
// mt19937_64 output with explicit bit manipulation, so sequences are
// bit-identical across standard libraries for a fixed seed.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    // Uniform double in (0, 1]; never zero, safe under log().
    double uniform01_open() { return (static_cast<double>(bits() >> 11) + 1.0) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Gaussian draw via the basic Box-Muller transform (method id
    // "box-muller"). One value per call; both uniforms are consumed.
    double gaussian(double mean, double sd) {
        const double u1 = uniform01_open();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * r * std::cos(2.0 * M_PI * u2);
    }

    bool flip(double p) { return uniform01() < p; }

    // Uniform integer in [0, n) by 128-bit multiply-shift.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(bits()) * static_cast<unsigned __int128>(n)) >> 64);
    }

    // Identifier recorded in run metadata alongside seeds.
    static const char* gaussian_method() { return "box-muller"; }

  private:
    std::mt19937_64 engine_;
};

}  // namespace gradsem

#endif  // GRADSEM_RNG_HPP
