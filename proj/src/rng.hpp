#ifndef ABE_RNG_HPP
#define ABE_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace abe {

// Seeded random stream with a documented substream scheme.
//
// Substream derivation: starting from the master seed, each id in turn is
// folded in with one splitmix64 round,
//     s <- splitmix64(s ^ (id + 0x9e3779b97f4a7c15))
// so derive(master, {task, step, cls}) names one independent stream per
// (estimation task, step, class).  The derived value seeds a mt19937_64;
// uniforms come from the top 53 bits and normals from Box-Muller, so the
// whole stream is pinned by the standard and reproducible bit-for-bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    static std::uint64_t derive(std::uint64_t master,
                                std::initializer_list<std::uint64_t> ids) {
        std::uint64_t s = splitmix64(master);
        for (std::uint64_t id : ids)
            s = splitmix64(s ^ (id + 0x9e3779b97f4a7c15ULL));
        return s;
    }

    std::uint64_t next_u64() { return engine_(); }

    // uniform on (0, 1); never returns 0 so log() stays finite
    double uniform() {
        const double u = (engine_() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // index into a normalized weight vector
    std::size_t categorical(std::span<const double> weights) {
        const double u = uniform();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace abe

#endif
