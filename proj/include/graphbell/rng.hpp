#pragma once
// Seeded randomness helpers. std::mt19937_64 has a fully specified output
// stream, but the std distributions do not, so the draws here go through
// hand-rolled mappings (modulo for ints, Box-Muller for gaussians) to keep
// results identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>

namespace graphbell {

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // uniform in {0, ..., m-1}; modulo bias is irrelevant at these ranges
    int uniform_mod(int m) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(m)); }

    double uniform01() {
        // 53 random bits into [0, 1)
        return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0);
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 1e-300) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace graphbell
