#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace dbar {

/// Seeded generator with a platform-independent mapping from engine bits to doubles.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    /// Uniform on the open complex unit disc (rejection).
    std::complex<double> unit_disc()
    {
        for (;;) {
            const double x = uniform(-1.0, 1.0);
            const double y = uniform(-1.0, 1.0);
            if (x * x + y * y < 1.0)
                return {x, y};
        }
    }

    /// Uniform on the disc of radius r.
    std::complex<double> disc(double r) { return r * unit_disc(); }

private:
    std::mt19937_64 engine_;
};

} // namespace dbar
