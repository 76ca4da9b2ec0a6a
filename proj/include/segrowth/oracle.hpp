#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>

#include "segrowth/series.hpp"
#include "segrowth/solver.hpp"

namespace segrowth {

/// Standard normal deviates from a fixed, portable source: mt19937_64 driving
/// the Marsaglia polar transform. Same seed, same stream, on every platform.
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_unit() - 1.0;
            v = 2.0 * next_unit() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        have_spare_ = true;
        return u * factor;
    }

  private:
    double next_unit() {  // uniform in [0, 1) with 53 random bits
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Recipe for a synthetic annual series with known ground truth.
struct GeneratorSpec {
    SegmentedModel model;
    int year_start = 0;
    int year_end = 0;          ///< inclusive
    double noise_sigma = 0.0;  ///< std-dev of additive noise on the log scale
    std::uint64_t seed = 0;
    std::string label = "synthetic";
};

/// count(year) = exp(predict_log(model, year) + sigma * z), one count per
/// year in [year_start, year_end]; deterministic per seed.
AnnualSeries generate(const GeneratorSpec& spec);

/// Reference fitter: enumerates every ordered integer-year breakpoint tuple
/// inside `bounds` (default: the solver's effective bounds) that leaves
/// `min_points_per_segment` observations per segment, solves OLS at each, and
/// returns the grid optimum. Refuses instances above `max_tuples`.
FitResult brute_force_fit(const LogSeries& data, int n_segments, bool intercept,
                          std::optional<std::pair<double, double>> bounds = std::nullopt,
                          int min_points_per_segment = 3,
                          std::uint64_t max_tuples = 1000000);

} // namespace segrowth
