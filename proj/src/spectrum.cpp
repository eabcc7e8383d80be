#include "dpad/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>

namespace dpad {

std::vector<double> magnitude_spectrum(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    const std::size_t bins = n / 2 + 1;
    std::vector<double> in(x.begin(), x.end());
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * bins));
    std::unique_ptr<fftw_complex, decltype(&fftw_free)> guard(out, fftw_free);
    fftw_plan plan =
        fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);

    std::vector<double> mag(bins);
    for (std::size_t k = 0; k < bins; ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
    return mag;
}

std::size_t dominant_bin(std::span<const double> x) {
    const auto mag = magnitude_spectrum(x);
    std::size_t best = 0;
    double best_mag = 0.0;
    for (std::size_t k = 1; k < mag.size(); ++k) {
        if (mag[k] > best_mag) {
            best_mag = mag[k];
            best = k;
        }
    }
    return best;
}

}  // namespace dpad
