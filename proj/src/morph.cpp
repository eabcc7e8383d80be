#include "dpad/morph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "dpad/error.hpp"

namespace dpad {
namespace {

enum class Extremum { Max, Min };

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
    if (i < 0) return 0;
    if (static_cast<std::size_t>(i) >= n) return n - 1;
    return static_cast<std::size_t>(i);
}

// Monotonic-deque sliding extremum over the replicate-padded signal.
// Positions are padded coordinates p in [0, n + 2C); sample(p) = x[clamp(p - C)].
// Strict comparisons on eviction keep the earliest of equal values at the front.
template <Extremum E>
void sliding_zero_se(std::span<const double> x, std::size_t c, std::span<double> out,
                     std::span<std::size_t> winners) {
    const std::size_t n = x.size();
    const auto cc = static_cast<std::ptrdiff_t>(c);
    auto sample = [&](std::size_t p) {
        return x[clamp_index(static_cast<std::ptrdiff_t>(p) - cc, n)];
    };
    auto beats = [](double candidate, double incumbent) {
        if constexpr (E == Extremum::Max) {
            return candidate > incumbent;
        } else {
            return candidate < incumbent;
        }
    };

    std::deque<std::size_t> window;
    const std::size_t padded = n + 2 * c;
    for (std::size_t p = 0; p < padded; ++p) {
        const double v = sample(p);
        while (!window.empty() && beats(v, sample(window.back()))) window.pop_back();
        window.push_back(p);
        if (p < 2 * c) continue;
        const std::size_t t = p - 2 * c;
        while (window.front() < t) window.pop_front();
        out[t] = sample(window.front());
        if (!winners.empty()) {
            winners[t] = clamp_index(static_cast<std::ptrdiff_t>(window.front()) - cc, n);
        }
    }
}

template <Extremum E>
void sliding_general_se(std::span<const double> x, const SEKernel& k, std::span<double> out,
                        std::span<std::size_t> winners) {
    const std::size_t n = x.size();
    const auto c = static_cast<std::ptrdiff_t>(k.half_width());
    for (std::size_t t = 0; t < n; ++t) {
        double best = 0.0;
        std::size_t arg = 0;
        for (std::ptrdiff_t w = -c; w <= c; ++w) {
            const std::size_t i = clamp_index(static_cast<std::ptrdiff_t>(t) + w, n);
            double v;
            bool better;
            if constexpr (E == Extremum::Max) {
                v = x[i] + k.offset(w);
                better = w == -c || v > best;
            } else {
                v = x[i] - k.offset(w);
                better = w == -c || v < best;
            }
            if (better) {
                best = v;
                arg = i;
            }
        }
        out[t] = best;
        if (!winners.empty()) winners[t] = arg;
    }
}

template <Extremum E>
void filter_into(std::span<const double> x, const SEKernel& k, std::span<double> out,
                 std::span<std::size_t> winners) {
    if (x.empty()) return;
    if (k.is_zero()) {
        sliding_zero_se<E>(x, k.half_width(), out, winners);
    } else {
        sliding_general_se<E>(x, k, out, winners);
    }
}

}  // namespace

SEKernel::SEKernel(std::size_t half_width, std::vector<double> offsets)
    : half_width_(half_width), offsets_(std::move(offsets)) {
    is_zero_ = std::all_of(offsets_.begin(), offsets_.end(), [](double v) { return v == 0.0; });
}

SEKernel SEKernel::zero(std::size_t half_width) {
    return SEKernel(half_width, std::vector<double>(2 * half_width + 1, 0.0));
}

SEKernel SEKernel::symmetric(std::vector<double> offsets) {
    if (offsets.size() % 2 == 0) {
        throw ValidationError("SEKernel: length must be odd");
    }
    for (double v : offsets) {
        if (!std::isfinite(v)) throw ValidationError("SEKernel: offsets must be finite");
    }
    const std::size_t c = offsets.size() / 2;
    for (std::size_t w = 1; w <= c; ++w) {
        if (offsets[c + w] != offsets[c - w]) {
            throw ValidationError("SEKernel: offsets must be symmetric");
        }
    }
    return SEKernel(c, std::move(offsets));
}

void dilate_into(std::span<const double> x, const SEKernel& k, std::span<double> out,
                 std::span<std::size_t> winners) {
    filter_into<Extremum::Max>(x, k, out, winners);
}

void erode_into(std::span<const double> x, const SEKernel& k, std::span<double> out,
                std::span<std::size_t> winners) {
    filter_into<Extremum::Min>(x, k, out, winners);
}

Series dilate(const Series& x, const SEKernel& k) {
    require_finite(x.span(), "dilate");
    std::vector<double> out(x.size());
    dilate_into(x.span(), k, out);
    return Series(std::move(out));
}

Series erode(const Series& x, const SEKernel& k) {
    require_finite(x.span(), "erode");
    std::vector<double> out(x.size());
    erode_into(x.span(), k, out);
    return Series(std::move(out));
}

Series mean_envelope(const Series& x, const SEKernel& k) {
    require_finite(x.span(), "mean_envelope");
    std::vector<double> upper(x.size());
    std::vector<double> lower(x.size());
    dilate_into(x.span(), k, upper);
    erode_into(x.span(), k, lower);
    for (std::size_t i = 0; i < upper.size(); ++i) upper[i] = 0.5 * (upper[i] + lower[i]);
    return Series(std::move(upper));
}

}  // namespace dpad
