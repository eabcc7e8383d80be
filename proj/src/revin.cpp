#include "dpad/revin.hpp"

#include <cmath>

#include "dpad/ops.hpp"

namespace dpad {

RevinState revin_statistics(std::span<const double> x) {
    require_finite(x, "revin");
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size());
    return {mean, std::sqrt(var)};
}

std::pair<Series, RevinState> revin_normalize(const Series& x) {
    const RevinState st = revin_statistics(x.span());
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - st.mean) / (st.stdev + kRevinEps);
    return {Series(std::move(out)), st};
}

Series revin_denormalize(const Series& y, const RevinState& st) {
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] * (st.stdev + kRevinEps) + st.mean;
    return Series(std::move(out));
}

namespace nn {

Var revin_normalize(const Var& x, const RevinState& st, const RevinAffine& affine) {
    const double inv = 1.0 / (st.stdev + kRevinEps);
    Var out = affine_const(x, inv, -st.mean * inv);
    if (affine.enabled()) out = scalar_affine(out, affine.scale, affine.shift);
    return out;
}

Var revin_denormalize(const Var& y, const RevinState& st, const RevinAffine& affine) {
    Var out = y;
    if (affine.enabled()) out = inverse_scalar_affine(out, affine.scale, affine.shift, kRevinEps * kRevinEps);
    return affine_const(out, st.stdev + kRevinEps, st.mean);
}

}  // namespace nn
}  // namespace dpad
