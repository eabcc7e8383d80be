#include "dpad/memd.hpp"

#include <cmath>
#include <string>

#include "dpad/error.hpp"
#include "dpad/ops.hpp"

namespace dpad {
namespace {

constexpr double kVanishingCandidate = 1e-12;

double l2_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

}  // namespace

std::vector<double> ComponentMatrix::reconstruct() const {
    std::vector<double> out(length(), 0.0);
    for (std::size_t t = 0; t < length(); ++t) {
        for (std::size_t i = 0; i < count(); ++i) out[t] += data_(t, i);
    }
    return out;
}

double relative_tolerance(std::span<const double> prev, std::span<const double> cur) {
    if (prev.size() != cur.size()) {
        throw ValidationError("relative_tolerance: length mismatch");
    }
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        const double d = prev[i] - cur[i];
        num += d * d;
        den += prev[i] * prev[i];
    }
    if (den == 0.0) throw DegenerateSignal("relative_tolerance: previous candidate has zero norm");
    return num / den;
}

std::size_t count_strict_extrema(std::span<const double> x) {
    std::size_t n = 0;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const bool peak = x[i] > x[i - 1] && x[i] > x[i + 1];
        const bool trough = x[i] < x[i - 1] && x[i] < x[i + 1];
        if (peak || trough) ++n;
    }
    return n;
}

Series sift_once(const Series& s, const SEKernel& k) {
    const Series m = mean_envelope(s, k);
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] - m[i];
    return Series(std::move(out));
}

namespace nn {

std::optional<ImfSplitVar> extract_imf(const Var& s, const SiftConfig& cfg, double reference_norm) {
    if (s.cols() != 1) throw ValidationError("extract_imf: expected an n x 1 column");
    if (cfg.max_sift < 1) throw ConfigError("extract_imf: max_sift must be at least 1");
    if (count_strict_extrema(s.value().data()) < 2) return std::nullopt;

    SiftState state;
    state.current = s.value().storage();
    Var working = s;
    while (true) {
        Var candidate = sub(working, mean_envelope(working, cfg.kernel));
        ++state.sift_count;
        const auto cand = candidate.value().data();
        if (l2_norm(cand) < kVanishingCandidate * reference_norm) return std::nullopt;

        const auto& reference = state.previous_candidate ? *state.previous_candidate : state.current;
        const bool converged = relative_tolerance(reference, cand) <= cfg.rt_threshold;
        if (converged || state.sift_count >= cfg.max_sift) {
            return ImfSplitVar{candidate, sub(s, candidate), state.sift_count};
        }
        state.previous_candidate.emplace(cand.begin(), cand.end());
        working = candidate;
    }
}

Var mcd_decompose(const Var& x, std::size_t count, const SiftConfig& cfg) {
    if (x.cols() != 1) throw ValidationError("mcd_decompose: expected an n x 1 column");
    if (count < 2) throw ValidationError("mcd_decompose: need at least 2 components");
    const std::size_t window = cfg.kernel.length();
    if (x.rows() < window) {
        throw ValidationError("mcd_decompose: input length " + std::to_string(x.rows()) +
                              " is shorter than the SE window " + std::to_string(window));
    }
    require_finite(x.value().data(), "mcd_decompose");

    const double reference = l2_norm(x.value().data());
    std::vector<Var> columns;
    columns.reserve(count);
    Var residual = x;
    while (columns.size() + 1 < count) {
        auto split = extract_imf(residual, cfg, reference);
        if (!split) break;
        columns.push_back(split->imf);
        residual = split->residual;
    }
    while (columns.size() + 1 < count) columns.push_back(Var::constant(Matrix(x.rows(), 1)));
    columns.push_back(residual);
    return hcat(columns);
}

}  // namespace nn

std::optional<ImfSplit> extract_imf(const Series& s, const SiftConfig& cfg) {
    nn::NoGradGuard no_grad;
    const auto x = nn::Var::constant(Matrix::column(s.span()));
    auto split = nn::extract_imf(x, cfg, l2_norm(s.span()));
    if (!split) return std::nullopt;
    return ImfSplit{Series(split->imf.value().storage()),
                    Series(split->residual.value().storage()), split->sifts};
}

ComponentMatrix mcd_decompose(const Series& x, std::size_t count, const SiftConfig& cfg) {
    nn::NoGradGuard no_grad;
    auto out = nn::mcd_decompose(nn::Var::constant(Matrix::column(x.span())), count, cfg);
    return ComponentMatrix(out.value());
}

}  // namespace dpad
