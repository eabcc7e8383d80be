#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dpad {

/// A finite, non-empty 1-D sequence of samples.
class Series {
public:
    Series() = default;
    /// Throws ValidationError if empty or any value is NaN/Inf.
    explicit Series(std::vector<double> values);
    Series(std::initializer_list<double> values);

    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }

    std::span<const double> span() const { return values_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double> release() && { return std::move(values_); }

    auto begin() const { return values_.begin(); }
    auto end() const { return values_.end(); }

    friend bool operator==(const Series&, const Series&) = default;

private:
    std::vector<double> values_;
};

/// Throws ValidationError naming `what` if `x` is empty or non-finite.
void require_finite(std::span<const double> x, const char* what);

}  // namespace dpad
