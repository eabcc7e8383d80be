#include "dpad/series.hpp"

#include <cmath>
#include <string>

#include "dpad/error.hpp"

namespace dpad {

void require_finite(std::span<const double> x, const char* what) {
    if (x.empty()) {
        throw ValidationError(std::string(what) + ": series must not be empty");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw ValidationError(std::string(what) + ": non-finite sample at index " +
                                  std::to_string(i));
        }
    }
}

Series::Series(std::vector<double> values) : values_(std::move(values)) {
    require_finite(values_, "Series");
}

Series::Series(std::initializer_list<double> values) : Series(std::vector<double>(values)) {}

}  // namespace dpad
