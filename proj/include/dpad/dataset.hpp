#pragma once

// Ingestion, chronological splitting and sliding-window generation.

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dpad/tensor.hpp"

namespace dpad {

struct Channel {
    std::string name;
    std::vector<double> values;
};

/// Aligned channels sharing one timestamp column.
struct Dataset {
    std::vector<std::string> timestamps;
    std::vector<Channel> channels;
    /// Sampling interval inferred from the first two timestamps ("1h", "15min",
    /// ...), or "unknown".
    std::string frequency = "unknown";

    std::size_t length() const { return timestamps.size(); }
    std::size_t channel_count() const { return channels.size(); }
    /// Rows [begin, end) as a new dataset.
    Dataset slice(std::size_t begin, std::size_t end) const;
};

enum class MissingPolicy { Reject, ForwardFill };

struct CsvSchema {
    char delimiter = ',';
    MissingPolicy missing = MissingPolicy::Reject;
};

/// First row is a header; first column holds timestamps (strictly
/// increasing, compared numerically when every stamp is a number, else
/// lexically as ISO-8601); remaining columns are numeric channels. Empty,
/// "nan" and "NA" cells count as missing. Errors name the offending line.
Dataset load_csv(const std::string& path, const CsvSchema& schema = {});
Dataset parse_csv(std::istream& in, const CsvSchema& schema = {},
                  const std::string& source = "<stream>");

struct DatasetSplits {
    Dataset train;
    Dataset val;
    Dataset test;
};

/// Contiguous segments of floor(r_train N) and floor(r_val N) rows; the
/// remainder goes to test. Throws ConfigError if the ratios do not sum to
/// one or a segment is shorter than `min_length`.
DatasetSplits split_chronological(const Dataset& ds, double train, double val, double test,
                                  std::size_t min_length);

/// Sliding (input, target) windows over one dataset, stored as start offsets.
class WindowSet {
public:
    /// Throws ValidationError if the dataset is shorter than lookback + horizon.
    WindowSet(std::shared_ptr<const Dataset> data, std::size_t lookback, std::size_t horizon,
              std::size_t stride = 1);

    std::size_t size() const { return starts_.size(); }
    std::size_t lookback() const { return lookback_; }
    std::size_t horizon() const { return horizon_; }
    std::size_t stride() const { return stride_; }
    std::size_t channel_count() const { return data_->channel_count(); }
    std::size_t start(std::size_t i) const { return starts_[i]; }

    std::span<const double> input(std::size_t i, std::size_t channel) const;
    std::span<const double> target(std::size_t i, std::size_t channel) const;
    const Dataset& dataset() const { return *data_; }

private:
    std::shared_ptr<const Dataset> data_;
    std::size_t lookback_;
    std::size_t horizon_;
    std::size_t stride_;
    std::vector<std::size_t> starts_;
};

WindowSet make_windows(std::shared_ptr<const Dataset> ds, std::size_t lookback,
                       std::size_t horizon, std::size_t stride = 1);

/// Writes `index_name,<columns...>` then one row per matrix row, values with
/// 17 significant digits.
void write_matrix_csv(const std::string& path, const std::string& index_name,
                      const std::vector<std::string>& columns, const Matrix& m);
/// Reads a file written by write_matrix_csv back into (column names, matrix).
std::pair<std::vector<std::string>, Matrix> read_matrix_csv(const std::string& path);

}  // namespace dpad
