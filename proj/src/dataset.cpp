#include "dpad/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dpad/error.hpp"

namespace dpad {
namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(trim(field));
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && errno != ERANGE;
}

bool is_missing(const std::string& s) {
    std::string lower = s;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return lower.empty() || lower == "nan" || lower == "na" || lower == "null";
}

// Days since 1970-01-01 for a proleptic Gregorian date.
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

bool parse_iso_seconds(const std::string& s, long long& secs) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, se = 0;
    const int n = std::sscanf(s.c_str(), "%d-%d-%d%*[ T]%d:%d:%d", &y, &mo, &d, &h, &mi, &se);
    if (n < 3) return false;
    secs = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 86400LL +
           h * 3600LL + mi * 60LL + se;
    return true;
}

std::string describe_interval(long long secs) {
    if (secs <= 0) return "unknown";
    if (secs % 86400 == 0) return std::to_string(secs / 86400) + "d";
    if (secs % 3600 == 0) return std::to_string(secs / 3600) + "h";
    if (secs % 60 == 0) return std::to_string(secs / 60) + "min";
    return std::to_string(secs) + "s";
}

void check_chronological(const std::vector<std::string>& stamps, const std::string& source) {
    std::vector<double> numeric(stamps.size());
    bool all_numeric = true;
    for (std::size_t i = 0; i < stamps.size() && all_numeric; ++i) {
        all_numeric = parse_number(stamps[i], numeric[i]);
    }
    for (std::size_t i = 1; i < stamps.size(); ++i) {
        const bool increasing =
            all_numeric ? numeric[i] > numeric[i - 1] : stamps[i] > stamps[i - 1];
        if (!increasing) {
            throw ParseError(source + ": line " + std::to_string(i + 2) +
                             ": timestamp '" + stamps[i] + "' is not after '" + stamps[i - 1] +
                             "'");
        }
    }
}

std::string infer_frequency(const std::vector<std::string>& stamps) {
    if (stamps.size() < 2) return "unknown";
    long long a = 0;
    long long b = 0;
    if (parse_iso_seconds(stamps[0], a) && parse_iso_seconds(stamps[1], b)) {
        return describe_interval(b - a);
    }
    return "unknown";
}

}  // namespace

Dataset Dataset::slice(std::size_t begin, std::size_t end) const {
    Dataset out;
    out.frequency = frequency;
    out.timestamps.assign(timestamps.begin() + static_cast<std::ptrdiff_t>(begin),
                          timestamps.begin() + static_cast<std::ptrdiff_t>(end));
    for (const auto& ch : channels) {
        out.channels.push_back(
            {ch.name, std::vector<double>(ch.values.begin() + static_cast<std::ptrdiff_t>(begin),
                                          ch.values.begin() + static_cast<std::ptrdiff_t>(end))});
    }
    return out;
}

Dataset parse_csv(std::istream& in, const CsvSchema& schema, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) header = split_fields(trim(line), schema.delimiter);
    }
    if (header.size() < 2) {
        throw ParseError(source + ": header needs a timestamp column and at least one channel");
    }

    Dataset ds;
    for (std::size_t c = 1; c < header.size(); ++c) ds.channels.push_back({header[c], {}});

    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        const auto fields = split_fields(trimmed, schema.delimiter);
        if (fields.size() != header.size()) {
            throw ParseError(source + ": line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        }
        ds.timestamps.push_back(fields[0]);
        for (std::size_t c = 1; c < fields.size(); ++c) {
            auto& values = ds.channels[c - 1].values;
            double v = 0.0;
            if (is_missing(fields[c])) {
                if (schema.missing == MissingPolicy::Reject || values.empty()) {
                    throw ParseError(source + ": line " + std::to_string(line_no) + ", column '" +
                                     header[c] + "': missing value");
                }
                v = values.back();
            } else if (!parse_number(fields[c], v) || !std::isfinite(v)) {
                throw ParseError(source + ": line " + std::to_string(line_no) + ", column '" +
                                 header[c] + "': non-numeric value '" + fields[c] + "'");
            }
            values.push_back(v);
        }
    }
    if (ds.timestamps.empty()) throw ParseError(source + ": no data rows");
    check_chronological(ds.timestamps, source);
    ds.frequency = infer_frequency(ds.timestamps);
    return ds;
}

Dataset load_csv(const std::string& path, const CsvSchema& schema) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_csv(in, schema, path);
}

DatasetSplits split_chronological(const Dataset& ds, double train, double val, double test,
                                  std::size_t min_length) {
    if (train <= 0 || val <= 0 || test <= 0 || std::fabs(train + val + test - 1.0) > 1e-9) {
        throw ConfigError("split ratios must be positive and sum to 1");
    }
    const std::size_t n = ds.length();
    // The small offset keeps exact products such as 0.7 * 100 from flooring to 69.
    auto floor_count = [n](double r) {
        return static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + 1e-9));
    };
    const std::size_t n_train = floor_count(train);
    const std::size_t n_val = floor_count(val);
    if (n_train + n_val > n) throw ConfigError("split exceeds dataset length");
    const std::size_t n_test = n - n_train - n_val;
    if (n_train < min_length || n_val < min_length || n_test < min_length) {
        throw ConfigError("split segment shorter than lookback + horizon (" +
                          std::to_string(min_length) + "): " + std::to_string(n_train) + "/" +
                          std::to_string(n_val) + "/" + std::to_string(n_test));
    }
    return {ds.slice(0, n_train), ds.slice(n_train, n_train + n_val),
            ds.slice(n_train + n_val, n)};
}

WindowSet::WindowSet(std::shared_ptr<const Dataset> data, std::size_t lookback,
                     std::size_t horizon, std::size_t stride)
    : data_(std::move(data)), lookback_(lookback), horizon_(horizon), stride_(stride) {
    if (lookback == 0 || horizon == 0 || stride == 0) {
        throw ValidationError("make_windows: lookback, horizon and stride must be positive");
    }
    const std::size_t n = data_->length();
    if (n < lookback + horizon) {
        throw ValidationError("make_windows: dataset of length " + std::to_string(n) +
                              " is shorter than lookback + horizon");
    }
    for (std::size_t s = 0; s + lookback + horizon <= n; s += stride) starts_.push_back(s);
}

std::span<const double> WindowSet::input(std::size_t i, std::size_t channel) const {
    return std::span<const double>(data_->channels[channel].values).subspan(starts_[i], lookback_);
}

std::span<const double> WindowSet::target(std::size_t i, std::size_t channel) const {
    return std::span<const double>(data_->channels[channel].values)
        .subspan(starts_[i] + lookback_, horizon_);
}

WindowSet make_windows(std::shared_ptr<const Dataset> ds, std::size_t lookback,
                       std::size_t horizon, std::size_t stride) {
    return WindowSet(std::move(ds), lookback, horizon, stride);
}

void write_matrix_csv(const std::string& path, const std::string& index_name,
                      const std::vector<std::string>& columns, const Matrix& m) {
    if (columns.size() != m.cols()) throw ValidationError("write_matrix_csv: column names mismatch");
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << index_name;
    for (const auto& c : columns) out << ',' << c;
    out << '\n';
    char buf[32];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << r;
        for (std::size_t c = 0; c < m.cols(); ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
            out << ',' << buf;
        }
        out << '\n';
    }
}

std::pair<std::vector<std::string>, Matrix> read_matrix_csv(const std::string& path) {
    const Dataset ds = load_csv(path);
    std::vector<std::string> names;
    Matrix m(ds.length(), ds.channel_count());
    for (std::size_t c = 0; c < ds.channel_count(); ++c) {
        names.push_back(ds.channels[c].name);
        for (std::size_t r = 0; r < ds.length(); ++r) m(r, c) = ds.channels[c].values[r];
    }
    return {names, m};
}

}  // namespace dpad
