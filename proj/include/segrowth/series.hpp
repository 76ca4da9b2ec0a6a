#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "segrowth/errors.hpp"

namespace segrowth {

struct Observation {
    int year = 0;
    double count = 0.0;
};

/// Annual count time series: strictly increasing years, non-negative finite
/// counts, at least kMinObservations points.
struct AnnualSeries {
    std::vector<Observation> observations;
    std::string label;
};

struct LogPoint {
    int year = 0;
    double log_count = 0.0;
};

/// Natural-log view of an AnnualSeries. Years whose count is zero cannot be
/// logged; depending on policy they are recorded in dropped_years.
struct LogSeries {
    std::vector<LogPoint> points;
    std::vector<int> dropped_years;
    std::string source_label;
};

inline constexpr std::size_t kMinObservations = 4;

enum class ZeroPolicy {
    DropWithWarning, ///< omit zero-count years, record them in dropped_years
    Error            ///< abort on the first zero-count year
};

struct CsvOptions {
    char delimiter = ',';
    enum class Header { Auto, Present, Absent } header = Header::Auto;
};

/// Throws DataError unless all AnnualSeries invariants hold.
void validate(const AnnualSeries& series);

/// Parses `year,count` rows. Lines starting with '#' and blank lines are
/// ignored; rows are sorted by year before validation. Errors carry the
/// 1-based physical line number.
AnnualSeries load_csv(std::istream& in, const CsvOptions& options = {},
                      std::string label = {});
AnnualSeries load_csv_file(const std::string& path, const CsvOptions& options = {});

LogSeries log_transform(const AnnualSeries& series,
                        ZeroPolicy policy = ZeroPolicy::DropWithWarning);

/// Writes `year,count` with a header line; load_csv round-trips this exactly.
void write_csv(std::ostream& out, const AnnualSeries& series);

/// Debug serialization: `year<TAB>log_count`, one point per line.
void write_tsv(std::ostream& out, const LogSeries& series);

} // namespace segrowth
