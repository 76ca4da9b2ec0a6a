#include "segrowth/series.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace segrowth {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool parse_int(std::string_view s, int& out) {
    s = trim(s);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

} // namespace

void validate(const AnnualSeries& series) {
    if (series.observations.size() < kMinObservations) {
        throw DataError("series '" + series.label + "' has " +
                        std::to_string(series.observations.size()) +
                        " observations; at least " + std::to_string(kMinObservations) +
                        " are required");
    }
    for (std::size_t i = 0; i < series.observations.size(); ++i) {
        const auto& obs = series.observations[i];
        if (!std::isfinite(obs.count) || obs.count < 0.0) {
            throw DataError("count for year " + std::to_string(obs.year) +
                            " is negative or not finite");
        }
        if (i > 0) {
            int prev = series.observations[i - 1].year;
            if (obs.year == prev) {
                throw DataError("duplicate year " + std::to_string(obs.year));
            }
            if (obs.year < prev) {
                throw DataError("years not sorted at " + std::to_string(obs.year));
            }
        }
    }
}

AnnualSeries load_csv(std::istream& in, const CsvOptions& options, std::string label) {
    AnnualSeries series;
    series.label = std::move(label);

    std::string line;
    int line_no = 0;
    bool saw_data_line = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view row = trim(line);
        if (row.empty() || row.front() == '#') continue;

        auto sep = row.find(options.delimiter);
        if (sep == std::string_view::npos) {
            if (!saw_data_line && options.header != CsvOptions::Header::Absent) {
                saw_data_line = true; // lone header token
                continue;
            }
            throw DataError("line " + std::to_string(line_no) +
                            ": expected two fields separated by '" +
                            std::string(1, options.delimiter) + "'");
        }
        std::string_view year_field = row.substr(0, sep);
        std::string_view count_field = row.substr(sep + 1);

        int year = 0;
        double count = 0.0;
        bool year_ok = parse_int(year_field, year);
        bool count_ok = parse_double(count_field, count);

        if (!saw_data_line) {
            saw_data_line = true;
            bool treat_as_header =
                options.header == CsvOptions::Header::Present ||
                (options.header == CsvOptions::Header::Auto && !year_ok);
            if (treat_as_header) {
                if (options.header == CsvOptions::Header::Present && year_ok && count_ok) {
                    // declared header happens to look numeric; still skip it
                }
                continue;
            }
        }
        if (!year_ok) {
            throw DataError("line " + std::to_string(line_no) + ": cannot parse year '" +
                            std::string(trim(year_field)) + "'");
        }
        if (!count_ok) {
            throw DataError("line " + std::to_string(line_no) + ": cannot parse count '" +
                            std::string(trim(count_field)) + "'");
        }
        if (!std::isfinite(count) || count < 0.0) {
            std::ostringstream msg;
            msg << "line " << line_no << ": invalid count " << count << " for year " << year;
            throw DataError(msg.str());
        }
        series.observations.push_back({year, count});
    }

    std::stable_sort(series.observations.begin(), series.observations.end(),
                     [](const Observation& a, const Observation& b) { return a.year < b.year; });
    validate(series);
    return series;
}

AnnualSeries load_csv_file(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return load_csv(in, options, path);
}

LogSeries log_transform(const AnnualSeries& series, ZeroPolicy policy) {
    validate(series);
    LogSeries out;
    out.source_label = series.label;
    out.points.reserve(series.observations.size());
    for (const auto& obs : series.observations) {
        if (obs.count == 0.0) {
            if (policy == ZeroPolicy::Error) {
                throw DataError("count is zero for year " + std::to_string(obs.year) +
                                "; ln(0) is undefined");
            }
            out.dropped_years.push_back(obs.year);
            continue;
        }
        out.points.push_back({obs.year, std::log(obs.count)});
    }
    return out;
}

void write_csv(std::ostream& out, const AnnualSeries& series) {
    out << "year,count\n";
    char buf[64];
    for (const auto& obs : series.observations) {
        std::snprintf(buf, sizeof(buf), "%.17g", obs.count);
        out << obs.year << ',' << buf << '\n';
    }
}

void write_tsv(std::ostream& out, const LogSeries& series) {
    char buf[64];
    for (const auto& p : series.points) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.log_count);
        out << p.year << '\t' << buf << '\n';
    }
}

} // namespace segrowth
