#include "pte/results_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "pte/errors.hpp"

namespace pte {

namespace {

constexpr const char* kHeader = "f,trials,successes,success_rate,mean_elapsed_s,median_elapsed_s";

std::string fixed6(double x) { return format_fixed(x, 6); }

double parse_real(std::string_view s, std::size_t line) {
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw parse_error("bad real value '" + std::string(s) + "'", line, line - 1);
    return x;
}

long parse_int(std::string_view s, std::size_t line) {
    long x = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw parse_error("bad integer value '" + std::string(s) + "'", line, line - 1);
    return x;
}

std::vector<std::string_view> split_fields(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

std::string format_fixed(double value, int precision) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::fixed, precision);
    return std::string(buf, res.ptr);
}

ResultRow aggregate_row(int f, std::vector<EpisodeResult> trials) {
    ResultRow row;
    row.f = f;

    std::vector<double> counted_elapsed;
    double success_sum = 0.0;
    for (const auto& trial : trials) {
        if (trial.failure_cause == FailureCause::infrastructure) continue;
        ++row.trials;
        counted_elapsed.push_back(trial.elapsed_seconds);
        if (trial.success) {
            ++row.successes;
            success_sum += trial.elapsed_seconds;
        }
    }

    row.success_rate = row.trials > 0
                           ? static_cast<double>(row.successes) /
                                 static_cast<double>(row.trials)
                           : 0.0;
    row.mean_elapsed_s =
        row.successes > 0 ? success_sum / static_cast<double>(row.successes) : 0.0;

    if (!counted_elapsed.empty()) {
        std::sort(counted_elapsed.begin(), counted_elapsed.end());
        const std::size_t n = counted_elapsed.size();
        row.median_elapsed_s = (n % 2 == 1)
                                   ? counted_elapsed[n / 2]
                                   : 0.5 * (counted_elapsed[n / 2 - 1] +
                                            counted_elapsed[n / 2]);
    }

    row.trial_results = std::move(trials);
    return row;
}

std::string format_results(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << kHeader << '\n';
    for (const auto& row : rows) {
        out << row.f << ',' << row.trials << ',' << row.successes << ','
            << fixed6(row.success_rate) << ',' << fixed6(row.mean_elapsed_s) << ','
            << fixed6(row.median_elapsed_s) << '\n';
    }
    return out.str();
}

void write_results(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open results file for writing: " + path);
    out << format_results(rows);
    if (!out) throw io_error("write failed on results file: " + path);
}

std::vector<ResultRow> read_results(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open results file for reading: " + path);

    std::string text;
    std::size_t line = 0;
    if (!std::getline(in, text) || text != kHeader)
        throw parse_error("missing or wrong results header", 1, 0);
    ++line;

    std::vector<ResultRow> rows;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty()) continue;
        const auto fields = split_fields(text);
        if (fields.size() != 6)
            throw parse_error("expected 6 fields, got " + std::to_string(fields.size()),
                              line, rows.size());
        ResultRow row;
        row.f = static_cast<int>(parse_int(fields[0], line));
        row.trials = static_cast<int>(parse_int(fields[1], line));
        row.successes = static_cast<int>(parse_int(fields[2], line));
        row.success_rate = parse_real(fields[3], line);
        row.mean_elapsed_s = parse_real(fields[4], line);
        row.median_elapsed_s = parse_real(fields[5], line);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace pte
