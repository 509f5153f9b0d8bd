#pragma once

// Sweep results and their CSV form:
//   f,trials,successes,success_rate,mean_elapsed_s,median_elapsed_s
// one row per f, reals with 6 decimal places, '.' decimal point regardless
// of locale. Mean elapsed time is over successful trials only; the median is
// over all counted trials. Trials that failed for infrastructure reasons
// (transport loss) are excluded from every statistic.

#include <string>
#include <vector>

#include "pte/types.hpp"

namespace pte {

struct ResultRow {
    int f = 0;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;   // successes / trials
    double mean_elapsed_s = 0.0; // over successful trials; 0 when none
    double median_elapsed_s = 0.0;
    std::vector<EpisodeResult> trial_results; // not serialized

    friend bool operator==(const ResultRow& a, const ResultRow& b) {
        return a.f == b.f && a.trials == b.trials && a.successes == b.successes &&
               a.success_rate == b.success_rate &&
               a.mean_elapsed_s == b.mean_elapsed_s &&
               a.median_elapsed_s == b.median_elapsed_s;
    }
};

// Computes a row's statistics from its trial results.
ResultRow aggregate_row(int f, std::vector<EpisodeResult> trials);

// Locale-independent fixed-point formatting ('.' decimal point always);
// the building block of the CSV writer, shared with the CLI's tables.
std::string format_fixed(double value, int precision);

// Formats rows as the results CSV (text, including header and trailing
// newline). write_results writes exactly this text.
std::string format_results(const std::vector<ResultRow>& rows);

void write_results(const std::vector<ResultRow>& rows, const std::string& path);

// Parses a results CSV. Row statistics are restored; trial_results are left
// empty. Throws parse_error with a line number on malformed input.
std::vector<ResultRow> read_results(const std::string& path);

}  // namespace pte
