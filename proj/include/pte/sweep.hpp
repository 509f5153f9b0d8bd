#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pte/episode.hpp"
#include "pte/results_io.hpp"
#include "pte/types.hpp"

namespace pte {

// Everything needed to reproduce a sweep: which anticipation offsets to
// evaluate, how many trials per offset, and the trial-zero seed.  Trial k of
// every offset uses base_seed + k, so the same k-th episode across offsets
// shares its block spawn and noise stream — the comparison is paired.
struct SweepSpec {
    std::vector<int> f_values{0, 5, 10, 15, 20};
    int trials_per_f = 20;
    std::uint64_t base_seed = 1;
    Scenario scenario{};
    EnsembleConfig ensemble{};   // ensemble.f is overwritten per sweep point
    PredictorConfig predictor{};
    PlantLimits plant{};
};

// Optional progress hook: called after every finished trial with
// (f, trial_index, result).  Useful for long stress sweeps.
using TrialObserver =
    std::function<void(int f, int trial, const EpisodeResult&)>;

// Runs trials_per_f episodes at every f in spec.f_values and aggregates each
// offset into a ResultRow.  All f values are validated against the chunk
// length up front so a bad sweep fails before any simulation time is spent.
// Rows come back sorted by f ascending regardless of input order.
std::vector<ResultRow> sweep_f(const SweepSpec& spec,
                               const TrialObserver& observer = nullptr);

}  // namespace pte
