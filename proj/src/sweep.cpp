#include "pte/sweep.hpp"

#include <algorithm>

#include "pte/errors.hpp"

namespace pte {

std::vector<ResultRow> sweep_f(const SweepSpec& spec,
                               const TrialObserver& observer) {
    if (spec.trials_per_f < 1) {
        throw invalid_argument("sweep requires at least one trial per f");
    }
    if (spec.f_values.empty()) {
        return {};  // nothing requested, nothing measured
    }
    const int L = spec.ensemble.chunk_len;
    std::vector<int> fs = spec.f_values;
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    for (int f : fs) {
        if (f < 0 || f > L - 1) {
            throw invalid_argument("sweep f value " + std::to_string(f) +
                                   " outside [0, " + std::to_string(L - 1) +
                                   "]");
        }
    }

    std::vector<ResultRow> rows;
    rows.reserve(fs.size());
    for (int f : fs) {
        EnsembleConfig ensemble = spec.ensemble;
        ensemble.f = f;
        std::vector<EpisodeResult> trials;
        trials.reserve(static_cast<std::size_t>(spec.trials_per_f));
        for (int k = 0; k < spec.trials_per_f; ++k) {
            LoopOptions options;
            options.want_trace = false;  // traces of long sweeps add up fast
            EpisodeResult r = run_episode(
                spec.base_seed + static_cast<std::uint64_t>(k), spec.scenario,
                ensemble, spec.predictor, spec.plant, options);
            if (observer) {
                observer(f, k, r);
            }
            trials.push_back(std::move(r));
        }
        rows.push_back(aggregate_row(f, std::move(trials)));
    }
    return rows;
}

}  // namespace pte
