#pragma once

#include <vector>

namespace pte {

// One row of the published hardware-study measurements: anticipation offset,
// mean elapsed time over successful trials, and success rate over 20 trials.
struct ReferenceRow {
    int f;
    double mean_elapsed_s;
    double success_rate;  // fraction in [0, 1]
};

// The reference sweep measured on the physical dual-arm rig.  `report`
// overlays these next to locally produced results; the simulator is
// calibrated to reproduce the direction and rough magnitude of the trend,
// not these exact numbers.
const std::vector<ReferenceRow>& reference_sweep();

}  // namespace pte
