#include "pte/reference_data.hpp"

namespace pte {

const std::vector<ReferenceRow>& reference_sweep() {
    static const std::vector<ReferenceRow> rows = {
        {0, 7.274, 1.00},
        {5, 5.480, 1.00},
        {10, 4.024, 1.00},
        {15, 3.214, 0.95},
        {20, 2.418, 0.75},
    };
    return rows;
}

}  // namespace pte
