#include "pte/types.hpp"

namespace pte {

std::string to_string(FailureCause c) {
    switch (c) {
        case FailureCause::none: return "none";
        case FailureCause::drop: return "drop";
        case FailureCause::misplace: return "misplace";
        case FailureCause::timeout: return "timeout";
        case FailureCause::infrastructure: return "infrastructure";
    }
    return "unknown";
}

}  // namespace pte
