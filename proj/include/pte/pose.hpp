#pragma once

// Codec between dual-arm pose commands and the flat 26-dof action feature
// used by chunk logs: per arm, position (3), the three columns of the
// orientation's rotation matrix (9), and grip (1). Rotation-matrix columns
// avoid Euler wrap-around discontinuities in logged/averaged data; decoding
// re-orthonormalizes, which also absorbs the small non-orthogonality of
// weighted averages of rotations.

#include <array>

#include "pte/types.hpp"

namespace pte {

inline constexpr int kPoseFeatureDof = 26;

// Euler angles are intrinsic Z-Y-X: o = (roll, pitch, yaw),
// R = Rz(yaw) * Ry(pitch) * Rx(roll).
struct ArmPose {
    std::array<double, 3> p{0.0, 0.0, 0.0}; // position, m
    std::array<double, 3> o{0.0, 0.0, 0.0}; // (roll, pitch, yaw), rad
    double theta = 0.0;                     // grip in [0, 1]
};

struct PoseCommand {
    ArmPose right;
    ArmPose left;
};

// Row-major 3x3 rotation helpers, exposed for tests.
using Mat3 = std::array<double, 9>;
Mat3 rotation_from_euler(const std::array<double, 3>& o);
std::array<double, 3> euler_from_rotation(const Mat3& r);

// Feature layout:
//   [0..2]   right position      [13..15] left position
//   [3..5]   right column i      [16..18] left column i
//   [6..8]   right column j      [19..21] left column j
//   [9..11]  right column k      [22..24] left column k
//   [12]     right grip          [25]     left grip
// Throws invalid_argument on non-finite input. Emitted columns are
// orthonormal to machine precision. Grips are clamped to [0, 1].
ActionVector pose_to_feature(const PoseCommand& cmd);

// Inverse: re-orthonormalizes the embedded columns (modified Gram-Schmidt on
// i and j, then k = i x j) and recovers Euler angles under the fixed
// convention. Grips clamped to [0, 1]. Throws shape_error unless the vector
// has 26 entries, invalid_argument on non-finite input, and decode_error
// when a column is degenerate (norm < 1e-3).
PoseCommand feature_to_pose(const ActionVector& v);

}  // namespace pte
