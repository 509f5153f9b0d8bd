#include "pte/pose.hpp"

#include <algorithm>
#include <cmath>

#include "pte/errors.hpp"

namespace pte {

namespace {

using Vec3 = std::array<double, 3>;

double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

double norm3(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

bool finite3(const Vec3& a) {
    return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Columns of R as vectors: i = first column, j = second, k = third.
Vec3 col(const Mat3& r, int c) { return {r[0 + c], r[3 + c], r[6 + c]}; }

Mat3 from_cols(const Vec3& i, const Vec3& j, const Vec3& k) {
    return {i[0], j[0], k[0],
            i[1], j[1], k[1],
            i[2], j[2], k[2]};
}

}  // namespace

Mat3 rotation_from_euler(const std::array<double, 3>& o) {
    const double cr = std::cos(o[0]), sr = std::sin(o[0]); // roll, about x
    const double cp = std::cos(o[1]), sp = std::sin(o[1]); // pitch, about y
    const double cy = std::cos(o[2]), sy = std::sin(o[2]); // yaw, about z
    // R = Rz(yaw) * Ry(pitch) * Rx(roll)
    return {cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr,
            sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr,
            -sp,     cp * sr,                cp * cr};
}

std::array<double, 3> euler_from_rotation(const Mat3& r) {
    const double sp = -r[6]; // -R(2,0)
    if (sp >= 1.0 - 1e-12) {
        // pitch = +pi/2: roll and yaw are coupled; fix yaw = 0.
        return {std::atan2(r[1], r[4]), std::asin(1.0), 0.0};
    }
    if (sp <= -1.0 + 1e-12) {
        // pitch = -pi/2
        return {-std::atan2(r[1], r[4]), std::asin(-1.0), 0.0};
    }
    return {std::atan2(r[7], r[8]),   // roll  = atan2(R(2,1), R(2,2))
            std::asin(sp),            // pitch
            std::atan2(r[3], r[0])};  // yaw   = atan2(R(1,0), R(0,0))
}

namespace {

void encode_arm(const ArmPose& arm, ActionVector& out, std::size_t base) {
    if (!finite3(arm.p) || !finite3(arm.o) || !std::isfinite(arm.theta))
        throw invalid_argument("pose_to_feature: non-finite arm pose");

    const Mat3 r = rotation_from_euler(arm.o);
    out[base + 0] = arm.p[0];
    out[base + 1] = arm.p[1];
    out[base + 2] = arm.p[2];
    for (int c = 0; c < 3; ++c) {
        const Vec3 v = col(r, c);
        out[base + 3 + 3 * static_cast<std::size_t>(c) + 0] = v[0];
        out[base + 3 + 3 * static_cast<std::size_t>(c) + 1] = v[1];
        out[base + 3 + 3 * static_cast<std::size_t>(c) + 2] = v[2];
    }
    out[base + 12] = clamp01(arm.theta);
}

ArmPose decode_arm(const ActionVector& v, std::size_t base) {
    ArmPose arm;
    arm.p = {v[base + 0], v[base + 1], v[base + 2]};
    Vec3 i = {v[base + 3], v[base + 4], v[base + 5]};
    Vec3 j = {v[base + 6], v[base + 7], v[base + 8]};
    if (!finite3(arm.p) || !finite3(i) || !finite3(j) ||
        !std::isfinite(v[base + 12]))
        throw invalid_argument("feature_to_pose: non-finite feature");

    // Modified Gram-Schmidt on (i, j); k is rebuilt from the cross product,
    // so the logged k column only needs to exist, not to be consistent.
    const double ni = norm3(i);
    if (ni < 1e-3) throw decode_error("feature_to_pose: degenerate i column");
    i = scaled(i, 1.0 / ni);
    Vec3 j_orth = j;
    const double proj = dot(j_orth, i);
    for (int d = 0; d < 3; ++d) j_orth[static_cast<std::size_t>(d)] -= proj * i[static_cast<std::size_t>(d)];
    const double nj = norm3(j_orth);
    if (nj < 1e-3) throw decode_error("feature_to_pose: degenerate j column");
    j_orth = scaled(j_orth, 1.0 / nj);
    const Vec3 k = cross(i, j_orth);

    arm.o = euler_from_rotation(from_cols(i, j_orth, k));
    arm.theta = clamp01(v[base + 12]);
    return arm;
}

}  // namespace

ActionVector pose_to_feature(const PoseCommand& cmd) {
    ActionVector out(static_cast<std::size_t>(kPoseFeatureDof), 0.0);
    encode_arm(cmd.right, out, 0);
    encode_arm(cmd.left, out, 13);
    return out;
}

PoseCommand feature_to_pose(const ActionVector& v) {
    if (static_cast<int>(v.size()) != kPoseFeatureDof)
        throw shape_error("feature_to_pose expects 26 entries, got " +
                          std::to_string(v.size()));
    PoseCommand cmd;
    cmd.right = decode_arm(v, 0);
    cmd.left = decode_arm(v, 13);
    return cmd;
}

}  // namespace pte
