#pragma once

// Scalar-first quaternions for attitude. Convention: q rotates body-frame
// vectors into ECI (passive body->ECI), with the Hamilton product and the
// kinematic relation q_dot = 0.5 * q ⊗ (0, w_body).

#include <cmath>

#include "detumble/errors.hpp"
#include "detumble/format.hpp"
#include "detumble/linalg.hpp"

namespace detumble {

struct Quaternion {
    double q0 = 1.0; // scalar part
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;

    bool operator==(const Quaternion&) const = default;
};

// A quaternion time derivative shares the component layout.
using QuaternionRate = Quaternion;

inline double norm(const Quaternion& q) {
    return std::sqrt(q.q0 * q.q0 + q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3);
}

inline bool is_finite(const Quaternion& q) {
    return std::isfinite(q.q0) && std::isfinite(q.q1) &&
           std::isfinite(q.q2) && std::isfinite(q.q3);
}

// Hamilton product a ⊗ b.
inline Quaternion quat_multiply(const Quaternion& a, const Quaternion& b) {
    return {a.q0 * b.q0 - a.q1 * b.q1 - a.q2 * b.q2 - a.q3 * b.q3,
            a.q0 * b.q1 + a.q1 * b.q0 + a.q2 * b.q3 - a.q3 * b.q2,
            a.q0 * b.q2 - a.q1 * b.q3 + a.q2 * b.q0 + a.q3 * b.q1,
            a.q0 * b.q3 + a.q1 * b.q2 - a.q2 * b.q1 + a.q3 * b.q0};
}

inline Quaternion quat_normalize(const Quaternion& q) {
    double n = norm(q);
    if (!(n > 1e-9))
        throw DegenerateQuaternion("quaternion norm " + format_g17(n) +
                                   " is too small to normalize");
    return {q.q0 / n, q.q1 / n, q.q2 / n, q.q3 / n};
}

// Direction cosine matrix rotating body-frame vectors into ECI.
inline Mat3 quat_to_dcm(const Quaternion& q) {
    if (!(std::abs(norm(q) - 1.0) <= 1e-9))
        throw DegenerateQuaternion("quat_to_dcm requires a unit quaternion, got norm " +
                                   format_g17(norm(q)));
    double q0 = q.q0, q1 = q.q1, q2 = q.q2, q3 = q.q3;
    return {{{1.0 - 2.0 * (q2 * q2 + q3 * q3), 2.0 * (q1 * q2 - q0 * q3), 2.0 * (q1 * q3 + q0 * q2)},
             {2.0 * (q1 * q2 + q0 * q3), 1.0 - 2.0 * (q1 * q1 + q3 * q3), 2.0 * (q2 * q3 - q0 * q1)},
             {2.0 * (q1 * q3 - q0 * q2), 2.0 * (q2 * q3 + q0 * q1), 1.0 - 2.0 * (q1 * q1 + q2 * q2)}}};
}

// Attitude kinematics: q_dot = 0.5 * q ⊗ (0, w). The rate is orthogonal to
// q, so the norm is preserved at the differential level.
inline QuaternionRate quat_derivative(const Quaternion& q, const Vec3& w_body) {
    Quaternion rate = quat_multiply(q, {0.0, w_body.x, w_body.y, w_body.z});
    return {0.5 * rate.q0, 0.5 * rate.q1, 0.5 * rate.q2, 0.5 * rate.q3};
}

} // namespace detumble
