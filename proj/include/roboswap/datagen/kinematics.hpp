#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace roboswap::datagen {

struct Vec2 {
  float x = 0.0f, y = 0.0f;
};

inline float dist(Vec2 a, Vec2 b) {
  const float dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

// Planar chain in image coordinates (y down). joint_angles[0] is absolute,
// the rest are relative. Returns J+1 points: anchor, joints, end effector.
std::vector<Vec2> forward_kinematics(Vec2 anchor, const std::vector<float>& lengths,
                                     const float* q);

Vec2 fk_end_effector(Vec2 anchor, const std::vector<float>& lengths, const float* q);

// Damped-least-squares IK step loop; q is warm-start in/out. Returns final
// end-effector error in px.
float ik_damped_least_squares(Vec2 anchor, const std::vector<float>& lengths, Vec2 target,
                              float* q, int iters = 50, float damping = 0.1f);

// Analytic 2-link IK; picks the elbow solution closest to prev_q. Returns
// end-effector error (0 for reachable targets).
float ik_two_link(Vec2 anchor, float l1, float l2, Vec2 target, const float* prev_q, float* q);

}  // namespace roboswap::datagen
