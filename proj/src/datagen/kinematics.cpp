#include "roboswap/datagen/kinematics.hpp"

#include <cmath>

namespace roboswap::datagen {

std::vector<Vec2> forward_kinematics(Vec2 anchor, const std::vector<float>& lengths,
                                     const float* q) {
  std::vector<Vec2> pts;
  pts.reserve(lengths.size() + 1);
  pts.push_back(anchor);
  float phi = 0.0f;
  Vec2 p = anchor;
  for (size_t i = 0; i < lengths.size(); ++i) {
    phi += q[i];
    p.x += lengths[i] * std::cos(phi);
    p.y += lengths[i] * std::sin(phi);
    pts.push_back(p);
  }
  return pts;
}

Vec2 fk_end_effector(Vec2 anchor, const std::vector<float>& lengths, const float* q) {
  float phi = 0.0f;
  Vec2 p = anchor;
  for (size_t i = 0; i < lengths.size(); ++i) {
    phi += q[i];
    p.x += lengths[i] * std::cos(phi);
    p.y += lengths[i] * std::sin(phi);
  }
  return p;
}

float ik_damped_least_squares(Vec2 anchor, const std::vector<float>& lengths, Vec2 target,
                              float* q, int iters, float damping) {
  const int J = static_cast<int>(lengths.size());
  for (int it = 0; it < iters; ++it) {
    const auto pts = forward_kinematics(anchor, lengths, q);
    const Vec2 ee = pts.back();
    const float ex = target.x - ee.x;
    const float ey = target.y - ee.y;
    if (ex * ex + ey * ey < 1e-8f) break;

    // Jacobian columns: d(ee)/d(q_j) = rotate90(ee - joint_j).
    std::vector<float> jx(J), jy(J);
    for (int j = 0; j < J; ++j) {
      const float rx = ee.x - pts[j].x;
      const float ry = ee.y - pts[j].y;
      jx[j] = -ry;
      jy[j] = rx;
    }
    // dq = J^T (J J^T + d^2 I)^-1 e  (2x2 inverse)
    double a = damping * damping, bq = 0.0, cq = damping * damping;
    double b = 0.0;
    for (int j = 0; j < J; ++j) {
      a += static_cast<double>(jx[j]) * jx[j];
      b += static_cast<double>(jx[j]) * jy[j];
      cq += static_cast<double>(jy[j]) * jy[j];
    }
    bq = b;
    const double det = a * cq - bq * bq;
    if (std::abs(det) < 1e-12) break;
    const double m00 = cq / det, m01 = -bq / det, m11 = a / det;
    const double ux = m00 * ex + m01 * ey;
    const double uy = m01 * ex + m11 * ey;
    for (int j = 0; j < J; ++j)
      q[j] += static_cast<float>(jx[j] * ux + jy[j] * uy);
  }
  const Vec2 ee = fk_end_effector(anchor, lengths, q);
  return dist(ee, target);
}

float ik_two_link(Vec2 anchor, float l1, float l2, Vec2 target, const float* prev_q, float* q) {
  const float dx = target.x - anchor.x;
  const float dy = target.y - anchor.y;
  const float d2 = dx * dx + dy * dy;
  const float d = std::sqrt(d2);
  float c2 = (d2 - l1 * l1 - l2 * l2) / (2.0f * l1 * l2);
  c2 = c2 < -1.0f ? -1.0f : (c2 > 1.0f ? 1.0f : c2);
  const float s2 = std::sqrt(std::max(0.0f, 1.0f - c2 * c2));

  float best0 = 0.0f, best1 = 0.0f;
  float best_cost = 1e30f;
  for (int sign = -1; sign <= 1; sign += 2) {
    const float q2 = std::atan2(sign * s2, c2);
    const float q1 = std::atan2(dy, dx) - std::atan2(l2 * std::sin(q2), l1 + l2 * std::cos(q2));
    float cost = 0.0f;
    if (prev_q) {
      auto angdiff = [](float a, float b) {
        float x = a - b;
        while (x > 3.14159265f) x -= 6.2831853f;
        while (x < -3.14159265f) x += 6.2831853f;
        return x;
      };
      const float d0 = angdiff(q1, prev_q[0]);
      const float d1 = angdiff(q2, prev_q[1]);
      cost = d0 * d0 + d1 * d1;
      // keep continuity with the previous frame by unwrapping toward it
      if (cost < best_cost) {
        best_cost = cost;
        best0 = prev_q[0] + d0;
        best1 = prev_q[1] + d1;
      }
      continue;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best0 = q1;
      best1 = q2;
    }
  }
  q[0] = best0;
  q[1] = best1;
  const Vec2 ee = fk_end_effector(anchor, {l1, l2}, q);
  (void)d;
  return dist(ee, target);
}

}  // namespace roboswap::datagen
