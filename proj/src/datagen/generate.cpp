#include "roboswap/datagen/generate.hpp"

#include <cmath>

#include "roboswap/core/error.hpp"
#include "roboswap/core/rng.hpp"

namespace roboswap::datagen {

namespace {

constexpr float kPi = 3.14159265358979323846f;

float reach_budget(int h, int w) { return 0.36f * static_cast<float>(std::min(h, w)); }

float smoothstep(float u) { return u * u * (3.0f - 2.0f * u); }

struct Polar {
  float rho, theta;
};

Polar to_polar(Vec2 anchor, Vec2 p) {
  const float dx = p.x - anchor.x, dy = p.y - anchor.y;
  return {std::sqrt(dx * dx + dy * dy), std::atan2(dy, dx)};
}

Vec2 from_polar(Vec2 anchor, Polar p) {
  return {anchor.x + p.rho * std::cos(p.theta), anchor.y + p.rho * std::sin(p.theta)};
}

}  // namespace

SceneSpec make_scene_spec(Domain domain, uint64_t seed, int frame_h, int frame_w) {
  if (frame_h < 32 || frame_w < 32)
    throw InvalidArgument("make_scene_spec: frame size must be at least 32x32");

  Rng rng(derive_seed(seed, domain == Domain::A ? 1 : 2, 0xD0));
  SceneSpec s;
  s.domain_id = domain;
  s.frame_h = frame_h;
  s.frame_w = frame_w;
  s.rng_seed = seed;
  s.anchor_x = 0.5f * frame_w;
  s.anchor_y = 0.50f * frame_h;
  s.background_texture_seed = derive_seed(seed, 7, 0xB6);

  const float r = reach_budget(frame_h, frame_w);
  const float total_len = 0.80f * r;

  if (domain == Domain::A) {
    // 3-link orange arm, parallel-jaw gripper.
    float frac[3] = {0.42f, 0.34f, 0.24f};
    float sum = 0.0f;
    for (float& f : frac) {
      f *= 1.0f + 0.08f * (static_cast<float>(rng.uniform()) - 0.5f);
      sum += f;
    }
    for (int i = 0; i < 3; ++i) s.link_lengths.push_back(total_len * frac[i] / sum);
    const float widths[3] = {0.11f, 0.09f, 0.07f};
    for (int i = 0; i < 3; ++i)
      s.link_widths.push_back(std::max(1.6f, total_len * widths[i]));
    for (int i = 0; i < 3; ++i) {
      const float u1 = static_cast<float>(rng.uniform());
      const float u2 = static_cast<float>(rng.uniform());
      const float u3 = static_cast<float>(rng.uniform());
      s.arm_palette.push_back({0.92f + 0.06f * u1, 0.42f + 0.12f * u2, 0.08f + 0.10f * u3});
    }
    s.gripper_style = GripperStyle::parallel_jaw;
  } else {
    // 2-link silver arm, suction disc.
    float frac[2] = {0.55f, 0.45f};
    float sum = 0.0f;
    for (float& f : frac) {
      f *= 1.0f + 0.08f * (static_cast<float>(rng.uniform()) - 0.5f);
      sum += f;
    }
    for (int i = 0; i < 2; ++i) s.link_lengths.push_back(total_len * frac[i] / sum);
    const float widths[2] = {0.13f, 0.10f};
    for (int i = 0; i < 2; ++i)
      s.link_widths.push_back(std::max(1.6f, total_len * widths[i]));
    for (int i = 0; i < 2; ++i) {
      const float u1 = static_cast<float>(rng.uniform());
      const float u2 = static_cast<float>(rng.uniform());
      s.arm_palette.push_back(
          {0.70f + 0.08f * u1, 0.72f + 0.08f * u1, 0.86f + 0.10f * u2});
    }
    s.gripper_style = GripperStyle::suction_disc;
  }

  // Object inside the annulus both arm types can reach, with lift headroom.
  const float rho_lo = 0.45f * total_len;
  float rho_hi = std::min(0.75f * total_len, 0.97f * total_len - 0.11f * frame_h);
  if (rho_hi < rho_lo) rho_hi = rho_lo;
  const float rho = rho_lo + (rho_hi - rho_lo) * static_cast<float>(rng.uniform());
  const float theta = static_cast<float>(rng.uniform(-2.530, -0.611));
  s.object_spec.shape = rng.uniform() < 0.5 ? ObjectShape::cube : ObjectShape::ball;
  const int color_pick = static_cast<int>(rng.uniform_int(0, 2));
  const Rgb colors[3] = {{0.20f, 0.35f, 0.90f}, {0.15f, 0.80f, 0.30f}, {0.85f, 0.20f, 0.75f}};
  s.object_spec.color = colors[color_pick];
  s.object_spec.size = std::max(2.0f, (s.object_spec.shape == ObjectShape::cube ? 0.10f : 0.11f) * r);
  s.object_spec.x = s.anchor_x + rho * std::cos(theta);
  s.object_spec.y = s.anchor_y + rho * std::sin(theta);

  // Whole reachable disc must fit in frame.
  const float reach = s.total_reach() + 1.0f;
  if (s.anchor_x - reach < 0 || s.anchor_x + reach > frame_w - 1 || s.anchor_y - reach < 0 ||
      s.anchor_y + reach > frame_h - 1)
    throw NumericError("make_scene_spec: geometry budget exceeds frame");
  return s;
}

std::vector<float> rest_pose(const SceneSpec& spec) {
  if (spec.links() == 3) return {-115.0f * kPi / 180.0f, 35.0f * kPi / 180.0f, 30.0f * kPi / 180.0f};
  return {-110.0f * kPi / 180.0f, 40.0f * kPi / 180.0f};
}

namespace {

// Solve IK for one frame, warm-started, preferring the analytic solution for
// 2-link chains.
float solve_frame(const SceneSpec& spec, Vec2 target, const float* prev_q, float* q) {
  const Vec2 anchor{spec.anchor_x, spec.anchor_y};
  if (spec.links() == 2)
    return ik_two_link(anchor, spec.link_lengths[0], spec.link_lengths[1], target, prev_q, q);
  for (int j = 0; j < spec.links(); ++j) q[j] = prev_q[j];
  return ik_damped_least_squares(anchor, spec.link_lengths, target, q, 50, 0.1f);
}

void check_reachable(const SceneSpec& spec, Vec2 target, const char* what) {
  const Vec2 anchor{spec.anchor_x, spec.anchor_y};
  float total = 0.0f;
  for (float l : spec.link_lengths) total += l;
  const float d = dist(anchor, target);
  if (d > total) throw InfeasibleTask(std::string(what) + ": target beyond total link length");
  if (spec.links() == 2) {
    const float inner = std::abs(spec.link_lengths[0] - spec.link_lengths[1]);
    if (d < inner) throw InfeasibleTask(std::string(what) + ": target inside inner annulus");
  }
}

}  // namespace

Trajectory sample_task_trajectory(const SceneSpec& spec, int n_frames, TaskKind task,
                                  uint64_t seed) {
  if (n_frames < 2) throw InvalidArgument("sample_task_trajectory: need at least 2 frames");
  const Vec2 anchor{spec.anchor_x, spec.anchor_y};
  const Vec2 obj{spec.object_spec.x, spec.object_spec.y};
  check_reachable(spec, obj, "sample_task_trajectory");

  Rng rng(derive_seed(seed, 0x7A, spec.rng_seed));
  const int J = spec.links();
  Trajectory traj;
  traj.joint_angles = Tensor({n_frames, J});
  traj.end_effector_path = Tensor({n_frames, 2});
  traj.object_path = Tensor({n_frames, 2});
  traj.gripper_open.assign(static_cast<size_t>(n_frames), 1);

  const std::vector<float> rest = rest_pose(spec);
  const Vec2 ee0 = fk_end_effector(anchor, spec.link_lengths, rest.data());
  const Polar p0 = to_polar(anchor, ee0);
  const Polar p_obj = to_polar(anchor, obj);

  // Unwrap the angular difference the short way.
  float dtheta = p_obj.theta - p0.theta;
  while (dtheta > kPi) dtheta -= 2.0f * kPi;
  while (dtheta < -kPi) dtheta += 2.0f * kPi;

  const int grasp = task == TaskKind::reach
                        ? n_frames - 1
                        : std::max(1, static_cast<int>(std::floor(0.55f * (n_frames - 1))));
  traj.grasp_frame = grasp;

  float lift = 0.0f;
  if (task == TaskKind::pick_lift) {
    float total = 0.0f;
    for (float l : spec.link_lengths) total += l;
    const float headroom = 0.97f * total - p_obj.rho;
    lift = std::min(0.16f * spec.frame_h, headroom);
    if (lift < 0.104f * spec.frame_h)
      throw InfeasibleTask("sample_task_trajectory: insufficient lift headroom");
  }

  // Small per-clip waypoint jitter keeps trajectories diverse.
  const float mid_jitter = static_cast<float>(rng.uniform(-0.12, 0.12));

  std::vector<float> q = rest;
  std::vector<float> prev = rest;
  for (int i = 0; i < n_frames; ++i) {
    Vec2 target;
    if (i <= grasp) {
      const float u = grasp > 0 ? smoothstep(static_cast<float>(i) / grasp) : 1.0f;
      Polar p;
      p.rho = p0.rho + (p_obj.rho - p0.rho) * u;
      p.theta = p0.theta + dtheta * u + mid_jitter * std::sin(kPi * u);
      target = from_polar(anchor, p);
      if (i == grasp) target = obj;  // land exactly on the object center
    } else {
      const float u = smoothstep(static_cast<float>(i - grasp) / (n_frames - 1 - grasp));
      target = {obj.x, obj.y - lift * u};
    }

    solve_frame(spec, target, prev.data(), q.data());
    // Joint velocity bound.
    for (int j = 0; j < J; ++j) {
      float dq = q[j] - prev[j];
      if (dq > kMaxJointDeltaRad) q[j] = prev[j] + kMaxJointDeltaRad;
      if (dq < -kMaxJointDeltaRad) q[j] = prev[j] - kMaxJointDeltaRad;
    }
    const Vec2 ee = fk_end_effector(anchor, spec.link_lengths, q.data());
    if (i == grasp && dist(ee, obj) > 2.0f)
      throw InfeasibleTask("sample_task_trajectory: IK failed to reach the object within 2 px");

    for (int j = 0; j < J; ++j) traj.joint_angles.at2(i, j) = q[j];
    traj.end_effector_path.at2(i, 0) = ee.x;
    traj.end_effector_path.at2(i, 1) = ee.y;
    traj.gripper_open[static_cast<size_t>(i)] = i < grasp ? 1 : 0;
    prev = q;
  }

  // Object: static until grasp, then welded to the gripper with the residual
  // grasp offset so there is no pop.
  const float weld_dx = obj.x - traj.end_effector_path.at2(grasp, 0);
  const float weld_dy = obj.y - traj.end_effector_path.at2(grasp, 1);
  for (int i = 0; i < n_frames; ++i) {
    if (i <= grasp || task == TaskKind::reach) {
      traj.object_path.at2(i, 0) = obj.x;
      traj.object_path.at2(i, 1) = obj.y;
    } else {
      traj.object_path.at2(i, 0) = traj.end_effector_path.at2(i, 0) + weld_dx;
      traj.object_path.at2(i, 1) = traj.end_effector_path.at2(i, 1) + weld_dy;
    }
  }
  return traj;
}

}  // namespace roboswap::datagen
