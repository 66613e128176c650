#pragma once

#include "roboswap/datagen/kinematics.hpp"
#include "roboswap/datagen/types.hpp"

namespace roboswap::datagen {

// Deterministic in (domain, seed, frame size). Frame sides must be >= 32.
SceneSpec make_scene_spec(Domain domain, uint64_t seed, int frame_h, int frame_w);

// Rest joint configuration for a spec's arm.
std::vector<float> rest_pose(const SceneSpec& spec);

// Smooth task trajectory solved with damped-least-squares IK (analytic IK for
// 2-link arms). Throws InfeasibleTask when the object lies outside the arm's
// reachable annulus or the lift headroom is too small.
Trajectory sample_task_trajectory(const SceneSpec& spec, int n_frames, TaskKind task,
                                  uint64_t seed);

// Rasterizes the clip. Masks are exactly the arm's rasterized pixel set; the
// video equals mask-selected arm over clean plate bit-exactly.
RenderedClip render_clip(const SceneSpec& spec, const Trajectory& traj);

// Re-renders clip_a's motion with the other domain's arm in clip_a's
// environment (IK retargeting of the end-effector path). Evaluation-only.
RenderedClip render_paired_oracle(const RenderedClip& clip_a, const SceneSpec& spec_b);

}  // namespace roboswap::datagen
