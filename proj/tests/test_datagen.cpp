#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "roboswap/datagen/dataset.hpp"
#include "roboswap/datagen/generate.hpp"

using namespace roboswap;
using namespace roboswap::datagen;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("make_scene_spec domain characteristics") {
  const SceneSpec a = make_scene_spec(Domain::A, 0, 64, 64);
  CHECK(a.links() == 3);
  CHECK(a.gripper_style == GripperStyle::parallel_jaw);
  const SceneSpec b = make_scene_spec(Domain::B, 0, 64, 64);
  CHECK(b.links() == 2);
  CHECK(b.gripper_style == GripperStyle::suction_disc);
  CHECK(a.arm_palette != b.arm_palette);

  // geometry fits for any joint configuration (disc bound)
  for (const auto& s : {a, b}) {
    const float r = s.total_reach();
    CHECK(s.anchor_x - r >= 0.0f);
    CHECK(s.anchor_x + r <= 63.0f);
    CHECK(s.anchor_y - r >= 0.0f);
    CHECK(s.anchor_y + r <= 63.0f);
  }
}

TEST_CASE("make_scene_spec determinism and validation") {
  const SceneSpec s1 = make_scene_spec(Domain::A, 7, 64, 64);
  const SceneSpec s2 = make_scene_spec(Domain::A, 7, 64, 64);
  CHECK(s1.to_json().dump() == s2.to_json().dump());

  CHECK_THROWS_AS(make_scene_spec(Domain::A, 0, 31, 64), InvalidArgument);
  CHECK_THROWS_AS(make_scene_spec(Domain::A, 0, 64, 16), InvalidArgument);

  // round trip through json
  const SceneSpec back = SceneSpec::from_json(s1.to_json());
  CHECK(back.to_json().dump() == s1.to_json().dump());
}

TEST_CASE("sample_task_trajectory reach and pick_lift postconditions") {
  const SceneSpec spec = make_scene_spec(Domain::A, 1, 64, 64);

  const Trajectory reach = sample_task_trajectory(spec, 16, TaskKind::reach, 1);
  const float ex = reach.end_effector_path.at2(15, 0) - spec.object_spec.x;
  const float ey = reach.end_effector_path.at2(15, 1) - spec.object_spec.y;
  CHECK(std::sqrt(ex * ex + ey * ey) <= 2.0f);

  const Trajectory lift = sample_task_trajectory(spec, 16, TaskKind::pick_lift, 1);
  // y axis points down in image coordinates; lifting decreases y
  const float dy = lift.object_path.at2(0, 1) - lift.object_path.at2(15, 1);
  CHECK(dy >= 0.1f * 64.0f);

  // joint velocity bound
  for (const auto* t : {&reach, &lift})
    for (int i = 1; i < t->frames(); ++i)
      for (int j = 0; j < t->joints(); ++j)
        CHECK(std::abs(t->joint_angles.at2(i, j) - t->joint_angles.at2(i - 1, j)) <=
              kMaxJointDeltaRad + 1e-6f);

  // forward kinematics reproduces the stored path
  for (const auto* t : {&reach, &lift}) {
    for (int i = 0; i < t->frames(); ++i) {
      std::vector<float> q(static_cast<size_t>(t->joints()));
      for (int j = 0; j < t->joints(); ++j) q[static_cast<size_t>(j)] = t->joint_angles.at2(i, j);
      const Vec2 ee = fk_end_effector({spec.anchor_x, spec.anchor_y}, spec.link_lengths, q.data());
      const float dx = ee.x - t->end_effector_path.at2(i, 0);
      const float dyy = ee.y - t->end_effector_path.at2(i, 1);
      CHECK(std::sqrt(dx * dx + dyy * dyy) <= 0.5f);
    }
  }
}

TEST_CASE("sample_task_trajectory unreachable object") {
  SceneSpec spec = make_scene_spec(Domain::A, 2, 64, 64);
  float total = 0.0f;
  for (float l : spec.link_lengths) total += l;
  spec.object_spec.x = spec.anchor_x + total + 5.0f;
  spec.object_spec.y = spec.anchor_y;
  CHECK_THROWS_AS(sample_task_trajectory(spec, 16, TaskKind::reach, 0), InfeasibleTask);
  CHECK_THROWS_AS(sample_task_trajectory(spec, 1, TaskKind::reach, 0), InvalidArgument);
}

TEST_CASE("render_clip mask exactness and determinism") {
  const SceneSpec spec = make_scene_spec(Domain::A, 3, 64, 64);
  const Trajectory traj = sample_task_trajectory(spec, 8, TaskKind::reach, 3);
  const RenderedClip clip = render_clip(spec, traj);

  clip.masks.validate();
  clip.video.validate();

  // masks nonzero exactly where the frame differs from the clean plate
  const int hw = 64 * 64;
  for (int i = 0; i < 8; ++i) {
    const float* v = clip.video.frame(i);
    const float* b = clip.background.frame(i);
    const float* m = clip.masks.frame(i);
    for (int p = 0; p < hw; ++p) {
      const bool differs = v[p] != b[p] || v[hw + p] != b[hw + p] || v[2 * hw + p] != b[2 * hw + p];
      CHECK(differs == (m[p] == 1.0f));
      if (m[p] == 0.0f) {
        CHECK(v[p] == b[p]);  // blend identity outside the mask, bit-exact
      }
    }
  }

  const RenderedClip again = render_clip(spec, traj);
  CHECK(clip.video.data.raw() == again.video.data.raw());
  CHECK(clip.masks.data.raw() == again.masks.data.raw());
  CHECK(clip.background.data.raw() == again.background.data.raw());
}

TEST_CASE("render_clip static trajectory gives identical frames") {
  const SceneSpec spec = make_scene_spec(Domain::B, 4, 64, 64);
  Trajectory traj;
  const int n = 5;
  const auto rest = rest_pose(spec);
  traj.joint_angles = Tensor({n, spec.links()});
  traj.end_effector_path = Tensor({n, 2});
  traj.object_path = Tensor({n, 2});
  traj.gripper_open.assign(n, 1);
  traj.grasp_frame = n - 1;
  const Vec2 ee = fk_end_effector({spec.anchor_x, spec.anchor_y}, spec.link_lengths, rest.data());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < spec.links(); ++j) traj.joint_angles.at2(i, j) = rest[static_cast<size_t>(j)];
    traj.end_effector_path.at2(i, 0) = ee.x;
    traj.end_effector_path.at2(i, 1) = ee.y;
    traj.object_path.at2(i, 0) = spec.object_spec.x;
    traj.object_path.at2(i, 1) = spec.object_spec.y;
  }
  const RenderedClip clip = render_clip(spec, traj);
  const int stride = 3 * 64 * 64;
  for (int i = 1; i < n; ++i)
    for (int p = 0; p < stride; ++p) CHECK(clip.video.frame(i)[p] == clip.video.frame(0)[p]);

  // joint-count mismatch rejected
  const SceneSpec spec_a = make_scene_spec(Domain::A, 4, 64, 64);
  CHECK_THROWS_AS(render_clip(spec_a, traj), InvalidArgument);
}

TEST_CASE("render_paired_oracle retargets motion into the shared environment") {
  const SceneSpec spec_a = make_scene_spec(Domain::A, 5, 64, 64);
  const Trajectory traj = sample_task_trajectory(spec_a, 12, TaskKind::pick_lift, 5);
  const RenderedClip clip_a = render_clip(spec_a, traj);
  const SceneSpec spec_b = make_scene_spec(Domain::B, 6, 64, 64);

  const RenderedClip oracle = render_paired_oracle(clip_a, spec_b);
  CHECK(oracle.evaluation_only);

  // end-effector path within 1 px per frame
  for (int i = 0; i < 12; ++i) {
    const float dx = oracle.trajectory.end_effector_path.at2(i, 0) -
                     clip_a.trajectory.end_effector_path.at2(i, 0);
    const float dy = oracle.trajectory.end_effector_path.at2(i, 1) -
                     clip_a.trajectory.end_effector_path.at2(i, 1);
    CHECK(std::sqrt(dx * dx + dy * dy) <= 1.0f);
  }

  // clean plates bit-identical
  CHECK(oracle.background.data.raw() == clip_a.background.data.raw());

  // different embodiment: mask areas differ on at least one frame
  bool area_differs = false;
  for (int i = 0; i < 12 && !area_differs; ++i) {
    double area_a = 0, area_b = 0;
    for (int p = 0; p < 64 * 64; ++p) {
      area_a += clip_a.masks.frame(i)[p];
      area_b += oracle.masks.frame(i)[p];
    }
    area_differs = area_a != area_b;
  }
  CHECK(area_differs);

  CHECK_THROWS_AS(render_paired_oracle(clip_a, spec_a), InvalidArgument);
}

TEST_CASE("build_dataset layout, determinism and errors") {
  const std::string root = (fs::temp_directory_path() / "rs_test_dataset").string();
  fs::remove_all(root);

  build_dataset(Domain::A, 3, 6, 64, 64, 3, root);
  const auto dirs = list_clip_dirs(root + "/A");
  CHECK(dirs.size() == 3);
  CHECK(fs::exists(root + "/manifest.json"));
  CHECK(fs::exists(dirs[0] + "/frame_0000.png"));
  CHECK(fs::exists(dirs[0] + "/mask_0005.png"));
  CHECK(fs::exists(dirs[0] + "/background_0003.png"));
  CHECK(fs::exists(dirs[0] + "/trajectory.json"));
  CHECK(fs::exists(dirs[0] + "/scene.json"));

  // refuse to overwrite without force
  CHECK_THROWS_AS(build_dataset(Domain::A, 3, 6, 64, 64, 3, root), InvalidArgument);
  CHECK_THROWS_AS(build_dataset(Domain::A, 0, 6, 64, 64, 3, root, true), InvalidArgument);

  // regeneration is bit-identical
  const std::string frame_bytes = read_file(dirs[1] + "/frame_0002.png");
  build_dataset(Domain::A, 3, 6, 64, 64, 3, root, true);
  CHECK(read_file(dirs[1] + "/frame_0002.png") == frame_bytes);

  // load round trip matches the in-memory render bit-exactly
  const RenderedClip loaded = load_clip(dirs[0]);
  const SceneSpec spec = make_scene_spec(Domain::A, loaded.scene.rng_seed, 64, 64);
  CHECK(loaded.scene.to_json().dump() == spec.to_json().dump());
  const RenderedClip rerendered = render_clip(loaded.scene, loaded.trajectory);
  CHECK(loaded.video.data.raw() == rerendered.video.data.raw());
  CHECK(loaded.masks.data.raw() == rerendered.masks.data.raw());
  CHECK(loaded.background.data.raw() == rerendered.background.data.raw());

  fs::remove_all(root);
}

TEST_CASE("build_eval_split produces paired oracles") {
  const std::string root = (fs::temp_directory_path() / "rs_test_eval").string();
  fs::remove_all(root);
  build_eval_split(2, 6, 64, 64, 11, root);
  const auto dirs = list_clip_dirs(root + "/eval");
  CHECK(dirs.size() == 2);
  const RenderedClip source = load_clip(dirs[0] + "/source");
  const RenderedClip oracle = load_clip(dirs[0] + "/oracle");
  CHECK(source.scene.domain_id == Domain::A);
  CHECK(oracle.scene.domain_id == Domain::B);
  CHECK(oracle.evaluation_only);
  CHECK(source.background.data.raw() == oracle.background.data.raw());
  fs::remove_all(root);
}
