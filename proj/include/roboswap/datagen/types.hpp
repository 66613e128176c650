#pragma once

#include <array>
#include <string>
#include <vector>

#include "roboswap/compositing/video.hpp"
#include "roboswap/core/json_util.hpp"

namespace roboswap::datagen {

enum class Domain { A, B };
enum class GripperStyle { parallel_jaw, suction_disc };
enum class ObjectShape { cube, ball };
enum class TaskKind { reach, pick_lift };

std::string to_string(Domain d);
Domain domain_from_string(const std::string& s);
std::string to_string(TaskKind t);
TaskKind task_from_string(const std::string& s);

using Rgb = std::array<float, 3>;

struct ObjectSpec {
  ObjectShape shape = ObjectShape::cube;
  Rgb color{0.2f, 0.35f, 0.9f};
  float x = 0.0f, y = 0.0f;  // start position, px
  float size = 4.0f;         // half-side (cube) or radius (ball), px
};

// Procedural description of one synthetic scene. Domain A is a 3-link orange
// arm with a parallel-jaw gripper, domain B a 2-link silver arm with a
// suction disc; the difference is inspectable field by field.
struct SceneSpec {
  Domain domain_id = Domain::A;
  std::vector<float> link_lengths;  // px
  std::vector<float> link_widths;   // px
  std::vector<Rgb> arm_palette;     // one color per link
  GripperStyle gripper_style = GripperStyle::parallel_jaw;
  float anchor_x = 0.0f, anchor_y = 0.0f;
  uint64_t background_texture_seed = 0;
  ObjectSpec object_spec;
  int frame_h = 64, frame_w = 64;
  uint64_t rng_seed = 0;

  int links() const { return static_cast<int>(link_lengths.size()); }
  float total_reach() const;
  float gripper_extent() const;

  Json to_json() const;
  static SceneSpec from_json(const Json& j);
};

struct Trajectory {
  Tensor joint_angles;             // [N, J], radians
  std::vector<uint8_t> gripper_open;  // N flags
  Tensor end_effector_path;        // [N, 2] (x, y), derived from joint_angles
  Tensor object_path;              // [N, 2] object center per frame
  int grasp_frame = -1;

  int frames() const { return joint_angles.empty() ? 0 : joint_angles.dim(0); }
  int joints() const { return joint_angles.dim(1); }

  Json to_json() const;
  static Trajectory from_json(const Json& j);
};

struct RenderedClip {
  VideoTensor video;
  MaskSequence masks;
  VideoTensor background;  // clean plate: environment + object, no arm
  SceneSpec scene;
  Trajectory trajectory;
  bool evaluation_only = false;
};

// Joint velocity bound used by trajectory sampling and checked by tests.
inline constexpr float kMaxJointDeltaRad = 0.35f;

}  // namespace roboswap::datagen
