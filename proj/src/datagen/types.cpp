#include "roboswap/datagen/types.hpp"

#include <algorithm>

#include "roboswap/core/error.hpp"

namespace roboswap::datagen {

std::string to_string(Domain d) { return d == Domain::A ? "A" : "B"; }

Domain domain_from_string(const std::string& s) {
  if (s == "A") return Domain::A;
  if (s == "B") return Domain::B;
  throw InvalidArgument("unknown domain '" + s + "'");
}

std::string to_string(TaskKind t) { return t == TaskKind::reach ? "reach" : "pick_lift"; }

TaskKind task_from_string(const std::string& s) {
  if (s == "reach") return TaskKind::reach;
  if (s == "pick_lift") return TaskKind::pick_lift;
  throw InvalidArgument("unknown task '" + s + "'");
}

float SceneSpec::total_reach() const {
  float sum = 0.0f;
  for (float l : link_lengths) sum += l;
  const float maxw = link_widths.empty() ? 0.0f
                                         : *std::max_element(link_widths.begin(), link_widths.end());
  return sum + gripper_extent() + 0.5f * maxw;
}

float SceneSpec::gripper_extent() const {
  float sum = 0.0f;
  for (float l : link_lengths) sum += l;
  return std::max(3.0f, 0.15f * sum);
}

Json SceneSpec::to_json() const {
  Json j;
  j["domain"] = to_string(domain_id);
  j["link_lengths"] = link_lengths;
  j["link_widths"] = link_widths;
  Json palette = Json::array();
  for (const auto& c : arm_palette) palette.push_back(std::vector<float>{c[0], c[1], c[2]});
  j["arm_palette"] = palette;
  j["gripper_style"] = gripper_style == GripperStyle::parallel_jaw ? "parallel_jaw" : "suction_disc";
  j["base_anchor"] = std::vector<float>{anchor_x, anchor_y};
  j["background_texture_seed"] = background_texture_seed;
  Json obj;
  obj["shape"] = object_spec.shape == ObjectShape::cube ? "cube" : "ball";
  obj["color"] = std::vector<float>{object_spec.color[0], object_spec.color[1], object_spec.color[2]};
  obj["start_position"] = std::vector<float>{object_spec.x, object_spec.y};
  obj["size"] = object_spec.size;
  j["object"] = obj;
  j["frame_size"] = std::vector<int>{frame_h, frame_w};
  j["rng_seed"] = rng_seed;
  return j;
}

SceneSpec SceneSpec::from_json(const Json& j) {
  SceneSpec s;
  s.domain_id = domain_from_string(j.at("domain").get<std::string>());
  s.link_lengths = j.at("link_lengths").get<std::vector<float>>();
  s.link_widths = j.at("link_widths").get<std::vector<float>>();
  for (const auto& c : j.at("arm_palette")) {
    const auto v = c.get<std::vector<float>>();
    s.arm_palette.push_back({v[0], v[1], v[2]});
  }
  const auto g = j.at("gripper_style").get<std::string>();
  if (g == "parallel_jaw")
    s.gripper_style = GripperStyle::parallel_jaw;
  else if (g == "suction_disc")
    s.gripper_style = GripperStyle::suction_disc;
  else
    throw InvalidArgument("unknown gripper style '" + g + "'");
  const auto anchor = j.at("base_anchor").get<std::vector<float>>();
  s.anchor_x = anchor[0];
  s.anchor_y = anchor[1];
  s.background_texture_seed = j.at("background_texture_seed").get<uint64_t>();
  const Json& obj = j.at("object");
  const auto shape = obj.at("shape").get<std::string>();
  s.object_spec.shape = shape == "cube" ? ObjectShape::cube : ObjectShape::ball;
  const auto col = obj.at("color").get<std::vector<float>>();
  s.object_spec.color = {col[0], col[1], col[2]};
  const auto pos = obj.at("start_position").get<std::vector<float>>();
  s.object_spec.x = pos[0];
  s.object_spec.y = pos[1];
  s.object_spec.size = obj.at("size").get<float>();
  const auto fs = j.at("frame_size").get<std::vector<int>>();
  s.frame_h = fs[0];
  s.frame_w = fs[1];
  s.rng_seed = j.at("rng_seed").get<uint64_t>();
  return s;
}

Json Trajectory::to_json() const {
  Json j;
  Json angles = Json::array();
  for (int i = 0; i < frames(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < joints(); ++k) row.push_back(joint_angles.at2(i, k));
    angles.push_back(row);
  }
  j["joint_angles"] = angles;
  Json open = Json::array();
  for (auto b : gripper_open) open.push_back(b != 0);
  j["gripper_open"] = open;
  Json path = Json::array();
  for (int i = 0; i < frames(); ++i)
    path.push_back(std::vector<float>{end_effector_path.at2(i, 0), end_effector_path.at2(i, 1)});
  j["end_effector_path"] = path;
  Json opath = Json::array();
  for (int i = 0; i < frames(); ++i)
    opath.push_back(std::vector<float>{object_path.at2(i, 0), object_path.at2(i, 1)});
  j["object_path"] = opath;
  j["grasp_frame"] = grasp_frame;
  return j;
}

Trajectory Trajectory::from_json(const Json& j) {
  Trajectory t;
  const Json& angles = j.at("joint_angles");
  const int n = static_cast<int>(angles.size());
  const int joints = n > 0 ? static_cast<int>(angles[0].size()) : 0;
  t.joint_angles = Tensor({n, joints});
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < joints; ++k) t.joint_angles.at2(i, k) = angles[i][k].get<float>();
  for (const auto& b : j.at("gripper_open")) t.gripper_open.push_back(b.get<bool>() ? 1 : 0);
  t.end_effector_path = Tensor({n, 2});
  const Json& path = j.at("end_effector_path");
  for (int i = 0; i < n; ++i) {
    t.end_effector_path.at2(i, 0) = path[i][0].get<float>();
    t.end_effector_path.at2(i, 1) = path[i][1].get<float>();
  }
  t.object_path = Tensor({n, 2});
  const Json& opath = j.at("object_path");
  for (int i = 0; i < n; ++i) {
    t.object_path.at2(i, 0) = opath[i][0].get<float>();
    t.object_path.at2(i, 1) = opath[i][1].get<float>();
  }
  t.grasp_frame = j.at("grasp_frame").get<int>();
  return t;
}

}  // namespace roboswap::datagen
