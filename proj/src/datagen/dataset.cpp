#include "roboswap/datagen/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "roboswap/core/error.hpp"
#include "roboswap/core/rng.hpp"
#include "roboswap/datagen/generate.hpp"

namespace fs = std::filesystem;

namespace roboswap::datagen {

namespace {

std::string frame_name(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%04d.png", prefix, i);
  return buf;
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << "\n";
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingData("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

// Shared manifest update; one manifest per dataset root.
void update_manifest(const std::string& root, const std::string& section, const Json& entry) {
  const std::string path = (fs::path(root) / "manifest.json").string();
  Json manifest;
  if (fs::exists(path)) manifest = read_json(path);
  if (!manifest.contains("version")) manifest["version"] = "1";
  manifest[section] = entry;
  write_json(path, manifest);
}

}  // namespace

std::string clip_dir_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "clip_%05d", index);
  return buf;
}

void save_clip(const RenderedClip& clip, const std::string& dir, double fps) {
  fs::create_directories(dir);
  const int n = clip.video.frames();
  for (int i = 0; i < n; ++i) {
    write_png((fs::path(dir) / frame_name("frame", i)).string(), frame_to_image(clip.video, i));
    write_png((fs::path(dir) / frame_name("mask", i)).string(), mask_to_image(clip.masks, i));
    write_png((fs::path(dir) / frame_name("background", i)).string(),
              frame_to_image(clip.background, i));
  }
  write_json((fs::path(dir) / "trajectory.json").string(), clip.trajectory.to_json());
  Json scene = clip.scene.to_json();
  scene["evaluation_only"] = clip.evaluation_only;
  scene["fps"] = fps;
  scene["n_frames"] = n;
  write_json((fs::path(dir) / "scene.json").string(), scene);
}

RenderedClip load_clip(const std::string& dir) {
  const Json scene_json = read_json((fs::path(dir) / "scene.json").string());
  RenderedClip clip;
  clip.scene = SceneSpec::from_json(scene_json);
  clip.evaluation_only = json_get(scene_json, "evaluation_only", false);
  const int n = scene_json.at("n_frames").get<int>();
  const double fps = json_get(scene_json, "fps", 8.0);
  clip.trajectory = Trajectory::from_json(read_json((fs::path(dir) / "trajectory.json").string()));

  const int h = clip.scene.frame_h, w = clip.scene.frame_w;
  clip.video = VideoTensor(n, h, w, fps);
  clip.background = VideoTensor(n, h, w, fps);
  clip.masks = MaskSequence(n, h, w);
  for (int i = 0; i < n; ++i) {
    image_to_frame(read_png((fs::path(dir) / frame_name("frame", i)).string()), clip.video, i);
    image_to_frame(read_png((fs::path(dir) / frame_name("background", i)).string()),
                   clip.background, i);
    image_to_mask(read_png((fs::path(dir) / frame_name("mask", i)).string()), clip.masks, i);
  }
  return clip;
}

void build_dataset(Domain domain, int n_clips, int n_frames, int frame_h, int frame_w,
                   uint64_t seed, const std::string& root, bool force, double fps) {
  if (n_clips < 1) throw InvalidArgument("build_dataset: n_clips must be >= 1");
  const fs::path domain_dir = fs::path(root) / to_string(domain);
  if (fs::exists(domain_dir) && !fs::is_empty(domain_dir) && !force)
    throw InvalidArgument("build_dataset: target " + domain_dir.string() +
                          " is not empty (use force to overwrite)");
  fs::create_directories(domain_dir);

  Json clip_seeds = Json::array();
  for (int i = 0; i < n_clips; ++i) {
    const uint64_t spec_seed = derive_seed(seed, static_cast<uint64_t>(i), 0x5C);
    const uint64_t traj_seed = derive_seed(seed, static_cast<uint64_t>(i), 0x77);
    const TaskKind task = i % 2 == 0 ? TaskKind::reach : TaskKind::pick_lift;

    const SceneSpec spec = make_scene_spec(domain, spec_seed, frame_h, frame_w);
    const Trajectory traj = sample_task_trajectory(spec, n_frames, task, traj_seed);
    const RenderedClip clip = render_clip(spec, traj);
    save_clip(clip, (domain_dir / clip_dir_name(i)).string(), fps);

    Json entry;
    entry["spec_seed"] = spec_seed;
    entry["traj_seed"] = traj_seed;
    entry["task"] = to_string(task);
    clip_seeds.push_back(entry);
  }

  Json entry;
  entry["seed"] = seed;
  entry["n_clips"] = n_clips;
  entry["n_frames"] = n_frames;
  entry["frame_size"] = std::vector<int>{frame_h, frame_w};
  entry["fps"] = fps;
  entry["clips"] = clip_seeds;
  update_manifest(root, to_string(domain), entry);
}

void build_eval_split(int n_clips, int n_frames, int frame_h, int frame_w, uint64_t seed,
                      const std::string& root, bool force, double fps) {
  if (n_clips < 1) throw InvalidArgument("build_eval_split: n_clips must be >= 1");
  const fs::path eval_dir = fs::path(root) / "eval";
  if (fs::exists(eval_dir) && !fs::is_empty(eval_dir) && !force)
    throw InvalidArgument("build_eval_split: target " + eval_dir.string() +
                          " is not empty (use force to overwrite)");
  fs::create_directories(eval_dir);

  Json clip_seeds = Json::array();
  for (int i = 0; i < n_clips; ++i) {
    const uint64_t spec_seed = derive_seed(seed, static_cast<uint64_t>(i), 0xE5);
    const uint64_t traj_seed = derive_seed(seed, static_cast<uint64_t>(i), 0xE7);
    const uint64_t oracle_seed = derive_seed(seed, static_cast<uint64_t>(i), 0xEB);
    const TaskKind task = i % 2 == 0 ? TaskKind::reach : TaskKind::pick_lift;

    const SceneSpec spec_a = make_scene_spec(Domain::A, spec_seed, frame_h, frame_w);
    const Trajectory traj = sample_task_trajectory(spec_a, n_frames, task, traj_seed);
    const RenderedClip source = render_clip(spec_a, traj);

    const SceneSpec spec_b = make_scene_spec(Domain::B, oracle_seed, frame_h, frame_w);
    const RenderedClip oracle = render_paired_oracle(source, spec_b);

    const fs::path clip_dir = eval_dir / clip_dir_name(i);
    save_clip(source, (clip_dir / "source").string(), fps);
    save_clip(oracle, (clip_dir / "oracle").string(), fps);

    Json entry;
    entry["spec_seed"] = spec_seed;
    entry["traj_seed"] = traj_seed;
    entry["oracle_seed"] = oracle_seed;
    entry["task"] = to_string(task);
    clip_seeds.push_back(entry);
  }

  Json entry;
  entry["seed"] = seed;
  entry["n_clips"] = n_clips;
  entry["n_frames"] = n_frames;
  entry["frame_size"] = std::vector<int>{frame_h, frame_w};
  entry["fps"] = fps;
  entry["evaluation_only"] = true;
  entry["clips"] = clip_seeds;
  update_manifest(root, "eval", entry);
}

std::vector<std::string> list_clip_dirs(const std::string& domain_dir) {
  std::vector<std::string> dirs;
  if (!fs::exists(domain_dir)) throw MissingData("list_clip_dirs: no directory " + domain_dir);
  for (const auto& e : fs::directory_iterator(domain_dir))
    if (e.is_directory()) dirs.push_back(e.path().string());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace roboswap::datagen
