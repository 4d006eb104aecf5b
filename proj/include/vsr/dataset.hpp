#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vsr/camera.hpp"
#include "vsr/renderer.hpp"
#include "vsr/transfer_function.hpp"
#include "vsr/volume.hpp"

namespace vsr {

/// splitmix64-based generator; identical streams on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    std::uint64_t next() noexcept;
    /// Uniform in [0, 1).
    double uniform() noexcept;

private:
    std::uint64_t state_;
};

struct CameraPathParams {
    double radius_factor = 2.2;           // orbit radius / volume bounding radius
    double max_elevation_deg = 60.0;      // start elevation drawn from |elev| <= this
    double angular_velocity_deg = 0.9;    // azimuth advance per frame
    double fill = 1.05;                   // frustum half-angle margin around the bounding sphere
};

/// Constant-elevation orbit around the volume center.
struct CameraPath {
    Vec3 center = Vec3::Zero();
    double radius = 1.0;
    double start_azimuth_deg = 0.0;
    double elevation_deg = 0.0;
    double angular_velocity_deg = 0.0;
    Vec3 up = Vec3::UnitY();
    double fov_y_deg = 45.0;
    double near_plane = 0.1;
    double far_plane = 10.0;
    int n_frames = 1;

    double azimuth_deg(int frame) const noexcept {
        return start_azimuth_deg + angular_velocity_deg * frame;
    }
    double total_sweep_deg() const noexcept { return angular_velocity_deg * (n_frames - 1); }
    Vec3 eye(int frame) const;
    CameraState camera(int frame, int width, int height, const Vec2& jitter = Vec2::Zero()) const;
};

/// Deterministic in `seed`. The start direction is uniform by area over the
/// band |elevation| <= max_elevation_deg.
CameraPath sample_camera_path(std::uint64_t seed, const ScalarVolume& volume, int n_frames,
                              const CameraPathParams& params = {});

enum class Split { train, val, test };

std::string to_string(Split s);
Split parse_split(const std::string& s);

struct FrameRecord {
    std::string lr_color;
    std::string lr_quasi_depth;
    std::string lr_max_alpha_rgba;
    std::string lr_motion;
    std::string lr_motion_valid;
    std::string hr_color;
};

struct SequenceManifest {
    std::string scene_id;
    std::string sequence_id;
    std::uint64_t seed = 0;
    int n_frames = 0;
    int lr_width = 0;
    int lr_height = 0;
    int hr_width = 0;
    int hr_height = 0;
    int upsample_factor = 1;
    std::vector<FrameRecord> frames;  // paths relative to the sequence directory
    CameraPath path;
    Split split = Split::train;
};

void write_manifest(const std::filesystem::path& path, const SequenceManifest& m);
SequenceManifest read_manifest(const std::filesystem::path& path);

struct Scene {
    std::string id;
    ScalarVolume volume;
    TransferFunction tf;
};

struct SequenceSpec {
    std::string sequence_id;
    std::uint64_t seed = 0;
    int lr_width = 64;
    int lr_height = 64;
    int upsample_factor = 4;
    double taa_blend = 0.1;
    RayMarchConfig march;
    Split split = Split::train;
    std::filesystem::path out_dir;  // the sequence directory
};

/// Renders LR packets (no jitter, no TAA), LR motion against the previous
/// frame, and TAA-accumulated HR color, writing one VSRT file per raster.
/// manifest.json is written last. On failure the sequence directory is removed.
SequenceManifest generate_sequence(const Scene& scene, const CameraPath& path,
                                   const SequenceSpec& spec);

struct SplitRatios {
    double train = 0.8;
    double val = 0.1;
    double test = 0.1;
};

struct SequenceKey {
    std::string scene_id;
    std::string sequence_id;
};

/// Sequence-granular split, stratified per scene and deterministic in seed.
/// Per scene the counts are floor(n * ratio), with leftovers handed out one at
/// a time in train, val, test order. Result is parallel to `sequences`.
std::vector<Split> split_dataset(std::span<const SequenceKey> sequences, const SplitRatios& ratios,
                                 std::uint64_t seed);

/// Per-scene counts the split rule produces for n sequences.
std::array<int, 3> split_counts(int n, const SplitRatios& ratios);

struct DatasetConfig {
    std::filesystem::path out_dir;
    int lr_width = 64;
    int lr_height = 64;
    int upsample_factor = 4;
    int sequences = 6;
    int frames = 24;
    std::uint64_t seed = 0;
    SplitRatios ratios;
    CameraPathParams path_params;
    double taa_blend = 0.1;
    std::optional<double> step_world;
};

/// Generates every sequence of one scene and writes dataset.json, an index of
/// sequence directories with their split.
std::vector<SequenceManifest> generate_dataset(const Scene& scene, const DatasetConfig& cfg);

} // namespace vsr
