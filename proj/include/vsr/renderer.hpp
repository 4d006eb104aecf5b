#pragma once

#include <vector>

#include "vsr/camera.hpp"
#include "vsr/image.hpp"
#include "vsr/transfer_function.hpp"
#include "vsr/volume.hpp"

namespace vsr {

using Rgb = Eigen::Vector3d;

struct Lighting {
    bool enabled = true;
    // Direction toward the light. Zero selects a headlight (light along the
    // view direction of each ray).
    Vec3 light_dir = Vec3::Zero();
    double ambient = 0.2;
    double diffuse = 0.7;
    double specular = 0.3;
    double shininess = 32.0;
};

struct RayMarchConfig {
    double step_world = 0.5;
    double early_term_alpha = 0.99;
    Lighting lighting;
};

/// Default step = half the smallest voxel spacing; headlight.
RayMarchConfig default_march_config(const ScalarVolume& v);

/// Throws UsageError unless step_world > 0 and early_term_alpha is in (0.9, 1].
void validate(const RayMarchConfig& cfg);

/// Blinn-Phong with normal = -normalize(grad), white specular, clamped to [0,1].
/// |grad| < 1e-6 returns ambient * base.
Rgb shade(const Vec3& grad, const Vec3& view_dir, const Rgb& base, const Lighting& lighting);

/// 1 - (1 - alpha)^(step / reference_step).
double correct_opacity(double alpha, double step, double reference_step) noexcept;

/// Front-to-back accumulator. Tracks the sample with the largest per-sample
/// alpha; ties keep the earliest.
class Compositor {
public:
    void add(const Rgb& rgb, double alpha, double depth, const Vec3& position) noexcept;

    const Rgb& color() const noexcept { return color_; }
    double alpha() const noexcept { return alpha_; }
    bool has_max() const noexcept { return max_alpha_ > 0.0; }
    double max_alpha() const noexcept { return max_alpha_; }
    const Rgb& max_rgb() const noexcept { return max_rgb_; }
    double max_depth() const noexcept { return max_depth_; }
    const Vec3& max_position() const noexcept { return max_position_; }

private:
    Rgb color_ = Rgb::Zero();
    double alpha_ = 0.0;
    double max_alpha_ = 0.0;
    Rgb max_rgb_ = Rgb::Zero();
    double max_depth_ = 0.0;
    Vec3 max_position_ = Vec3::Zero();
};

struct RaySample {
    double t;
    Vec3 position;
    double intensity;
    Rgb rgb;          // shaded
    double alpha;     // opacity-corrected
    double accumulated_alpha;
};

struct RayResult {
    Rgb color = Rgb::Zero();
    double alpha = 0.0;
    double quasi_depth_distance = 0.0;  // distance from ray origin to max-alpha sample
    Rgb max_alpha_rgb = Rgb::Zero();
    double max_alpha = 0.0;
    Vec3 max_alpha_position = Vec3::Zero();
    bool coverage = false;
    int samples = 0;
};

/// Intersects the ray with the volume box. Returns false on a miss; otherwise
/// [t_enter, t_exit] with t_enter clamped to >= 0.
bool intersect_box(const Ray& ray, const Aabb& box, double& t_enter, double& t_exit) noexcept;

/// Marches from the box entry at cfg.step_world. Sample k sits at
/// t_enter + k * step and represents the segment up to the next sample; the
/// last segment is shortened to end at the box exit. Stops when the
/// accumulated alpha reaches cfg.early_term_alpha. When `trace` is non-null
/// every composited sample is appended to it.
RayResult march_ray(const ScalarVolume& v, const TransferFunction& tf, const Ray& ray,
                    const RayMarchConfig& cfg, std::vector<RaySample>* trace = nullptr);

struct FramePacket {
    ImageTensor color;               // H x W x 3
    ImageTensor quasi_depth;         // H x W x 1, normalized; 1.0 where uncovered
    ImageTensor max_alpha_rgba;      // H x W x 4
    ImageTensor max_alpha_worldpos;  // H x W x 3
    ImageTensor coverage;            // H x W x 1, 0 or 1

    int width() const noexcept { return color.width(); }
    int height() const noexcept { return color.height(); }
    bool operator==(const FramePacket&) const = default;
};

/// Pixel-parallel (OpenMP) frame render.
FramePacket render_frame(const ScalarVolume& v, const TransferFunction& tf,
                         const CameraState& cam, const RayMarchConfig& cfg);

/// Single-threaded reference; bit-identical to render_frame.
FramePacket render_frame_serial(const ScalarVolume& v, const TransferFunction& tf,
                                const CameraState& cam, const RayMarchConfig& cfg);

} // namespace vsr
