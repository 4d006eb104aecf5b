#pragma once

#include <optional>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "vsr/volume.hpp"

namespace vsr {

using Vec2 = Eigen::Vector2d;
using Mat4 = Eigen::Matrix4d;

/// Pixel index; x is the column in [0, W), y the row in [0, H), row 0 at the top.
struct Pixel {
    int x;
    int y;
};

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
};

/// Pinhole camera with OpenGL conventions: the camera looks down -z in view
/// space and clip space maps the frustum to the [-1,1] NDC cube.
struct CameraState {
    Vec3 position = Vec3::Zero();
    Mat4 view = Mat4::Identity();
    Mat4 proj = Mat4::Identity();
    int width = 1;
    int height = 1;
    Vec2 jitter = Vec2::Zero();  // sub-pixel offset in [-0.5, 0.5)^2
    double near_plane = 0.1;
    double far_plane = 100.0;

    Mat4 view_proj() const { return proj * view; }
};

Mat4 look_at(const Vec3& eye, const Vec3& target, const Vec3& up);
Mat4 perspective(double fov_y_rad, double aspect, double near_plane, double far_plane);

/// Builds a camera at `eye` looking at `target`. Throws UsageError for
/// degenerate input (eye == target, up parallel to the view axis).
CameraState make_camera(const Vec3& eye, const Vec3& target, const Vec3& up, double fov_y_rad,
                        int width, int height, double near_plane, double far_plane,
                        const Vec2& jitter = Vec2::Zero());

/// Same pose and frustum at a different raster size.
CameraState with_resolution(const CameraState& cam, int width, int height);

/// Caches the inverse view-projection of one camera for per-pixel ray setup.
class RayGenerator {
public:
    explicit RayGenerator(const CameraState& cam);

    /// Ray through continuous pixel coordinate (u, v), where pixel (i,j) has
    /// its center at (i + 0.5, j + 0.5). Jitter is not applied.
    Ray at(double u, double v) const;
    /// Ray through the jittered center of `pixel`.
    Ray through(Pixel pixel) const;

private:
    Vec3 position_;
    Mat4 inv_view_proj_;
    double width_;
    double height_;
    Vec2 jitter_;
};

/// Ray from the camera position through the jittered pixel center.
Ray generate_ray(const CameraState& cam, Pixel pixel);

/// Projects a world point with the unjittered view-projection transform to
/// continuous pixel coordinates. Empty when the point has clip w <= 0.
std::optional<Vec2> project_to_pixel(const CameraState& cam, const Vec3& world);
std::optional<Vec2> project_to_pixel(const Mat4& view_proj, int width, int height, const Vec3& world);

} // namespace vsr
