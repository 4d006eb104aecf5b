#include "vsr/camera.hpp"

#include <cmath>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include "vsr/error.hpp"

namespace vsr {

Mat4 look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
    const Vec3 fwd_raw = target - eye;
    if (fwd_raw.norm() < 1e-12) throw UsageError("look_at: eye and target coincide");
    const Vec3 f = fwd_raw.normalized();
    const Vec3 side_raw = f.cross(up);
    if (side_raw.norm() < 1e-9) throw UsageError("look_at: up vector parallel to view direction");
    const Vec3 s = side_raw.normalized();
    const Vec3 u = s.cross(f);

    Mat4 m = Mat4::Identity();
    m.block<1, 3>(0, 0) = s.transpose();
    m.block<1, 3>(1, 0) = u.transpose();
    m.block<1, 3>(2, 0) = -f.transpose();
    m(0, 3) = -s.dot(eye);
    m(1, 3) = -u.dot(eye);
    m(2, 3) = f.dot(eye);
    return m;
}

Mat4 perspective(double fov_y_rad, double aspect, double near_plane, double far_plane) {
    if (!(fov_y_rad > 0.0 && fov_y_rad < M_PI) || !(aspect > 0.0) || !(near_plane > 0.0) ||
        !(far_plane > near_plane))
        throw UsageError("perspective: invalid frustum");
    const double f = 1.0 / std::tan(0.5 * fov_y_rad);
    Mat4 m = Mat4::Zero();
    m(0, 0) = f / aspect;
    m(1, 1) = f;
    m(2, 2) = (far_plane + near_plane) / (near_plane - far_plane);
    m(2, 3) = 2.0 * far_plane * near_plane / (near_plane - far_plane);
    m(3, 2) = -1.0;
    return m;
}

CameraState make_camera(const Vec3& eye, const Vec3& target, const Vec3& up, double fov_y_rad,
                        int width, int height, double near_plane, double far_plane, const Vec2& jitter) {
    if (width < 1 || height < 1) throw UsageError("make_camera: resolution must be positive");
    CameraState cam;
    cam.position = eye;
    cam.view = look_at(eye, target, up);
    cam.proj = perspective(fov_y_rad, static_cast<double>(width) / height, near_plane, far_plane);
    cam.width = width;
    cam.height = height;
    cam.jitter = jitter;
    cam.near_plane = near_plane;
    cam.far_plane = far_plane;
    return cam;
}

CameraState with_resolution(const CameraState& cam, int width, int height) {
    CameraState out = cam;
    out.width = width;
    out.height = height;
    // Rescale x focal length so the vertical fov is kept and pixels stay square.
    out.proj(0, 0) = cam.proj(0, 0) * (static_cast<double>(cam.width) / cam.height) /
                     (static_cast<double>(width) / height);
    return out;
}

RayGenerator::RayGenerator(const CameraState& cam)
    : position_(cam.position),
      inv_view_proj_(cam.view_proj().inverse()),
      width_(cam.width),
      height_(cam.height),
      jitter_(cam.jitter) {}

Ray RayGenerator::at(double u, double v) const {
    const double ndc_x = 2.0 * u / width_ - 1.0;
    const double ndc_y = 1.0 - 2.0 * v / height_;
    const Eigen::Vector4d far_h = inv_view_proj_ * Eigen::Vector4d(ndc_x, ndc_y, 1.0, 1.0);
    const Vec3 far_point = far_h.head<3>() / far_h.w();
    return {position_, (far_point - position_).normalized()};
}

Ray RayGenerator::through(Pixel pixel) const {
    return at(pixel.x + 0.5 + jitter_.x(), pixel.y + 0.5 + jitter_.y());
}

Ray generate_ray(const CameraState& cam, Pixel pixel) {
    return RayGenerator(cam).through(pixel);
}

std::optional<Vec2> project_to_pixel(const CameraState& cam, const Vec3& world) {
    return project_to_pixel(cam.view_proj(), cam.width, cam.height, world);
}

std::optional<Vec2> project_to_pixel(const Mat4& view_proj, int width, int height, const Vec3& world) {
    const Eigen::Vector4d clip = view_proj * world.homogeneous();
    if (!(clip.w() > 0.0)) return std::nullopt;
    const double ndc_x = clip.x() / clip.w();
    const double ndc_y = clip.y() / clip.w();
    return Vec2(0.5 * (ndc_x + 1.0) * width, 0.5 * (1.0 - ndc_y) * height);
}

} // namespace vsr
