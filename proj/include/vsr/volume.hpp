#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace vsr {

using Vec3 = Eigen::Vector3d;

/// Axis-aligned world-space box.
struct Aabb {
    Vec3 lo;
    Vec3 hi;
};

/// Regular scalar grid with intensities normalized to [0,1].
///
/// Voxel (i,j,k) sits at world position origin + (i,j,k) * spacing, so
/// the sampleable domain is [origin, origin + (dims - 1) * spacing].
/// Storage is x-fastest, then y, then z.
class ScalarVolume {
public:
    ScalarVolume(std::array<int, 3> dims, Vec3 spacing, Vec3 origin, std::vector<float> data);

    const std::array<int, 3>& dims() const noexcept { return dims_; }
    const Vec3& spacing() const noexcept { return spacing_; }
    const Vec3& inv_spacing() const noexcept { return inv_spacing_; }
    const Vec3& origin() const noexcept { return origin_; }
    const std::vector<float>& data() const noexcept { return data_; }

    float voxel(int i, int j, int k) const noexcept {
        return data_[(static_cast<std::size_t>(k) * dims_[1] + j) * dims_[0] + i];
    }
    Vec3 voxel_position(int i, int j, int k) const noexcept {
        return origin_ + Vec3(i, j, k).cwiseProduct(spacing_);
    }

    Aabb bounds() const noexcept;
    Vec3 center() const noexcept;
    double bounding_radius() const noexcept;
    double min_spacing() const noexcept { return spacing_.minCoeff(); }

private:
    std::array<int, 3> dims_;
    Vec3 spacing_;
    Vec3 inv_spacing_;
    Vec3 origin_;
    std::vector<float> data_;
};

/// Header describing a raw volume payload on disk.
struct VolumeHeader {
    std::array<int, 3> dims{};
    Vec3 spacing = Vec3::Ones();
    Vec3 origin = Vec3::Zero();
    std::string dtype = "u8";          // "u8" | "u16" | "f32"
    std::array<double, 2> value_range{0.0, 255.0};
    std::filesystem::path data_file;   // relative paths resolve against the header directory
};

VolumeHeader read_volume_header(const std::filesystem::path& header_path);
void write_volume_header(const std::filesystem::path& header_path, const VolumeHeader& header);

/// Reads the payload named by `header` and rescales it from the declared
/// value range to [0,1]. Values outside the range are clamped.
ScalarVolume load_volume(const std::filesystem::path& header_dir, const VolumeHeader& header);
ScalarVolume load_volume(const std::filesystem::path& header_path);

/// Writes `v` as an f32 payload with value_range [0,1] next to `header_path`.
void save_volume(const std::filesystem::path& header_path, const ScalarVolume& v);

/// Trilinear interpolation; 0 outside the volume bounds.
/// Grid-unit slack for points on the volume boundary.
inline constexpr double kGridTolerance = 1e-9;

inline double sample_trilinear(const ScalarVolume& v, const Vec3& p) noexcept {
    const auto& d = v.dims();
    // Points within kGridTolerance of a face (box-entry samples) count as on it.
    constexpr double tol = kGridTolerance;
    double gx = (p.x() - v.origin().x()) * v.inv_spacing().x();
    double gy = (p.y() - v.origin().y()) * v.inv_spacing().y();
    double gz = (p.z() - v.origin().z()) * v.inv_spacing().z();
    if (!(gx >= -tol && gy >= -tol && gz >= -tol && gx <= d[0] - 1 + tol && gy <= d[1] - 1 + tol &&
          gz <= d[2] - 1 + tol))
        return 0.0;
    gx = std::clamp(gx, 0.0, d[0] - 1.0);
    gy = std::clamp(gy, 0.0, d[1] - 1.0);
    gz = std::clamp(gz, 0.0, d[2] - 1.0);

    const int i = std::min(static_cast<int>(gx), d[0] - 2);
    const int j = std::min(static_cast<int>(gy), d[1] - 2);
    const int k = std::min(static_cast<int>(gz), d[2] - 2);
    const double fx = gx - i;
    const double fy = gy - j;
    const double fz = gz - k;

    const std::size_t sy = static_cast<std::size_t>(d[0]);
    const std::size_t sz = sy * d[1];
    const float* base = v.data().data() + k * sz + j * sy + i;
    const auto lerp_x = [&](std::size_t off) {
        const double a = base[off];
        return a + (static_cast<double>(base[off + 1]) - a) * fx;
    };
    const double c00 = lerp_x(0);
    const double c10 = lerp_x(sy);
    const double c01 = lerp_x(sz);
    const double c11 = lerp_x(sz + sy);
    const double c0 = c00 + (c10 - c00) * fy;
    const double c1 = c01 + (c11 - c01) * fy;
    return c0 + (c1 - c0) * fz;
}

/// Central differences of sample_trilinear with h = spacing / 2 per axis.
Vec3 gradient_central_diff(const ScalarVolume& v, const Vec3& p) noexcept;

enum class SynthKind { sphere, shells, ramp };

SynthKind parse_synth_kind(const std::string& name);

struct SynthParams {
    double radius = 0.35;  // sphere radius, fraction of the smallest extent
    double period = 4.0;   // shell period in voxels
    int axis = 0;          // ramp axis
};

/// Deterministic analytic volume centered on the world origin with unit
/// spacing. Each axis is raised to at least 2 voxels.
ScalarVolume synth_volume(SynthKind kind, std::array<int, 3> dims, const SynthParams& params = {});

} // namespace vsr
