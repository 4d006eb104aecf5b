#include "vsr/volume.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "vsr/error.hpp"

namespace vsr {

using nlohmann::json;

ScalarVolume::ScalarVolume(std::array<int, 3> dims, Vec3 spacing, Vec3 origin, std::vector<float> data)
    : dims_(dims), spacing_(std::move(spacing)), origin_(std::move(origin)), data_(std::move(data)) {
    inv_spacing_ = spacing_.cwiseInverse();
    for (int d : dims_)
        if (d < 2) throw UsageError("ScalarVolume: every axis needs at least 2 voxels");
    if ((spacing_.array() <= 0.0).any()) throw UsageError("ScalarVolume: spacing must be positive");
    const std::size_t n = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
    if (data_.size() != n) throw UsageError("ScalarVolume: data length does not match dims");
    for (float v : data_)
        if (!(v >= 0.0f && v <= 1.0f)) throw DataError("ScalarVolume: intensity outside [0,1]");
}

Aabb ScalarVolume::bounds() const noexcept {
    const Vec3 extent = Vec3(dims_[0] - 1, dims_[1] - 1, dims_[2] - 1).cwiseProduct(spacing_);
    return {origin_, origin_ + extent};
}

Vec3 ScalarVolume::center() const noexcept {
    const Aabb b = bounds();
    return 0.5 * (b.lo + b.hi);
}

double ScalarVolume::bounding_radius() const noexcept {
    const Aabb b = bounds();
    return 0.5 * (b.hi - b.lo).norm();
}

Vec3 gradient_central_diff(const ScalarVolume& v, const Vec3& p) noexcept {
    Vec3 g;
    for (int a = 0; a < 3; ++a) {
        const double h = 0.5 * v.spacing()[a];
        Vec3 lo = p;
        Vec3 hi = p;
        lo[a] -= h;
        hi[a] += h;
        g[a] = (sample_trilinear(v, hi) - sample_trilinear(v, lo)) / (2.0 * h);
    }
    return g;
}

namespace {

std::size_t dtype_size(const std::string& dtype) {
    if (dtype == "u8") return 1;
    if (dtype == "u16") return 2;
    if (dtype == "f32") return 4;
    throw FormatError("volume header: unknown dtype '" + dtype + "'");
}

Vec3 vec3_from_json(const json& j, const char* name) {
    if (!j.is_array() || j.size() != 3) throw FormatError(std::string("volume header: ") + name + " must be a 3-array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

VolumeHeader read_volume_header(const std::filesystem::path& header_path) {
    std::ifstream is(header_path);
    if (!is) throw IoError("cannot open volume header: " + header_path.string());
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw FormatError("volume header is not valid JSON: " + std::string(e.what()));
    }
    VolumeHeader h;
    try {
        const auto& dims = j.at("dims");
        if (!dims.is_array() || dims.size() != 3) throw FormatError("volume header: dims must be a 3-array");
        for (int a = 0; a < 3; ++a) h.dims[a] = dims[a].get<int>();
        if (j.contains("spacing")) h.spacing = vec3_from_json(j["spacing"], "spacing");
        if (j.contains("origin")) h.origin = vec3_from_json(j["origin"], "origin");
        h.dtype = j.at("dtype").get<std::string>();
        const auto& range = j.at("value_range");
        if (!range.is_array() || range.size() != 2) throw FormatError("volume header: value_range must be [lo, hi]");
        h.value_range = {range[0].get<double>(), range[1].get<double>()};
        h.data_file = j.at("data_file").get<std::string>();
    } catch (const json::exception& e) {
        throw FormatError("volume header: " + std::string(e.what()));
    }
    return h;
}

void write_volume_header(const std::filesystem::path& header_path, const VolumeHeader& h) {
    json j = {
        {"dims", {h.dims[0], h.dims[1], h.dims[2]}},
        {"spacing", {h.spacing.x(), h.spacing.y(), h.spacing.z()}},
        {"origin", {h.origin.x(), h.origin.y(), h.origin.z()}},
        {"dtype", h.dtype},
        {"value_range", {h.value_range[0], h.value_range[1]}},
        {"data_file", h.data_file.generic_string()},
    };
    std::ofstream os(header_path);
    if (!os) throw IoError("cannot write volume header: " + header_path.string());
    os << j.dump(2) << '\n';
}

ScalarVolume load_volume(const std::filesystem::path& header_dir, const VolumeHeader& h) {
    const std::size_t elem = dtype_size(h.dtype);
    for (int d : h.dims)
        if (d < 2) throw FormatError("volume header: every axis needs at least 2 voxels");
    const double lo = h.value_range[0];
    const double hi = h.value_range[1];
    if (!(hi > lo)) throw FormatError("volume header: value_range must satisfy lo < hi");

    const auto path = h.data_file.is_absolute() ? h.data_file : header_dir / h.data_file;
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open volume payload: " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());

    const std::size_t n = static_cast<std::size_t>(h.dims[0]) * h.dims[1] * h.dims[2];
    if (bytes.size() != n * elem)
        throw FormatError("volume payload is " + std::to_string(bytes.size()) + " bytes, header implies " +
                          std::to_string(n * elem));

    std::vector<float> data(n);
    const double scale = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < n; ++i) {
        double raw = 0.0;
        const char* src = bytes.data() + i * elem;
        if (elem == 1) {
            raw = static_cast<unsigned char>(*src);
        } else if (elem == 2) {
            std::uint16_t u;
            std::memcpy(&u, src, 2);
            raw = u;
        } else {
            float f;
            std::memcpy(&f, src, 4);
            if (std::isnan(f)) throw DataError("volume payload contains NaN at voxel " + std::to_string(i));
            raw = f;
        }
        data[i] = static_cast<float>(std::clamp((raw - lo) * scale, 0.0, 1.0));
    }
    return ScalarVolume(h.dims, h.spacing, h.origin, std::move(data));
}

ScalarVolume load_volume(const std::filesystem::path& header_path) {
    return load_volume(header_path.parent_path(), read_volume_header(header_path));
}

void save_volume(const std::filesystem::path& header_path, const ScalarVolume& v) {
    VolumeHeader h;
    h.dims = v.dims();
    h.spacing = v.spacing();
    h.origin = v.origin();
    h.dtype = "f32";
    h.value_range = {0.0, 1.0};
    h.data_file = header_path.stem().string() + ".raw";
    std::ofstream os(header_path.parent_path() / h.data_file, std::ios::binary);
    if (!os) throw IoError("cannot write volume payload next to " + header_path.string());
    os.write(reinterpret_cast<const char*>(v.data().data()),
             static_cast<std::streamsize>(v.data().size() * sizeof(float)));
    if (!os) throw IoError("volume payload write failed");
    write_volume_header(header_path, h);
}

SynthKind parse_synth_kind(const std::string& name) {
    if (name == "sphere") return SynthKind::sphere;
    if (name == "shells") return SynthKind::shells;
    if (name == "ramp") return SynthKind::ramp;
    throw UsageError("unknown synthetic volume kind '" + name + "'");
}

ScalarVolume synth_volume(SynthKind kind, std::array<int, 3> dims, const SynthParams& params) {
    for (int& d : dims) d = std::max(d, 2);
    const Vec3 origin = -0.5 * Vec3(dims[0] - 1, dims[1] - 1, dims[2] - 1);
    const double min_extent = std::min({dims[0] - 1, dims[1] - 1, dims[2] - 1});
    const double sphere_r = params.radius * min_extent;
    if (kind == SynthKind::ramp && (params.axis < 0 || params.axis > 2))
        throw UsageError("synth_volume: ramp axis must be 0, 1 or 2");
    if (kind == SynthKind::shells && !(params.period > 0.0))
        throw UsageError("synth_volume: shell period must be positive");

    std::vector<float> data(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]);
    std::size_t idx = 0;
    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i, ++idx) {
                const Vec3 p = origin + Vec3(i, j, k);
                double value = 0.0;
                switch (kind) {
                case SynthKind::sphere:
                    value = p.norm() < sphere_r ? 1.0 : 0.0;
                    break;
                case SynthKind::shells:
                    value = 0.5 + 0.5 * std::cos(2.0 * std::numbers::pi * p.norm() / params.period);
                    break;
                case SynthKind::ramp: {
                    const int a = params.axis;
                    const int coord = a == 0 ? i : (a == 1 ? j : k);
                    value = static_cast<double>(coord) / (dims[a] - 1);
                    break;
                }
                }
                data[idx] = static_cast<float>(std::clamp(value, 0.0, 1.0));
            }
    return ScalarVolume(dims, Vec3::Ones(), origin, std::move(data));
}

} // namespace vsr
