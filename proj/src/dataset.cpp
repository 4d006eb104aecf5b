#include "vsr/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "vsr/error.hpp"
#include "vsr/reprojection.hpp"
#include "vsr/tensor_io.hpp"

namespace vsr {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::uint64_t fnv1a(const std::string& s) noexcept {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json vec3_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
Vec3 vec3_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

void write_json_atomic(const fs::path& path, const json& j) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw IoError("cannot write " + tmp.string());
        os << j.dump(2) << '\n';
        os.close();
        if (!os) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

} // namespace

std::uint64_t SplitMix64::next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

Vec3 CameraPath::eye(int frame) const {
    const double az = azimuth_deg(frame) * kDegToRad;
    const double el = elevation_deg * kDegToRad;
    return center + radius * Vec3(std::cos(el) * std::sin(az), std::sin(el), std::cos(el) * std::cos(az));
}

CameraState CameraPath::camera(int frame, int width, int height, const Vec2& jitter) const {
    return make_camera(eye(frame), center, up, fov_y_deg * kDegToRad, width, height, near_plane,
                       far_plane, jitter);
}

CameraPath sample_camera_path(std::uint64_t seed, const ScalarVolume& volume, int n_frames,
                              const CameraPathParams& params) {
    if (n_frames < 1) throw UsageError("camera path needs at least one frame");
    if (!(params.radius_factor > 1.0)) throw UsageError("camera orbit must lie outside the volume");
    if (!(params.max_elevation_deg >= 0.0 && params.max_elevation_deg < 89.0))
        throw UsageError("max elevation must lie in [0, 89) degrees");

    SplitMix64 rng(seed);
    const double bound = volume.bounding_radius();
    CameraPath path;
    path.center = volume.center();
    path.radius = params.radius_factor * bound;
    path.start_azimuth_deg = 360.0 * rng.uniform();
    const double max_sin = std::sin(params.max_elevation_deg * kDegToRad);
    path.elevation_deg = std::asin((2.0 * rng.uniform() - 1.0) * max_sin) / kDegToRad;
    path.angular_velocity_deg = params.angular_velocity_deg;
    path.fov_y_deg = 2.0 * std::asin(std::min(1.0, params.fill * bound / path.radius)) / kDegToRad;
    path.near_plane = std::max(1e-3, path.radius - 1.01 * bound);
    path.far_plane = path.radius + 1.01 * bound;
    path.n_frames = n_frames;
    return path;
}

std::string to_string(Split s) {
    switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
    }
    return "train";
}

Split parse_split(const std::string& s) {
    if (s == "train") return Split::train;
    if (s == "val") return Split::val;
    if (s == "test") return Split::test;
    throw FormatError("unknown split '" + s + "'");
}

void write_manifest(const fs::path& path, const SequenceManifest& m) {
    json frames = json::array();
    for (const auto& f : m.frames)
        frames.push_back({{"lr_color", f.lr_color},
                          {"lr_quasi_depth", f.lr_quasi_depth},
                          {"lr_max_alpha_rgba", f.lr_max_alpha_rgba},
                          {"lr_motion", f.lr_motion},
                          {"lr_motion_valid", f.lr_motion_valid},
                          {"hr_color", f.hr_color}});
    const CameraPath& p = m.path;
    json j = {
        {"scene_id", m.scene_id},
        {"sequence_id", m.sequence_id},
        {"seed", m.seed},
        {"n_frames", m.n_frames},
        {"lr_resolution", {m.lr_width, m.lr_height}},
        {"hr_resolution", {m.hr_width, m.hr_height}},
        {"upsample_factor", m.upsample_factor},
        {"frames", frames},
        {"camera_path",
         {{"center", vec3_json(p.center)},
          {"radius", p.radius},
          {"start_azimuth_deg", p.start_azimuth_deg},
          {"elevation_deg", p.elevation_deg},
          {"angular_velocity_deg", p.angular_velocity_deg},
          {"up", vec3_json(p.up)},
          {"fov_y_deg", p.fov_y_deg},
          {"near", p.near_plane},
          {"far", p.far_plane}}},
        {"split", to_string(m.split)},
    };
    write_json_atomic(path, j);
}

SequenceManifest read_manifest(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open manifest: " + path.string());
    SequenceManifest m;
    try {
        json j;
        is >> j;
        m.scene_id = j.at("scene_id").get<std::string>();
        m.sequence_id = j.at("sequence_id").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.n_frames = j.at("n_frames").get<int>();
        m.lr_width = j.at("lr_resolution").at(0).get<int>();
        m.lr_height = j.at("lr_resolution").at(1).get<int>();
        m.hr_width = j.at("hr_resolution").at(0).get<int>();
        m.hr_height = j.at("hr_resolution").at(1).get<int>();
        m.upsample_factor = j.at("upsample_factor").get<int>();
        for (const auto& f : j.at("frames"))
            m.frames.push_back({f.at("lr_color").get<std::string>(), f.at("lr_quasi_depth").get<std::string>(),
                                f.at("lr_max_alpha_rgba").get<std::string>(), f.at("lr_motion").get<std::string>(),
                                f.at("lr_motion_valid").get<std::string>(), f.at("hr_color").get<std::string>()});
        const auto& p = j.at("camera_path");
        m.path.center = vec3_from(p.at("center"));
        m.path.radius = p.at("radius").get<double>();
        m.path.start_azimuth_deg = p.at("start_azimuth_deg").get<double>();
        m.path.elevation_deg = p.at("elevation_deg").get<double>();
        m.path.angular_velocity_deg = p.at("angular_velocity_deg").get<double>();
        m.path.up = vec3_from(p.at("up"));
        m.path.fov_y_deg = p.at("fov_y_deg").get<double>();
        m.path.near_plane = p.at("near").get<double>();
        m.path.far_plane = p.at("far").get<double>();
        m.path.n_frames = m.n_frames;
        m.split = parse_split(j.at("split").get<std::string>());
    } catch (const json::exception& e) {
        throw FormatError("manifest " + path.string() + ": " + e.what());
    }
    if (m.hr_width != m.upsample_factor * m.lr_width || m.hr_height != m.upsample_factor * m.lr_height)
        throw FormatError("manifest " + path.string() + ": hr resolution is not factor x lr resolution");
    if (m.n_frames < 1 || static_cast<int>(m.frames.size()) != m.n_frames)
        throw FormatError("manifest " + path.string() + ": frame records do not match n_frames");
    return m;
}

SequenceManifest generate_sequence(const Scene& scene, const CameraPath& path, const SequenceSpec& spec) {
    if (spec.upsample_factor < 1 || spec.lr_width < 1 || spec.lr_height < 1)
        throw UsageError("generate_sequence: invalid resolution or factor");
    validate(spec.march);

    SequenceManifest m;
    m.scene_id = scene.id;
    m.sequence_id = spec.sequence_id;
    m.seed = spec.seed;
    m.n_frames = path.n_frames;
    m.lr_width = spec.lr_width;
    m.lr_height = spec.lr_height;
    m.upsample_factor = spec.upsample_factor;
    m.hr_width = spec.upsample_factor * spec.lr_width;
    m.hr_height = spec.upsample_factor * spec.lr_height;
    m.path = path;
    m.split = spec.split;

    const fs::path dir = spec.out_dir;
    fs::create_directories(dir);
    try {
        HistoryBuffer history;
        CameraState prev_lr;
        CameraState prev_hr;
        for (int i = 0; i < path.n_frames; ++i) {
            const CameraState cam_lr = path.camera(i, m.lr_width, m.lr_height);
            const FramePacket lr = render_frame(scene.volume, scene.tf, cam_lr, spec.march);
            const MotionField lr_motion = i == 0 ? zero_motion(lr) : compute_motion(lr, prev_lr, cam_lr);

            const CameraState cam_hr = path.camera(i, m.hr_width, m.hr_height, taa_jitter(i));
            const FramePacket hr = render_frame(scene.volume, scene.tf, cam_hr, spec.march);
            const MotionField hr_motion = i == 0 ? zero_motion(hr) : compute_motion(hr, prev_hr, cam_hr);
            TaaResult taa = taa_pass(hr, history, hr_motion, spec.taa_blend);
            history = std::move(taa.history);

            char prefix[32];
            std::snprintf(prefix, sizeof prefix, "frame_%04d_", i);
            const std::string p = prefix;
            FrameRecord rec{p + "lr_color.vsrt",  p + "lr_quasi_depth.vsrt", p + "lr_max_alpha_rgba.vsrt",
                            p + "lr_motion.vsrt", p + "lr_motion_valid.vsrt", p + "hr_color.vsrt"};
            write_image(dir / rec.lr_color, lr.color);
            write_image(dir / rec.lr_quasi_depth, lr.quasi_depth);
            write_image(dir / rec.lr_max_alpha_rgba, lr.max_alpha_rgba);
            write_image(dir / rec.lr_motion, lr_motion.motion);
            write_image(dir / rec.lr_motion_valid, lr_motion.validity);
            write_image(dir / rec.hr_color, taa.color);
            m.frames.push_back(std::move(rec));

            prev_lr = cam_lr;
            prev_hr = cam_hr;
        }
        write_manifest(dir / "manifest.json", m);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(dir, ec);
        throw;
    }
    return m;
}

std::array<int, 3> split_counts(int n, const SplitRatios& r) {
    const std::array<double, 3> ratios{r.train, r.val, r.test};
    std::array<int, 3> counts{};
    int assigned = 0;
    for (int k = 0; k < 3; ++k) {
        counts[k] = static_cast<int>(std::floor(n * ratios[k] + 1e-9));
        assigned += counts[k];
    }
    for (int k = 0; assigned < n; k = (k + 1) % 3) {
        if (ratios[k] <= 0.0) continue;
        ++counts[k];
        ++assigned;
    }
    return counts;
}

std::vector<Split> split_dataset(std::span<const SequenceKey> sequences, const SplitRatios& ratios,
                                 std::uint64_t seed) {
    if (ratios.train < 0.0 || ratios.val < 0.0 || ratios.test < 0.0 ||
        std::abs(ratios.train + ratios.val + ratios.test - 1.0) > 1e-9)
        throw UsageError("split ratios must be non-negative and sum to 1");

    std::vector<std::string> scenes;
    for (const auto& s : sequences)
        if (std::find(scenes.begin(), scenes.end(), s.scene_id) == scenes.end()) scenes.push_back(s.scene_id);

    std::vector<Split> out(sequences.size(), Split::train);
    for (const auto& scene : scenes) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < sequences.size(); ++i)
            if (sequences[i].scene_id == scene) members.push_back(i);
        if (members.size() < 3) throw UsageError("scene '" + scene + "' has fewer sequences than split classes");

        SplitMix64 rng(seed ^ fnv1a(scene));
        for (std::size_t i = members.size() - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(rng.next() % (i + 1));
            std::swap(members[i], members[j]);
        }
        const auto counts = split_counts(static_cast<int>(members.size()), ratios);
        std::size_t pos = 0;
        for (int k = 0; k < 3; ++k)
            for (int c = 0; c < counts[k]; ++c) out[members[pos++]] = static_cast<Split>(k);
    }
    return out;
}

std::vector<SequenceManifest> generate_dataset(const Scene& scene, const DatasetConfig& cfg) {
    if (cfg.sequences < 1 || cfg.frames < 1) throw UsageError("gen-dataset: sequences and frames must be >= 1");

    std::vector<SequenceKey> keys;
    std::vector<std::uint64_t> seeds;
    SplitMix64 seeder(cfg.seed ^ fnv1a(scene.id));
    for (int s = 0; s < cfg.sequences; ++s) {
        char id[32];
        std::snprintf(id, sizeof id, "seq_%03d", s);
        keys.push_back({scene.id, id});
        seeds.push_back(seeder.next());
    }
    const auto splits = split_dataset(keys, cfg.ratios, cfg.seed);

    RayMarchConfig march = default_march_config(scene.volume);
    if (cfg.step_world) march.step_world = *cfg.step_world;

    fs::create_directories(cfg.out_dir);
    std::vector<SequenceManifest> manifests;
    json index = json::array();
    for (std::size_t s = 0; s < keys.size(); ++s) {
        SequenceSpec spec;
        spec.sequence_id = keys[s].sequence_id;
        spec.seed = seeds[s];
        spec.lr_width = cfg.lr_width;
        spec.lr_height = cfg.lr_height;
        spec.upsample_factor = cfg.upsample_factor;
        spec.taa_blend = cfg.taa_blend;
        spec.march = march;
        spec.split = splits[s];
        spec.out_dir = cfg.out_dir / spec.sequence_id;
        const CameraPath path = sample_camera_path(spec.seed, scene.volume, cfg.frames, cfg.path_params);
        manifests.push_back(generate_sequence(scene, path, spec));
        index.push_back({{"sequence_id", spec.sequence_id},
                         {"manifest", spec.sequence_id + "/manifest.json"},
                         {"split", to_string(spec.split)}});
    }
    write_json_atomic(cfg.out_dir / "dataset.json",
                      {{"scene_id", scene.id}, {"seed", cfg.seed}, {"upsample_factor", cfg.upsample_factor},
                       {"sequences", index}});
    return manifests;
}

} // namespace vsr
