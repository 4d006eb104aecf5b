#include <doctest.h>

#include <fstream>
#include <iterator>
#include <set>

#include "test_util.hpp"
#include "vsr/dataset.hpp"
#include "vsr/error.hpp"
#include "vsr/sr_ops.hpp"
#include "vsr/tensor_io.hpp"

using namespace vsr;
namespace fs = std::filesystem;

namespace {

std::vector<char> file_bytes(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Scene small_scene() {
    return {"shells", synth_volume(SynthKind::shells, {12, 12, 12}), default_transfer_function()};
}

SequenceSpec small_spec(const fs::path& dir) {
    SequenceSpec spec;
    spec.sequence_id = "seq_000";
    spec.lr_width = 8;
    spec.lr_height = 6;
    spec.upsample_factor = 2;
    spec.out_dir = dir;
    spec.march.step_world = 0.5;
    return spec;
}

} // namespace

TEST_SUITE("dataset-pipeline") {

TEST_CASE("sample_camera_path") {
    const auto v = synth_volume(SynthKind::sphere, {16, 16, 16});
    SUBCASE("deterministic in seed") {
        const auto a = sample_camera_path(42, v, 10);
        const auto b = sample_camera_path(42, v, 10);
        const auto c = sample_camera_path(43, v, 10);
        for (int i = 0; i < 10; ++i) CHECK((a.eye(i) - b.eye(i)).norm() == 0.0);
        CHECK((a.eye(0) - c.eye(0)).norm() > 0.0);
    }
    SUBCASE("zero angular velocity is static") {
        const auto p = sample_camera_path(1, v, 5, {.angular_velocity_deg = 0.0});
        for (int i = 1; i < 5; ++i) CHECK(p.camera(i, 8, 8).view == p.camera(0, 8, 8).view);
    }
    SUBCASE("100 frames at 0.9 deg per frame sweep 89.1 deg") {
        const auto p = sample_camera_path(7, v, 100);
        CHECK(p.total_sweep_deg() == doctest::Approx(89.1).epsilon(1e-12));
        CHECK(p.azimuth_deg(99) - p.azimuth_deg(0) == doctest::Approx(89.1).epsilon(1e-12));
    }
    SUBCASE("camera stays outside the volume and inside the elevation band") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto p = sample_camera_path(seed, v, 3);
            CHECK(p.radius > v.bounding_radius());
            CHECK(std::abs(p.elevation_deg) <= 60.0);
            CHECK((p.eye(2) - p.center).norm() == doctest::Approx(p.radius));
        }
    }
    SUBCASE("invalid parameters") {
        CHECK_THROWS_AS(sample_camera_path(1, v, 0), UsageError);
        CHECK_THROWS_AS(sample_camera_path(1, v, 3, {.radius_factor = 0.5}), UsageError);
    }
}

TEST_CASE("split_dataset") {
    SUBCASE("rounding rule") {
        CHECK(split_counts(36, {}) == std::array<int, 3>{29, 4, 3});
        CHECK(split_counts(10, {}) == std::array<int, 3>{8, 1, 1});
        CHECK(split_counts(6, {}) == std::array<int, 3>{5, 1, 0});
        CHECK(split_counts(3, {}) == std::array<int, 3>{3, 0, 0});
    }
    std::vector<SequenceKey> keys;
    for (const char* scene : {"cardio", "manix", "abdomen"})
        for (int s = 0; s < 36; ++s) keys.push_back({scene, "seq_" + std::to_string(s)});

    SUBCASE("stratified per scene, exhaustive and deterministic") {
        const auto a = split_dataset(keys, {}, 5);
        const auto b = split_dataset(keys, {}, 5);
        const auto c = split_dataset(keys, {}, 6);
        CHECK(a == b);
        CHECK(a != c);
        REQUIRE(a.size() == keys.size());
        for (int scene = 0; scene < 3; ++scene) {
            std::array<int, 3> counts{};
            for (int s = 0; s < 36; ++s) ++counts[static_cast<int>(a[scene * 36 + s])];
            CHECK(counts == std::array<int, 3>{29, 4, 3});
        }
    }
    SUBCASE("errors") {
        const std::vector<SequenceKey> two{{"x", "a"}, {"x", "b"}};
        CHECK_THROWS_AS(split_dataset(two, {}, 0), UsageError);
        CHECK_THROWS_AS(split_dataset(keys, {0.5, 0.1, 0.1}, 0), UsageError);
    }
}

TEST_CASE("generate_sequence") {
    TempDir tmp;
    const Scene scene = small_scene();

    SUBCASE("single frame: zero motion and a plain HR render") {
        const auto path = sample_camera_path(3, scene.volume, 1);
        const auto m = generate_sequence(scene, path, small_spec(tmp.path() / "one"));
        REQUIRE(m.frames.size() == 1);
        const auto dir = tmp.path() / "one";
        const auto motion = read_image(dir / m.frames[0].lr_motion);
        for (float v : motion.values()) CHECK(v == 0.0f);
        const auto lr = render_frame(scene.volume, scene.tf, path.camera(0, 8, 6), small_spec(dir).march);
        CHECK(read_image(dir / m.frames[0].lr_motion_valid) == lr.coverage);
        const auto hr = render_frame(scene.volume, scene.tf, path.camera(0, 16, 12, taa_jitter(0)), small_spec(dir).march);
        CHECK(read_image(dir / m.frames[0].hr_color) == hr.color);
    }
    SUBCASE("static path gives zero LR motion where covered") {
        const auto path = sample_camera_path(4, scene.volume, 4, {.angular_velocity_deg = 0.0});
        const auto m = generate_sequence(scene, path, small_spec(tmp.path() / "static"));
        for (const auto& f : m.frames) {
            const auto motion = read_image(tmp.path() / "static" / f.lr_motion);
            for (float v : motion.values()) CHECK(v == 0.0f);
        }
    }
    SUBCASE("manifest records reload every tensor and regeneration is byte-identical") {
        const auto path = sample_camera_path(5, scene.volume, 3);
        const auto m = generate_sequence(scene, path, small_spec(tmp.path() / "a"));
        generate_sequence(scene, path, small_spec(tmp.path() / "b"));
        const auto back = read_manifest(tmp.path() / "a" / "manifest.json");
        CHECK(back.hr_width == back.upsample_factor * back.lr_width);
        CHECK(back.frames.size() == 3);
        CHECK(back.path.start_azimuth_deg == m.path.start_azimuth_deg);
        CHECK(file_bytes(tmp.path() / "a" / "manifest.json") == file_bytes(tmp.path() / "b" / "manifest.json"));
        for (const auto& f : back.frames) {
            for (const auto& name : {f.lr_color, f.lr_quasi_depth, f.lr_max_alpha_rgba, f.lr_motion,
                                     f.lr_motion_valid, f.hr_color}) {
                CHECK_NOTHROW(read_image(tmp.path() / "a" / name));
                CHECK(file_bytes(tmp.path() / "a" / name) == file_bytes(tmp.path() / "b" / name));
            }
            CHECK(read_image(tmp.path() / "a" / f.hr_color).width() == 16);
            CHECK(read_image(tmp.path() / "a" / f.lr_max_alpha_rgba).channels() == 4);
        }
    }
    SUBCASE("IO failure removes the partial sequence") {
        const auto dir = tmp.path() / "broken";
        fs::create_directories(dir / "frame_0001_lr_color.vsrt");  // a directory where a file must go
        const auto path = sample_camera_path(6, scene.volume, 3);
        CHECK_THROWS_AS(generate_sequence(scene, path, small_spec(dir)), IoError);
        CHECK_FALSE(fs::exists(dir));
    }
}

TEST_CASE("LR pixels align with HR blocks") {
    // Opaque constant slab filling the frustum, unlit: every ray returns the
    // same color, so the LR frame equals the stride-s subsample of the HR frame.
    const ScalarVolume slab({40, 40, 6}, Vec3::Ones(), Vec3(-19.5, -19.5, -5), std::vector<float>(40 * 40 * 6, 0.8f));
    const TransferFunction tf({{0.0, {0, 0, 0, 0}}, {0.5, {0.1, 0.2, 0.3, 0.0}}, {1.0, {0.9, 0.6, 0.3, 1.0}}});
    RayMarchConfig cfg;
    cfg.step_world = 0.5;
    cfg.lighting.enabled = false;
    const auto lr_cam = make_camera(Vec3(0, 0, 6), Vec3(0, 0, 0), Vec3::UnitY(), 1.0, 12, 10, 1.0, 30.0);
    for (int s : {2, 4}) {
        const auto hr_cam = with_resolution(lr_cam, 12 * s, 10 * s);
        const auto lr = render_frame(slab, tf, lr_cam, cfg);
        const auto hr = render_frame(slab, tf, hr_cam, cfg);
        const auto sub = stride_subsample(hr.color, s);
        for (std::size_t i = 0; i < sub.size(); ++i) CHECK(std::abs(sub.values()[i] - lr.color.values()[i]) < 1e-3);
        // Pixel centers of LR pixel (i, j) and HR block [s i, s i + s) coincide.
        const RayGenerator lr_rays(lr_cam), hr_rays(hr_cam);
        const Ray a = lr_rays.through({3, 4});
        const Ray b = hr_rays.at(s * 3 + 0.5 * s, s * 4 + 0.5 * s);
        CHECK((a.direction - b.direction).norm() < 1e-12);
    }
}

TEST_CASE("generate_dataset") {
    TempDir tmp;
    const Scene scene = small_scene();
    DatasetConfig cfg;
    cfg.out_dir = tmp.path() / "ds";
    cfg.lr_width = 6;
    cfg.lr_height = 6;
    cfg.upsample_factor = 2;
    cfg.sequences = 4;
    cfg.frames = 2;
    cfg.seed = 11;
    const auto manifests = generate_dataset(scene, cfg);
    REQUIRE(manifests.size() == 4);
    std::set<std::string> ids;
    for (const auto& m : manifests) {
        ids.insert(m.sequence_id);
        CHECK(read_manifest(cfg.out_dir / m.sequence_id / "manifest.json").split == m.split);
    }
    CHECK(ids.size() == 4);
    CHECK(fs::exists(cfg.out_dir / "dataset.json"));
}

}
