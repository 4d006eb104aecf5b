// vsrtool: render volumes, generate super-resolution datasets, compute metrics.
//
// Exit codes: 0 success, 2 usage error, 1 runtime error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vsr/dataset.hpp"
#include "vsr/error.hpp"
#include "vsr/metrics.hpp"
#include "vsr/sr_ops.hpp"
#include "vsr/tensor_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace vsr;

namespace {

std::pair<int, int> parse_resolution(const std::string& s) {
    int w = 0, h = 0;
    char x = 0;
    std::istringstream is(s);
    if (!(is >> w >> x >> h) || (x != 'x' && x != 'X') || w < 1 || h < 1 || is.peek() != EOF)
        throw UsageError("resolution must look like WxH, got '" + s + "'");
    return {w, h};
}

std::array<int, 3> parse_dims(const std::string& s) {
    std::array<int, 3> d{};
    char x1 = 0, x2 = 0;
    std::istringstream is(s);
    if (!(is >> d[0] >> x1 >> d[1] >> x2 >> d[2]) || x1 != 'x' || x2 != 'x')
        throw UsageError("dims must look like NXxNYxNZ, got '" + s + "'");
    return d;
}

Vec3 vec3_arg(const json& j, const char* key) {
    const auto& a = j.at(key);
    return {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
}

CameraState read_camera(const fs::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open camera file: " + path.string());
    try {
        json j;
        is >> j;
        Vec2 jitter = Vec2::Zero();
        if (j.contains("jitter")) jitter = Vec2(j["jitter"].at(0).get<double>(), j["jitter"].at(1).get<double>());
        return make_camera(vec3_arg(j, "eye"), vec3_arg(j, "target"),
                           j.contains("up") ? vec3_arg(j, "up") : Vec3::UnitY(),
                           j.at("fov_y_deg").get<double>() * std::numbers::pi / 180.0, j.at("width").get<int>(),
                           j.at("height").get<int>(), j.at("near").get<double>(), j.at("far").get<double>(), jitter);
    } catch (const json::exception& e) {
        throw FormatError("camera file " + path.string() + ": " + e.what());
    }
}

std::vector<fs::path> vsrt_files(const fs::path& root) {
    std::vector<fs::path> out;
    if (fs::is_regular_file(root)) return {root};
    if (!fs::is_directory(root)) throw IoError("not a file or directory: " + root.string());
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file() && e.path().extension() == ".vsrt") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

std::string scene_id_for(const fs::path& scene, const std::string& override_id) {
    return override_id.empty() ? scene.stem().string() : override_id;
}

int cmd_synth(const std::string& kind, const std::string& dims, double radius, double period,
              const fs::path& out, const fs::path& tf_out) {
    SynthParams params;
    params.radius = radius;
    params.period = period;
    const auto v = synth_volume(parse_synth_kind(kind), parse_dims(dims), params);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    save_volume(out, v);
    if (!tf_out.empty()) write_transfer_function(tf_out, default_transfer_function());
    return 0;
}

int cmd_render(const fs::path& scene, const fs::path& tf_path, const fs::path& camera, const fs::path& out,
               const fs::path& features, std::optional<double> step) {
    const auto v = load_volume(scene);
    const auto tf = read_transfer_function(tf_path);
    const auto cam = read_camera(camera);
    RayMarchConfig cfg = default_march_config(v);
    if (step) cfg.step_world = *step;
    const auto frame = render_frame(v, tf, cam, cfg);
    write_image(out, frame.color);
    if (!features.empty()) {
        fs::create_directories(features);
        write_image(features / "color.vsrt", frame.color);
        write_image(features / "quasi_depth.vsrt", frame.quasi_depth);
        write_image(features / "max_alpha_rgba.vsrt", frame.max_alpha_rgba);
        write_image(features / "max_alpha_worldpos.vsrt", frame.max_alpha_worldpos);
        write_image(features / "coverage.vsrt", frame.coverage);
    }
    return 0;
}

int cmd_gen_dataset(const fs::path& scene, const fs::path& tf_path, const fs::path& out, int factor,
                    const std::string& lr, int sequences, int frames, std::uint64_t seed,
                    const std::string& scene_id, std::optional<double> step, double blend) {
    const auto [w, h] = parse_resolution(lr);
    const Scene s{scene_id_for(scene, scene_id), load_volume(scene), read_transfer_function(tf_path)};
    DatasetConfig cfg;
    cfg.out_dir = out;
    cfg.lr_width = w;
    cfg.lr_height = h;
    cfg.upsample_factor = factor;
    cfg.sequences = sequences;
    cfg.frames = frames;
    cfg.seed = seed;
    cfg.step_world = step;
    cfg.taa_blend = blend;
    const auto manifests = generate_dataset(s, cfg);
    for (const auto& m : manifests)
        std::cerr << m.sequence_id << ": " << m.n_frames << " frames, split " << to_string(m.split) << '\n';
    return 0;
}

int cmd_metrics(const fs::path& pred_root, const fs::path& gt_root) {
    if (!fs::is_directory(pred_root) || !fs::is_directory(gt_root))
        throw UsageError("metrics: --pred and --gt must be directories");
    for (const auto& pred_path : vsrt_files(pred_root)) {
        const fs::path rel = fs::relative(pred_path, pred_root);
        const fs::path gt_path = gt_root / rel;
        if (!fs::exists(gt_path)) throw IoError("no ground truth for " + rel.generic_string());
        const auto pred = clamp01(read_image(pred_path));
        const auto gt = read_image(gt_path);
        if (!pred.same_shape(gt)) throw UsageError("shape mismatch for " + rel.generic_string());
        const double p = psnr(pred, gt);
        json line = {{"file", rel.generic_string()}, {"ssim", ssim(pred, gt)}};
        line["psnr_db"] = std::isinf(p) ? json("inf") : json(p);
        std::cout << json{{"file", line["file"]}, {"psnr_db", line["psnr_db"]}, {"ssim", line["ssim"]}}.dump() << '\n';
    }
    return 0;
}

int cmd_baseline(int factor, const fs::path& in, const fs::path& out) {
    if (factor < 1) throw UsageError("baseline: factor must be >= 1");
    const auto index_path = in / "dataset.json";
    if (fs::is_directory(in) && fs::exists(index_path)) {
        // Dataset layout: write <seq>/<frame>_hr_color.vsrt next to the ground-truth names.
        std::ifstream is(index_path);
        json index;
        is >> index;
        if (index.at("upsample_factor").get<int>() != factor)
            throw UsageError("baseline: dataset was generated with factor " +
                             std::to_string(index.at("upsample_factor").get<int>()));
        for (const auto& seq : index.at("sequences")) {
            const auto manifest = read_manifest(in / seq.at("manifest").get<std::string>());
            const fs::path dst = out / manifest.sequence_id;
            fs::create_directories(dst);
            for (const auto& f : manifest.frames)
                write_image(dst / f.hr_color, bicubic_upsample(read_image(in / manifest.sequence_id / f.lr_color), factor));
        }
        return 0;
    }
    const bool single = fs::is_regular_file(in);
    for (const auto& src : vsrt_files(in)) {
        const fs::path rel = single ? src.filename() : fs::relative(src, in);
        fs::create_directories((out / rel).parent_path());
        write_image(out / rel, bicubic_upsample(read_image(src), factor));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Volume rendering and super-resolution dataset toolkit"};
    app.require_subcommand(1);

    std::string kind = "shells", dims = "64x64x64";
    double radius = 0.35, period = 4.0;
    fs::path synth_out, tf_out;
    auto* synth = app.add_subcommand("synth", "Write an analytic test volume (and optionally a default transfer function)");
    synth->add_option("--kind", kind, "sphere | shells | ramp")->check(CLI::IsMember({"sphere", "shells", "ramp"}));
    synth->add_option("--dims", dims, "NXxNYxNZ");
    synth->add_option("--radius", radius, "Sphere radius as a fraction of the smallest extent");
    synth->add_option("--period", period, "Shell period in voxels");
    synth->add_option("--out", synth_out, "Volume header path (.json)")->required();
    synth->add_option("--tf-out", tf_out, "Also write the default transfer function here");

    fs::path scene, tf, camera, out, features;
    std::optional<double> step;
    auto* render = app.add_subcommand("render", "Render one frame");
    render->add_option("--scene", scene, "Volume header")->required();
    render->add_option("--tf", tf, "Transfer function JSON")->required();
    render->add_option("--camera", camera, "Camera JSON")->required();
    render->add_option("--out", out, "Output color tensor (.vsrt)")->required();
    render->add_option("--features-dir", features, "Also write every feature channel here");
    render->add_option("--step", step, "Ray-march step in world units");

    int factor = 4, sequences = 6, frames = 24;
    std::string lr = "64x64", scene_id;
    std::uint64_t seed = 0;
    double blend = kDefaultTaaBlend;
    auto* gen = app.add_subcommand("gen-dataset", "Render LR/HR training sequences");
    gen->add_option("--scene", scene, "Volume header")->required();
    gen->add_option("--tf", tf, "Transfer function JSON")->required();
    gen->add_option("--out", out, "Output directory")->required();
    gen->add_option("--factor", factor, "Upsampling factor")->check(CLI::IsMember({4, 8, 16}));
    gen->add_option("--lr", lr, "Low-resolution size WxH");
    gen->add_option("--sequences", sequences, "Sequences to render")->check(CLI::PositiveNumber);
    gen->add_option("--frames", frames, "Frames per sequence")->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--scene-id", scene_id, "Scene identifier (default: volume file stem)");
    gen->add_option("--step", step, "Ray-march step in world units");
    gen->add_option("--blend", blend, "TAA weight of the current frame")->check(CLI::Range(1e-6, 1.0));

    fs::path pred, gt;
    auto* metrics = app.add_subcommand("metrics", "PSNR/SSIM of every tensor in --pred against --gt (JSON lines)");
    metrics->add_option("--pred", pred, "Prediction directory")->required();
    metrics->add_option("--gt", gt, "Ground-truth directory")->required();

    fs::path in;
    int baseline_factor = 4;
    auto* baseline = app.add_subcommand("baseline", "Bicubic upsampling baseline");
    baseline->add_option("--factor", baseline_factor, "Upsampling factor")->required()->check(CLI::PositiveNumber);
    baseline->add_option("--in", in, "Tensor file, directory, or dataset directory")->required();
    baseline->add_option("--out", out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*synth) return cmd_synth(kind, dims, radius, period, synth_out, tf_out);
        if (*render) return cmd_render(scene, tf, camera, out, features, step);
        if (*gen) return cmd_gen_dataset(scene, tf, out, factor, lr, sequences, frames, seed, scene_id, step, blend);
        if (*metrics) return cmd_metrics(pred, gt);
        if (*baseline) return cmd_baseline(baseline_factor, in, out);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
