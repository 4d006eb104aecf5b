#include "vsr/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vsr/error.hpp"

namespace vsr {

RayMarchConfig default_march_config(const ScalarVolume& v) {
    RayMarchConfig cfg;
    cfg.step_world = 0.5 * v.min_spacing();
    return cfg;
}

void validate(const RayMarchConfig& cfg) {
    if (!(cfg.step_world > 0.0)) throw UsageError("ray march step must be positive");
    if (!(cfg.early_term_alpha > 0.9 && cfg.early_term_alpha <= 1.0))
        throw UsageError("early termination alpha must lie in (0.9, 1]");
}

Rgb shade(const Vec3& grad, const Vec3& view_dir, const Rgb& base, const Lighting& l) {
    const double gnorm = grad.norm();
    if (gnorm < 1e-6) return (l.ambient * base).cwiseMax(0.0).cwiseMin(1.0);

    const Vec3 n = -grad / gnorm;
    const Vec3 to_light = l.light_dir.squaredNorm() > 0.0 ? l.light_dir.normalized() : view_dir;
    const double ndl = n.dot(to_light);

    Rgb out = l.ambient * base;
    if (ndl > 0.0) {
        out += l.diffuse * ndl * base;
        const Vec3 half_raw = to_light + view_dir;
        if (half_raw.squaredNorm() > 1e-24) {
            const double ndh = std::max(0.0, n.dot(half_raw.normalized()));
            out.array() += l.specular * std::pow(ndh, l.shininess);
        }
    }
    return out.cwiseMax(0.0).cwiseMin(1.0);
}

double correct_opacity(double alpha, double step, double reference_step) noexcept {
    if (alpha >= 1.0) return 1.0;
    return 1.0 - std::pow(1.0 - alpha, step / reference_step);
}

void Compositor::add(const Rgb& rgb, double alpha, double depth, const Vec3& position) noexcept {
    const double transmittance = 1.0 - alpha_;
    color_ += transmittance * alpha * rgb;
    alpha_ += transmittance * alpha;
    if (alpha > max_alpha_) {
        max_alpha_ = alpha;
        max_rgb_ = rgb;
        max_depth_ = depth;
        max_position_ = position;
    }
}

bool intersect_box(const Ray& ray, const Aabb& box, double& t_enter, double& t_exit) noexcept {
    double t0 = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
        const double o = ray.origin[a];
        const double d = ray.direction[a];
        if (std::abs(d) < 1e-15) {
            if (o < box.lo[a] || o > box.hi[a]) return false;
            continue;
        }
        double ta = (box.lo[a] - o) / d;
        double tb = (box.hi[a] - o) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    t_enter = t0;
    t_exit = t1;
    return true;
}

RayResult march_ray(const ScalarVolume& v, const TransferFunction& tf, const Ray& ray,
                    const RayMarchConfig& cfg, std::vector<RaySample>* trace) {
    RayResult result;
    double t_enter = 0.0;
    double t_exit = 0.0;
    if (!intersect_box(ray, v.bounds(), t_enter, t_exit)) return result;

    const double step = cfg.step_world;
    const double reference_step = v.min_spacing();
    const Vec3 view_dir = -ray.direction;
    Compositor comp;

    for (int k = 0;; ++k) {
        const double t = t_enter + k * step;
        const double segment = std::min(step, t_exit - t);
        if (!(segment > 0.0)) break;

        const Vec3 pos = ray.origin + t * ray.direction;
        const double intensity = sample_trilinear(v, pos);
        const Rgba c = tf_lookup(tf, intensity);
        ++result.samples;

        Rgb rgb(c[0], c[1], c[2]);
        double alpha = 0.0;
        if (c[3] > 0.0) {
            alpha = correct_opacity(c[3], segment, reference_step);
            if (cfg.lighting.enabled) rgb = shade(gradient_central_diff(v, pos), view_dir, rgb, cfg.lighting);
            comp.add(rgb, alpha, t, pos);
        }
        if (trace) trace->push_back({t, pos, intensity, rgb, alpha, comp.alpha()});
        if (comp.alpha() >= cfg.early_term_alpha) break;
    }

    result.color = comp.color();
    result.alpha = comp.alpha();
    result.coverage = comp.has_max();
    if (result.coverage) {
        result.quasi_depth_distance = comp.max_depth();
        result.max_alpha_rgb = comp.max_rgb();
        result.max_alpha = comp.max_alpha();
        result.max_alpha_position = comp.max_position();
    }
    return result;
}

namespace {

FramePacket render_impl(const ScalarVolume& v, const TransferFunction& tf, const CameraState& cam,
                        const RayMarchConfig& cfg, bool parallel) {
    validate(cfg);
    const int w = cam.width;
    const int h = cam.height;
    FramePacket out{ImageTensor(h, w, 3), ImageTensor(h, w, 1, 1.0f), ImageTensor(h, w, 4),
                    ImageTensor(h, w, 3), ImageTensor(h, w, 1)};
    const RayGenerator rays(cam);
    const double depth_range = cam.far_plane - cam.near_plane;

#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const RayResult r = march_ray(v, tf, rays.through({x, y}), cfg);
            float* color = out.color.pixel(y, x);
            for (int c = 0; c < 3; ++c) color[c] = static_cast<float>(std::clamp(r.color[c], 0.0, 1.0));
            if (!r.coverage) continue;

            out.coverage.at(y, x) = 1.0f;
            out.quasi_depth.at(y, x) = static_cast<float>(
                std::clamp((r.quasi_depth_distance - cam.near_plane) / depth_range, 0.0, 1.0));
            float* rgba = out.max_alpha_rgba.pixel(y, x);
            for (int c = 0; c < 3; ++c) rgba[c] = static_cast<float>(r.max_alpha_rgb[c]);
            rgba[3] = static_cast<float>(r.max_alpha);
            float* wp = out.max_alpha_worldpos.pixel(y, x);
            for (int c = 0; c < 3; ++c) wp[c] = static_cast<float>(r.max_alpha_position[c]);
        }
    }
    return out;
}

} // namespace

FramePacket render_frame(const ScalarVolume& v, const TransferFunction& tf, const CameraState& cam,
                         const RayMarchConfig& cfg) {
    return render_impl(v, tf, cam, cfg, true);
}

FramePacket render_frame_serial(const ScalarVolume& v, const TransferFunction& tf,
                                const CameraState& cam, const RayMarchConfig& cfg) {
    return render_impl(v, tf, cam, cfg, false);
}

} // namespace vsr
