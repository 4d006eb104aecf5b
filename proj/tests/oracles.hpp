#pragma once

// Straightforward reference implementations used only by the tests. They are
// written independently of the library code paths they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "vsr/image.hpp"
#include "vsr/renderer.hpp"
#include "vsr/transfer_function.hpp"
#include "vsr/volume.hpp"

namespace oracle {

/// Trilinear value as an explicit weighted sum over the 8 cell corners.
inline double trilinear(const vsr::ScalarVolume& v, const vsr::Vec3& p) {
    const auto& d = v.dims();
    double g[3];
    for (int a = 0; a < 3; ++a) {
        g[a] = (p[a] - v.origin()[a]) / v.spacing()[a];
        if (g[a] < -1e-9 || g[a] > d[a] - 1 + 1e-9) return 0.0;
        g[a] = std::min(std::max(g[a], 0.0), d[a] - 1.0);
    }
    int base[3];
    double f[3];
    for (int a = 0; a < 3; ++a) {
        base[a] = std::min(static_cast<int>(std::floor(g[a])), d[a] - 2);
        f[a] = g[a] - base[a];
    }
    double sum = 0.0;
    for (int corner = 0; corner < 8; ++corner) {
        double w = 1.0;
        int idx[3];
        for (int a = 0; a < 3; ++a) {
            const int bit = (corner >> a) & 1;
            idx[a] = base[a] + bit;
            w *= bit ? f[a] : 1.0 - f[a];
        }
        sum += w * v.voxel(idx[0], idx[1], idx[2]);
    }
    return sum;
}

struct MarchOutcome {
    std::array<double, 3> color{};
    double alpha = 0.0;
    int samples = 0;
    double max_alpha = 0.0;
};

/// Direct front-to-back recurrence along the ray, with its own box clipping
/// and sample placement: t_k = t0 + k * step, last segment cut at t1.
inline MarchOutcome march(const vsr::ScalarVolume& v, const vsr::TransferFunction& tf, const vsr::Ray& ray,
                          const vsr::RayMarchConfig& cfg) {
    MarchOutcome out;
    const auto box = v.bounds();
    double t0 = 0.0;
    double t1 = 1e300;
    for (int a = 0; a < 3; ++a) {
        const double o = ray.origin[a];
        const double d = ray.direction[a];
        if (d == 0.0) {
            if (o < box.lo[a] || o > box.hi[a]) return out;
            continue;
        }
        const double lo = (box.lo[a] - o) / d;
        const double hi = (box.hi[a] - o) / d;
        t0 = std::max(t0, std::min(lo, hi));
        t1 = std::min(t1, std::max(lo, hi));
    }
    if (t0 > t1) return out;

    const double ref = v.spacing().minCoeff();
    for (int k = 0;; ++k) {
        const double t = t0 + k * cfg.step_world;
        const double seg = std::min(cfg.step_world, t1 - t);
        if (seg <= 0.0) break;
        const vsr::Vec3 p = ray.origin + t * ray.direction;
        const auto c = vsr::tf_lookup(tf, trilinear(v, p));
        ++out.samples;
        if (c[3] > 0.0) {
            const double a = c[3] >= 1.0 ? 1.0 : 1.0 - std::pow(1.0 - c[3], seg / ref);
            vsr::Rgb rgb(c[0], c[1], c[2]);
            if (cfg.lighting.enabled) {
                vsr::Vec3 grad;
                for (int ax = 0; ax < 3; ++ax) {
                    const double h = 0.5 * v.spacing()[ax];
                    vsr::Vec3 lo = p, hi = p;
                    lo[ax] -= h;
                    hi[ax] += h;
                    grad[ax] = (trilinear(v, hi) - trilinear(v, lo)) / (2.0 * h);
                }
                rgb = vsr::shade(grad, -ray.direction, rgb, cfg.lighting);
            }
            for (int ch = 0; ch < 3; ++ch) out.color[ch] += (1.0 - out.alpha) * a * rgb[ch];
            out.alpha += (1.0 - out.alpha) * a;
            out.max_alpha = std::max(out.max_alpha, a);
        }
        if (out.alpha >= cfg.early_term_alpha) break;
    }
    return out;
}

/// SSIM by direct 2D windowed sums at every valid window position.
inline double ssim(const vsr::ImageTensor& x, const vsr::ImageTensor& y, int win = 11, double sigma = 1.5,
                   double peak = 1.0) {
    std::vector<double> w(static_cast<std::size_t>(win) * win);
    double wsum = 0.0;
    const double c = 0.5 * (win - 1);
    for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
            const double r2 = (i - c) * (i - c) + (j - c) * (j - c);
            w[i * win + j] = std::exp(-r2 / (2.0 * sigma * sigma));
            wsum += w[i * win + j];
        }
    for (double& e : w) e /= wsum;

    const double c1 = (0.01 * peak) * (0.01 * peak);
    const double c2 = (0.03 * peak) * (0.03 * peak);
    double total = 0.0;
    for (int ch = 0; ch < x.channels(); ++ch) {
        double acc = 0.0;
        int count = 0;
        for (int oy = 0; oy + win <= x.height(); ++oy)
            for (int ox = 0; ox + win <= x.width(); ++ox) {
                double mx = 0, my = 0;
                for (int i = 0; i < win; ++i)
                    for (int j = 0; j < win; ++j) {
                        mx += w[i * win + j] * x.at(oy + i, ox + j, ch);
                        my += w[i * win + j] * y.at(oy + i, ox + j, ch);
                    }
                double vx = 0, vy = 0, cxy = 0;
                for (int i = 0; i < win; ++i)
                    for (int j = 0; j < win; ++j) {
                        const double dx = x.at(oy + i, ox + j, ch) - mx;
                        const double dy = y.at(oy + i, ox + j, ch) - my;
                        vx += w[i * win + j] * dx * dx;
                        vy += w[i * win + j] * dy * dy;
                        cxy += w[i * win + j] * dx * dy;
                    }
                acc += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
                ++count;
            }
        total += acc / count;
    }
    return total / x.channels();
}

inline double psnr(const vsr::ImageTensor& a, const vsr::ImageTensor& b, double peak = 1.0) {
    double sse = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = static_cast<double>(a.values()[i]) - b.values()[i];
        sse += d * d;
    }
    return 10.0 * std::log10(peak * peak * a.size() / sse);
}

inline vsr::ImageTensor random_image(std::mt19937& rng, int h, int w, int c) {
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    vsr::ImageTensor img(h, w, c);
    for (float& v : img.values()) v = u(rng);
    return img;
}

inline vsr::ScalarVolume random_volume(std::mt19937& rng, std::array<int, 3> dims,
                                       vsr::Vec3 spacing = vsr::Vec3::Ones()) {
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::vector<float> data(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]);
    for (float& v : data) v = u(rng);
    return vsr::ScalarVolume(dims, spacing, vsr::Vec3(-1.0, -2.0, 0.5), std::move(data));
}

} // namespace oracle
