#include "vsr/sr_ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "vsr/error.hpp"

namespace vsr {

namespace {

void require_factor(int factor, const char* op) {
    if (factor < 1) throw UsageError(std::string(op) + ": factor must be >= 1");
}

} // namespace

ImageTensor zero_upsample(const ImageTensor& img, int factor) {
    require_factor(factor, "zero_upsample");
    ImageTensor out(img.height() * factor, img.width() * factor, img.channels());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            std::copy_n(img.pixel(y, x), img.channels(), out.pixel(y * factor, x * factor));
    return out;
}

ImageTensor stride_subsample(const ImageTensor& img, int factor) {
    require_factor(factor, "stride_subsample");
    const int h = (img.height() + factor - 1) / factor;
    const int w = (img.width() + factor - 1) / factor;
    ImageTensor out(h, w, img.channels());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            std::copy_n(img.pixel(y * factor, x * factor), img.channels(), out.pixel(y, x));
    return out;
}

ImageTensor backward_warp(const ImageTensor& img, const MotionField& motion) {
    if (!motion.motion.same_raster(img)) throw UsageError("backward_warp: image and motion sizes differ");
    ImageTensor out(img.height(), img.width(), img.channels());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            if (motion.validity.at(y, x) == 0.0f) continue;
            sample_bilinear(img, x + static_cast<double>(motion.motion.at(y, x, 0)),
                            y + static_cast<double>(motion.motion.at(y, x, 1)), out.pixel(y, x));
        }
    return out;
}

MotionField scale_motion(const MotionField& motion, int factor) {
    require_factor(factor, "scale_motion");
    const int h = motion.height() * factor;
    const int w = motion.width() * factor;
    MotionField out(h, w);
    const float s = static_cast<float>(factor);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int sy = y / factor;
            const int sx = x / factor;
            out.motion.at(y, x, 0) = s * motion.motion.at(sy, sx, 0);
            out.motion.at(y, x, 1) = s * motion.motion.at(sy, sx, 1);
            out.validity.at(y, x) = motion.validity.at(sy, sx);
        }
    return out;
}

namespace {

double catmull_rom(double x) {
    constexpr double a = -0.5;
    x = std::abs(x);
    if (x <= 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
    if (x < 2.0) return ((a * x - 5.0 * a) * x + 8.0 * a) * x - 4.0 * a;
    return 0.0;
}

struct Taps {
    std::array<int, 4> index;
    std::array<double, 4> weight;
};

std::vector<Taps> resample_taps(int src_len, int factor) {
    std::vector<Taps> taps(static_cast<std::size_t>(src_len) * factor);
    for (int d = 0; d < src_len * factor; ++d) {
        const double src = (d + 0.5) / factor - 0.5;
        const int base = static_cast<int>(std::floor(src));
        const double t = src - base;
        for (int k = 0; k < 4; ++k) {
            taps[d].index[k] = std::clamp(base - 1 + k, 0, src_len - 1);
            taps[d].weight[k] = catmull_rom(t - (k - 1));
        }
    }
    return taps;
}

} // namespace

ImageTensor bicubic_upsample(const ImageTensor& img, int factor) {
    require_factor(factor, "bicubic_upsample");
    const int h = img.height();
    const int w = img.width();
    const int c = img.channels();
    const int oh = h * factor;
    const int ow = w * factor;
    const auto xt = resample_taps(w, factor);
    const auto yt = resample_taps(h, factor);

    // Horizontal pass into an h x ow x c double buffer, then vertical.
    std::vector<double> tmp(static_cast<std::size_t>(h) * ow * c, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x)
            for (int k = 0; k < 4; ++k) {
                const float* src = img.pixel(y, xt[x].index[k]);
                double* dst = &tmp[(static_cast<std::size_t>(y) * ow + x) * c];
                for (int ch = 0; ch < c; ++ch) dst[ch] += xt[x].weight[k] * src[ch];
            }

    ImageTensor out(oh, ow, c);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            float* dst = out.pixel(y, x);
            for (int ch = 0; ch < c; ++ch) {
                double acc = 0.0;
                for (int k = 0; k < 4; ++k)
                    acc += yt[y].weight[k] * tmp[(static_cast<std::size_t>(yt[y].index[k]) * ow + x) * c + ch];
                dst[ch] = static_cast<float>(acc);
            }
        }
    return out;
}

} // namespace vsr
