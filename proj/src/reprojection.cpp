#include "vsr/reprojection.hpp"

#include <algorithm>
#include <limits>

#include "vsr/error.hpp"

namespace vsr {

namespace {

MotionField motion_impl(const FramePacket& packet, const CameraState& cam_prev,
                        const CameraState& cam_curr, bool parallel) {
    const int w = packet.width();
    const int h = packet.height();
    if (cam_curr.width != w || cam_curr.height != h || cam_prev.width != w || cam_prev.height != h)
        throw UsageError("compute_motion: camera resolution does not match the frame");

    MotionField field(h, w);
    const Mat4 vp_prev = cam_prev.view_proj();
    const Mat4 vp_curr = cam_curr.view_proj();

#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (packet.coverage.at(y, x) == 0.0f) continue;
            const float* wp = packet.max_alpha_worldpos.pixel(y, x);
            const Vec3 p(wp[0], wp[1], wp[2]);
            const auto prev = project_to_pixel(vp_prev, w, h, p);
            const auto curr = project_to_pixel(vp_curr, w, h, p);
            if (!prev || !curr) continue;
            if (!(prev->x() >= 0.0 && prev->x() < w && prev->y() >= 0.0 && prev->y() < h)) continue;
            const Vec2 d = *prev - *curr;
            field.motion.at(y, x, 0) = static_cast<float>(d.x());
            field.motion.at(y, x, 1) = static_cast<float>(d.y());
            field.validity.at(y, x) = 1.0f;
        }
    }
    return field;
}

TaaResult taa_impl(const FramePacket& curr, const HistoryBuffer& hist, const MotionField& motion,
                   double blend, bool parallel) {
    if (!(blend > 0.0 && blend <= 1.0)) throw UsageError("taa_pass: blend must lie in (0, 1]");
    const ImageTensor& cur = curr.color;
    if (!motion.motion.same_raster(cur) || (hist.valid && !hist.color.same_shape(cur)))
        throw UsageError("taa_pass: rasters must share resolution");

    const int w = cur.width();
    const int h = cur.height();
    ImageTensor out = cur;
    if (hist.valid) {
#pragma omp parallel for schedule(static) if (parallel)
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (motion.validity.at(y, x) == 0.0f) continue;
                float tap[3];
                if (!sample_bilinear(hist.color, x + motion.motion.at(y, x, 0),
                                     y + motion.motion.at(y, x, 1), tap))
                    continue;
                const Rgb clamped = neighborhood_clamp(cur, Rgb(tap[0], tap[1], tap[2]), {x, y});
                const float* c = cur.pixel(y, x);
                float* o = out.pixel(y, x);
                for (int ch = 0; ch < 3; ++ch)
                    o[ch] = static_cast<float>(blend * c[ch] + (1.0 - blend) * clamped[ch]);
            }
        }
    }
    return {out, HistoryBuffer{out, true}};
}

} // namespace

MotionField compute_motion(const FramePacket& packet, const CameraState& cam_prev,
                           const CameraState& cam_curr) {
    return motion_impl(packet, cam_prev, cam_curr, true);
}

MotionField compute_motion_serial(const FramePacket& packet, const CameraState& cam_prev,
                                  const CameraState& cam_curr) {
    return motion_impl(packet, cam_prev, cam_curr, false);
}

MotionField zero_motion(const FramePacket& packet) {
    MotionField field(packet.height(), packet.width());
    field.validity = packet.coverage;
    return field;
}

Rgb neighborhood_clamp(const ImageTensor& current, const Rgb& history, Pixel pixel) {
    const int w = current.width();
    const int h = current.height();
    if (pixel.x < 0 || pixel.y < 0 || pixel.x >= w || pixel.y >= h || current.channels() < 3)
        throw UsageError("neighborhood_clamp: pixel outside the image");

    Rgb lo = Rgb::Constant(std::numeric_limits<double>::infinity());
    Rgb hi = -lo;
    for (int y = std::max(0, pixel.y - 1); y <= std::min(h - 1, pixel.y + 1); ++y)
        for (int x = std::max(0, pixel.x - 1); x <= std::min(w - 1, pixel.x + 1); ++x) {
            const float* c = current.pixel(y, x);
            for (int ch = 0; ch < 3; ++ch) {
                lo[ch] = std::min(lo[ch], static_cast<double>(c[ch]));
                hi[ch] = std::max(hi[ch], static_cast<double>(c[ch]));
            }
        }
    return history.cwiseMax(lo).cwiseMin(hi);
}

TaaResult taa_pass(const FramePacket& curr, const HistoryBuffer& hist, const MotionField& motion,
                   double blend) {
    return taa_impl(curr, hist, motion, blend, true);
}

TaaResult taa_pass_serial(const FramePacket& curr, const HistoryBuffer& hist,
                          const MotionField& motion, double blend) {
    return taa_impl(curr, hist, motion, blend, false);
}

double halton(int index, int base) noexcept {
    double result = 0.0;
    double f = 1.0;
    for (int i = index; i > 0; i /= base) {
        f /= base;
        result += f * (i % base);
    }
    return result;
}

Vec2 taa_jitter(int frame) noexcept {
    const int i = frame % 8 + 1;
    return {halton(i, 2) - 0.5, halton(i, 3) - 0.5};
}

} // namespace vsr
