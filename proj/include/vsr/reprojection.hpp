#pragma once

#include "vsr/camera.hpp"
#include "vsr/image.hpp"
#include "vsr/renderer.hpp"

namespace vsr {

/// Screen-space offset (du, dv) in pixels from a pixel's current location to
/// its location in the previous frame.
struct MotionField {
    ImageTensor motion;    // H x W x 2
    ImageTensor validity;  // H x W x 1, 0 or 1

    MotionField() = default;
    MotionField(int height, int width) : motion(height, width, 2), validity(height, width, 1) {}

    int width() const noexcept { return motion.width(); }
    int height() const noexcept { return motion.height(); }
    bool operator==(const MotionField&) const = default;
};

struct HistoryBuffer {
    ImageTensor color;  // H x W x 3
    bool valid = false;
};

/// Reprojects each covered pixel's max-alpha world position into the previous
/// camera. The motion is the difference between the point's unjittered
/// projections in the previous and current cameras, so identical cameras give
/// an exactly zero field.
MotionField compute_motion(const FramePacket& packet, const CameraState& cam_prev,
                           const CameraState& cam_curr);
MotionField compute_motion_serial(const FramePacket& packet, const CameraState& cam_prev,
                                  const CameraState& cam_curr);

/// Zero motion, validity = coverage. Used for the first frame of a sequence.
MotionField zero_motion(const FramePacket& packet);

/// Clamps `history` per channel to the min/max of the 3x3 neighborhood of
/// `pixel` in `current`, truncated at the image borders.
Rgb neighborhood_clamp(const ImageTensor& current, const Rgb& history, Pixel pixel);

struct TaaResult {
    ImageTensor color;
    HistoryBuffer history;
};

inline constexpr double kDefaultTaaBlend = 0.1;

/// One temporal accumulation step:
/// out = blend * current + (1 - blend) * clamp(history sampled along motion).
/// Pixels with no valid history or motion take the current color.
TaaResult taa_pass(const FramePacket& curr, const HistoryBuffer& hist, const MotionField& motion,
                   double blend = kDefaultTaaBlend);
TaaResult taa_pass_serial(const FramePacket& curr, const HistoryBuffer& hist,
                          const MotionField& motion, double blend = kDefaultTaaBlend);

/// Radical inverse of `index` in `base`.
double halton(int index, int base) noexcept;

/// Halton(2,3) sub-pixel jitter, cycling over 8 frames, in [-0.5, 0.5)^2.
Vec2 taa_jitter(int frame) noexcept;

} // namespace vsr
