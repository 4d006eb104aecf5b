#pragma once

#include "vsr/image.hpp"
#include "vsr/reprojection.hpp"

namespace vsr {

/// Places img[i, j] at out[s*i, s*j]; every other output element is zero.
ImageTensor zero_upsample(const ImageTensor& img, int factor);

/// Picks out[i, j] = img[s*i, s*j].
ImageTensor stride_subsample(const ImageTensor& img, int factor);

/// out[i, j] = bilinear sample of img at (j + du, i + dv). Invalid motion or
/// out-of-bounds positions produce zeros.
ImageTensor backward_warp(const ImageTensor& img, const MotionField& motion);

/// Nearest-neighbor upsample of the field with offsets multiplied by s.
MotionField scale_motion(const MotionField& motion, int factor);

/// Catmull-Rom (a = -0.5), edge-clamped, half-pixel-centered.
ImageTensor bicubic_upsample(const ImageTensor& img, int factor);

} // namespace vsr
