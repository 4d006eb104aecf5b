#pragma once

#include <span>

#include "vsr/image.hpp"

namespace vsr {

struct CharbonnierParams {
    double epsilon = 1e-8;
};

/// Mean over all elements of sqrt((y - z)^2 + eps^2).
double charbonnier_loss(std::span<const double> pred, std::span<const double> gt,
                        const CharbonnierParams& p = {});
double charbonnier_loss(const ImageTensor& pred, const ImageTensor& gt,
                        const CharbonnierParams& p = {});

/// 10 log10(peak^2 / MSE); +inf for identical inputs.
double psnr(std::span<const double> pred, std::span<const double> gt, double peak = 1.0);
double psnr(const ImageTensor& pred, const ImageTensor& gt, double peak = 1.0);

struct SsimParams {
    int window = 11;
    double sigma = 1.5;
    double peak = 1.0;
    double k1 = 0.01;
    double k2 = 0.03;
};

/// Mean SSIM over every position where the Gaussian window fits entirely
/// in the image, averaged over channels.
double ssim(const ImageTensor& pred, const ImageTensor& gt, const SsimParams& p = {});

/// Copy with every element clamped to [0,1].
ImageTensor clamp01(const ImageTensor& img);

} // namespace vsr
