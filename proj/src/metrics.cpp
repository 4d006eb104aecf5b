#include "vsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "vsr/error.hpp"

namespace vsr {

namespace {

std::vector<double> to_double(const ImageTensor& img) {
    return {img.values().begin(), img.values().end()};
}

void require_same(const ImageTensor& a, const ImageTensor& b, const char* op) {
    if (!a.same_shape(b)) throw UsageError(std::string(op) + ": shape mismatch");
}

} // namespace

double charbonnier_loss(std::span<const double> pred, std::span<const double> gt,
                        const CharbonnierParams& p) {
    if (pred.size() != gt.size()) throw UsageError("charbonnier_loss: shape mismatch");
    if (!(p.epsilon > 0.0)) throw UsageError("charbonnier_loss: epsilon must be positive");
    if (pred.empty()) throw UsageError("charbonnier_loss: empty input");
    const double eps2 = p.epsilon * p.epsilon;
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - gt[i];
        sum += std::sqrt(d * d + eps2);
    }
    return sum / static_cast<double>(pred.size());
}

double charbonnier_loss(const ImageTensor& pred, const ImageTensor& gt, const CharbonnierParams& p) {
    require_same(pred, gt, "charbonnier_loss");
    return charbonnier_loss(to_double(pred), to_double(gt), p);
}

double psnr(std::span<const double> pred, std::span<const double> gt, double peak) {
    if (pred.size() != gt.size()) throw UsageError("psnr: shape mismatch");
    if (!(peak > 0.0)) throw UsageError("psnr: peak must be positive");
    if (pred.empty()) throw UsageError("psnr: empty input");
    double sse = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - gt[i];
        sse += d * d;
    }
    const double mse = sse / static_cast<double>(pred.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

double psnr(const ImageTensor& pred, const ImageTensor& gt, double peak) {
    require_same(pred, gt, "psnr");
    return psnr(to_double(pred), to_double(gt), peak);
}

namespace {

std::vector<double> gaussian_kernel(int size, double sigma) {
    std::vector<double> k(size);
    const double c = 0.5 * (size - 1);
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        k[i] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Separable 'valid' filtering of an h x w plane.
std::vector<double> filter_valid(const std::vector<double>& plane, int h, int w,
                                 const std::vector<double>& k) {
    const int n = static_cast<int>(k.size());
    const int oh = h - n + 1;
    const int ow = w - n + 1;
    std::vector<double> rows(static_cast<std::size_t>(h) * ow);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += k[i] * plane[static_cast<std::size_t>(y) * w + x + i];
            rows[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    std::vector<double> out(static_cast<std::size_t>(oh) * ow);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += k[i] * rows[static_cast<std::size_t>(y + i) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = acc;
        }
    return out;
}

} // namespace

double ssim(const ImageTensor& pred, const ImageTensor& gt, const SsimParams& p) {
    require_same(pred, gt, "ssim");
    if (p.window < 1 || p.window % 2 == 0) throw UsageError("ssim: window must be odd");
    if (pred.height() < p.window || pred.width() < p.window)
        throw UsageError("ssim: image smaller than the window");

    const int h = pred.height();
    const int w = pred.width();
    const auto k = gaussian_kernel(p.window, p.sigma);
    const double c1 = (p.k1 * p.peak) * (p.k1 * p.peak);
    const double c2 = (p.k2 * p.peak) * (p.k2 * p.peak);
    const std::size_t plane_size = static_cast<std::size_t>(h) * w;

    double total = 0.0;
    for (int ch = 0; ch < pred.channels(); ++ch) {
        std::vector<double> x(plane_size), y(plane_size), xx(plane_size), yy(plane_size), xy(plane_size);
        for (std::size_t i = 0; i < plane_size; ++i) {
            x[i] = pred.values()[i * pred.channels() + ch];
            y[i] = gt.values()[i * gt.channels() + ch];
            xx[i] = x[i] * x[i];
            yy[i] = y[i] * y[i];
            xy[i] = x[i] * y[i];
        }
        const auto mx = filter_valid(x, h, w, k);
        const auto my = filter_valid(y, h, w, k);
        const auto exx = filter_valid(xx, h, w, k);
        const auto eyy = filter_valid(yy, h, w, k);
        const auto exy = filter_valid(xy, h, w, k);

        double sum = 0.0;
        for (std::size_t i = 0; i < mx.size(); ++i) {
            const double vx = exx[i] - mx[i] * mx[i];
            const double vy = eyy[i] - my[i] * my[i];
            const double cxy = exy[i] - mx[i] * my[i];
            sum += ((2.0 * mx[i] * my[i] + c1) * (2.0 * cxy + c2)) /
                   ((mx[i] * mx[i] + my[i] * my[i] + c1) * (vx + vy + c2));
        }
        total += sum / static_cast<double>(mx.size());
    }
    return total / pred.channels();
}

ImageTensor clamp01(const ImageTensor& img) {
    ImageTensor out = img;
    for (float& v : out.values()) v = std::clamp(v, 0.0f, 1.0f);
    return out;
}

} // namespace vsr
