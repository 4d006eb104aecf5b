#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vsr/error.hpp"

namespace vsr {

/// Dense H x W x C raster of 32-bit floats, row-major with channels innermost.
class ImageTensor {
public:
    ImageTensor() = default;
    ImageTensor(int height, int width, int channels, float fill = 0.0f)
        : height_(height), width_(width), channels_(channels) {
        if (height < 0 || width < 0 || channels < 1)
            throw UsageError("ImageTensor: invalid shape");
        data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
    }
    ImageTensor(int height, int width, int channels, std::vector<float> data)
        : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
        if (height < 0 || width < 0 || channels < 1 ||
            data_.size() != static_cast<std::size_t>(height) * width * channels)
            throw UsageError("ImageTensor: data length does not match shape");
    }

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int channels() const noexcept { return channels_; }
    std::size_t size() const noexcept { return data_.size(); }

    bool same_shape(const ImageTensor& o) const noexcept {
        return height_ == o.height_ && width_ == o.width_ && channels_ == o.channels_;
    }
    bool same_raster(const ImageTensor& o) const noexcept {
        return height_ == o.height_ && width_ == o.width_;
    }

    std::size_t index(int y, int x, int c = 0) const noexcept {
        return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
    }
    float& at(int y, int x, int c = 0) noexcept { return data_[index(y, x, c)]; }
    float at(int y, int x, int c = 0) const noexcept { return data_[index(y, x, c)]; }

    float* pixel(int y, int x) noexcept { return data_.data() + index(y, x); }
    const float* pixel(int y, int x) const noexcept { return data_.data() + index(y, x); }

    std::span<float> values() noexcept { return data_; }
    std::span<const float> values() const noexcept { return data_; }

    bool operator==(const ImageTensor&) const = default;

private:
    int height_ = 0;
    int width_ = 0;
    int channels_ = 1;
    std::vector<float> data_;
};

/// True when every element is finite.
bool all_finite(const ImageTensor& img) noexcept;

/// Bilinear sample at continuous index-space position (x, y), where integer
/// coordinates are pixel centers. Writes `img.channels()` values to `out`.
/// Returns false (and writes nothing) when the position lies outside
/// [0, W-1] x [0, H-1].
bool sample_bilinear(const ImageTensor& img, double x, double y, float* out) noexcept;

} // namespace vsr
