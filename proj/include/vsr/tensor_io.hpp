#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "vsr/image.hpp"

namespace vsr {

// On-disk layout: "VSRT" | version u8 | dtype u8 (0 = f32) | ndim u8 |
// ndim x u32 LE dims | row-major f32 LE payload.
inline constexpr std::uint8_t kTensorVersion = 1;
inline constexpr std::uint8_t kDtypeF32 = 0;

struct RawTensor {
    std::vector<std::uint32_t> dims;
    std::vector<float> data;
};

void write_tensor(std::ostream& os, const RawTensor& t);
RawTensor read_tensor(std::istream& is);

/// Images are stored with ndim = 3 as (H, W, C).
void write_image(const std::filesystem::path& path, const ImageTensor& img);
ImageTensor read_image(const std::filesystem::path& path);

} // namespace vsr
