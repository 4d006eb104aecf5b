#include "vsr/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace vsr {

static_assert(std::endian::native == std::endian::little, "VSRT I/O assumes a little-endian host");

bool all_finite(const ImageTensor& img) noexcept {
    for (float v : img.values())
        if (!std::isfinite(v)) return false;
    return true;
}

bool sample_bilinear(const ImageTensor& img, double x, double y, float* out) noexcept {
    const int w = img.width();
    const int h = img.height();
    if (!(x >= 0.0 && y >= 0.0 && x <= w - 1 && y <= h - 1)) return false;
    const int x0 = static_cast<int>(x);
    const int y0 = static_cast<int>(y);
    const int x1 = std::min(x0 + 1, w - 1);
    const int y1 = std::min(y0 + 1, h - 1);
    const double fx = x - x0;
    const double fy = y - y0;
    const float* p00 = img.pixel(y0, x0);
    const float* p01 = img.pixel(y0, x1);
    const float* p10 = img.pixel(y1, x0);
    const float* p11 = img.pixel(y1, x1);
    for (int c = 0; c < img.channels(); ++c) {
        const double top = p00[c] * (1.0 - fx) + p01[c] * fx;
        const double bottom = p10[c] * (1.0 - fx) + p11[c] * fx;
        out[c] = static_cast<float>(top * (1.0 - fy) + bottom * fy);
    }
    return true;
}

void write_tensor(std::ostream& os, const RawTensor& t) {
    if (t.dims.size() > 255) throw UsageError("write_tensor: too many dimensions");
    std::size_t count = 1;
    for (auto d : t.dims) count *= d;
    if (count != t.data.size()) throw UsageError("write_tensor: dims do not match payload");

    os.write("VSRT", 4);
    const std::uint8_t head[3] = {kTensorVersion, kDtypeF32, static_cast<std::uint8_t>(t.dims.size())};
    os.write(reinterpret_cast<const char*>(head), 3);
    os.write(reinterpret_cast<const char*>(t.dims.data()),
             static_cast<std::streamsize>(t.dims.size() * sizeof(std::uint32_t)));
    os.write(reinterpret_cast<const char*>(t.data.data()),
             static_cast<std::streamsize>(t.data.size() * sizeof(float)));
    if (!os) throw IoError("write_tensor: stream write failed");
}

RawTensor read_tensor(std::istream& is) {
    char magic[4];
    std::uint8_t head[3];
    if (!is.read(magic, 4) || std::memcmp(magic, "VSRT", 4) != 0)
        throw FormatError("tensor: bad magic");
    if (!is.read(reinterpret_cast<char*>(head), 3)) throw FormatError("tensor: truncated header");
    if (head[0] != kTensorVersion) throw FormatError("tensor: unsupported version");
    if (head[1] != kDtypeF32) throw FormatError("tensor: unsupported dtype");

    RawTensor t;
    t.dims.resize(head[2]);
    if (!is.read(reinterpret_cast<char*>(t.dims.data()),
                 static_cast<std::streamsize>(t.dims.size() * sizeof(std::uint32_t))))
        throw FormatError("tensor: truncated dims");
    std::size_t count = 1;
    for (auto d : t.dims) count *= d;
    t.data.resize(count);
    if (!is.read(reinterpret_cast<char*>(t.data.data()),
                 static_cast<std::streamsize>(count * sizeof(float))))
        throw FormatError("tensor: payload shorter than dims");
    if (is.peek() != std::char_traits<char>::eof()) throw FormatError("tensor: trailing bytes");
    return t;
}

void write_image(const std::filesystem::path& path, const ImageTensor& img) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    RawTensor t;
    t.dims = {static_cast<std::uint32_t>(img.height()), static_cast<std::uint32_t>(img.width()),
              static_cast<std::uint32_t>(img.channels())};
    t.data.assign(img.values().begin(), img.values().end());
    write_tensor(os, t);
    os.close();
    if (!os) throw IoError("write failed: " + path.string());
}

ImageTensor read_image(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open: " + path.string());
    RawTensor t = read_tensor(is);
    if (t.dims.size() != 3) throw FormatError("image tensor must have 3 dims: " + path.string());
    ImageTensor img(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]),
                    static_cast<int>(t.dims[2]), std::move(t.data));
    if (!all_finite(img)) throw DataError("non-finite values in " + path.string());
    return img;
}

} // namespace vsr
