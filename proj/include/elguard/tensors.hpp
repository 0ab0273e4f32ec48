#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace elguard {

/// Axis-aligned pixel rectangle: origin (row, col) and extent (height, width).
struct Rect {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::uint32_t height = 0;
    std::uint32_t width = 0;

    std::uint64_t area() const noexcept { return std::uint64_t{height} * width; }
    bool fits_in(std::uint32_t image_height, std::uint32_t image_width) const noexcept {
        return height > 0 && width > 0 &&
               std::uint64_t{row} + height <= image_height &&
               std::uint64_t{col} + width <= image_width;
    }
    bool contains(std::uint32_t r, std::uint32_t c) const noexcept {
        return r >= row && r - row < height && c >= col && c - col < width;
    }
    friend bool operator==(const Rect&, const Rect&) = default;
};

/// S stochastic softmax score maps over K classes on an H x W grid, stored
/// sample-major, then class, then row, then column.
struct ScoreMapStack {
    std::uint32_t samples = 0;
    std::uint32_t classes = 0;
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    std::vector<float> data;

    ScoreMapStack() = default;
    ScoreMapStack(std::uint32_t s, std::uint32_t k, std::uint32_t h, std::uint32_t w);

    std::size_t pixels() const noexcept { return std::size_t{height} * width; }
    std::size_t index(std::uint32_t s, std::uint32_t k, std::uint32_t r, std::uint32_t c) const noexcept {
        return ((std::size_t{s} * classes + k) * height + r) * width + c;
    }
    float at(std::uint32_t s, std::uint32_t k, std::uint32_t r, std::uint32_t c) const noexcept {
        return data[index(s, k, r, c)];
    }
    float& at(std::uint32_t s, std::uint32_t k, std::uint32_t r, std::uint32_t c) noexcept {
        return data[index(s, k, r, c)];
    }
    /// Contiguous H x W plane of one (sample, class).
    std::span<const float> plane(std::uint32_t s, std::uint32_t k) const noexcept {
        return {data.data() + index(s, k, 0, 0), pixels()};
    }

    /// Throws Error unless dims, length, finiteness, range and sum-to-one hold.
    void validate() const;

    friend bool operator==(const ScoreMapStack&, const ScoreMapStack&) = default;
};

inline constexpr double kSoftmaxSumTolerance = 1e-5;

// ELSM container: "ELSM", u16 version=1, u8 dtype=0 (f32 LE), u8 flags=0,
// u32 S, K, H, W, then S*K*H*W little-endian f32 values.
inline constexpr std::size_t kElsmHeaderSize = 24;
inline constexpr std::uint16_t kElsmVersion = 1;

std::vector<std::uint8_t> encode_stack(const ScoreMapStack& stack);
ScoreMapStack decode_stack(std::span<const std::uint8_t> bytes);

/// Per-pixel byte map (labels, warning masks, boolean masks).
struct ByteMap {
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    std::vector<std::uint8_t> data;

    ByteMap() = default;
    ByteMap(std::uint32_t h, std::uint32_t w, std::uint8_t fill = 0)
        : height(h), width(w), data(std::size_t{h} * w, fill) {}

    std::uint8_t at(std::uint32_t r, std::uint32_t c) const noexcept { return data[std::size_t{r} * width + c]; }
    std::uint8_t& at(std::uint32_t r, std::uint32_t c) noexcept { return data[std::size_t{r} * width + c]; }
    std::size_t count_nonzero() const noexcept;

    friend bool operator==(const ByteMap&, const ByteMap&) = default;
};

using Rgb = std::array<std::uint8_t, 3>;

struct RgbImage {
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    std::vector<std::uint8_t> data;  // interleaved RGB, row-major

    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

enum class MaskKind { Labels, Warning };

/// Binary PGM (P5). Labels must be < classes; warning masks must be 0 or 255.
std::vector<std::uint8_t> write_mask(const ByteMap& mask, MaskKind kind, std::uint32_t classes = 256);
std::vector<std::uint8_t> write_ppm(const RgbImage& image);

ByteMap read_pgm(std::span<const std::uint8_t> bytes);
RgbImage read_ppm(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace elguard
