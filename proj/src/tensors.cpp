#include "elguard/tensors.hpp"

#include "elguard/error.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

namespace elguard {

namespace {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint16_t get_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
           (std::uint32_t{p[3]} << 24);
}

std::uint64_t element_count(std::uint32_t s, std::uint32_t k, std::uint32_t h, std::uint32_t w) {
    constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
    std::uint64_t n = 1;
    for (std::uint64_t f : {std::uint64_t{s}, std::uint64_t{k}, std::uint64_t{h}, std::uint64_t{w}}) {
        ELGUARD_REQUIRE(f == 0 || n <= kLimit / f, ErrorCode::SizeMismatch, "declared dimensions overflow");
        n *= f;
    }
    return n;
}

// Minimal netpbm header reader: magic, then three whitespace-separated
// integers (comments allowed), then exactly one whitespace byte.
struct PnmHeader {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::size_t payload_offset = 0;
};

PnmHeader parse_pnm_header(std::span<const std::uint8_t> bytes, char kind) {
    ELGUARD_REQUIRE(bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == static_cast<std::uint8_t>(kind),
                    ErrorCode::BadMagic, std::string("expected P") + kind);
    std::size_t pos = 2;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(bytes[pos])) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&]() -> std::uint32_t {
        skip_space();
        ELGUARD_REQUIRE(pos < bytes.size() && std::isdigit(bytes[pos]), ErrorCode::SizeMismatch,
                        "truncated netpbm header");
        std::uint64_t v = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            ELGUARD_REQUIRE(v <= std::numeric_limits<std::uint32_t>::max(), ErrorCode::SizeMismatch,
                            "netpbm dimension too large");
            ++pos;
        }
        return static_cast<std::uint32_t>(v);
    };
    PnmHeader h;
    h.width = read_int();
    h.height = read_int();
    const std::uint32_t maxval = read_int();
    ELGUARD_REQUIRE(maxval == 255, ErrorCode::UnsupportedDtype, "only maxval 255 is supported");
    ELGUARD_REQUIRE(pos < bytes.size() && std::isspace(bytes[pos]), ErrorCode::SizeMismatch,
                    "missing separator after netpbm header");
    h.payload_offset = pos + 1;
    return h;
}

std::string pnm_header(char kind, std::uint32_t width, std::uint32_t height) {
    return std::string("P") + kind + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
}

} // namespace

ScoreMapStack::ScoreMapStack(std::uint32_t s, std::uint32_t k, std::uint32_t h, std::uint32_t w)
    : samples(s), classes(k), height(h), width(w), data(element_count(s, k, h, w), 0.0f) {}

void ScoreMapStack::validate() const {
    ELGUARD_REQUIRE(samples >= 1, ErrorCode::InvalidArgument, "stack needs at least one sample");
    ELGUARD_REQUIRE(classes >= 2, ErrorCode::InvalidArgument, "stack needs at least two classes");
    ELGUARD_REQUIRE(height >= 1 && width >= 1, ErrorCode::InvalidArgument, "stack has an empty grid");
    ELGUARD_REQUIRE(data.size() == element_count(samples, classes, height, width), ErrorCode::SizeMismatch,
                    "data length does not equal S*K*H*W");
    for (float v : data) {
        ELGUARD_REQUIRE(std::isfinite(v), ErrorCode::NonFiniteScore, "score is NaN or infinite");
        ELGUARD_REQUIRE(v >= 0.0f && v <= 1.0f, ErrorCode::ScoreOutOfRange, "score outside [0,1]");
    }
    const std::size_t n = pixels();
    std::vector<double> sums(n);
    for (std::uint32_t s = 0; s < samples; ++s) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::uint32_t k = 0; k < classes; ++k) {
            const auto p = plane(s, k);
            for (std::size_t i = 0; i < n; ++i) sums[i] += p[i];
        }
        for (double sum : sums) {
            ELGUARD_REQUIRE(std::abs(sum - 1.0) <= kSoftmaxSumTolerance, ErrorCode::ScoreOutOfRange,
                            "class scores of a pixel do not sum to 1");
        }
    }
}

std::vector<std::uint8_t> encode_stack(const ScoreMapStack& stack) {
    stack.validate();
    std::vector<std::uint8_t> out;
    out.reserve(kElsmHeaderSize + stack.data.size() * 4);
    for (char ch : {'E', 'L', 'S', 'M'}) out.push_back(static_cast<std::uint8_t>(ch));
    put_u16(out, kElsmVersion);
    out.push_back(0);  // dtype f32
    out.push_back(0);  // flags
    put_u32(out, stack.samples);
    put_u32(out, stack.classes);
    put_u32(out, stack.height);
    put_u32(out, stack.width);
    for (float v : stack.data) put_u32(out, std::bit_cast<std::uint32_t>(v));
    return out;
}

ScoreMapStack decode_stack(std::span<const std::uint8_t> bytes) {
    ELGUARD_REQUIRE(bytes.size() >= 4 && std::memcmp(bytes.data(), "ELSM", 4) == 0, ErrorCode::BadMagic,
                    "missing ELSM magic");
    ELGUARD_REQUIRE(bytes.size() >= kElsmHeaderSize, ErrorCode::SizeMismatch, "truncated ELSM header");
    const std::uint8_t* p = bytes.data();
    const std::uint16_t version = get_u16(p + 4);
    ELGUARD_REQUIRE(version == kElsmVersion, ErrorCode::UnsupportedVersion,
                    "ELSM version " + std::to_string(version));
    ELGUARD_REQUIRE(p[6] == 0, ErrorCode::UnsupportedDtype, "ELSM dtype " + std::to_string(p[6]));
    ELGUARD_REQUIRE(p[7] == 0, ErrorCode::UnsupportedVersion, "ELSM flags must be zero");

    const std::uint32_t s = get_u32(p + 8);
    const std::uint32_t k = get_u32(p + 12);
    const std::uint32_t h = get_u32(p + 16);
    const std::uint32_t w = get_u32(p + 20);
    const std::uint64_t n = element_count(s, k, h, w);
    ELGUARD_REQUIRE(bytes.size() - kElsmHeaderSize == n * 4, ErrorCode::SizeMismatch,
                    "header declares " + std::to_string(n) + " floats, payload holds " +
                        std::to_string((bytes.size() - kElsmHeaderSize) / 4.0));

    ScoreMapStack stack;
    stack.samples = s;
    stack.classes = k;
    stack.height = h;
    stack.width = w;
    stack.data.resize(n);
    const std::uint8_t* payload = p + kElsmHeaderSize;
    for (std::uint64_t i = 0; i < n; ++i) stack.data[i] = std::bit_cast<float>(get_u32(payload + 4 * i));
    stack.validate();
    return stack;
}

std::size_t ByteMap::count_nonzero() const noexcept {
    return static_cast<std::size_t>(std::count_if(data.begin(), data.end(), [](std::uint8_t v) { return v != 0; }));
}

std::vector<std::uint8_t> write_mask(const ByteMap& mask, MaskKind kind, std::uint32_t classes) {
    ELGUARD_REQUIRE(mask.data.size() == std::size_t{mask.height} * mask.width, ErrorCode::SizeMismatch,
                    "mask length does not equal H*W");
    for (std::uint8_t v : mask.data) {
        if (kind == MaskKind::Labels) {
            ELGUARD_REQUIRE(v < classes, ErrorCode::ValueOutOfRange,
                            "label " + std::to_string(v) + " >= K=" + std::to_string(classes));
        } else {
            ELGUARD_REQUIRE(v == 0 || v == 255, ErrorCode::ValueOutOfRange, "warning mask values must be 0 or 255");
        }
    }
    const std::string header = pnm_header('5', mask.width, mask.height);
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), mask.data.begin(), mask.data.end());
    return out;
}

std::vector<std::uint8_t> write_ppm(const RgbImage& image) {
    ELGUARD_REQUIRE(image.data.size() == std::size_t{image.height} * image.width * 3, ErrorCode::SizeMismatch,
                    "RGB buffer length does not equal 3*H*W");
    const std::string header = pnm_header('6', image.width, image.height);
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.data.begin(), image.data.end());
    return out;
}

ByteMap read_pgm(std::span<const std::uint8_t> bytes) {
    const PnmHeader h = parse_pnm_header(bytes, '5');
    const std::size_t n = std::size_t{h.width} * h.height;
    ELGUARD_REQUIRE(bytes.size() - h.payload_offset == n, ErrorCode::SizeMismatch, "PGM payload length mismatch");
    ByteMap map;
    map.height = h.height;
    map.width = h.width;
    map.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(h.payload_offset), bytes.end());
    return map;
}

RgbImage read_ppm(std::span<const std::uint8_t> bytes) {
    const PnmHeader h = parse_pnm_header(bytes, '6');
    const std::size_t n = std::size_t{h.width} * h.height * 3;
    ELGUARD_REQUIRE(bytes.size() - h.payload_offset == n, ErrorCode::SizeMismatch, "PPM payload length mismatch");
    RgbImage img;
    img.height = h.height;
    img.width = h.width;
    img.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(h.payload_offset), bytes.end());
    return img;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    ELGUARD_REQUIRE(in, ErrorCode::IoError, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    ELGUARD_REQUIRE(out, ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    ELGUARD_REQUIRE(out.good(), ErrorCode::IoError, "write failed for " + path.string());
}

} // namespace elguard
