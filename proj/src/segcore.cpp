#include "elguard/segcore.hpp"

#include "elguard/error.hpp"

#include <string>

namespace elguard {

SegmentationMap argmax_segment(const ScoreMapStack& stack, std::uint32_t sample_index,
                               const BusyRoadComposite& composite) {
    ELGUARD_REQUIRE(sample_index < stack.samples, ErrorCode::SampleOutOfRange,
                    "sample " + std::to_string(sample_index) + " >= S=" + std::to_string(stack.samples));
    ELGUARD_REQUIRE(stack.classes <= 256, ErrorCode::InvalidArgument, "labels are stored as bytes (K <= 256)");

    SegmentationMap seg;
    seg.classes = stack.classes;
    seg.labels = ByteMap(stack.height, stack.width, 0);
    const std::size_t n = stack.pixels();
    std::vector<float> best(stack.plane(sample_index, 0).begin(), stack.plane(sample_index, 0).end());
    for (std::uint32_t k = 1; k < stack.classes; ++k) {
        const auto p = stack.plane(sample_index, k);
        for (std::size_t i = 0; i < n; ++i) {
            // Strict comparison keeps the lowest index on ties.
            if (p[i] > best[i]) {
                best[i] = p[i];
                seg.labels.data[i] = static_cast<std::uint8_t>(k);
            }
        }
    }
    seg.busy_road = busy_road_mask(seg.labels, composite);
    return seg;
}

ByteMap busy_road_mask(const ByteMap& labels, const BusyRoadComposite& composite) {
    ByteMap mask(labels.height, labels.width, 0);
    for (std::size_t i = 0; i < labels.data.size(); ++i) mask.data[i] = composite.contains(labels.data[i]) ? 1 : 0;
    return mask;
}

Palette default_palette() {
    return {
        {0, 0, 0},        // clutter
        {128, 0, 0},      // building
        {128, 64, 128},   // road
        {192, 0, 192},    // static car
        {64, 0, 128},     // moving car
        {0, 128, 0},      // tree
        {128, 128, 0},    // low vegetation
        {64, 64, 0},      // human
    };
}

RgbImage colorize(const SegmentationMap& seg, const Palette& palette) {
    ELGUARD_REQUIRE(palette.size() == seg.classes, ErrorCode::PaletteSizeMismatch,
                    "palette has " + std::to_string(palette.size()) + " entries, K=" + std::to_string(seg.classes));
    RgbImage img;
    img.height = seg.height();
    img.width = seg.width();
    img.data.resize(seg.labels.data.size() * 3);
    for (std::size_t i = 0; i < seg.labels.data.size(); ++i) {
        const std::uint8_t label = seg.labels.data[i];
        ELGUARD_REQUIRE(label < palette.size(), ErrorCode::ValueOutOfRange, "label outside palette");
        const Rgb& color = palette[label];
        img.data[3 * i] = color[0];
        img.data[3 * i + 1] = color[1];
        img.data[3 * i + 2] = color[2];
    }
    return img;
}

} // namespace elguard
