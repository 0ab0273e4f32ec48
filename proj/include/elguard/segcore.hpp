#pragma once

#include "elguard/taxonomy.hpp"
#include "elguard/tensors.hpp"

#include <cstdint>
#include <vector>

namespace elguard {

/// Point-estimate segmentation of one inference sample.
struct SegmentationMap {
    std::uint32_t classes = 0;
    ByteMap labels;
    ByteMap busy_road;  // 1 where labels is in the composite

    std::uint32_t height() const noexcept { return labels.height; }
    std::uint32_t width() const noexcept { return labels.width; }
};

/// Per-pixel argmax of sample `sample_index`; ties go to the lowest class
/// index. Throws SampleOutOfRange.
SegmentationMap argmax_segment(const ScoreMapStack& stack, std::uint32_t sample_index = 0,
                               const BusyRoadComposite& composite = {});

/// Rebuilds busy_road from labels for a given composite.
ByteMap busy_road_mask(const ByteMap& labels, const BusyRoadComposite& composite);

using Palette = std::vector<Rgb>;

/// Indexed by class: clutter, building, road, static car, moving car, tree,
/// low vegetation, human.
Palette default_palette();

/// Throws PaletteSizeMismatch unless palette.size() == seg.classes.
RgbImage colorize(const SegmentationMap& seg, const Palette& palette);

} // namespace elguard
