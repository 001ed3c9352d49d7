#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace topogait {

/// Binary raster frame. Row 0 is the top row of the source image;
/// bits are row-major, nonzero = foreground.
struct BitGrid {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BitGrid() = default;
    BitGrid(int w, int h);

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    std::size_t foreground_count() const;
};

/// Inclusive pixel bounding box; valid() is false for an empty frame.
struct BoundingBox {
    int min_x = 0, min_y = 0, max_x = -1, max_y = -1;
    bool valid() const { return max_x >= min_x && max_y >= min_y; }
    int width() const { return max_x - min_x + 1; }
    int height() const { return max_y - min_y + 1; }
};

BoundingBox foreground_box(const BitGrid& frame);

/// Reads a P1/P2/P4/P5 portable bitmap/graymap; any sample value > 0 is foreground.
BitGrid load_frame(const std::filesystem::path& path);

/// Loads every .pbm/.pgm/.pnm in a directory, in lexicographic filename order.
std::vector<BitGrid> load_frame_dir(const std::filesystem::path& dir);

/// Writes a binary P5 graymap, foreground = 255.
void save_pgm(const BitGrid& frame, const std::filesystem::path& path);

/// Keeps the bottom ceil(fraction * box_height) rows of the foreground
/// bounding box and returns the tight bounding box of what remains.
BitGrid crop_legs(const BitGrid& frame, double fraction = 0.25);

enum class HorizontalAlign { Left, Center };

struct StackOptions {
    bool legs = false;          // crop each frame to its lowest fraction first
    double fraction = 0.25;
    HorizontalAlign align = HorizontalAlign::Left;
};

/// Stacked, normalized 3D binary image. Voxels are integer grid points
/// (x, y, z) with y pointing up and z the frame index; multiplying by the
/// scales maps the stack into the unit cube (height and depth exactly 1).
struct BinaryImage3D {
    std::unordered_set<std::uint64_t> voxels;
    int frame_count = 0;
    double scale_x = 1.0;
    double scale_y = 1.0;
    double scale_z = 1.0;

    static std::uint64_t pack(int x, int y, int z);
    static std::array<int, 3> unpack(std::uint64_t key);

    bool contains(int x, int y, int z) const { return voxels.count(pack(x, y, z)) != 0; }
    std::size_t size() const { return voxels.size(); }

    /// Voxels in lexicographic (x, y, z) order, for deterministic iteration.
    std::vector<std::array<int, 3>> sorted_voxels() const;
};

/// Stacks >= 2 frames into a BinaryImage3D. Each frame's (optionally
/// cropped) foreground box is placed with its bottom-left at the origin,
/// so a common translation of the input pixels cancels out.
BinaryImage3D stack_frames(const std::vector<BitGrid>& frames, const StackOptions& options = {});

}  // namespace topogait
