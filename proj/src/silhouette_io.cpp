#include "topogait/silhouette_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace topogait {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& cause) {
    throw std::runtime_error(path.string() + ": " + cause);
}

// Header tokens may be separated by whitespace and '#' comment lines.
int next_header_int(std::istream& in, const std::filesystem::path& path) {
    for (;;) {
        int c = in.peek();
        if (c == EOF) fail(path, "truncated header");
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        break;
    }
    int value = 0;
    if (!(in >> value)) fail(path, "malformed header");
    return value;
}

}  // namespace

BitGrid::BitGrid(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) throw std::invalid_argument("BitGrid dimensions must be positive");
    bits.assign(static_cast<std::size_t>(w) * h, 0);
}

std::size_t BitGrid::foreground_count() const {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(),
                                                  [](std::uint8_t b) { return b != 0; }));
}

BoundingBox foreground_box(const BitGrid& frame) {
    BoundingBox box;
    box.min_x = frame.width;
    box.min_y = frame.height;
    box.max_x = -1;
    box.max_y = -1;
    for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
            if (!frame.at(x, y)) continue;
            box.min_x = std::min(box.min_x, x);
            box.min_y = std::min(box.min_y, y);
            box.max_x = std::max(box.max_x, x);
            box.max_y = std::max(box.max_y, y);
        }
    }
    return box;
}

BitGrid load_frame(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");

    char p = 0, digit = 0;
    in.get(p);
    in.get(digit);
    if (p != 'P' || digit < '1' || digit > '6') fail(path, "not a portable bitmap/graymap");
    if (digit == '3' || digit == '6') fail(path, "color images are not supported");

    const int width = next_header_int(in, path);
    const int height = next_header_int(in, path);
    if (width <= 0 || height <= 0) fail(path, "zero or negative dimensions");

    int maxval = 1;
    if (digit == '2' || digit == '5') {
        maxval = next_header_int(in, path);
        if (maxval <= 0) fail(path, "invalid maxval");
        if (maxval > 255) fail(path, "maxval above 255 is not supported");
    }

    BitGrid grid(width, height);
    const std::size_t total = static_cast<std::size_t>(width) * height;

    switch (digit) {
        case '1': {  // ASCII bits, whitespace optional
            std::size_t got = 0;
            while (got < total) {
                int c = in.get();
                if (c == EOF) fail(path, "truncated pixel data");
                if (std::isspace(c)) continue;
                if (c == '#') {
                    std::string line;
                    std::getline(in, line);
                    continue;
                }
                if (c != '0' && c != '1') fail(path, "invalid P1 pixel");
                grid.bits[got++] = (c == '1') ? 1 : 0;
            }
            break;
        }
        case '2': {  // ASCII samples
            for (std::size_t i = 0; i < total; ++i) {
                int v = 0;
                if (!(in >> v)) fail(path, "truncated pixel data");
                if (v < 0 || v > maxval) fail(path, "sample out of range");
                grid.bits[i] = (v > 0) ? 1 : 0;
            }
            break;
        }
        case '4': {  // packed bits, rows padded to whole bytes
            in.get();  // single whitespace after header
            const int row_bytes = (width + 7) / 8;
            std::vector<char> row(static_cast<std::size_t>(row_bytes));
            for (int y = 0; y < height; ++y) {
                if (!in.read(row.data(), row_bytes)) fail(path, "truncated pixel data");
                for (int x = 0; x < width; ++x) {
                    const int bit = (row[x / 8] >> (7 - x % 8)) & 1;
                    grid.set(x, y, bit != 0);
                }
            }
            break;
        }
        case '5': {  // binary samples
            in.get();
            std::vector<char> buf(total);
            if (!in.read(buf.data(), static_cast<std::streamsize>(total)))
                fail(path, "truncated pixel data");
            for (std::size_t i = 0; i < total; ++i)
                grid.bits[i] = (static_cast<unsigned char>(buf[i]) > 0) ? 1 : 0;
            break;
        }
        default:
            fail(path, "unsupported format");
    }
    return grid;
}

std::vector<BitGrid> load_frame_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error(dir.string() + ": not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".pgm" || ext == ".pbm" || ext == ".pnm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        return a.filename().string() < b.filename().string();
    });
    if (files.empty()) throw std::runtime_error(dir.string() + ": no frames found");
    std::vector<BitGrid> frames;
    frames.reserve(files.size());
    for (const auto& f : files) frames.push_back(load_frame(f));
    return frames;
}

void save_pgm(const BitGrid& frame, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open file for writing");
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    std::vector<char> buf(frame.bits.size());
    for (std::size_t i = 0; i < frame.bits.size(); ++i)
        buf[i] = frame.bits[i] ? static_cast<char>(255) : 0;
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) fail(path, "write failed");
}

BitGrid crop_legs(const BitGrid& frame, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0))
        throw std::invalid_argument("crop fraction must be in (0, 1]");
    const BoundingBox box = foreground_box(frame);
    if (!box.valid()) throw std::runtime_error("no silhouette: frame has no foreground");

    const int keep_rows = static_cast<int>(std::ceil(fraction * box.height()));
    const int first_row = box.max_y - keep_rows + 1;

    // Tight box of the kept pixels (columns may shrink).
    BoundingBox kept;
    kept.min_x = frame.width;
    kept.min_y = frame.height;
    for (int y = first_row; y <= box.max_y; ++y) {
        for (int x = box.min_x; x <= box.max_x; ++x) {
            if (!frame.at(x, y)) continue;
            kept.min_x = std::min(kept.min_x, x);
            kept.min_y = std::min(kept.min_y, y);
            kept.max_x = std::max(kept.max_x, x);
            kept.max_y = std::max(kept.max_y, y);
        }
    }
    if (!kept.valid()) throw std::runtime_error("no silhouette: crop removed all foreground");

    BitGrid out(kept.width(), kept.height());
    for (int y = kept.min_y; y <= kept.max_y; ++y)
        for (int x = kept.min_x; x <= kept.max_x; ++x)
            out.set(x - kept.min_x, y - kept.min_y, frame.at(x, y));
    return out;
}

std::uint64_t BinaryImage3D::pack(int x, int y, int z) {
    // Nonnegative coordinates below 2^21 after bounding-box alignment.
    return (static_cast<std::uint64_t>(x) << 42) | (static_cast<std::uint64_t>(y) << 21) |
           static_cast<std::uint64_t>(z);
}

std::array<int, 3> BinaryImage3D::unpack(std::uint64_t key) {
    constexpr std::uint64_t mask = (1ull << 21) - 1;
    return {static_cast<int>(key >> 42), static_cast<int>((key >> 21) & mask),
            static_cast<int>(key & mask)};
}

std::vector<std::array<int, 3>> BinaryImage3D::sorted_voxels() const {
    std::vector<std::array<int, 3>> out;
    out.reserve(voxels.size());
    for (std::uint64_t key : voxels) out.push_back(unpack(key));
    std::sort(out.begin(), out.end());
    return out;
}

BinaryImage3D stack_frames(const std::vector<BitGrid>& frames, const StackOptions& options) {
    if (frames.size() < 2) throw std::invalid_argument("need at least 2 frames to stack");

    struct Prepared {
        BitGrid grid;
        BoundingBox box;
    };
    std::vector<Prepared> prepared;
    prepared.reserve(frames.size());
    int max_height = 0;
    int max_width = 0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        BitGrid g = options.legs ? crop_legs(frames[i], options.fraction) : frames[i];
        BoundingBox box = foreground_box(g);
        if (!box.valid())
            throw std::runtime_error("frame " + std::to_string(i) + " is empty after crop");
        max_height = std::max(max_height, box.height());
        max_width = std::max(max_width, box.width());
        prepared.push_back({std::move(g), box});
    }

    BinaryImage3D image;
    image.frame_count = static_cast<int>(frames.size());
    image.scale_y = max_height >= 2 ? 1.0 / (max_height - 1) : 1.0;
    image.scale_x = image.scale_y;  // width keeps the original proportion
    image.scale_z = 1.0 / (static_cast<int>(frames.size()) - 1);

    for (std::size_t i = 0; i < prepared.size(); ++i) {
        const auto& [grid, box] = prepared[i];
        const int x_off = options.align == HorizontalAlign::Center
                              ? (max_width - box.width()) / 2
                              : 0;
        for (int y = box.min_y; y <= box.max_y; ++y) {
            for (int x = box.min_x; x <= box.max_x; ++x) {
                if (!grid.at(x, y)) continue;
                // Flip to y-up: the box's bottom row lands on y = 0.
                image.voxels.insert(BinaryImage3D::pack(x - box.min_x + x_off, box.max_y - y,
                                                        static_cast<int>(i)));
            }
        }
    }
    return image;
}

}  // namespace topogait
