#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <unistd.h>

#include "topogait/silhouette_io.hpp"

using namespace topogait;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static int counter = 0;
    const fs::path dir =
        fs::temp_directory_path() / ("topogait_io_" + std::to_string(::getpid()) + "_" +
                                     std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

void write_bytes(const fs::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

BitGrid grid_from_rows(const std::vector<std::string>& rows) {
    BitGrid g(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) g.set(x, y, rows[y][x] == '#');
    return g;
}

}  // namespace

TEST_CASE("load_frame thresholds any nonzero sample") {
    const fs::path dir = temp_dir();
    const fs::path path = dir / "2x2.pgm";
    write_bytes(path, std::string("P5\n2 2\n255\n") + '\0' + '\xff' + '\0' + '\xff');
    const BitGrid g = load_frame(path);
    CHECK(g.width == 2);
    CHECK(g.height == 2);
    CHECK_FALSE(g.at(0, 0));
    CHECK(g.at(1, 0));
    CHECK_FALSE(g.at(0, 1));
    CHECK(g.at(1, 1));
}

TEST_CASE("load_frame accepts all four header kinds") {
    const fs::path dir = temp_dir();
    // Same 4x2 pattern: #.#. / .##.
    write_bytes(dir / "a.pbm", "P1\n# comment\n4 2\n1010\n0110\n");
    write_bytes(dir / "b.pgm", "P2\n4 2\n255\n9 0 1 0\n0 200 31 0\n");
    write_bytes(dir / "c.pbm", std::string("P4\n4 2\n") + '\xa0' + '\x60');
    write_bytes(dir / "d.pgm", std::string("P5\n4 2\n255\n") + '\x01' + '\0' + '\x01' + '\0' +
                                   '\0' + '\x01' + '\x01' + '\0');
    const BitGrid a = load_frame(dir / "a.pbm");
    const BitGrid b = load_frame(dir / "b.pgm");
    const BitGrid c = load_frame(dir / "c.pbm");
    const BitGrid d = load_frame(dir / "d.pgm");
    CHECK(a.bits == b.bits);
    CHECK(a.bits == c.bits);
    CHECK(a.bits == d.bits);
    CHECK(a.foreground_count() == 4);
}

TEST_CASE("load_frame reports failures with path and cause") {
    const fs::path dir = temp_dir();
    CHECK_THROWS_WITH_AS(load_frame(dir / "missing.pgm"),
                         doctest::Contains("missing.pgm"), std::runtime_error);
    write_bytes(dir / "color.ppm", "P6\n2 2\n255\n");
    CHECK_THROWS_AS(load_frame(dir / "color.ppm"), std::runtime_error);
    write_bytes(dir / "zero.pgm", "P5\n0 4\n255\n");
    CHECK_THROWS_AS(load_frame(dir / "zero.pgm"), std::runtime_error);
    write_bytes(dir / "short.pgm", "P5\n4 4\n255\nab");
    CHECK_THROWS_AS(load_frame(dir / "short.pgm"), std::runtime_error);
    write_bytes(dir / "junk.txt", "hello");
    CHECK_THROWS_AS(load_frame(dir / "junk.txt"), std::runtime_error);
}

TEST_CASE("all-zero frame loads but cannot be stacked") {
    const fs::path dir = temp_dir();
    write_bytes(dir / "zero64.pgm", "P2\n64 64\n255\n" + [] {
        std::string s;
        for (int i = 0; i < 64 * 64; ++i) s += "0 ";
        return s;
    }());
    const BitGrid g = load_frame(dir / "zero64.pgm");
    CHECK(g.foreground_count() == 0);
    CHECK_THROWS_AS(stack_frames({g, g}), std::runtime_error);
}

TEST_CASE("hand-authored 11x11 rectangle has 21 foreground bits") {
    BitGrid g(11, 11);
    for (int y = 3; y < 3 + 7; ++y)
        for (int x = 4; x < 4 + 3; ++x) g.set(x, y, true);
    const fs::path path = temp_dir() / "rect.pgm";
    save_pgm(g, path);
    CHECK(load_frame(path).foreground_count() == 21);
}

TEST_CASE("directory loading is lexicographic and picky about extensions") {
    const fs::path dir = temp_dir();
    BitGrid g(3, 3);
    g.set(1, 1, true);
    save_pgm(g, dir / "b.pgm");
    BitGrid g2(3, 3);
    g2.set(0, 0, true);
    save_pgm(g2, dir / "a.pgm");
    write_bytes(dir / "notes.txt", "ignored");
    const auto frames = load_frame_dir(dir);
    REQUIRE(frames.size() == 2);
    CHECK(frames[0].at(0, 0));  // a.pgm first
    CHECK(frames[1].at(1, 1));

    CHECK_THROWS_AS(load_frame_dir(temp_dir()), std::runtime_error);  // empty dir
}

TEST_CASE("crop_legs keeps the bottom fraction of the bounding box") {
    // 40-row-tall silhouette inside a taller frame.
    BitGrid g(9, 60);
    for (int y = 10; y < 50; ++y) g.set(4, y, true);
    const BitGrid quarter = crop_legs(g, 0.25);
    CHECK(quarter.height == 10);  // ceil(0.25 * 40)
    CHECK(quarter.width == 1);
    CHECK(quarter.foreground_count() == 10);

    SUBCASE("fraction 1.0 is the identity crop (tight box)") {
        const BitGrid full = crop_legs(g, 1.0);
        CHECK(full.height == 40);
        CHECK(full.width == 1);
        const BitGrid again = crop_legs(full, 1.0);
        CHECK(again.width == full.width);
        CHECK(again.height == full.height);
        CHECK(again.bits == full.bits);
    }
}

TEST_CASE("crop_legs isolates the leg columns of a standing figure") {
    // Head/torso blob on top, two 1-px legs in the bottom quarter.
    const BitGrid person = grid_from_rows({
        "..#####..",
        "..#####..",
        "..#####..",
        "..#####..",
        "..#####..",
        "..#####..",
        "..#.#.#..",  // crotch
        "..#...#..",
        "..#...#..",  // legs: columns 2 and 6
        "..#...#..",
        "..#...#..",
        "..#...#..",
    });
    const BitGrid legs = crop_legs(person, 0.25);
    CHECK(legs.height == 3);  // ceil(0.25 * 12)
    CHECK(legs.width == 5);   // columns 2..6 tight
    std::set<int> columns;
    for (int y = 0; y < legs.height; ++y)
        for (int x = 0; x < legs.width; ++x)
            if (legs.at(x, y)) columns.insert(x);
    CHECK(columns == std::set<int>{0, 4});  // exactly the two leg columns
}

TEST_CASE("crop_legs rejects empty frames and bad fractions") {
    BitGrid empty(5, 5);
    CHECK_THROWS_AS(crop_legs(empty, 0.25), std::runtime_error);
    BitGrid g(5, 5);
    g.set(2, 2, true);
    CHECK_THROWS_AS(crop_legs(g, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(crop_legs(g, 1.5), std::invalid_argument);
}

TEST_CASE("stack of two single-pixel frames") {
    BitGrid f(4, 4);
    f.set(2, 1, true);
    const BinaryImage3D image = stack_frames({f, f});
    CHECK(image.size() == 2);
    CHECK(image.contains(0, 0, 0));
    CHECK(image.contains(0, 0, 1));
    CHECK(image.frame_count == 2);
    CHECK(image.scale_z == 1.0);
}

TEST_CASE("stack scale comes from the tallest cropped box") {
    BitGrid tall(5, 20);
    for (int y = 3; y < 13; ++y) tall.set(2, y, true);  // height 10
    BitGrid small(5, 20);
    for (int y = 5; y < 13; ++y) small.set(2, y, true);  // height 8
    const BinaryImage3D image = stack_frames({small, tall});
    CHECK(image.scale_y == doctest::Approx(1.0 / 9).epsilon(1e-15));
    CHECK(image.scale_x == image.scale_y);
}

TEST_CASE("stack rejects short or empty input") {
    BitGrid f(4, 4);
    f.set(1, 1, true);
    CHECK_THROWS_AS(stack_frames({f}), std::invalid_argument);
    BitGrid empty(4, 4);
    CHECK_THROWS_AS(stack_frames({f, empty}), std::runtime_error);
}

TEST_CASE("translation of every frame leaves the stack unchanged") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> coord(0, 9);
    for (int round = 0; round < 20; ++round) {
        std::vector<BitGrid> frames, shifted;
        const int dx = 1 + static_cast<int>(rng() % 5);
        const int dy = 1 + static_cast<int>(rng() % 5);
        for (int i = 0; i < 3; ++i) {
            BitGrid f(16, 16), s(16, 16);
            for (int p = 0; p < 12; ++p) {
                const int x = coord(rng), y = coord(rng);
                f.set(x, y, true);
                s.set(x + dx, y + dy, true);
            }
            frames.push_back(f);
            shifted.push_back(s);
        }
        const BinaryImage3D a = stack_frames(frames);
        const BinaryImage3D b = stack_frames(shifted);
        CHECK(a.voxels == b.voxels);
        CHECK(a.scale_y == b.scale_y);
    }
}

TEST_CASE("stack slices partition into the per-frame cropped pixel sets") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coord(0, 11);
    std::vector<BitGrid> frames;
    for (int i = 0; i < 4; ++i) {
        BitGrid f(14, 14);
        for (int p = 0; p < 20; ++p) f.set(coord(rng), coord(rng), true);
        frames.push_back(f);
    }
    const StackOptions options{true, 0.5, HorizontalAlign::Left};
    const BinaryImage3D image = stack_frames(frames, options);

    for (int i = 0; i < 4; ++i) {
        const BitGrid cropped = crop_legs(frames[i], 0.5);
        std::set<std::pair<int, int>> expected;
        const BoundingBox box = foreground_box(cropped);
        for (int y = 0; y < cropped.height; ++y)
            for (int x = 0; x < cropped.width; ++x)
                if (cropped.at(x, y)) expected.insert({x - box.min_x, box.max_y - y});
        std::set<std::pair<int, int>> actual;
        for (const auto& [x, y, z] : image.sorted_voxels())
            if (z == i) actual.insert({x, y});
        CHECK(actual == expected);
    }
}

TEST_CASE("center alignment shifts narrow frames inward") {
    BitGrid wide(10, 4);
    for (int x = 0; x < 9; ++x) wide.set(x, 2, true);
    BitGrid narrow(10, 4);
    narrow.set(4, 2, true);
    const BinaryImage3D centered =
        stack_frames({wide, narrow}, {false, 0.25, HorizontalAlign::Center});
    CHECK(centered.contains(4, 0, 1));  // (9-1)/2
    const BinaryImage3D left = stack_frames({wide, narrow});
    CHECK(left.contains(0, 0, 1));
}
