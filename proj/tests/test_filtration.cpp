#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <unistd.h>

#include "oracles.hpp"
#include "topogait/filtration.hpp"

using namespace topogait;

namespace {

BinaryImage3D cube_image() {
    BinaryImage3D image;
    image.frame_count = 2;
    image.scale_x = image.scale_y = image.scale_z = 1.0;
    for (int x = 0; x <= 1; ++x)
        for (int y = 0; y <= 1; ++y)
            for (int z = 0; z <= 1; ++z) image.voxels.insert(BinaryImage3D::pack(x, y, z));
    return image;
}

SimplicialComplex cube_surface() {
    const BinaryImage3D image = cube_image();
    return boundary_surface(build_cubical(image), image);
}

}  // namespace

TEST_CASE("default plane set geometry") {
    const auto planes = default_planes();
    REQUIRE(planes.size() == 8);
    for (const auto& p : planes)
        CHECK(std::abs(dot(p.normal, p.normal) - 1.0) <= 1e-12);

    CHECK(planes[0].id == "x=0");
    CHECK(planes[0].distance({0.5, 0.3, 0.9}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(planes[3].id == "y=1");
    CHECK(planes[3].distance({0.25, 0.25, 0.5}) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(planes[4].id == "x+y=0");
    CHECK(planes[4].distance({1.0, 1.0, 0.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(planes[5].distance({0.0, 0.0, 0.5}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(planes[6].distance({0.0, 1.0, 0.2}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(planes[7].distance({1.0, 0.0, 0.2}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    // Axis planes never exceed 1 over the unit cube, obliques never sqrt(2).
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const Vec3 p{unit(rng), unit(rng), unit(rng)};
        for (int a = 0; a < 4; ++a) CHECK(planes[a].distance(p) <= 1.0 + 1e-12);
        for (int a = 4; a < 8; ++a) CHECK(planes[a].distance(p) <= std::sqrt(2.0) + 1e-12);
    }
}

TEST_CASE("depth plane set swaps the x-y obliques for z planes") {
    const auto planes = depth_planes();
    REQUIRE(planes.size() == 8);
    CHECK(planes[6].id == "z=0");
    CHECK(planes[7].id == "z=1");
    CHECK(planes[6].distance({0.2, 0.4, 0.3}) == doctest::Approx(0.3));
}

TEST_CASE("plane config round-trips through JSON and validates normals") {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / ("topogait_planes_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);

    {
        std::ofstream out(dir / "ok.json");
        out << R"([{"id":"x=0","normal":[1.0,0.0,0.0],"offset":0.0},
                   {"id":"diag","normal":[0.7071067811865476,0.7071067811865476,0.0],"offset":0.5}])";
    }
    const auto planes = load_plane_config(dir / "ok.json");
    REQUIRE(planes.size() == 2);
    CHECK(planes[1].id == "diag");
    CHECK(planes[1].offset == 0.5);

    {
        std::ofstream out(dir / "bad_norm.json");
        out << R"([{"id":"p","normal":[1.0,1.0,0.0],"offset":0.0}])";
    }
    CHECK_THROWS_WITH_AS(load_plane_config(dir / "bad_norm.json"),
                         doctest::Contains("unit length"), std::runtime_error);

    {
        std::ofstream out(dir / "bad.json");
        out << "not json";
    }
    CHECK_THROWS_AS(load_plane_config(dir / "bad.json"), std::runtime_error);
    CHECK_THROWS_AS(load_plane_config(dir / "missing.json"), std::runtime_error);

    CHECK(resolve_planes("default").size() == 8);
    CHECK(resolve_planes("depth")[7].id == "z=1");
    CHECK(resolve_planes((dir / "ok.json").string()).size() == 2);
}

TEST_CASE("filter_value takes the max over simplex vertices") {
    const auto s = make_simplicial({{0.2, 0.0, 0.0}, {0.6, 0.0, 0.0}, {0.1, 0.4, 0.0}},
                                   {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}});
    const ReferencePlane x0{"x=0", {1, 0, 0}, 0.0};
    CHECK(filter_value(s, {0, 0}, x0) == doctest::Approx(0.2));
    CHECK(filter_value(s, {1, 0}, x0) == doctest::Approx(0.6));  // edge {0.2, 0.6}
    CHECK(filter_value(s, {2, 0}, x0) == doctest::Approx(0.6));  // triangle max
    CHECK_THROWS_AS(filter_value(s, {0, 99}, x0), std::out_of_range);
    CHECK_THROWS_AS(filter_value(s, {1, 99}, x0), std::out_of_range);

    const auto on_plane = make_simplicial({{0.0, 0.0, 0.0}}, {}, {});
    CHECK(filter_value(on_plane, {0, 0}, x0) == 0.0);
}

TEST_CASE("cube surface filtration for x=0 has exactly two levels") {
    const SimplicialComplex s = cube_surface();
    const Filtration f = build_filtration(s, {"x=0", {1, 0, 0}, 0.0});
    REQUIRE(f.level_count() == 2);
    CHECK(f.levels[0].value == 0.0);
    CHECK(f.levels[1].value == 1.0);
    CHECK(f.max_value == 1.0);

    // First level holds only the minimum-distance simplices, ordered by
    // ascending dimension.
    int last_dim = 0;
    for (const auto& ref : f.levels[0].simplices) {
        CHECK(ref.dim >= last_dim);
        last_dim = ref.dim;
    }
    CHECK(is_monotone(s, f));
}

TEST_CASE("all vertices equidistant collapses to one level") {
    const SimplicialComplex s = cube_surface();
    const ReferencePlane mid{"z=0.5", {0, 0, 1}, 0.5};
    const Filtration f = build_filtration(s, mid);
    CHECK(f.level_count() == 1);
    CHECK(f.levels[0].simplices.size() == s.size());
}

TEST_CASE("level count never exceeds the distinct vertex distances") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 10; ++round) {
        const BinaryImage3D image = oracles::random_voxel_image(rng, 5);
        const SimplicialComplex s = boundary_surface(build_cubical(image), image);
        for (const auto& plane : default_planes()) {
            std::set<double> distinct;
            for (const auto& v : s.vertices)
                distinct.insert(std::round(plane.distance(v) * 1e12) / 1e12);
            const Filtration f = build_filtration(s, plane);
            CHECK(f.level_count() <= distinct.size());
            CHECK(f.max_value == *distinct.rbegin());
        }
    }
}

TEST_CASE("monotonicity holds for every default plane on random complexes") {
    std::mt19937_64 rng(29);
    for (int round = 0; round < 10; ++round) {
        const BinaryImage3D image = oracles::random_voxel_image(rng, 6);
        const SimplicialComplex s = boundary_surface(build_cubical(image), image);
        for (const auto& plane : default_planes()) CHECK(is_monotone(s, build_filtration(s, plane)));
    }
}

TEST_CASE("is_monotone rejects broken filtrations") {
    const auto s = make_simplicial({{0, 0, 0}, {1, 0, 0}}, {{0, 1}}, {});
    Filtration f;
    f.label = "bad";
    f.levels = {{0.0, {{1, 0}}}, {1.0, {{0, 0}, {0, 1}}}};  // edge before its endpoints
    f.max_value = 1.0;
    CHECK_FALSE(is_monotone(s, f));

    Filtration incomplete;
    incomplete.levels = {{0.0, {{0, 0}, {0, 1}}}};  // edge missing entirely
    CHECK_FALSE(is_monotone(s, incomplete));

    Filtration good;
    good.levels = {{0.0, {{0, 0}, {0, 1}, {1, 0}}}};
    CHECK(is_monotone(s, good));
}
