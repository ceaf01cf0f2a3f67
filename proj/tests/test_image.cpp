#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>
#include <unistd.h>

#include "error.hpp"
#include "image.hpp"
#include "oracles.hpp"
#include "random.hpp"

using namespace gmsd;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("gmsd_test_image_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

// Test-only PNG writer (the library itself only reads PNG).
void write_png(const std::string &path, int w, int h, int channels,
               const std::vector<unsigned char> &raster) {
    std::FILE *fp = std::fopen(path.c_str(), "wb");
    REQUIRE(fp != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    REQUIRE(setjmp(png_jmpbuf(png)) == 0);
    png_init_io(png, fp);
    png_set_IHDR(png, info, w, h, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < h; ++y)
        png_write_row(png, const_cast<png_bytep>(raster.data() +
                                                 static_cast<size_t>(y) * w * channels));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

std::string write_file(const std::string &name, const std::vector<unsigned char> &bytes) {
    fs::path p = temp_dir() / name;
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    return p.string();
}

std::vector<unsigned char> pgm_bytes(int w, int h, const std::vector<unsigned char> &raster) {
    std::string header = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    std::vector<unsigned char> bytes(header.begin(), header.end());
    bytes.insert(bytes.end(), raster.begin(), raster.end());
    return bytes;
}

std::vector<unsigned char> ppm_bytes(int w, int h, const std::vector<unsigned char> &raster) {
    std::string header = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    std::vector<unsigned char> bytes(header.begin(), header.end());
    bytes.insert(bytes.end(), raster.begin(), raster.end());
    return bytes;
}

template <class Fn>
bool load_fails_with(Fn &&fn, const std::string &needle) {
    try {
        fn();
    } catch (const IoError &e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

} // namespace

TEST_CASE("P5 all-255 loads as all ones") {
    auto path = write_file("white.pgm", pgm_bytes(3, 2, {255, 255, 255, 255, 255, 255}));
    Image img = load_image(path);
    CHECK(img.width == 3);
    CHECK(img.height == 2);
    CHECK(img.dynamic_range == 1.0);
    for (double s : img.samples)
        CHECK(s == 1.0);
}

TEST_CASE("P5 endpoint mapping") {
    auto path = write_file("steps.pgm", pgm_bytes(2, 2, {0, 255, 255, 0}));
    Image img = load_image(path);
    CHECK(img.samples[0] == 0.0);
    CHECK(img.samples[1] == 1.0);
    CHECK(img.samples[2] == 1.0);
    CHECK(img.samples[3] == 0.0);
}

TEST_CASE("P6 red maps to the red luma weight") {
    std::vector<unsigned char> raster;
    for (int i = 0; i < 4; ++i) {
        raster.push_back(255);
        raster.push_back(0);
        raster.push_back(0);
    }
    auto path = write_file("red.ppm", ppm_bytes(2, 2, raster));
    Image img = load_image(path);
    for (double s : img.samples)
        CHECK(s == doctest::Approx(0.299).epsilon(1e-12));
}

TEST_CASE("PNM comments and whitespace are tolerated") {
    std::string header = "P5\n# a comment\n 2 # another\n2\n255\n";
    std::vector<unsigned char> bytes(header.begin(), header.end());
    for (unsigned char v : {10, 20, 30, 40})
        bytes.push_back(v);
    auto path = write_file("comments.pgm", bytes);
    Image img = load_image(path);
    CHECK(img.width == 2);
    CHECK(img.at(1, 1) == doctest::Approx(40.0 / 255.0));
}

TEST_CASE("load errors carry the path and cause") {
    CHECK(load_fails_with([] { load_image(".does-not-exist.pgm"); }, ".does-not-exist.pgm"));

    auto bad_magic = write_file("bad_magic.img", {'P', '9', '\n'});
    CHECK(load_fails_with([&] { load_image(bad_magic); }, "unsupported format"));

    std::string header16 = "P5\n2 2\n65535\n";
    std::vector<unsigned char> bytes(header16.begin(), header16.end());
    bytes.insert(bytes.end(), 8, 0);
    auto deep = write_file("deep.pgm", bytes);
    CHECK(load_fails_with([&] { load_image(deep); }, "unsupported bit depth"));

    auto truncated = write_file("trunc.pgm", pgm_bytes(4, 4, {1, 2, 3}));
    CHECK(load_fails_with([&] { load_image(truncated); }, "truncated"));
    CHECK(load_fails_with([&] { load_image(truncated); }, truncated));

    auto garbage_header = write_file("garbage.pgm", {'P', '5', '\n', 'x', 'y'});
    CHECK(load_fails_with([&] { load_image(garbage_header); }, "malformed header"));
}

TEST_CASE("save_gray quantizes with round-half-up") {
    Image img = make_image(2, 1);
    img.samples[0] = 0.5; // 127.5 -> 128
    img.samples[1] = 1.0;
    fs::path p = temp_dir() / "half.pgm";
    save_gray(img, p.string());

    std::ifstream in(p, std::ios::binary);
    std::string header(3, '\0');
    in.read(header.data(), 3);
    CHECK(header == "P5\n");
    std::string dims;
    std::getline(in, dims);
    CHECK(dims == "2 1");
    std::getline(in, dims);
    CHECK(dims == "255");
    unsigned char raster[2];
    in.read(reinterpret_cast<char *>(raster), 2);
    CHECK(raster[0] == 128);
    CHECK(raster[1] == 255);
}

TEST_CASE("save then load round-trips within quantization error") {
    Rng rng(7);
    Image img = make_image(9, 5);
    for (double &s : img.samples)
        s = rng.uniform();
    fs::path p = temp_dir() / "roundtrip.pgm";
    save_gray(img, p.string());
    Image back = load_image(p.string());
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    for (size_t i = 0; i < img.samples.size(); ++i)
        CHECK(std::fabs(back.samples[i] - img.samples[i]) <= 0.5 / 255.0 + 1e-12);
}

TEST_CASE("save_gray to an unwritable path fails") {
    Image img = make_image(2, 2, 0.5);
    CHECK_THROWS_AS(save_gray(img, "/no-such-dir/x.pgm"), IoError);
}

TEST_CASE("PNG gray loads like the equivalent PGM") {
    Rng rng(17);
    std::vector<unsigned char> raster(10 * 6);
    for (auto &v : raster)
        v = static_cast<unsigned char>(rng.uniform() * 255.0);
    fs::path png_path = temp_dir() / "gray.png";
    write_png(png_path.string(), 10, 6, 1, raster);
    auto pgm_path = write_file("gray_twin.pgm", pgm_bytes(10, 6, raster));

    Image from_png = load_image(png_path.string());
    Image from_pgm = load_image(pgm_path);
    REQUIRE(from_png.width == 10);
    REQUIRE(from_png.height == 6);
    CHECK(from_png.samples == from_pgm.samples);
}

TEST_CASE("PNG RGB reduces to luma exactly like PPM") {
    Rng rng(18);
    std::vector<unsigned char> raster(8 * 5 * 3);
    for (auto &v : raster)
        v = static_cast<unsigned char>(rng.uniform() * 255.0);
    fs::path png_path = temp_dir() / "rgb.png";
    write_png(png_path.string(), 8, 5, 3, raster);
    auto ppm_path = write_file("rgb_twin.ppm", ppm_bytes(8, 5, raster));

    Image from_png = load_image(png_path.string());
    Image from_ppm = load_image(ppm_path);
    CHECK(from_png.samples == from_ppm.samples);
    // Spot check one pixel against the luma weights.
    double expect =
        (0.299 * raster[0] + 0.587 * raster[1] + 0.114 * raster[2]) / 255.0;
    CHECK(from_png.samples[0] == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("malformed PNG data is an I/O error") {
    auto fake = write_file("fake.png", {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n', 0, 0});
    CHECK_THROWS_AS(load_image(fake), IoError);
}

TEST_CASE("AWN level 0 is the identity") {
    Image img = oracle::textured_image(16, 16, 11);
    Image out = apply_distortion(img, {DistortionKind::AdditiveWhiteNoise, 0.0, 99});
    CHECK(out.samples == img.samples);
}

TEST_CASE("contrast level 1 is the identity") {
    Image img = oracle::textured_image(16, 16, 12);
    Image out = apply_distortion(img, {DistortionKind::ContrastScale, 1.0, 0});
    for (size_t i = 0; i < img.samples.size(); ++i)
        CHECK(out.samples[i] == doctest::Approx(img.samples[i]).epsilon(1e-15));
}

TEST_CASE("blur preserves a constant image") {
    Image img = make_image(20, 14, 0.37);
    Image out = apply_distortion(img, {DistortionKind::GaussianBlur, 2.0, 0});
    for (double s : out.samples)
        CHECK(s == doctest::Approx(0.37).epsilon(1e-12));
}

TEST_CASE("blur preserves the mean of an interior-supported image") {
    // Zero border band wider than the kernel radius; replicate padding
    // then never sees nonzero values, so no mass can leak out.
    const double sigma = 1.25;
    const int radius = 4; // ceil(3 * 1.25)
    Image img = make_image(32, 24, 0.0);
    Rng rng(5);
    for (int y = radius; y < img.height - radius; ++y)
        for (int x = radius; x < img.width - radius; ++x)
            img.at(x, y) = rng.uniform();
    Image out = apply_distortion(img, {DistortionKind::GaussianBlur, sigma, 0});

    double mean_in = 0.0, mean_out = 0.0;
    for (size_t i = 0; i < img.samples.size(); ++i) {
        mean_in += img.samples[i];
        mean_out += out.samples[i];
    }
    mean_in /= static_cast<double>(img.samples.size());
    mean_out /= static_cast<double>(img.samples.size());
    CHECK(std::fabs(mean_out - mean_in) <= 1e-9);
}

TEST_CASE("distortion is a pure function of image and spec") {
    Image img = oracle::textured_image(24, 18, 21);
    DistortionSpec spec{DistortionKind::AdditiveWhiteNoise, 0.08, 12345};
    Image a = apply_distortion(img, spec);
    Image b = apply_distortion(img, spec);
    CHECK(a.samples == b.samples);

    Image c = apply_distortion(img, {DistortionKind::AdditiveWhiteNoise, 0.08, 12346});
    CHECK(a.samples != c.samples);
}

TEST_CASE("all distortions clamp to the unit interval") {
    Image img = oracle::textured_image(16, 16, 31);
    for (auto spec : {DistortionSpec{DistortionKind::AdditiveWhiteNoise, 0.8, 3},
                      DistortionSpec{DistortionKind::GaussianBlur, 3.0, 0},
                      DistortionSpec{DistortionKind::ContrastScale, 25.0, 0}}) {
        Image out = apply_distortion(img, spec);
        for (double s : out.samples) {
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
        }
    }
}

TEST_CASE("distortion rejects bad levels") {
    Image img = make_image(4, 4, 0.5);
    CHECK_THROWS_AS(apply_distortion(img, {DistortionKind::AdditiveWhiteNoise, -0.1, 0}),
                    InvalidArgument);
    CHECK_THROWS_AS(apply_distortion(img, {DistortionKind::ContrastScale, 0.0, 0}),
                    InvalidArgument);
}
