#include "image.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <fstream>
#include <limits>
#include <vector>

#include <png.h>

#include "error.hpp"
#include "random.hpp"

namespace gmsd {

namespace {

constexpr std::int64_t kMaxPixels = 1LL << 30; // 1 Gpixel sanity bound

[[noreturn]] void io_fail(const std::string &path, const std::string &cause) {
    throw IoError(path + ": " + cause);
}

void check_dims(const std::string &path, long long w, long long h) {
    if (w < 1 || h < 1)
        io_fail(path, "malformed header: non-positive dimensions");
    if (w * h > kMaxPixels)
        io_fail(path, "malformed header: image implausibly large");
}

// --- PNM ------------------------------------------------------------

// Header tokens are separated by whitespace; '#' starts a comment that
// runs to end of line. Exactly one whitespace byte follows the maxval.
long long pnm_token(std::istream &in, const std::string &path) {
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n')
                ch = in.get();
        } else if (!std::isspace(ch)) {
            break;
        }
        ch = in.get();
    }
    if (ch == EOF || !std::isdigit(ch))
        io_fail(path, "malformed header: expected decimal token");
    long long value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        if (value > std::numeric_limits<std::int32_t>::max())
            io_fail(path, "malformed header: numeric overflow");
        ch = in.get();
    }
    if (ch != EOF)
        in.unget();
    return value;
}

Image load_pnm(std::ifstream &in, const std::string &path, bool color) {
    long long w = pnm_token(in, path);
    long long h = pnm_token(in, path);
    long long maxval = pnm_token(in, path);
    check_dims(path, w, h);
    if (maxval != 255)
        io_fail(path, "unsupported bit depth: maxval " + std::to_string(maxval) +
                          " (only 8-bit, maxval 255)");
    int sep = in.get();
    if (sep == EOF || !std::isspace(sep))
        io_fail(path, "malformed header: missing raster separator");

    const size_t channels = color ? 3 : 1;
    const size_t n = static_cast<size_t>(w) * static_cast<size_t>(h);
    std::vector<unsigned char> raw(n * channels);
    in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<size_t>(in.gcount()) != raw.size())
        io_fail(path, "truncated raster data");

    Image img = make_image(static_cast<int>(w), static_cast<int>(h));
    if (color) {
        for (size_t i = 0; i < n; ++i) {
            double y = 0.299 * raw[3 * i] + 0.587 * raw[3 * i + 1] + 0.114 * raw[3 * i + 2];
            img.samples[i] = y / 255.0;
        }
    } else {
        for (size_t i = 0; i < n; ++i)
            img.samples[i] = raw[i] / 255.0;
    }
    return img;
}

// --- PNG ------------------------------------------------------------

struct PngReader {
    std::FILE *file = nullptr;
    png_structp png = nullptr;
    png_infop info = nullptr;

    ~PngReader() {
        if (png)
            png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (file)
            std::fclose(file);
    }
};

Image load_png(const std::string &path) {
    PngReader r;
    r.file = std::fopen(path.c_str(), "rb");
    if (!r.file)
        io_fail(path, "cannot open file");

    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png)
        io_fail(path, "libpng init failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info)
        io_fail(path, "libpng init failed");

    // libpng reports errors via longjmp; convert to an exception only
    // after landing back here, outside libpng frames.
    if (setjmp(png_jmpbuf(r.png)))
        io_fail(path, "malformed PNG data");

    png_init_io(r.png, r.file);
    png_read_info(r.png, r.info);

    const png_uint_32 w = png_get_image_width(r.png, r.info);
    const png_uint_32 h = png_get_image_height(r.png, r.info);
    const int depth = png_get_bit_depth(r.png, r.info);
    const int color_type = png_get_color_type(r.png, r.info);
    check_dims(path, w, h);
    if (depth != 8)
        io_fail(path, "unsupported bit depth: " + std::to_string(depth) + " (only 8-bit)");
    if (color_type != PNG_COLOR_TYPE_GRAY && color_type != PNG_COLOR_TYPE_RGB)
        io_fail(path, "unsupported PNG color type (only 8-bit gray or RGB)");

    png_set_interlace_handling(r.png);
    png_read_update_info(r.png, r.info);

    const size_t rowbytes = png_get_rowbytes(r.png, r.info);
    std::vector<unsigned char> raster(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = raster.data() + y * rowbytes;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);

    Image img = make_image(static_cast<int>(w), static_cast<int>(h));
    const bool color = color_type == PNG_COLOR_TYPE_RGB;
    for (png_uint_32 y = 0; y < h; ++y) {
        const unsigned char *row = rows[y];
        for (png_uint_32 x = 0; x < w; ++x) {
            double v;
            if (color) {
                const unsigned char *p = row + 3 * x;
                v = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
            } else {
                v = row[x];
            }
            img.at(static_cast<int>(x), static_cast<int>(y)) = v / 255.0;
        }
    }
    return img;
}

// --- distortions ----------------------------------------------------

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

Image add_white_noise(const Image &in, double sigma, std::uint64_t seed) {
    Image out = in;
    if (sigma == 0.0)
        return out;
    Rng rng(seed);
    for (double &s : out.samples)
        s = clamp01(s + sigma * rng.gaussian());
    return out;
}

Image gaussian_blur(const Image &in, double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    if (radius == 0)
        return in;

    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double &k : kernel)
        k /= sum;

    const int w = in.width, h = in.height;
    auto clampi = [](int v, int hi) { return std::min(hi - 1, std::max(0, v)); };

    // Separable passes with replicate padding; identical to the full 2-D
    // kernel because the clamping in x and y is independent.
    Image mid = make_image(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * in.at(clampi(x + i, w), y);
            mid.at(x, y) = acc;
        }
    Image out = make_image(w, h);
    out.dynamic_range = in.dynamic_range;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * mid.at(x, clampi(y + i, h));
            out.at(x, y) = clamp01(acc);
        }
    return out;
}

Image contrast_scale(const Image &in, double level) {
    Image out = in;
    for (double &s : out.samples)
        s = clamp01(0.5 + level * (s - 0.5));
    return out;
}

} // namespace

Image make_image(int width, int height, double fill) {
    if (width < 1 || height < 1)
        throw InvalidArgument("image dimensions must be positive");
    Image img;
    img.width = width;
    img.height = height;
    img.samples.assign(static_cast<size_t>(width) * height, fill);
    return img;
}

Image load_image(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        io_fail(path, "cannot open file");
    unsigned char magic[2] = {0, 0};
    in.read(reinterpret_cast<char *>(magic), 2);
    if (in.gcount() != 2)
        io_fail(path, "malformed header: file too short");

    if (magic[0] == 'P' && magic[1] == '5')
        return load_pnm(in, path, /*color=*/false);
    if (magic[0] == 'P' && magic[1] == '6')
        return load_pnm(in, path, /*color=*/true);
    if (magic[0] == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path);
    }
    io_fail(path, "unsupported format (expected binary PGM, binary PPM or PNG)");
}

void save_gray(const Image &image, const std::string &path) {
    if (image.width < 1 || image.height < 1 ||
        image.samples.size() != image.pixel_count())
        throw InvalidArgument("save_gray: invalid image");
    std::ofstream out(path, std::ios::binary);
    if (!out)
        io_fail(path, "cannot open file for writing");
    out << "P5\n" << image.width << " " << image.height << "\n255\n";
    std::vector<unsigned char> raw(image.pixel_count());
    for (size_t i = 0; i < raw.size(); ++i) {
        double q = std::floor(image.samples[i] * 255.0 + 0.5); // round half up
        raw[i] = static_cast<unsigned char>(std::min(255.0, std::max(0.0, q)));
    }
    out.write(reinterpret_cast<const char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out)
        io_fail(path, "write failed");
}

Image apply_distortion(const Image &image, const DistortionSpec &spec) {
    if (image.width < 1 || image.height < 1)
        throw InvalidArgument("apply_distortion: invalid image");
    if (spec.level < 0.0)
        throw InvalidArgument("apply_distortion: level must be nonnegative");
    switch (spec.kind) {
    case DistortionKind::AdditiveWhiteNoise:
        return add_white_noise(image, spec.level, spec.seed);
    case DistortionKind::GaussianBlur:
        return gaussian_blur(image, spec.level);
    case DistortionKind::ContrastScale:
        if (spec.level == 0.0)
            throw InvalidArgument("apply_distortion: contrast level must be positive");
        return contrast_scale(image, spec.level);
    }
    throw InvalidArgument("apply_distortion: unknown distortion kind");
}

} // namespace gmsd
