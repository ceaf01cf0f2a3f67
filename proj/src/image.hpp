#ifndef GMSD_IMAGE_HPP
#define GMSD_IMAGE_HPP

#include <cstdint>
#include <string>

#include "buffer.hpp"

namespace gmsd {

// Grayscale image, row-major, samples normalized to [0, 1].
// dynamic_range is the nominal intensity range L (1.0 for normalized
// images); only the PSNR baseline consumes it.
struct Image {
    int width = 0;
    int height = 0;
    SampleBuffer samples;
    double dynamic_range = 1.0;

    double at(int x, int y) const { return samples[static_cast<size_t>(y) * width + x]; }
    double &at(int x, int y) { return samples[static_cast<size_t>(y) * width + x]; }
    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

Image make_image(int width, int height, double fill = 0.0);

// Reads binary PGM (P5), binary PPM (P6) or PNG; 8-bit only. Gray sources
// map v -> v/255; color sources are reduced to luma
// Y = 0.299 R + 0.587 G + 0.114 B (8-bit units, unrounded), then divided
// by 255. Throws IoError with the path and cause.
Image load_image(const std::string &path);

// Writes binary PGM (P5, maxval 255): each sample is quantized with
// round-half-up of s*255 and clamped to [0, 255].
void save_gray(const Image &image, const std::string &path);

enum class DistortionKind {
    AdditiveWhiteNoise, // level = noise sigma, luminance units
    GaussianBlur,       // level = blur sigma, pixels
    ContrastScale       // level = contrast multiplier around 0.5
};

struct DistortionSpec {
    DistortionKind kind = DistortionKind::AdditiveWhiteNoise;
    double level = 0.0;
    std::uint64_t seed = 0;
};

// Pure function of (image, spec); identical inputs give bit-identical
// output. AWN adds seeded i.i.d. Gaussian(0, level^2) noise and clamps to
// [0, 1]. GaussianBlur convolves with a normalized Gaussian of sigma =
// level, radius ceil(3 sigma), replicate-padded borders. ContrastScale
// maps s -> clamp(0.5 + level * (s - 0.5)).
Image apply_distortion(const Image &image, const DistortionSpec &spec);

} // namespace gmsd

#endif
