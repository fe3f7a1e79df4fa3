#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtad {

// A single image: H x W x C interleaved floats in [0,1].
struct ImageTensor {
    int h = 0;
    int w = 0;
    int c = 0;
    std::vector<float> data;  // size h*w*c, row-major, channel interleaved

    ImageTensor() = default;
    ImageTensor(int h_, int w_, int c_, float fill = 0.0f)
        : h(h_), w(w_), c(c_), data(static_cast<size_t>(h_) * w_ * c_, fill) {}

    float& at(int y, int x, int ch) {
        return data[(static_cast<size_t>(y) * w + x) * c + ch];
    }
    float at(int y, int x, int ch) const {
        return data[(static_cast<size_t>(y) * w + x) * c + ch];
    }
    size_t size() const { return data.size(); }

    bool operator==(const ImageTensor& o) const {
        return h == o.h && w == o.w && c == o.c && data == o.data;
    }
};

// Throws std::invalid_argument unless the image satisfies the domain
// invariants: H,W >= 1, C in {1,3}, all values finite in [0,1].
void validate_image(const ImageTensor& img);

// Bilinear resize to (out_h, out_w). Identity sizes return a copy.
ImageTensor resize_bilinear(const ImageTensor& img, int out_h, int out_w);

// Rec.601 luminance conversion; C=1 input returned unchanged.
ImageTensor to_grayscale(const ImageTensor& img);

// Per-channel mean of an image.
std::vector<float> channel_means(const ImageTensor& img);

}  // namespace mtad
