#include "mtad/image.hpp"

#include <algorithm>
#include <cmath>

namespace mtad {

void validate_image(const ImageTensor& img) {
    if (img.h < 1 || img.w < 1)
        throw std::invalid_argument("image: H and W must be >= 1");
    if (img.c != 1 && img.c != 3)
        throw std::invalid_argument("image: C must be 1 or 3, got " + std::to_string(img.c));
    if (img.data.size() != static_cast<size_t>(img.h) * img.w * img.c)
        throw std::invalid_argument("image: data size does not match H*W*C");
    for (float v : img.data) {
        if (!std::isfinite(v) || v < 0.0f || v > 1.0f)
            throw std::invalid_argument("image: pixel value outside [0,1]");
    }
}

ImageTensor resize_bilinear(const ImageTensor& img, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1) throw std::invalid_argument("resize: target must be >= 1");
    if (out_h == img.h && out_w == img.w) return img;
    ImageTensor out(out_h, out_w, img.c);
    const float sy = static_cast<float>(img.h) / out_h;
    const float sx = static_cast<float>(img.w) / out_w;
    for (int y = 0; y < out_h; ++y) {
        // pixel-center alignment
        float fy = (y + 0.5f) * sy - 0.5f;
        fy = std::clamp(fy, 0.0f, static_cast<float>(img.h - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, img.h - 1);
        const float wy = fy - y0;
        for (int x = 0; x < out_w; ++x) {
            float fx = (x + 0.5f) * sx - 0.5f;
            fx = std::clamp(fx, 0.0f, static_cast<float>(img.w - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, img.w - 1);
            const float wx = fx - x0;
            for (int ch = 0; ch < img.c; ++ch) {
                const float top = img.at(y0, x0, ch) * (1 - wx) + img.at(y0, x1, ch) * wx;
                const float bot = img.at(y1, x0, ch) * (1 - wx) + img.at(y1, x1, ch) * wx;
                out.at(y, x, ch) = std::clamp(top * (1 - wy) + bot * wy, 0.0f, 1.0f);
            }
        }
    }
    return out;
}

ImageTensor to_grayscale(const ImageTensor& img) {
    if (img.c == 1) return img;
    ImageTensor out(img.h, img.w, 1);
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x)
            out.at(y, x, 0) = std::clamp(0.299f * img.at(y, x, 0) + 0.587f * img.at(y, x, 1) +
                                             0.114f * img.at(y, x, 2),
                                         0.0f, 1.0f);
    return out;
}

std::vector<float> channel_means(const ImageTensor& img) {
    std::vector<double> acc(img.c, 0.0);
    for (int y = 0; y < img.h; ++y)
        for (int x = 0; x < img.w; ++x)
            for (int ch = 0; ch < img.c; ++ch) acc[ch] += img.at(y, x, ch);
    std::vector<float> out(img.c);
    const double n = static_cast<double>(img.h) * img.w;
    for (int ch = 0; ch < img.c; ++ch) out[ch] = static_cast<float>(acc[ch] / n);
    return out;
}

}  // namespace mtad
