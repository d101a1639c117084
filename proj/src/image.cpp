#include "unfolder/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unfolder {

Image Image::make(int w, int h, int ch, std::uint8_t fill) {
    if (w < 0 || h < 0 || (ch != 1 && ch != 3)) throw std::invalid_argument("bad image shape");
    Image img;
    img.width = w;
    img.height = h;
    img.channels = ch;
    img.data.assign(static_cast<std::size_t>(w) * h * ch, fill);
    return img;
}

double Image::sample(double x, double y, int c) const {
    const double u = x - 0.5;
    const double v = y - 0.5;
    int x0 = static_cast<int>(std::floor(u));
    int y0 = static_cast<int>(std::floor(v));
    const double fx = u - x0;
    const double fy = v - y0;
    const auto cx = [&](int i) { return std::clamp(i, 0, width - 1); };
    const auto cy = [&](int i) { return std::clamp(i, 0, height - 1); };
    const double v00 = at(cy(y0), cx(x0), c);
    const double v01 = at(cy(y0), cx(x0 + 1), c);
    const double v10 = at(cy(y0 + 1), cx(x0), c);
    const double v11 = at(cy(y0 + 1), cx(x0 + 1), c);
    return (v00 * (1 - fx) + v01 * fx) * (1 - fy) + (v10 * (1 - fx) + v11 * fx) * fy;
}

EdgeMap EdgeMap::make(Orientation o, int w, int h) {
    EdgeMap em;
    em.orientation = o;
    em.width = w;
    em.height = h;
    em.data.assign(static_cast<std::size_t>(w) * h, 0.0f);
    return em;
}

double EdgeMap::sample(double x, double y) const {
    const double u = x - 0.5;
    const double v = y - 0.5;
    const int x0 = static_cast<int>(std::floor(u));
    const int y0 = static_cast<int>(std::floor(v));
    const double fx = u - x0;
    const double fy = v - y0;
    auto val = [&](int yy, int xx) -> double {
        if (xx < 0 || yy < 0 || xx >= width || yy >= height) return 0.0;
        return at(yy, xx);
    };
    return (val(y0, x0) * (1 - fx) + val(y0, x0 + 1) * fx) * (1 - fy) +
           (val(y0 + 1, x0) * (1 - fx) + val(y0 + 1, x0 + 1) * fx) * fy;
}

EdgeMap EdgeMap::crop_rows(int y0, int y1) const {
    EdgeMap out = make(orientation, width, y1 - y0);
    std::copy(data.begin() + static_cast<std::size_t>(y0) * width,
              data.begin() + static_cast<std::size_t>(y1) * width, out.data.begin());
    return out;
}

std::size_t EdgeMap::nonzero_count() const {
    std::size_t n = 0;
    for (float v : data)
        if (v != 0.0f) ++n;
    return n;
}

Image to_grayscale(const Image& img) {
    if (img.channels == 1) return img;
    Image out = Image::make(img.width, img.height, 1);
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = img.data[i * 3 + 0];
        const double g = img.data[i * 3 + 1];
        const double b = img.data[i * 3 + 2];
        out.data[i] = static_cast<std::uint8_t>(std::lround(0.299 * r + 0.587 * g + 0.114 * b));
    }
    return out;
}

Image resize_bilinear(const Image& img, int out_w, int out_h) {
    Image out = Image::make(out_w, out_h, img.channels);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                const double v = img.sample((x + 0.5) * sx, (y + 0.5) * sy, c);
                out.at(y, x, c) = static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
            }
        }
    }
    return out;
}

Image box_reduce(const Image& img, int k) {
    const int w = img.width / k;
    const int h = img.height / k;
    Image out = Image::make(w, h, img.channels);
    const double inv = 1.0 / (k * k);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                int sum = 0;
                for (int dy = 0; dy < k; ++dy)
                    for (int dx = 0; dx < k; ++dx) sum += img.at(y * k + dy, x * k + dx, c);
                out.at(y, x, c) = static_cast<std::uint8_t>(std::lround(sum * inv));
            }
        }
    }
    return out;
}

std::pair<Image, WorkScale> downscale_to_work(const Image& gray, int target_long) {
    const int longer = std::max(gray.width, gray.height);
    if (longer <= target_long) return {gray, WorkScale{}};

    const double f = static_cast<double>(target_long) / longer;
    const int target_w = std::max(1, static_cast<int>(std::lround(gray.width * f)));
    const int target_h = std::max(1, static_cast<int>(std::lround(gray.height * f)));

    const int k = std::max(1, longer / target_long);
    Image mid = k >= 2 ? box_reduce(gray, k) : gray;
    Image out = (mid.width == target_w && mid.height == target_h)
                    ? mid
                    : resize_bilinear(mid, target_w, target_h);
    WorkScale s;
    s.sx = static_cast<double>(target_w) / (static_cast<double>(mid.width) * k);
    s.sy = static_cast<double>(target_h) / (static_cast<double>(mid.height) * k);
    return {std::move(out), s};
}

EdgeMap smooth(const EdgeMap& em, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) k /= sum;

    const int w = em.width, h = em.height;
    EdgeMap tmp = EdgeMap::make(em.orientation, w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * em.at(y, std::clamp(x + i, 0, w - 1));
            tmp.at(y, x) = static_cast<float>(acc);
        }
    }
    EdgeMap out = EdgeMap::make(em.orientation, w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * tmp.at(std::clamp(y + i, 0, h - 1), x);
            out.at(y, x) = static_cast<float>(acc);
        }
    }
    return out;
}

}  // namespace unfolder
