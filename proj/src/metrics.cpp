#include "unfolder/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace unfolder {

std::vector<char32_t> decode_utf8(const std::string& s) {
    std::vector<char32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = s[i];
        char32_t cp = 0;
        int extra = 0;
        if (c < 0x80) {
            cp = c;
        } else if ((c >> 5) == 0x6) {
            cp = c & 0x1f;
            extra = 1;
        } else if ((c >> 4) == 0xe) {
            cp = c & 0x0f;
            extra = 2;
        } else if ((c >> 3) == 0x1e) {
            cp = c & 0x07;
            extra = 3;
        } else {
            cp = 0xfffd;  // invalid lead byte
        }
        ++i;
        for (int k = 0; k < extra && i < s.size(); ++k, ++i) {
            const unsigned char cc = s[i];
            if ((cc >> 6) != 0x2) break;
            cp = (cp << 6) | (cc & 0x3f);
        }
        out.push_back(cp);
    }
    return out;
}

std::int64_t levenshtein(const std::string& a, const std::string& b) {
    const std::vector<char32_t> u = decode_utf8(a);
    const std::vector<char32_t> v = decode_utf8(b);
    const std::size_t n = u.size(), m = v.size();
    std::vector<std::int64_t> prev(m + 1), cur(m + 1);
    std::iota(prev.begin(), prev.end(), 0);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<std::int64_t>(i);
        for (std::size_t j = 1; j <= m; ++j) {
            const std::int64_t sub = prev[j - 1] + (u[i - 1] == v[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

namespace {

struct Plane {
    int w = 0, h = 0;
    std::vector<double> v;

    double at(int y, int x) const { return v[static_cast<std::size_t>(y) * w + x]; }
    double& at(int y, int x) { return v[static_cast<std::size_t>(y) * w + x]; }
};

Plane from_image(const Image& img) {
    Plane p;
    p.w = img.width;
    p.h = img.height;
    p.v.resize(static_cast<std::size_t>(p.w) * p.h);
    for (int y = 0; y < p.h; ++y)
        for (int x = 0; x < p.w; ++x) p.at(y, x) = img.at(y, x);
    return p;
}

// Separable valid-region Gaussian filtering.
Plane gauss_valid(const Plane& in, const std::vector<double>& k) {
    const int r = static_cast<int>(k.size()) / 2;
    Plane mid;
    mid.w = in.w - 2 * r;
    mid.h = in.h;
    mid.v.resize(static_cast<std::size_t>(mid.w) * mid.h);
    for (int y = 0; y < in.h; ++y) {
        for (int x = 0; x < mid.w; ++x) {
            double s = 0.0;
            for (int i = 0; i < static_cast<int>(k.size()); ++i) s += k[i] * in.at(y, x + i);
            mid.at(y, x) = s;
        }
    }
    Plane out;
    out.w = mid.w;
    out.h = in.h - 2 * r;
    out.v.resize(static_cast<std::size_t>(out.w) * out.h);
    for (int y = 0; y < out.h; ++y) {
        for (int x = 0; x < out.w; ++x) {
            double s = 0.0;
            for (int i = 0; i < static_cast<int>(k.size()); ++i) s += k[i] * mid.at(y + i, x);
            out.at(y, x) = s;
        }
    }
    return out;
}

Plane downsample2(const Plane& in) {
    Plane out;
    out.w = in.w / 2;
    out.h = in.h / 2;
    out.v.resize(static_cast<std::size_t>(out.w) * out.h);
    for (int y = 0; y < out.h; ++y) {
        for (int x = 0; x < out.w; ++x) {
            out.at(y, x) = 0.25 * (in.at(2 * y, 2 * x) + in.at(2 * y, 2 * x + 1) +
                                   in.at(2 * y + 1, 2 * x) + in.at(2 * y + 1, 2 * x + 1));
        }
    }
    return out;
}

}  // namespace

double ms_ssim(const Image& a, const Image& b) {
    if (a.channels != 1 || b.channels != 1)
        throw std::invalid_argument("grayscale images required");
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("dimension mismatch");
    if (std::min(a.width, a.height) < 176)
        throw std::invalid_argument("min side must be >= 176 for 5 scales");

    constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
    constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);
    const std::array<double, 5> weights{0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

    std::vector<double> kernel(11);
    {
        double sum = 0.0;
        for (int i = 0; i < 11; ++i) {
            const double d = i - 5;
            kernel[i] = std::exp(-0.5 * d * d / (1.5 * 1.5));
            sum += kernel[i];
        }
        for (double& k : kernel) k /= sum;
    }

    Plane x = from_image(a);
    Plane y = from_image(b);
    double result = 1.0;
    for (int scale = 0; scale < 5; ++scale) {
        Plane mu_x = gauss_valid(x, kernel);
        Plane mu_y = gauss_valid(y, kernel);

        Plane xx = x, yy = y, xy = x;
        for (std::size_t i = 0; i < x.v.size(); ++i) {
            xy.v[i] = x.v[i] * y.v[i];
            xx.v[i] = x.v[i] * x.v[i];
            yy.v[i] = y.v[i] * y.v[i];
        }
        const Plane mxx = gauss_valid(xx, kernel);
        const Plane myy = gauss_valid(yy, kernel);
        const Plane mxy = gauss_valid(xy, kernel);

        double cs_sum = 0.0;
        double ssim_sum = 0.0;
        const std::size_t n = mu_x.v.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double m1 = mu_x.v[i], m2 = mu_y.v[i];
            const double s1 = mxx.v[i] - m1 * m1;
            const double s2 = myy.v[i] - m2 * m2;
            const double s12 = mxy.v[i] - m1 * m2;
            const double cs = (2.0 * s12 + kC2) / (s1 + s2 + kC2);
            cs_sum += cs;
            ssim_sum += cs * (2.0 * m1 * m2 + kC1) / (m1 * m1 + m2 * m2 + kC1);
        }
        const double mean_cs = cs_sum / static_cast<double>(n);
        const double mean_ssim = ssim_sum / static_cast<double>(n);
        if (scale < 4) {
            result *= std::pow(std::max(mean_cs, 0.0), weights[scale]);
            x = downsample2(x);
            y = downsample2(y);
        } else {
            result *= std::pow(std::max(mean_ssim, 0.0), weights[scale]);
        }
    }
    return std::clamp(result, 0.0, 1.0);
}

}  // namespace unfolder
