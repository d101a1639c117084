#include "unfolder/io.hpp"

#include <stdexcept>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace unfolder {

Image load_image(const std::string& path) {
    cv::Mat m = cv::imread(path, cv::IMREAD_UNCHANGED);
    if (m.empty()) throw std::runtime_error("cannot decode image: " + path);
    if (m.depth() != CV_8U) {
        cv::Mat tmp;
        m.convertTo(tmp, CV_8U, m.depth() == CV_16U ? 1.0 / 257.0 : 1.0);
        m = tmp;
    }
    const int in_ch = m.channels();
    if (in_ch != 1 && in_ch != 3 && in_ch != 4)
        throw std::runtime_error("unsupported channel count in " + path);
    const int ch = in_ch == 1 ? 1 : 3;
    Image img = Image::make(m.cols, m.rows, ch);
    for (int y = 0; y < m.rows; ++y) {
        const std::uint8_t* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < m.cols; ++x) {
            if (ch == 1) {
                img.at(y, x) = row[x];
            } else {
                img.at(y, x, 0) = row[x * in_ch + 2];  // BGR(A) -> RGB
                img.at(y, x, 1) = row[x * in_ch + 1];
                img.at(y, x, 2) = row[x * in_ch + 0];
            }
        }
    }
    return img;
}

void save_image(const std::string& path, const Image& img) {
    cv::Mat m(img.height, img.width, img.channels == 1 ? CV_8UC1 : CV_8UC3);
    for (int y = 0; y < img.height; ++y) {
        std::uint8_t* row = m.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width; ++x) {
            if (img.channels == 1) {
                row[x] = img.at(y, x);
            } else {
                row[x * 3 + 0] = img.at(y, x, 2);  // RGB -> BGR
                row[x * 3 + 1] = img.at(y, x, 1);
                row[x * 3 + 2] = img.at(y, x, 0);
            }
        }
    }
    if (!cv::imwrite(path, m)) throw std::runtime_error("cannot write image: " + path);
}

}  // namespace unfolder
