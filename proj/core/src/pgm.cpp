#include "rcdt/pgm.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace rcdt {

namespace {

bool is_pgm_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

class HeaderScanner {
public:
    HeaderScanner(const std::vector<unsigned char>& bytes, const std::string& name)
        : bytes_(bytes), name_(name) {}

    // Next header token, skipping whitespace and # comments.
    std::string token() {
        for (;;) {
            while (pos_ < bytes_.size() && is_pgm_space(bytes_[pos_])) ++pos_;
            if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
                continue;
            }
            break;
        }
        std::size_t start = pos_;
        while (pos_ < bytes_.size() && !is_pgm_space(bytes_[pos_]) && bytes_[pos_] != '#') ++pos_;
        if (start == pos_) {
            throw IoError(IoErrc::malformed_header, name_ + ": header ended unexpectedly");
        }
        return std::string(bytes_.begin() + static_cast<std::ptrdiff_t>(start),
                           bytes_.begin() + static_cast<std::ptrdiff_t>(pos_));
    }

    std::size_t number(const char* what) {
        std::string t = token();
        std::size_t value = 0;
        if (t.empty() || t.size() > 9) {
            throw IoError(IoErrc::malformed_header, name_ + ": bad " + what + " field '" + t + "'");
        }
        for (char c : t) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                throw IoError(IoErrc::malformed_header,
                              name_ + ": bad " + what + " field '" + t + "'");
            }
            value = value * 10 + static_cast<std::size_t>(c - '0');
        }
        return value;
    }

    // The single whitespace byte separating the header from the payload.
    void payload_separator() {
        if (pos_ >= bytes_.size() || !is_pgm_space(bytes_[pos_])) {
            throw IoError(IoErrc::malformed_header,
                          name_ + ": missing whitespace before the pixel payload");
        }
        ++pos_;
    }

    std::size_t position() const { return pos_; }

private:
    const std::vector<unsigned char>& bytes_;
    const std::string& name_;
    std::size_t pos_ = 0;
};

}  // namespace

Pgm load_pgm(const std::filesystem::path& path) {
    std::string name = path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(IoErrc::missing_file, name + ": cannot open file");
    }
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());

    if (bytes.size() < 2 || bytes[0] != 'P') {
        throw IoError(IoErrc::malformed_header, name + ": not a Netpbm file");
    }
    if (bytes[1] != '5') {
        if (bytes[1] >= '1' && bytes[1] <= '7') {
            throw IoError(IoErrc::unsupported_format,
                          name + ": magic P" + std::string(1, static_cast<char>(bytes[1])) +
                              " is not supported, only binary PGM (P5)");
        }
        throw IoError(IoErrc::malformed_header, name + ": not a Netpbm file");
    }

    HeaderScanner scanner(bytes, name);
    scanner.token();  // magic, already checked
    std::size_t width = scanner.number("width");
    std::size_t height = scanner.number("height");
    std::size_t maxval = scanner.number("maxval");
    if (width == 0 || height == 0) {
        throw IoError(IoErrc::malformed_header, name + ": image dimensions must be positive");
    }
    if (maxval == 0 || maxval > 65535) {
        throw IoError(IoErrc::malformed_header,
                      name + ": maxval " + std::to_string(maxval) + " outside [1, 65535]");
    }
    scanner.payload_separator();

    std::size_t samples = width * height;
    std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
    std::size_t need = samples * bytes_per_sample;
    std::size_t have = bytes.size() - scanner.position();
    if (have < need) {
        throw IoError(IoErrc::truncated_payload, name + ": payload holds " + std::to_string(have) +
                                                     " bytes, expected " + std::to_string(need));
    }

    std::vector<double> pixels(samples);
    const unsigned char* p = bytes.data() + scanner.position();
    if (bytes_per_sample == 1) {
        for (std::size_t i = 0; i < samples; ++i) {
            pixels[i] = static_cast<double>(p[i]);
        }
    } else {
        for (std::size_t i = 0; i < samples; ++i) {
            std::uint16_t v = static_cast<std::uint16_t>(p[2 * i] << 8 | p[2 * i + 1]);
            pixels[i] = static_cast<double>(v);
        }
    }
    return Pgm{GrayImage(height, width, std::move(pixels)), static_cast<int>(maxval)};
}

GrayImage load_image(const std::filesystem::path& path) {
    return load_pgm(path).image;
}

void save_pgm(const GrayImage& image, const std::filesystem::path& path, int max_value) {
    if (max_value < 1 || max_value > 65535) {
        throw std::invalid_argument("PGM maxval " + std::to_string(max_value) +
                                    " outside [1, 65535]");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(IoErrc::write_failure, path.string() + ": cannot open for writing");
    }
    out << "P5\n" << image.width() << " " << image.height() << "\n" << max_value << "\n";
    std::vector<unsigned char> payload;
    bool wide = max_value > 255;
    payload.reserve(image.pixels().size() * (wide ? 2 : 1));
    for (double v : image.pixels()) {
        long long q = std::llround(v);
        if (q < 0) q = 0;
        if (q > max_value) q = max_value;
        if (wide) {
            payload.push_back(static_cast<unsigned char>(q >> 8));
            payload.push_back(static_cast<unsigned char>(q & 0xff));
        } else {
            payload.push_back(static_cast<unsigned char>(q));
        }
    }
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    out.flush();
    if (!out) {
        throw IoError(IoErrc::write_failure, path.string() + ": write failed");
    }
}

}  // namespace rcdt
