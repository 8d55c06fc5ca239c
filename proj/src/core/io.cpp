#include "core/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace treering {

unsigned char pixel_to_u8(double v) {
    const double s = std::lround((v + 1.0) * 127.5);
    if (s <= 0.0) return 0;
    if (s >= 255.0) return 255;
    return static_cast<unsigned char>(s);
}

double u8_to_pixel(unsigned char u) { return static_cast<double>(u) / 127.5 - 1.0; }

Tensor quantize_pixels(const Tensor& chw) {
    Tensor out = chw;
    for (std::int64_t i = 0; i < out.size(); ++i) out[i] = u8_to_pixel(pixel_to_u8(out[i]));
    return out;
}

void write_image_ppm(const std::string& path, const Tensor& chw) {
    if (chw.rank() != 3) throw std::invalid_argument("write_image_ppm: expected CHW tensor");
    const int C = chw.dim(0), H = chw.dim(1), W = chw.dim(2);
    if (C != 1 && C != 3) throw std::invalid_argument("write_image_ppm: 1 or 3 channels supported");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image: " + path);
    out << (C == 3 ? "P6" : "P5") << "\n" << W << " " << H << "\n255\n";
    std::vector<unsigned char> row(static_cast<size_t>(W) * C);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            for (int c = 0; c < C; ++c) row[static_cast<size_t>(x) * C + c] = pixel_to_u8(chw.at(c, y, x));
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw std::runtime_error("short write: " + path);
}

namespace {
int next_pnm_int(std::istream& in) {
    int c = in.get();
    while (c != EOF && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        }
        c = in.get();
    }
    int v = 0;
    bool any = false;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        any = true;
        c = in.get();
    }
    if (!any) throw std::runtime_error("malformed PNM header");
    return v;
}
}  // namespace

Tensor read_image_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read image: " + path);
    char p = 0, n = 0;
    in.get(p);
    in.get(n);
    int C = 0;
    if (p == 'P' && n == '6') C = 3;
    else if (p == 'P' && n == '5') C = 1;
    else throw std::runtime_error("unsupported PNM type in " + path);
    const int W = next_pnm_int(in);
    const int H = next_pnm_int(in);
    const int maxv = next_pnm_int(in);
    if (maxv != 255) throw std::runtime_error("only 8-bit PNM supported: " + path);
    std::vector<unsigned char> buf(static_cast<size_t>(W) * H * C);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw std::runtime_error("truncated PNM: " + path);
    Tensor t({C, H, W});
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            for (int c = 0; c < C; ++c) t.at(c, y, x) = u8_to_pixel(buf[(static_cast<size_t>(y) * W + x) * C + c]);
        }
    }
    return t;
}

void write_tensor(const std::string& path, const Tensor& t) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write tensor: " + path);
    out.write("TRTEN1\n", 7);
    const std::uint32_t rank = static_cast<std::uint32_t>(t.rank());
    out.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
    for (int i = 0; i < t.rank(); ++i) {
        const std::int32_t d = t.dim(i);
        out.write(reinterpret_cast<const char*>(&d), sizeof(d));
    }
    out.write(reinterpret_cast<const char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (!out) throw std::runtime_error("short write: " + path);
}

Tensor read_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read tensor: " + path);
    char magic[7];
    in.read(magic, 7);
    if (in.gcount() != 7 || std::string(magic, 7) != "TRTEN1\n") throw std::runtime_error("bad tensor file: " + path);
    std::uint32_t rank = 0;
    in.read(reinterpret_cast<char*>(&rank), sizeof(rank));
    if (rank > 8) throw std::runtime_error("bad tensor rank in " + path);
    std::vector<int> shape(rank);
    for (std::uint32_t i = 0; i < rank; ++i) {
        std::int32_t d = 0;
        in.read(reinterpret_cast<char*>(&d), sizeof(d));
        shape[i] = d;
    }
    Tensor t(shape);
    in.read(reinterpret_cast<char*>(t.data()), static_cast<std::streamsize>(t.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(t.size() * sizeof(double)))
        throw std::runtime_error("truncated tensor file: " + path);
    return t;
}

void ensure_dir(const std::string& path) { std::filesystem::create_directories(path); }

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::string(buf);
}

}  // namespace treering
