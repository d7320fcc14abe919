#include "rshc/image_io.hpp"

#include <zlib.h>

#include <array>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace rshc {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed for " + path.string());
    }
    return bytes;
}

void write_file(const std::filesystem::path& path, const std::uint8_t* data, std::size_t n) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

// ---------------------------------------------------------------------------
// PNM (P5 / P6)
// ---------------------------------------------------------------------------

struct PnmHeader {
    int type = 0;  // 5 or 6
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::size_t data_offset = 0;
};

PnmHeader parse_pnm_header(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) -> void {
        throw IoError(name + ": " + why);
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        fail("not a binary PGM/PPM file");
    }
    PnmHeader h;
    h.type = bytes[1] - '0';
    pos = 2;
    int fields[3];
    for (int f = 0; f < 3; ++f) {
        // skip whitespace and '#' comments
        while (pos < bytes.size()) {
            std::uint8_t c = bytes[pos];
            if (c == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(c)) {
                ++pos;
            } else {
                break;
            }
        }
        long v = 0;
        bool any = false;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            any = true;
            ++pos;
            if (v > 1'000'000'000) fail("header value out of range");
        }
        if (!any) fail("malformed header");
        fields[f] = static_cast<int>(v);
    }
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) fail("malformed header");
    ++pos;  // single whitespace before raster
    h.width = fields[0];
    h.height = fields[1];
    h.maxval = fields[2];
    h.data_offset = pos;
    if (h.width <= 0 || h.height <= 0) fail("non-positive dimensions");
    if (h.maxval <= 0 || h.maxval > 65535) fail("unsupported maxval");
    return h;
}

// ---------------------------------------------------------------------------
// PNG. Minimal codec: non-interlaced, bit depth 8/16, gray / RGB / RGBA.
// Writing uses filter type 0 on every row.
// ---------------------------------------------------------------------------

constexpr std::array<std::uint8_t, 8> kPngSignature = {137, 80, 78, 71, 13, 10, 26, 10};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void append_chunk(std::vector<std::uint8_t>& out, const char tag[4],
                  const std::uint8_t* data, std::size_t n) {
    put_u32(out, static_cast<std::uint32_t>(n));
    std::size_t tag_pos = out.size();
    out.insert(out.end(), tag, tag + 4);
    out.insert(out.end(), data, data + n);
    std::uint32_t crc = crc32(0, out.data() + tag_pos, static_cast<uInt>(4 + n));
    put_u32(out, crc);
}

std::vector<std::uint8_t> zlib_deflate(const std::vector<std::uint8_t>& in) {
    uLongf bound = compressBound(static_cast<uLong>(in.size()));
    std::vector<std::uint8_t> out(bound);
    if (compress2(out.data(), &bound, in.data(), static_cast<uLong>(in.size()),
                  Z_DEFAULT_COMPRESSION) != Z_OK) {
        throw IoError("zlib compression failed");
    }
    out.resize(bound);
    return out;
}

std::vector<std::uint8_t> zlib_inflate(const std::uint8_t* data, std::size_t n,
                                       std::size_t expected) {
    std::vector<std::uint8_t> out(expected);
    uLongf out_len = static_cast<uLongf>(expected);
    int rc = uncompress(out.data(), &out_len, data, static_cast<uLong>(n));
    if (rc != Z_OK || out_len != expected) {
        throw IoError("zlib decompression failed");
    }
    return out;
}

// channels per pixel and bytes per sample for the supported color types
int png_channels(int color_type) {
    switch (color_type) {
        case 0: return 1;  // gray
        case 2: return 3;  // rgb
        case 4: return 2;  // gray + alpha
        case 6: return 4;  // rgba
        default: return 0;
    }
}

struct DecodedPng {
    int width = 0;
    int height = 0;
    int bit_depth = 0;
    int color_type = 0;
    std::vector<std::uint8_t> scanlines;  // unfiltered raw samples, row-major
};

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

DecodedPng decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
    auto fail = [&](const std::string& why) -> void {
        throw IoError(name + ": " + why);
    };
    if (bytes.size() < 8 || !std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
        fail("not a PNG file");
    }
    DecodedPng png;
    std::vector<std::uint8_t> idat;
    std::size_t pos = 8;
    bool saw_ihdr = false, saw_iend = false;
    while (pos + 12 <= bytes.size() && !saw_iend) {
        std::uint32_t len = get_u32(&bytes[pos]);
        if (pos + 12 + len > bytes.size()) fail("truncated chunk");
        const std::uint8_t* tag = &bytes[pos + 4];
        const std::uint8_t* data = &bytes[pos + 8];
        std::uint32_t expect_crc = get_u32(&bytes[pos + 8 + len]);
        std::uint32_t actual_crc = crc32(0, tag, static_cast<uInt>(4 + len));
        if (expect_crc != actual_crc) fail("chunk CRC mismatch");
        if (std::memcmp(tag, "IHDR", 4) == 0) {
            if (len != 13) fail("bad IHDR");
            png.width = static_cast<int>(get_u32(data));
            png.height = static_cast<int>(get_u32(data + 4));
            png.bit_depth = data[8];
            png.color_type = data[9];
            int interlace = data[12];
            if (png.width <= 0 || png.height <= 0) fail("bad dimensions");
            if (interlace != 0) fail("interlaced PNG not supported");
            if (png.bit_depth != 8 && png.bit_depth != 16) fail("unsupported bit depth");
            if (png_channels(png.color_type) == 0) fail("unsupported color type");
            saw_ihdr = true;
        } else if (std::memcmp(tag, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(tag, "IEND", 4) == 0) {
            saw_iend = true;
        }
        // ancillary chunks are skipped
        pos += 12 + len;
    }
    if (!saw_ihdr || !saw_iend) fail("missing IHDR/IEND");

    int channels = png_channels(png.color_type);
    int bytes_per_sample = png.bit_depth / 8;
    std::size_t stride = static_cast<std::size_t>(png.width) * channels * bytes_per_sample;
    std::size_t raw_size = (stride + 1) * png.height;
    std::vector<std::uint8_t> raw = zlib_inflate(idat.data(), idat.size(), raw_size);

    // undo per-row filters
    png.scanlines.assign(stride * png.height, 0);
    int bpp = channels * bytes_per_sample;  // filter unit
    for (int y = 0; y < png.height; ++y) {
        const std::uint8_t* src = &raw[(stride + 1) * y];
        std::uint8_t filter = src[0];
        const std::uint8_t* cur_in = src + 1;
        std::uint8_t* cur = &png.scanlines[stride * y];
        const std::uint8_t* prev = y > 0 ? &png.scanlines[stride * (y - 1)] : nullptr;
        for (std::size_t i = 0; i < stride; ++i) {
            int a = i >= static_cast<std::size_t>(bpp) ? cur[i - bpp] : 0;
            int b = prev ? prev[i] : 0;
            int c = (prev && i >= static_cast<std::size_t>(bpp)) ? prev[i - bpp] : 0;
            int x = cur_in[i];
            switch (filter) {
                case 0: break;
                case 1: x += a; break;
                case 2: x += b; break;
                case 3: x += (a + b) / 2; break;
                case 4: x += paeth(a, b, c); break;
                default: fail("unknown filter type");
            }
            cur[i] = static_cast<std::uint8_t>(x & 0xff);
        }
    }
    return png;
}

std::uint16_t png_sample(const DecodedPng& png, std::size_t sample_index) {
    if (png.bit_depth == 8) {
        return png.scanlines[sample_index];
    }
    return static_cast<std::uint16_t>((png.scanlines[2 * sample_index] << 8) |
                                      png.scanlines[2 * sample_index + 1]);
}

void encode_png(const std::filesystem::path& path, int width, int height, int color_type,
                int bit_depth, const std::vector<std::uint8_t>& samples) {
    int channels = png_channels(color_type);
    std::size_t stride = static_cast<std::size_t>(width) * channels * (bit_depth / 8);
    std::vector<std::uint8_t> raw;
    raw.reserve((stride + 1) * height);
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);  // filter type none
        raw.insert(raw.end(), samples.begin() + stride * y, samples.begin() + stride * (y + 1));
    }
    std::vector<std::uint8_t> compressed = zlib_deflate(raw);

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kPngSignature.begin(), kPngSignature.end());
    std::uint8_t ihdr[13];
    ihdr[0] = static_cast<std::uint8_t>(width >> 24);
    ihdr[1] = static_cast<std::uint8_t>(width >> 16);
    ihdr[2] = static_cast<std::uint8_t>(width >> 8);
    ihdr[3] = static_cast<std::uint8_t>(width);
    ihdr[4] = static_cast<std::uint8_t>(height >> 24);
    ihdr[5] = static_cast<std::uint8_t>(height >> 16);
    ihdr[6] = static_cast<std::uint8_t>(height >> 8);
    ihdr[7] = static_cast<std::uint8_t>(height);
    ihdr[8] = static_cast<std::uint8_t>(bit_depth);
    ihdr[9] = static_cast<std::uint8_t>(color_type);
    ihdr[10] = 0;  // compression
    ihdr[11] = 0;  // filter method
    ihdr[12] = 0;  // no interlace
    append_chunk(out, "IHDR", ihdr, 13);
    append_chunk(out, "IDAT", compressed.data(), compressed.size());
    append_chunk(out, "IEND", nullptr, 0);
    write_file(path, out.data(), out.size());
}

bool looks_like_png(const std::vector<std::uint8_t>& bytes) {
    return bytes.size() >= 8 &&
           std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin());
}

// Generic decode into 16-bit RGB triples plus the source sample range.
struct AnyImage {
    int width = 0;
    int height = 0;
    int source_channels = 0;
    int source_max = 255;
    std::vector<std::array<std::uint16_t, 3>> pixels;
};

AnyImage load_any(const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes = read_file(path);
    std::string name = path.string();
    AnyImage img;
    if (looks_like_png(bytes)) {
        DecodedPng png = decode_png(bytes, name);
        int channels = png_channels(png.color_type);
        img.width = png.width;
        img.height = png.height;
        img.source_channels = channels >= 3 ? 3 : 1;
        img.source_max = png.bit_depth == 16 ? 65535 : 255;
        img.pixels.resize(static_cast<std::size_t>(png.width) * png.height);
        for (std::size_t p = 0; p < img.pixels.size(); ++p) {
            std::size_t base = p * channels;
            std::uint16_t v0 = png_sample(png, base);
            if (channels >= 3) {
                img.pixels[p] = {v0, png_sample(png, base + 1), png_sample(png, base + 2)};
            } else {
                img.pixels[p] = {v0, v0, v0};
            }
        }
        return img;
    }
    PnmHeader h = parse_pnm_header(bytes, name);
    int channels = h.type == 6 ? 3 : 1;
    int bytes_per_sample = h.maxval > 255 ? 2 : 1;
    std::size_t need = static_cast<std::size_t>(h.width) * h.height * channels * bytes_per_sample;
    if (bytes.size() - h.data_offset < need) {
        throw IoError(name + ": truncated raster data");
    }
    img.width = h.width;
    img.height = h.height;
    img.source_channels = channels;
    img.source_max = h.maxval;
    img.pixels.resize(static_cast<std::size_t>(h.width) * h.height);
    const std::uint8_t* d = bytes.data() + h.data_offset;
    auto next_sample = [&]() -> std::uint16_t {
        if (bytes_per_sample == 2) {
            std::uint16_t v = static_cast<std::uint16_t>((d[0] << 8) | d[1]);
            d += 2;
            return v;
        }
        return *d++;
    };
    for (std::size_t p = 0; p < img.pixels.size(); ++p) {
        std::uint16_t v0 = next_sample();
        if (channels == 3) {
            img.pixels[p] = {v0, next_sample(), next_sample()};
        } else {
            img.pixels[p] = {v0, v0, v0};
        }
    }
    return img;
}

std::uint8_t narrow8(std::uint16_t v, int source_max) {
    if (source_max <= 255) {
        return static_cast<std::uint8_t>(v);
    }
    return static_cast<std::uint8_t>(v >> 8);
}

}  // namespace

RgbImage load_rgb(const std::filesystem::path& path) {
    AnyImage img = load_any(path);
    RgbImage out(img.width, img.height);
    for (std::size_t p = 0; p < img.pixels.size(); ++p) {
        out[p] = Rgb8{narrow8(img.pixels[p][0], img.source_max),
                      narrow8(img.pixels[p][1], img.source_max),
                      narrow8(img.pixels[p][2], img.source_max)};
    }
    return out;
}

Grid<std::uint8_t> load_gray8(const std::filesystem::path& path) {
    AnyImage img = load_any(path);
    if (img.source_channels != 1) {
        throw IoError(path.string() + ": expected a single-channel image");
    }
    Grid<std::uint8_t> out(img.width, img.height);
    for (std::size_t p = 0; p < img.pixels.size(); ++p) {
        out[p] = narrow8(img.pixels[p][0], img.source_max);
    }
    return out;
}

Grid<std::uint16_t> load_gray16(const std::filesystem::path& path) {
    AnyImage img = load_any(path);
    if (img.source_channels != 1) {
        throw IoError(path.string() + ": expected a single-channel image");
    }
    Grid<std::uint16_t> out(img.width, img.height);
    for (std::size_t p = 0; p < img.pixels.size(); ++p) {
        out[p] = img.pixels[p][0];
    }
    return out;
}

void save_ppm(const RgbImage& image, const std::filesystem::path& path) {
    std::string header = "P6\n" + std::to_string(image.width()) + " " +
                         std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + image.size() * 3);
    for (std::size_t i = 0; i < image.size(); ++i) {
        out.push_back(image[i].r);
        out.push_back(image[i].g);
        out.push_back(image[i].b);
    }
    write_file(path, out.data(), out.size());
}

void save_pgm8(const Grid<std::uint8_t>& image, const std::filesystem::path& path) {
    std::string header = "P5\n" + std::to_string(image.width()) + " " +
                         std::to_string(image.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), image.data().begin(), image.data().end());
    write_file(path, out.data(), out.size());
}

void save_pgm16(const Grid<std::uint16_t>& image, const std::filesystem::path& path) {
    std::string header = "P5\n" + std::to_string(image.width()) + " " +
                         std::to_string(image.height()) + "\n65535\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + image.size() * 2);
    for (std::size_t i = 0; i < image.size(); ++i) {
        out.push_back(static_cast<std::uint8_t>(image[i] >> 8));
        out.push_back(static_cast<std::uint8_t>(image[i] & 0xff));
    }
    write_file(path, out.data(), out.size());
}

void save_png_rgb(const RgbImage& image, const std::filesystem::path& path) {
    std::vector<std::uint8_t> samples;
    samples.reserve(image.size() * 3);
    for (std::size_t i = 0; i < image.size(); ++i) {
        samples.push_back(image[i].r);
        samples.push_back(image[i].g);
        samples.push_back(image[i].b);
    }
    encode_png(path, image.width(), image.height(), 2, 8, samples);
}

void save_png_gray8(const Grid<std::uint8_t>& image, const std::filesystem::path& path) {
    encode_png(path, image.width(), image.height(), 0, 8, image.data());
}

void save_png_gray16(const Grid<std::uint16_t>& image, const std::filesystem::path& path) {
    std::vector<std::uint8_t> samples;
    samples.reserve(image.size() * 2);
    for (std::size_t i = 0; i < image.size(); ++i) {
        samples.push_back(static_cast<std::uint8_t>(image[i] >> 8));
        samples.push_back(static_cast<std::uint8_t>(image[i] & 0xff));
    }
    encode_png(path, image.width(), image.height(), 0, 16, samples);
}

bool is_supported_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::array<std::uint8_t, 8> magic{};
    in.read(reinterpret_cast<char*>(magic.data()), 8);
    if (in.gcount() < 2) return false;
    if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '6')) return true;
    return in.gcount() >= 8 && std::equal(kPngSignature.begin(), kPngSignature.end(), magic.begin());
}

}  // namespace rshc
