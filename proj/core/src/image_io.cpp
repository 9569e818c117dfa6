#include "chordkit/image_io.hpp"

#include <ImfChannelList.h>
#include <ImfFrameBuffer.h>
#include <ImfHeader.h>
#include <ImfInputFile.h>
#include <ImfOutputFile.h>
#include <half.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "chordkit/error.hpp"

namespace chordkit {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f != nullptr) {
            std::fclose(f);
        }
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    return f;
}

thread_local char g_png_error[256];

void png_error_handler(png_structp png, png_const_charp message) {
    std::snprintf(g_png_error, sizeof(g_png_error), "%s", message);
    png_longjmp(png, 1);
}

void png_warning_handler(png_structp, png_const_charp) {}

struct PngHeader {
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int channels = 0;  // after transforms: 1 or 3
    int depth = 0;     // 8 or 16
};

// libpng reports errors with longjmp, so the functions touching it keep only
// trivially destructible locals.
bool png_read_header(std::FILE* file, png_structp png, png_infop info, PngHeader* header) {
    if (setjmp(png_jmpbuf(png))) {
        return false;
    }
    png_init_io(png, file);
    png_read_info(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(png);
    }
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (color & PNG_COLOR_MASK_ALPHA) {
        png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);
    header->width = png_get_image_width(png, info);
    header->height = png_get_image_height(png, info);
    header->channels = png_get_channels(png, info);
    header->depth = png_get_bit_depth(png, info);
    return true;
}

bool png_read_rows(png_structp png, png_bytepp rows) {
    if (setjmp(png_jmpbuf(png))) {
        return false;
    }
    png_read_image(png, rows);
    png_read_end(png, nullptr);
    return true;
}

bool png_write_all(std::FILE* file, png_structp png, png_infop info, png_uint_32 width,
                   png_uint_32 height, int depth, int color_type, png_bytepp rows) {
    if (setjmp(png_jmpbuf(png))) {
        return false;
    }
    png_init_io(png, file);
    png_set_IHDR(png, info, width, height, depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows);
    png_write_end(png, nullptr);
    return true;
}

}  // namespace

TextureImage read_png(const std::filesystem::path& path, ColorSpace space) {
    FilePtr file = open_file(path, "rb");
    png_byte signature[8];
    if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0) {
        throw IoError("'" + path.string() + "' is not a PNG file");
    }
    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler, png_warning_handler);
    if (png == nullptr) {
        throw IoError("png_create_read_struct failed");
    }
    png_infop info = png_create_info_struct(png);
    png_set_sig_bytes(png, 8);

    PngHeader header;
    bool ok = info != nullptr && png_read_header(file.get(), png, info, &header);
    std::vector<png_byte> buffer;
    std::vector<png_bytep> rows;
    if (ok) {
        if (header.channels != 1 && header.channels != 3) {
            png_destroy_read_struct(&png, &info, nullptr);
            throw IoError("'" + path.string() + "': unsupported PNG channel layout");
        }
        const std::size_t stride =
            static_cast<std::size_t>(header.width) * header.channels * (header.depth / 8);
        buffer.resize(stride * header.height);
        rows.resize(header.height);
        for (png_uint_32 y = 0; y < header.height; ++y) {
            rows[y] = buffer.data() + y * stride;
        }
        ok = png_read_rows(png, rows.data());
    }
    png_destroy_read_struct(&png, &info, nullptr);
    if (!ok) {
        throw IoError("'" + path.string() + "': " + g_png_error);
    }

    const std::size_t count = static_cast<std::size_t>(header.width) * header.height * header.channels;
    std::vector<double> data(count);
    if (header.depth == 16) {
        for (std::size_t i = 0; i < count; ++i) {
            const unsigned v = (static_cast<unsigned>(buffer[2 * i]) << 8) | buffer[2 * i + 1];
            data[i] = v / 65535.0;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            data[i] = buffer[i] / 255.0;
        }
    }
    return TextureImage(static_cast<int>(header.width), static_cast<int>(header.height),
                        header.channels, std::move(data), space);
}

void write_png(const std::filesystem::path& path, const TextureImage& img, PngDepth depth) {
    const int bits = static_cast<int>(depth);
    const int bytes = bits / 8;
    const double max_value = bits == 16 ? 65535.0 : 255.0;
    const auto d = img.data();
    std::vector<png_byte> buffer(d.size() * bytes);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto q = static_cast<unsigned>(std::lround(std::clamp(d[i], 0.0, 1.0) * max_value));
        if (bits == 16) {
            buffer[2 * i] = static_cast<png_byte>(q >> 8);
            buffer[2 * i + 1] = static_cast<png_byte>(q & 0xff);
        } else {
            buffer[i] = static_cast<png_byte>(q);
        }
    }
    const std::size_t stride = static_cast<std::size_t>(img.width()) * img.channels() * bytes;
    std::vector<png_bytep> rows(img.height());
    for (int y = 0; y < img.height(); ++y) {
        rows[y] = buffer.data() + y * stride;
    }

    FilePtr file = open_file(path, "wb");
    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_handler, png_warning_handler);
    if (png == nullptr) {
        throw IoError("png_create_write_struct failed");
    }
    png_infop info = png_create_info_struct(png);
    const bool ok = info != nullptr &&
                    png_write_all(file.get(), png, info, img.width(), img.height(), bits,
                                  img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
                                  rows.data());
    png_destroy_write_struct(&png, &info);
    if (!ok) {
        throw IoError("'" + path.string() + "': " + g_png_error);
    }
    if (std::fflush(file.get()) != 0) {
        throw IoError("'" + path.string() + "': write failed");
    }
}

void write_exr(const std::filesystem::path& path, const TextureImage& img) {
    const int w = img.width();
    const int h = img.height();
    const int ch = img.channels();
    const char* names3[] = {"R", "G", "B"};
    const char* names1[] = {"Y"};
    const char** names = ch == 3 ? names3 : names1;

    std::vector<half> planar(img.data().size());
    const auto d = img.data();
    for (std::size_t p = 0; p < img.pixel_count(); ++p) {
        for (int c = 0; c < ch; ++c) {
            planar[c * img.pixel_count() + p] = half(static_cast<float>(d[p * ch + c]));
        }
    }
    try {
        Imf::Header header(w, h);
        for (int c = 0; c < ch; ++c) {
            header.channels().insert(names[c], Imf::Channel(Imf::HALF));
        }
        Imf::FrameBuffer fb;
        for (int c = 0; c < ch; ++c) {
            fb.insert(names[c],
                      Imf::Slice(Imf::HALF, reinterpret_cast<char*>(planar.data() + c * img.pixel_count()),
                                 sizeof(half), sizeof(half) * w));
        }
        Imf::OutputFile file(path.c_str(), header);
        file.setFrameBuffer(fb);
        file.writePixels(h);
    } catch (const std::exception& e) {
        throw IoError("'" + path.string() + "': " + e.what());
    }
}

TextureImage read_exr(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) {
        throw IoError("cannot open '" + path.string() + "'");
    }
    try {
        Imf::InputFile file(path.c_str());
        const auto& header = file.header();
        const Imath::Box2i dw = header.dataWindow();
        const int w = dw.max.x - dw.min.x + 1;
        const int h = dw.max.y - dw.min.y + 1;
        const auto& channels = header.channels();
        std::vector<std::string> names;
        if (channels.findChannel("R") && channels.findChannel("G") && channels.findChannel("B")) {
            names = {"R", "G", "B"};
        } else if (channels.findChannel("Y")) {
            names = {"Y"};
        } else if (channels.begin() != channels.end()) {
            names = {channels.begin().name()};
        } else {
            throw IoError("'" + path.string() + "' has no channels");
        }
        const int ch = static_cast<int>(names.size());
        const std::size_t n = static_cast<std::size_t>(w) * h;
        std::vector<float> planar(n * ch);
        Imf::FrameBuffer fb;
        for (int c = 0; c < ch; ++c) {
            // Slices are addressed relative to the data window origin.
            char* base = reinterpret_cast<char*>(planar.data() + c * n) -
                         (static_cast<std::ptrdiff_t>(dw.min.x) + static_cast<std::ptrdiff_t>(dw.min.y) * w) *
                             static_cast<std::ptrdiff_t>(sizeof(float));
            fb.insert(names[c], Imf::Slice(Imf::FLOAT, base, sizeof(float), sizeof(float) * w));
        }
        file.setFrameBuffer(fb);
        file.readPixels(dw.min.y, dw.max.y);
        std::vector<double> data(n * ch);
        for (std::size_t p = 0; p < n; ++p) {
            for (int c = 0; c < ch; ++c) {
                data[p * ch + c] = planar[c * n + p];
            }
        }
        return TextureImage(w, h, ch, std::move(data));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw IoError("'" + path.string() + "': " + e.what());
    }
}

TextureImage read_linear_image(const std::filesystem::path& path) {
    auto ext = path.extension().string();
    std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".exr") {
        return read_exr(path);
    }
    if (ext == ".png") {
        return srgb_to_linear(read_png(path, ColorSpace::SRGB));
    }
    throw IoError("'" + path.string() + "': unsupported image format (expected .png or .exr)");
}

void write_preview_png(const std::filesystem::path& path, const TextureImage& linear) {
    write_png(path, linear_to_srgb(linear), PngDepth::Sixteen);
}

}  // namespace chordkit
