#include "wardrobe/evaluation.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

namespace wardrobe {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void write_label_png(const LabelImage& image, const std::filesystem::path& path) {
  if (image.width <= 0 || image.height <= 0) throw Error("write_label_png: empty image");
  std::vector<png_byte> pixels(image.labels.size());
  for (size_t p = 0; p < pixels.size(); ++p) {
    const int v = image.labels[p];
    if (v < 0 || v > 255) throw Error("write_label_png: label " + std::to_string(v) + " does not fit in 8 bits");
    pixels[p] = static_cast<png_byte>(v);
  }
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error("cannot open '" + path.string() + "' for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error("write_label_png: libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("write_label_png: libpng error while writing '" + path.string() + "'");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < image.height; ++y) png_write_row(png, pixels.data() + static_cast<size_t>(y) * image.width);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

LabelImage read_label_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error("cannot open '" + path.string() + "'");
  png_byte header[8];
  if (std::fread(header, 1, 8, file.get()) != 8 || png_sig_cmp(header, 0, 8) != 0) {
    throw Error("'" + path.string() + "' is not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("read_label_png: libpng initialization failed");
  }
  LabelImage image;
  std::vector<png_byte> row;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("read_label_png: libpng error while reading '" + path.string() + "'");
  }
  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  const png_uint_32 w = png_get_image_width(png, info), h = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info), depth = png_get_bit_depth(png, info);
  if (color != PNG_COLOR_TYPE_GRAY || depth != 8) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("'" + path.string() + "': label images must be 8-bit grayscale");
  }
  image.width = static_cast<int>(w);
  image.height = static_cast<int>(h);
  image.labels.resize(static_cast<size_t>(w) * h);
  row.resize(w);
  for (png_uint_32 y = 0; y < h; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < w; ++x) image.labels[static_cast<size_t>(y) * w + x] = row[x];
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return image;
}

}  // namespace wardrobe
