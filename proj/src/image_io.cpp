#include "salmap/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <functional>
#include <vector>

namespace salmap {
namespace {

struct File {
  std::FILE* f = nullptr;
  File(const std::string& path, const char* mode) : f(std::fopen(path.c_str(), mode)) {}
  ~File() {
    if (f) std::fclose(f);
  }
  File(const File&) = delete;
  File& operator=(const File&) = delete;
};

// ---- PNG ----

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

void open_png_reader(PngReader& r, File& file, const std::string& path) {
  if (!file.f) throw IoError("cannot open image: " + path);
  png_byte sig[8];
  if (std::fread(sig, 1, 8, file.f) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw IoError("not a PNG file: " + path);
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) throw IoError("png reader allocation failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) throw IoError("png info allocation failed");
  png_init_io(r.png, file.f);
  png_set_sig_bytes(r.png, 8);
}

RgbImage read_png_rgb(const std::string& path) {
  File file(path, "rb");
  PngReader r;
  open_png_reader(r, file, path);

  RgbImage img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(r.png))) throw IoError("png decode failed: " + path);

  png_read_info(r.png, r.info);
  png_uint_32 w = 0, h = 0;
  int bit_depth = 0, color_type = 0;
  png_get_IHDR(r.png, r.info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  if (w < 1 || h < 1) throw IoError("png has empty dimensions: " + path);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  if (bit_depth == 16) png_set_strip_16(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(r.png);
  png_set_strip_alpha(r.png);
  png_read_update_info(r.png, r.info);
  if (png_get_rowbytes(r.png, r.info) != static_cast<std::size_t>(w) * 3)
    throw IoError("unexpected png row layout: " + path);

  img = RgbImage(static_cast<int>(w), static_cast<int>(h));
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y)
    rows[y] = reinterpret_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * w);
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return img;
}

// ---- JPEG ----

struct JpegErr {
  jpeg_error_mgr mgr;
  std::jmp_buf jb;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  std::longjmp(reinterpret_cast<JpegErr*>(cinfo->err)->jb, 1);
}

struct JpegDecompress {
  jpeg_decompress_struct cinfo{};
  bool created = false;
  ~JpegDecompress() {
    if (created) jpeg_destroy_decompress(&cinfo);
  }
};

struct JpegCompress {
  jpeg_compress_struct cinfo{};
  bool created = false;
  ~JpegCompress() {
    if (created) jpeg_destroy_compress(&cinfo);
  }
};

RgbImage read_jpeg_rgb(const std::string& path) {
  File file(path, "rb");
  if (!file.f) throw IoError("cannot open image: " + path);

  JpegDecompress d;
  JpegErr err;
  d.cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;

  RgbImage img;
  if (setjmp(err.jb)) throw IoError("jpeg decode failed: " + path);

  jpeg_create_decompress(&d.cinfo);
  d.created = true;
  jpeg_stdio_src(&d.cinfo, file.f);
  jpeg_read_header(&d.cinfo, TRUE);
  d.cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&d.cinfo);
  if (d.cinfo.output_components != 3) throw IoError("jpeg did not decode to RGB: " + path);

  const int w = static_cast<int>(d.cinfo.output_width);
  const int h = static_cast<int>(d.cinfo.output_height);
  img = RgbImage(w, h);
  while (d.cinfo.output_scanline < d.cinfo.output_height) {
    JSAMPROW row = reinterpret_cast<JSAMPROW>(
        img.data.data() + static_cast<std::size_t>(d.cinfo.output_scanline) * w);
    jpeg_read_scanlines(&d.cinfo, &row, 1);
  }
  jpeg_finish_decompress(&d.cinfo);
  return img;
}

void write_png(const std::string& path, int width, int height, int color_type,
               const std::function<png_bytep(int)>& row_at,
               const std::array<Rgb8, 256>* palette) {
  File file(path, "wb");
  if (!file.f) throw IoError("cannot open for writing: " + path);
  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!w.png) throw IoError("png writer allocation failed");
  w.info = png_create_info_struct(w.png);
  if (!w.info) throw IoError("png info allocation failed");

  std::vector<png_color> plte;
  if (setjmp(png_jmpbuf(w.png))) throw IoError("png encode failed: " + path);

  png_init_io(w.png, file.f);
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (palette) {
    plte.resize(256);
    for (int i = 0; i < 256; ++i)
      plte[i] = {(*palette)[i].r, (*palette)[i].g, (*palette)[i].b};
    png_set_PLTE(w.png, w.info, plte.data(), 256);
  }
  png_write_info(w.png, w.info);
  for (int y = 0; y < height; ++y) png_write_row(w.png, row_at(y));
  png_write_end(w.png, w.info);
}

}  // namespace

RgbImage load_rgb_image(const std::string& path) {
  unsigned char magic[2] = {0, 0};
  {
    File file(path, "rb");
    if (!file.f) throw IoError("cannot open image: " + path);
    if (std::fread(magic, 1, 2, file.f) != 2) throw IoError("image file too short: " + path);
  }
  if (magic[0] == 0x89 && magic[1] == 'P') return read_png_rgb(path);
  if (magic[0] == 0xFF && magic[1] == 0xD8) return read_jpeg_rgb(path);
  throw IoError("unrecognized image format: " + path);
}

void write_gray_png(const std::string& path, const Plane<std::uint8_t>& img) {
  write_png(
      path, img.width, img.height, PNG_COLOR_TYPE_GRAY,
      [&img](int y) {
        return const_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * img.width);
      },
      nullptr);
}

void write_rgb_png(const std::string& path, const RgbImage& img) {
  write_png(
      path, img.width, img.height, PNG_COLOR_TYPE_RGB,
      [&img](int y) {
        return const_cast<png_bytep>(reinterpret_cast<const png_byte*>(
            img.data.data() + static_cast<std::size_t>(y) * img.width));
      },
      nullptr);
}

void write_rgb_jpeg(const std::string& path, const RgbImage& img, int quality) {
  File file(path, "wb");
  if (!file.f) throw IoError("cannot open for writing: " + path);

  JpegCompress c;
  JpegErr err;
  c.cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;
  if (setjmp(err.jb)) throw IoError("jpeg encode failed: " + path);

  jpeg_create_compress(&c.cinfo);
  c.created = true;
  jpeg_stdio_dest(&c.cinfo, file.f);
  c.cinfo.image_width = static_cast<JDIMENSION>(img.width);
  c.cinfo.image_height = static_cast<JDIMENSION>(img.height);
  c.cinfo.input_components = 3;
  c.cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&c.cinfo);
  jpeg_set_quality(&c.cinfo, quality, TRUE);
  jpeg_start_compress(&c.cinfo, TRUE);
  while (c.cinfo.next_scanline < c.cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(reinterpret_cast<const JSAMPLE*>(
        img.data.data() + static_cast<std::size_t>(c.cinfo.next_scanline) * img.width));
    jpeg_write_scanlines(&c.cinfo, &row, 1);
  }
  jpeg_finish_compress(&c.cinfo);
}

Plane<std::uint8_t> read_png_indices(const std::string& path) {
  File file(path, "rb");
  PngReader r;
  open_png_reader(r, file, path);

  Plane<std::uint8_t> img;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(r.png))) throw IoError("png decode failed: " + path);

  png_read_info(r.png, r.info);
  png_uint_32 w = 0, h = 0;
  int bit_depth = 0, color_type = 0;
  png_get_IHDR(r.png, r.info, &w, &h, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  if (color_type != PNG_COLOR_TYPE_PALETTE)
    throw NotPaletteIndexed("not a palette-indexed PNG: " + path);
  if (bit_depth < 8) png_set_packing(r.png);
  png_read_update_info(r.png, r.info);
  if (png_get_rowbytes(r.png, r.info) != static_cast<std::size_t>(w))
    throw IoError("unexpected png row layout: " + path);

  img = Plane<std::uint8_t>(static_cast<int>(w), static_cast<int>(h));
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y)
    rows[y] = img.data.data() + static_cast<std::size_t>(y) * w;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return img;
}

void write_indexed_png(const std::string& path, const Plane<std::uint8_t>& indices) {
  write_png(
      path, indices.width, indices.height, PNG_COLOR_TYPE_PALETTE,
      [&indices](int y) {
        return const_cast<png_bytep>(indices.data.data() +
                                     static_cast<std::size_t>(y) * indices.width);
      },
      &voc_palette());
}

const std::array<Rgb8, 256>& voc_palette() {
  static const std::array<Rgb8, 256> table = [] {
    std::array<Rgb8, 256> t{};
    for (int i = 0; i < 256; ++i) {
      int id = i;
      std::uint8_t r = 0, g = 0, b = 0;
      for (int j = 0; j < 8; ++j) {
        r = static_cast<std::uint8_t>(r | ((id >> 0 & 1) << (7 - j)));
        g = static_cast<std::uint8_t>(g | ((id >> 1 & 1) << (7 - j)));
        b = static_cast<std::uint8_t>(b | ((id >> 2 & 1) << (7 - j)));
        id >>= 3;
      }
      t[i] = {r, g, b};
    }
    return t;
  }();
  return table;
}

}  // namespace salmap
