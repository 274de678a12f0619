#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include "phash/image.hpp"

#include <jpeglib.h>
#include <png.h>

namespace phash {

namespace {

constexpr double kRedWeight = 0.299;
constexpr double kGreenWeight = 0.587;
constexpr double kBlueWeight = 0.114;

double luma_from_rgb(double r, double g, double b) {
  double y = kRedWeight * r + kGreenWeight * g + kBlueWeight * b;
  return y < 0.0 ? 0.0 : (y > 255.0 ? 255.0 : y);
}

LumaImage decode_png(const std::uint8_t* data, std::size_t size) {
  png_image probe;
  std::memset(&probe, 0, sizeof(probe));
  probe.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&probe, data, size)) {
    std::string msg = probe.message;
    png_image_free(&probe);
    throw DecodeError("png decode failed: " + msg);
  }
  bool color = (probe.format & PNG_FORMAT_FLAG_COLOR) != 0;
  int h = static_cast<int>(probe.height);
  int w = static_cast<int>(probe.width);

  probe.format = color ? PNG_FORMAT_RGBA : PNG_FORMAT_GA;
  int channels = color ? 4 : 2;
  std::vector<std::uint8_t> buf(static_cast<std::size_t>(h) * w * channels);
  if (!png_image_finish_read(&probe, nullptr, buf.data(), 0, nullptr)) {
    std::string msg = probe.message;
    png_image_free(&probe);
    throw DecodeError("png decode failed: " + msg);
  }

  std::vector<double> pixels(static_cast<std::size_t>(h) * w);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const std::uint8_t* px = &buf[i * channels];
    double alpha = px[channels - 1] / 255.0;
    if (color) {
      // Composite over white, then BT.601.
      double r = alpha * px[0] + (1.0 - alpha) * 255.0;
      double g = alpha * px[1] + (1.0 - alpha) * 255.0;
      double b = alpha * px[2] + (1.0 - alpha) * 255.0;
      pixels[i] = luma_from_rgb(r, g, b);
    } else if (px[1] == 255) {
      pixels[i] = px[0];  // opaque grayscale passes through exactly
    } else {
      pixels[i] = alpha * px[0] + (1.0 - alpha) * 255.0;
    }
  }
  return LumaImage(h, w, std::move(pixels));
}

struct JpegErrorContext {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_trampoline(j_common_ptr cinfo) {
  auto* ctx = reinterpret_cast<JpegErrorContext*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, ctx->message);
  std::longjmp(ctx->jump, 1);
}

// State shared with the setjmp-protected cores lives behind a pointer so it
// survives longjmp.
struct JpegDecodeState {
  JpegErrorContext err;
  std::uint8_t* samples = nullptr;  // malloc'd h * w * channels
  int h = 0, w = 0, channels = 0;
};

bool decode_jpeg_core(const std::uint8_t* data, std::size_t size,
                      JpegDecodeState* st) {
  jpeg_decompress_struct cinfo;
  cinfo.err = jpeg_std_error(&st->err.mgr);
  st->err.mgr.error_exit = jpeg_error_trampoline;
  if (setjmp(st->err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, const_cast<std::uint8_t*>(data),
               static_cast<unsigned long>(size));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space =
      cinfo.jpeg_color_space == JCS_GRAYSCALE ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);
  st->h = static_cast<int>(cinfo.output_height);
  st->w = static_cast<int>(cinfo.output_width);
  st->channels = cinfo.output_components;
  st->samples = static_cast<std::uint8_t*>(
      malloc(static_cast<std::size_t>(st->h) * st->w * st->channels));
  if (!st->samples) {
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW rows[1] = {
        &st->samples[static_cast<std::size_t>(cinfo.output_scanline) * st->w *
                     st->channels]};
    jpeg_read_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

LumaImage decode_jpeg(const std::uint8_t* data, std::size_t size) {
  JpegDecodeState st;
  st.err.message[0] = '\0';
  if (!decode_jpeg_core(data, size, &st)) {
    free(st.samples);
    throw DecodeError(std::string("jpeg decode failed: ") + st.err.message);
  }
  std::vector<double> pixels(static_cast<std::size_t>(st.h) * st.w);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const std::uint8_t* px = &st.samples[i * st.channels];
    pixels[i] = st.channels == 1 ? px[0] : luma_from_rgb(px[0], px[1], px[2]);
  }
  free(st.samples);
  return LumaImage(st.h, st.w, std::move(pixels));
}

std::uint16_t read_u16le(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

std::uint32_t read_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0] | p[1] << 8 | p[2] << 16 | p[3] << 24);
}

LumaImage decode_bmp(const std::uint8_t* data, std::size_t size) {
  if (size < 54) throw DecodeError("bmp decode failed: truncated header");
  std::uint32_t pixel_offset = read_u32le(data + 10);
  std::uint32_t header_size = read_u32le(data + 14);
  if (header_size < 40) {
    throw DecodeError("bmp decode failed: unsupported header size " +
                      std::to_string(header_size));
  }
  std::int32_t width = static_cast<std::int32_t>(read_u32le(data + 18));
  std::int32_t height_raw = static_cast<std::int32_t>(read_u32le(data + 22));
  std::uint16_t bpp = read_u16le(data + 28);
  std::uint32_t compression = read_u32le(data + 30);
  if (compression != 0) {
    throw DecodeError("bmp decode failed: only uncompressed BI_RGB supported");
  }
  if (bpp != 8 && bpp != 24 && bpp != 32) {
    throw DecodeError("bmp decode failed: unsupported bit depth " +
                      std::to_string(bpp));
  }
  bool top_down = height_raw < 0;
  std::int32_t height = top_down ? -height_raw : height_raw;
  if (width <= 0 || height <= 0) {
    throw DecodeError("bmp decode failed: bad dimensions");
  }

  // Palette for 8-bit images sits between the info header and pixel data.
  const std::uint8_t* palette = nullptr;
  std::uint32_t palette_entries = 0;
  if (bpp == 8) {
    palette_entries = read_u32le(data + 46);
    if (palette_entries == 0) palette_entries = 256;
    palette = data + 14 + header_size;
    if (14 + header_size + palette_entries * 4 > size) {
      throw DecodeError("bmp decode failed: truncated palette");
    }
  }

  std::size_t row_stride = (static_cast<std::size_t>(width) * bpp / 8 + 3) & ~std::size_t{3};
  if (pixel_offset + row_stride * static_cast<std::size_t>(height) > size) {
    throw DecodeError("bmp decode failed: truncated pixel data");
  }

  std::vector<double> pixels(static_cast<std::size_t>(height) * width);
  for (std::int32_t r = 0; r < height; ++r) {
    std::int32_t src_row = top_down ? r : height - 1 - r;
    const std::uint8_t* row = data + pixel_offset + row_stride * static_cast<std::size_t>(src_row);
    double* out = &pixels[static_cast<std::size_t>(r) * width];
    for (std::int32_t c = 0; c < width; ++c) {
      if (bpp == 8) {
        std::uint8_t idx = row[c];
        if (idx >= palette_entries) {
          throw DecodeError("bmp decode failed: palette index out of range");
        }
        const std::uint8_t* entry = palette + idx * 4;  // B G R reserved
        if (entry[0] == entry[1] && entry[1] == entry[2]) {
          out[c] = entry[0];
        } else {
          out[c] = luma_from_rgb(entry[2], entry[1], entry[0]);
        }
      } else {
        const std::uint8_t* px = row + static_cast<std::size_t>(c) * bpp / 8;
        out[c] = luma_from_rgb(px[2], px[1], px[0]);
      }
    }
  }
  return LumaImage(static_cast<int>(height), static_cast<int>(width),
                   std::move(pixels));
}

}  // namespace

LumaImage decode_image(const std::uint8_t* data, std::size_t size) {
  if (size >= 8 && data[0] == 0x89 && data[1] == 'P' && data[2] == 'N' &&
      data[3] == 'G') {
    return decode_png(data, size);
  }
  if (size >= 3 && data[0] == 0xff && data[1] == 0xd8 && data[2] == 0xff) {
    return decode_jpeg(data, size);
  }
  if (size >= 2 && data[0] == 'B' && data[1] == 'M') {
    return decode_bmp(data, size);
  }
  throw DecodeError("unrecognized image format (expected PNG, JPEG or BMP)");
}

LumaImage decode_image(const std::vector<std::uint8_t>& bytes) {
  return decode_image(bytes.data(), bytes.size());
}

LumaImage load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DecodeError("cannot open file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_image(bytes);
  } catch (const DecodeError& e) {
    throw DecodeError(path + ": " + e.what());
  }
}

namespace {

struct JpegEncodeState {
  JpegErrorContext err;
  unsigned char* out_buf = nullptr;
  unsigned long out_size = 0;
};

bool encode_jpeg_core(const std::uint8_t* gray, int h, int w, int quality,
                      JpegEncodeState* st) {
  jpeg_compress_struct cinfo;
  cinfo.err = jpeg_std_error(&st->err.mgr);
  st->err.mgr.error_exit = jpeg_error_trampoline;
  if (setjmp(st->err.jump)) {
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, &st->out_buf, &st->out_size);
  cinfo.image_width = static_cast<JDIMENSION>(w);
  cinfo.image_height = static_cast<JDIMENSION>(h);
  cinfo.input_components = 1;
  cinfo.in_color_space = JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW rows[1] = {const_cast<std::uint8_t*>(
        &gray[static_cast<std::size_t>(cinfo.next_scanline) * w])};
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg_gray(const LumaImage& img, int quality) {
  if (quality < 1 || quality > 100) {
    throw std::invalid_argument("jpeg quality must be in [1, 100]");
  }
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(img.height()) *
                                 img.width());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    double v = img.pixels()[i];
    v = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
    gray[i] = static_cast<std::uint8_t>(v + 0.5);
  }

  JpegEncodeState st;
  st.err.message[0] = '\0';
  if (!encode_jpeg_core(gray.data(), img.height(), img.width(), quality, &st)) {
    free(st.out_buf);
    throw std::runtime_error(std::string("jpeg encode failed: ") +
                             st.err.message);
  }
  std::vector<std::uint8_t> result(st.out_buf, st.out_buf + st.out_size);
  free(st.out_buf);
  return result;
}

void write_png_gray(const std::string& path, const LumaImage& img) {
  std::vector<std::uint8_t> gray(static_cast<std::size_t>(img.height()) *
                                 img.width());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    double v = img.pixels()[i];
    v = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
    gray[i] = static_cast<std::uint8_t>(v + 0.5);
  }
  png_image out;
  std::memset(&out, 0, sizeof(out));
  out.version = PNG_IMAGE_VERSION;
  out.width = static_cast<png_uint_32>(img.width());
  out.height = static_cast<png_uint_32>(img.height());
  out.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&out, path.c_str(), 0, gray.data(), 0,
                               nullptr)) {
    std::string msg = out.message;
    png_image_free(&out);
    throw std::runtime_error("png write failed: " + msg + " (" + path + ")");
  }
}

}  // namespace phash
