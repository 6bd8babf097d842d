#include "wordspot/image_io.hpp"

#include <png.h>

#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "wordspot/error.hpp"

namespace wordspot {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open image '" + path.string() + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Raster decode_png(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()) == 0) {
    throw FormatError("'" + path.string() + "': " + image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  const bool alpha = (image.format & PNG_FORMAT_FLAG_ALPHA) != 0;
  if (color) {
    image.format = alpha ? PNG_FORMAT_RGBA : PNG_FORMAT_RGB;
  } else {
    image.format = alpha ? PNG_FORMAT_GA : PNG_FORMAT_GRAY;
  }
  Raster out;
  out.width = static_cast<int>(image.width);
  out.height = static_cast<int>(image.height);
  out.channels = static_cast<int>(PNG_IMAGE_SAMPLE_CHANNELS(image.format));
  out.data.resize(PNG_IMAGE_SIZE(image));
  if (png_image_finish_read(&image, nullptr, out.data.data(), 0, nullptr) == 0) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw FormatError("'" + path.string() + "': " + msg);
  }
  return out;
}

Raster decode_pnm(const std::vector<std::uint8_t>& bytes, const std::filesystem::path& path) {
  std::size_t pos = 2;
  auto next_token = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    long value = 0;
    std::size_t digits = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos++] - '0');
      if (++digits > 9) break;
    }
    if (digits == 0) throw FormatError("'" + path.string() + "': malformed PNM header");
    return value;
  };
  const int channels = bytes[1] == '5' ? 1 : 3;
  const long width = next_token();
  const long height = next_token();
  const long maxval = next_token();
  ++pos;  // single whitespace before the raster
  if (width < 1 || height < 1 || maxval != 255) {
    throw FormatError("'" + path.string() + "': only 8-bit PNM with non-zero size is supported");
  }
  Raster out;
  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  out.channels = channels;
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
  if (pos > bytes.size() || bytes.size() - pos < n) throw FormatError("'" + path.string() + "': truncated PNM data");
  out.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                  bytes.begin() + static_cast<std::ptrdiff_t>(pos + n));
  return out;
}

void write_png(const std::filesystem::path& path, int width, int height, int channels, const std::uint8_t* data) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  if (png_image_write_to_file(&image, path.string().c_str(), 0, data, 0, nullptr) == 0) {
    throw FormatError("cannot write '" + path.string() + "': " + image.message);
  }
}

}  // namespace

Raster load_raster(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  static constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0) return decode_png(bytes, path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) return decode_pnm(bytes, path);
  throw FormatError("'" + path.string() + "': unsupported image format");
}

GrayImage load_gray(const std::filesystem::path& path) { return to_grayscale(load_raster(path)); }

void save_png(const std::filesystem::path& path, const GrayImage& img) {
  write_png(path, img.width(), img.height(), 1, img.pixels().data());
}

void save_png(const std::filesystem::path& path, const Raster& img) {
  if (img.channels != 1 && img.channels != 3) throw PreconditionError("save_png supports 1 or 3 channels");
  write_png(path, img.width, img.height, img.channels, img.data.data());
}

void save_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels().data()), static_cast<std::streamsize>(img.size()));
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

}  // namespace wordspot
