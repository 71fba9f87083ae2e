#include "ggig/png.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "ggig/errors.hpp"

namespace ggig {

std::optional<Colormap> colormap_from_name(std::string_view name) {
  if (name == "gray") return Colormap::Gray;
  if (name == "heat") return Colormap::Heat;
  if (name == "bwr") return Colormap::Bwr;
  return std::nullopt;
}

const char* colormap_name(Colormap cm) {
  switch (cm) {
    case Colormap::Gray: return "gray";
    case Colormap::Heat: return "heat";
    case Colormap::Bwr: return "bwr";
  }
  return "?";
}

namespace {

void put_be32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>((v >> 24) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>(v & 0xff));
}

void put_chunk(std::string& out, const char type[4], const std::string& data) {
  put_be32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t crc_start = out.size();
  out.append(type, 4);
  out += data;
  const std::uint32_t crc = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(out.data() + crc_start),
            static_cast<uInt>(out.size() - crc_start)));
  put_be32(out, crc);
}

void write_png(const std::string& path, int height, int width, int channels,
               const std::vector<unsigned char>& pixels) {
  if (height < 1 || width < 1) throw ArgumentError("png dimensions must be positive");
  const std::size_t row = static_cast<std::size_t>(width) * channels;
  if (pixels.size() != row * static_cast<std::size_t>(height)) {
    throw ArgumentError("png pixel buffer size does not match dimensions");
  }

  // filter byte 0 in front of every scanline
  std::vector<unsigned char> raw((row + 1) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    raw[static_cast<std::size_t>(y) * (row + 1)] = 0;
    std::memcpy(raw.data() + static_cast<std::size_t>(y) * (row + 1) + 1,
                pixels.data() + static_cast<std::size_t>(y) * row, row);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> packed(bound);
  if (compress2(packed.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw FormatError("zlib compression failed for " + path);
  }
  packed.resize(bound);

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  put_be32(ihdr, static_cast<std::uint32_t>(width));
  put_be32(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);                              // bit depth
  ihdr.push_back(channels == 1 ? 0 : 2);          // gray / truecolor
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT",
            std::string(reinterpret_cast<const char*>(packed.data()), packed.size()));
  put_chunk(out, "IEND", "");

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw FormatError("cannot open " + path + " for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw FormatError("short write to " + path);
}

unsigned char to_byte(float v) {
  const float c = std::clamp(v, 0.0f, 1.0f);
  return static_cast<unsigned char>(std::lround(c * 255.0f));
}

void heat_rgb(float v, unsigned char* px) {
  px[0] = to_byte(3.0f * v);
  px[1] = to_byte(3.0f * v - 1.0f);
  px[2] = to_byte(3.0f * v - 2.0f);
}

void bwr_rgb(float v, unsigned char* px) {
  // v in [0,1], 0.5 = zero: blue → white → red
  px[0] = to_byte(2.0f * v);
  px[1] = to_byte(1.0f - std::fabs(2.0f * v - 1.0f));
  px[2] = to_byte(2.0f - 2.0f * v);
}

// Normalizes map values to [0,1] for display; plain min-max for sequential
// colormaps, symmetric around zero for the diverging one.
void display_values(const Tensor& map, Colormap cm, std::vector<float>& out) {
  out.resize(map.size());
  if (cm == Colormap::Bwr) {
    float scale = std::max(std::fabs(map.min_value()), std::fabs(map.max_value()));
    if (scale == 0.0f) scale = 1.0f;
    for (std::size_t i = 0; i < map.size(); ++i) {
      out[i] = 0.5f + 0.5f * (map[i] / scale);
    }
    return;
  }
  const float lo = map.min_value(), hi = map.max_value();
  if (hi == lo) {
    std::fill(out.begin(), out.end(), 0.0f);
    return;
  }
  for (std::size_t i = 0; i < map.size(); ++i) out[i] = (map[i] - lo) / (hi - lo);
}

void render_panel(const std::vector<float>& vals, Colormap cm, int h, int w,
                  std::vector<unsigned char>& rgb, int canvas_w, int x_off) {
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      unsigned char* px =
          rgb.data() + (static_cast<std::size_t>(y) * canvas_w + x + x_off) * 3;
      const float v = vals[static_cast<std::size_t>(y) * w + x];
      switch (cm) {
        case Colormap::Gray:
          px[0] = px[1] = px[2] = to_byte(v);
          break;
        case Colormap::Heat:
          heat_rgb(v, px);
          break;
        case Colormap::Bwr:
          bwr_rgb(v, px);
          break;
      }
    }
  }
}

}  // namespace

void write_png_gray(const std::string& path, int height, int width,
                    const std::vector<unsigned char>& pixels) {
  write_png(path, height, width, 1, pixels);
}

void write_png_rgb(const std::string& path, int height, int width,
                   const std::vector<unsigned char>& rgb) {
  write_png(path, height, width, 3, rgb);
}

void write_map_png(const std::string& path, const Tensor& map, Colormap cm) {
  if (map.rank() != 2) throw ShapeError("write_map_png expects a [H,W] map");
  const int h = map.dim(0), w = map.dim(1);
  std::vector<float> vals;
  display_values(map, cm, vals);
  std::vector<unsigned char> rgb(static_cast<std::size_t>(h) * w * 3);
  render_panel(vals, cm, h, w, rgb, w, 0);
  write_png_rgb(path, h, w, rgb);
}

void write_strip_png(const std::string& path, const std::vector<Tensor>& maps,
                     Colormap cm) {
  if (maps.empty()) throw ArgumentError("write_strip_png needs at least one map");
  const int h = maps[0].rank() == 2 ? maps[0].dim(0) : -1;
  const int w = h > 0 ? maps[0].dim(1) : -1;
  for (const Tensor& m : maps) {
    if (m.rank() != 2 || m.dim(0) != h || m.dim(1) != w) {
      throw ShapeError("write_strip_png: all maps must share one [H,W] shape");
    }
  }
  const int count = static_cast<int>(maps.size());
  const int canvas_w = count * w + (count - 1);
  std::vector<unsigned char> rgb(static_cast<std::size_t>(h) * canvas_w * 3, 255);
  std::vector<float> vals;
  for (int i = 0; i < count; ++i) {
    display_values(maps[static_cast<std::size_t>(i)], cm, vals);
    render_panel(vals, cm, h, w, rgb, canvas_w, i * (w + 1));
  }
  write_png_rgb(path, h, canvas_w, rgb);
}

}  // namespace ggig
