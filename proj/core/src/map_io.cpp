#include "ggig/map_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ggig/errors.hpp"

namespace ggig {

void write_map_file(const std::string& path, const Tensor& t) {
  if (t.size() == 0) throw ArgumentError("refusing to write an empty map");
  std::string out = "FMAP 1\nshape";
  for (int d : t.shape()) out += " " + std::to_string(d);
  out += "\ndata\n";
  out.reserve(out.size() + t.size() * 4);
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::uint32_t v;
    std::memcpy(&v, t.data() + i, 4);
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw FormatError("cannot open " + path + " for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw FormatError("short write to " + path);
}

Tensor read_map_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw FormatError("cannot open map file " + path);
  std::string blob((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  auto next_line = [&]() -> std::string {
    const std::size_t nl = blob.find('\n', pos);
    if (nl == std::string::npos) throw FormatError(path + ": truncated map header");
    std::string line = blob.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };

  if (next_line() != "FMAP 1") throw FormatError(path + ": not a float map file (bad magic)");
  std::istringstream shape_line(next_line());
  std::string tag;
  shape_line >> tag;
  if (tag != "shape") throw FormatError(path + ": missing shape line");
  std::vector<int> shape;
  int d;
  while (shape_line >> d) {
    if (d < 1) throw FormatError(path + ": non-positive dimension in shape");
    shape.push_back(d);
  }
  if (shape.empty()) throw FormatError(path + ": empty shape");
  if (next_line() != "data") throw FormatError(path + ": missing data marker");

  const std::size_t count = shape_numel(shape);
  if (blob.size() - pos != count * 4) {
    throw FormatError(path + ": payload holds " + std::to_string(blob.size() - pos) +
                      " bytes, shape needs " + std::to_string(count * 4));
  }
  std::vector<float> values(count);
  const unsigned char* p = reinterpret_cast<const unsigned char*>(blob.data()) + pos;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint32_t v = static_cast<std::uint32_t>(p[4 * i]) |
                            (static_cast<std::uint32_t>(p[4 * i + 1]) << 8) |
                            (static_cast<std::uint32_t>(p[4 * i + 2]) << 16) |
                            (static_cast<std::uint32_t>(p[4 * i + 3]) << 24);
    std::memcpy(&values[i], &v, 4);
  }
  return Tensor(std::move(shape), std::move(values));
}

}  // namespace ggig
