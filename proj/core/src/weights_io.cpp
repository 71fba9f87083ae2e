#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ggig/errors.hpp"
#include "ggig/network.hpp"

// Weight file layout: a short text header describing the architecture,
// terminated by a "data" line, followed by every parameter (per layer, weight
// then bias) as little-endian float32.
//
//   GGIGNET 1
//   input 1 28 28
//   layer conv2d <in> <out> <kernel> <stride> <pad>
//   layer maxpool2d <window>
//   layer relu
//   layer flatten
//   layer dense <in> <out>
//   data
//   <payload>

namespace ggig {

namespace {

void put_le32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

float get_le_float(const unsigned char* p) {
  const std::uint32_t v = static_cast<std::uint32_t>(p[0]) |
                          (static_cast<std::uint32_t>(p[1]) << 8) |
                          (static_cast<std::uint32_t>(p[2]) << 16) |
                          (static_cast<std::uint32_t>(p[3]) << 24);
  float f;
  std::memcpy(&f, &v, 4);
  return f;
}

}  // namespace

void save_weights(const Network& net, const std::string& path) {
  std::string out;
  out += "GGIGNET 1\ninput";
  for (int d : net.input_shape()) out += " " + std::to_string(d);
  out += "\n";
  for (const LayerSpec& s : net.layers()) {
    out += "layer ";
    out += layer_kind_name(s.kind);
    switch (s.kind) {
      case LayerKind::Conv2d:
        out += " " + std::to_string(s.in_channels) + " " + std::to_string(s.out_channels) +
               " " + std::to_string(s.kernel) + " " + std::to_string(s.stride) + " " +
               std::to_string(s.pad);
        break;
      case LayerKind::MaxPool2d:
        out += " " + std::to_string(s.window);
        break;
      case LayerKind::Dense:
        out += " " + std::to_string(s.in_features) + " " + std::to_string(s.out_features);
        break;
      default:
        break;
    }
    out += "\n";
  }
  out += "data\n";
  const std::vector<float> flat = net.flat_parameters();
  out.reserve(out.size() + flat.size() * 4);
  for (float f : flat) {
    std::uint32_t v;
    std::memcpy(&v, &f, 4);
    put_le32(out, v);
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw FormatError("cannot open " + path + " for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw FormatError("short write to " + path);
}

Network load_weights(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw FormatError("cannot open weights file " + path);
  std::string blob((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  auto next_line = [&]() -> std::string {
    if (pos >= blob.size()) throw FormatError(path + ": unexpected end of header");
    const std::size_t nl = blob.find('\n', pos);
    if (nl == std::string::npos) throw FormatError(path + ": unexpected end of header");
    std::string line = blob.substr(pos, nl - pos);
    pos = nl + 1;
    return line;
  };

  if (next_line() != "GGIGNET 1") {
    throw FormatError(path + ": not a ggig weights file (bad magic line)");
  }

  std::vector<int> input_shape;
  std::vector<LayerSpec> layers;
  bool saw_input = false;
  for (;;) {
    std::istringstream ls(next_line());
    std::string tag;
    ls >> tag;
    if (tag == "data") break;
    if (tag == "input") {
      int d;
      while (ls >> d) input_shape.push_back(d);
      saw_input = true;
    } else if (tag == "layer") {
      std::string kind;
      ls >> kind;
      LayerSpec spec;
      try {
        if (kind == "conv2d") {
          int ic, oc, k, st, pd;
          if (!(ls >> ic >> oc >> k >> st >> pd)) {
            throw FormatError(path + ": malformed conv2d layer line");
          }
          spec = LayerSpec::conv2d(ic, oc, k, st, pd);
        } else if (kind == "maxpool2d") {
          int w;
          if (!(ls >> w)) throw FormatError(path + ": malformed maxpool2d layer line");
          spec = LayerSpec::maxpool2d(w);
        } else if (kind == "relu") {
          spec = LayerSpec::relu();
        } else if (kind == "flatten") {
          spec = LayerSpec::flatten();
        } else if (kind == "dense") {
          int in, out;
          if (!(ls >> in >> out)) throw FormatError(path + ": malformed dense layer line");
          spec = LayerSpec::dense(in, out);
        } else {
          throw FormatError(path + ": unknown layer kind '" + kind + "'");
        }
      } catch (const ArgumentError& e) {
        throw FormatError(path + ": invalid layer declaration: " + e.what());
      }
      layers.push_back(spec);
    } else {
      throw FormatError(path + ": unexpected header line starting with '" + tag + "'");
    }
  }
  if (!saw_input) throw FormatError(path + ": missing input shape line");

  Network net;
  try {
    net = Network(input_shape, layers);
  } catch (const Error& e) {
    throw FormatError(path + ": declared architecture is inconsistent: " + e.what());
  }

  const std::size_t want = net.parameter_count() * 4;
  const std::size_t have = blob.size() - pos;
  if (have != want) {
    throw FormatError(path + ": parameter payload holds " + std::to_string(have) +
                      " bytes, architecture needs " + std::to_string(want));
  }
  std::vector<float> flat(net.parameter_count());
  const unsigned char* p = reinterpret_cast<const unsigned char*>(blob.data()) + pos;
  for (std::size_t i = 0; i < flat.size(); ++i) flat[i] = get_le_float(p + i * 4);
  net.set_flat_parameters(flat);
  return net;
}

}  // namespace ggig
