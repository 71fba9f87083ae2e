#include "ggig/mnist.hpp"

#include <cstdint>
#include <fstream>
#include <vector>

#include "ggig/errors.hpp"

namespace ggig {

namespace {

std::vector<unsigned char> read_all(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw FormatError("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(file)),
                                   std::istreambuf_iterator<char>());
  return bytes;
}

std::uint32_t be32(const std::vector<unsigned char>& b, std::size_t off,
                   const std::string& path) {
  if (off + 4 > b.size()) throw FormatError(path + ": truncated IDX header");
  return (static_cast<std::uint32_t>(b[off]) << 24) |
         (static_cast<std::uint32_t>(b[off + 1]) << 16) |
         (static_cast<std::uint32_t>(b[off + 2]) << 8) |
         static_cast<std::uint32_t>(b[off + 3]);
}

}  // namespace

DatasetSplit load_mnist(const std::string& images_path, const std::string& labels_path) {
  const std::vector<unsigned char> img = read_all(images_path);
  const std::uint32_t img_magic = be32(img, 0, images_path);
  if (img_magic != 0x803) {
    throw FormatError(images_path + ": bad IDX image magic " + std::to_string(img_magic) +
                      " (want 2051)");
  }
  const std::uint32_t n = be32(img, 4, images_path);
  const std::uint32_t rows = be32(img, 8, images_path);
  const std::uint32_t cols = be32(img, 12, images_path);
  const std::size_t want_img = 16 + static_cast<std::size_t>(n) * rows * cols;
  if (img.size() != want_img) {
    throw FormatError(images_path + ": payload is " + std::to_string(img.size() - 16) +
                      " bytes, header declares " + std::to_string(want_img - 16));
  }

  const std::vector<unsigned char> lab = read_all(labels_path);
  const std::uint32_t lab_magic = be32(lab, 0, labels_path);
  if (lab_magic != 0x801) {
    throw FormatError(labels_path + ": bad IDX label magic " + std::to_string(lab_magic) +
                      " (want 2049)");
  }
  const std::uint32_t ln = be32(lab, 4, labels_path);
  if (lab.size() != 8 + static_cast<std::size_t>(ln)) {
    throw FormatError(labels_path + ": payload is " + std::to_string(lab.size() - 8) +
                      " bytes, header declares " + std::to_string(ln));
  }
  if (ln != n) {
    throw FormatError("image/label count mismatch: " + std::to_string(n) + " images in " +
                      images_path + ", " + std::to_string(ln) + " labels in " + labels_path);
  }

  DatasetSplit d;
  d.images = Tensor({static_cast<int>(n), 1, static_cast<int>(rows), static_cast<int>(cols)});
  const std::size_t count = static_cast<std::size_t>(n) * rows * cols;
  float* dst = d.images.data();
  for (std::size_t i = 0; i < count; ++i) {
    dst[i] = static_cast<float>(img[16 + i]) / 255.0f;
  }
  d.labels.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const int label = lab[8 + i];
    if (label > 9) {
      throw FormatError(labels_path + ": label " + std::to_string(label) + " at index " +
                        std::to_string(i) + " outside [0,9]");
    }
    d.labels[i] = label;
  }
  return d;
}

Tensor dataset_image(const DatasetSplit& data, int index) {
  if (index < 0 || index >= data.size()) {
    throw ArgumentError("sample index " + std::to_string(index) + " outside [0, " +
                        std::to_string(data.size()) + ")");
  }
  const std::vector<int> shape(data.images.shape().begin() + 1, data.images.shape().end());
  const std::size_t stride = shape_numel(shape);
  const float* src = data.images.data() + static_cast<std::size_t>(index) * stride;
  return Tensor(shape, std::vector<float>(src, src + stride));
}

}  // namespace ggig
