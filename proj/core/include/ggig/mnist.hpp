#pragma once

#include <string>
#include <vector>

#include "ggig/tensor.hpp"

namespace ggig {

// One dataset split. images is [N,C,H,W] scaled to [0,1] (pixel/255);
// labels[i] is the digit class of sample i.
struct DatasetSplit {
  Tensor images;
  std::vector<int> labels;
  int size() const { return static_cast<int>(labels.size()); }
};

// Loads an IDX image/label file pair (the MNIST container format): big-endian
// magic 0x803 + [N,rows,cols] payload for images, 0x801 + [N] for labels.
// Throws FormatError on bad magic, truncation, or image/label count mismatch.
DatasetSplit load_mnist(const std::string& images_path, const std::string& labels_path);

// Copy of sample `index` as a [C,H,W] tensor.
Tensor dataset_image(const DatasetSplit& data, int index);

}  // namespace ggig
