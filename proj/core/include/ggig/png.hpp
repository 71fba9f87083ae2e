#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ggig/tensor.hpp"

namespace ggig {

enum class Colormap { Gray, Heat, Bwr };

std::optional<Colormap> colormap_from_name(std::string_view name);
const char* colormap_name(Colormap cm);

// Minimal PNG writers: 8-bit, zlib-compressed, no filtering.
void write_png_gray(const std::string& path, int height, int width,
                    const std::vector<unsigned char>& pixels);
void write_png_rgb(const std::string& path, int height, int width,
                   const std::vector<unsigned char>& rgb);

// Renders a [H,W] map. Gray/Heat rescale the values to [0,1] (a constant map
// renders flat); Bwr is diverging — scaled symmetrically around zero for
// signed maps.
void write_map_png(const std::string& path, const Tensor& map,
                   Colormap cm = Colormap::Heat);

// Horizontal strip of equal-shaped maps with a 1-pixel separator, each panel
// rescaled on its own.
void write_strip_png(const std::string& path, const std::vector<Tensor>& maps,
                     Colormap cm = Colormap::Heat);

}  // namespace ggig
