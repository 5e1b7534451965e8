#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sproc/spatial_domain.hpp"

namespace sproc {

// ESRI ASCII grid. Accepts xllcorner/yllcorner or xllcenter/yllcenter and
// either a single cellsize or dx/dy. NODATA cells become NaN. The file lists
// the northern-most row first.
Raster read_esri_ascii(const std::filesystem::path& path);
Raster parse_esri_ascii(std::string_view text);
std::string format_esri_ascii(const Raster& r);
void write_esri_ascii(const std::filesystem::path& path, const Raster& r);

// CSV with header x,y[,mark][,weight] (any column order, extra columns
// ignored). `weight_column` overrides the weight column name; empty = "weight".
PointPattern read_points_csv(const std::filesystem::path& path, const Window& window,
                             const std::string& weight_column = "");
PointPattern parse_points_csv(std::string_view text, const Window& window, const std::string& weight_column = "");
std::string format_points_csv(const PointPattern& pp);

// {xmin,xmax,ymin,ymax[,mask_path]}; mask_path is resolved against the JSON
// file's directory and read as an ESRI grid (finite nonzero = inside).
Window read_window_json(const std::filesystem::path& path);

// Bounding window of a raster's grid.
Window window_of(const GridSpec& g);

std::string read_text(const std::filesystem::path& path);
// Writes to a sibling temporary and renames over `path`, so readers never see
// a partial file.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

// %.12g formatting used for every number we emit.
std::string format_number(double v);
double round_sig12(double v);

}  // namespace sproc
