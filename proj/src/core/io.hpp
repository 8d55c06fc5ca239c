#pragma once

#include <string>
#include <vector>

#include "core/tensor.hpp"

namespace treering {

// Images travel through the pipeline as 8-bit PPM/PGM files: generation
// quantizes to disk, detection and attacks read the quantized bytes back,
// mirroring a deployment where only saved images cross trust boundaries.
// Mapping: [-1, 1] <-> [0, 255] (round, clamp).

void write_image_ppm(const std::string& path, const Tensor& chw);
Tensor read_image_ppm(const std::string& path);

unsigned char pixel_to_u8(double v);
double u8_to_pixel(unsigned char u);

// Quantize a pixel tensor exactly the way the PPM writer does.
Tensor quantize_pixels(const Tensor& chw);

// Raw tensor container for latents and checkpoints' payloads.
void write_tensor(const std::string& path, const Tensor& t);
Tensor read_tensor(const std::string& path);

void ensure_dir(const std::string& path);
bool file_exists(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Deterministic numeric formatting for CSV output.
std::string fmt_double(double v);

}  // namespace treering
