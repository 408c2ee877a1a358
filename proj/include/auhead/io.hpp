#pragma once
// On-disk formats.
//
//   AU sequence, JSON:  {"fps": f, "n_units": 24, "representation": "dense"|"sparse", "frames": [...]}
//                       dense frames are 24-value lists, sparse frames lists of [index, value]
//   AU sequence, AUSQ:  "AUSQ", version u8 (1), fps f32, n_units u16, n_frames u32,
//                       then n_frames * n_units f32; little-endian, dense only
//   Conv kernel, AUCK:  "AUCK", version u8 (1), dim u16, window u16, n_units u16,
//                       weights f32 [dim][window][n_units], bias f32 [dim]; little-endian
//   Raster:             binary PGM (P5), maxval 255
//   Landmarks:          JSON list of frames, each a list of 68 [x, y] pairs
//   Guidance vectors:   raw little-endian f32, no header

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "auhead/au_core.hpp"
#include "auhead/embedding.hpp"
#include "auhead/geometry.hpp"

namespace auhead::io {

inline constexpr std::uint8_t kSequenceVersion = 1;
inline constexpr std::uint8_t kKernelVersion = 1;

using Bytes = std::vector<std::uint8_t>;

Bytes read_bytes(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);
void write_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, std::string_view text);

enum class SequenceFormat { Json, Binary };

/// ".ausq" and ".bin" select the binary form, anything else JSON.
SequenceFormat format_for_path(const std::filesystem::path& path);

std::string sequence_to_json(const AuSequence& seq);
AuSequence sequence_from_json(std::string_view text);

/// Throws SchemaError for sparse sequences.
Bytes sequence_to_binary(const AuSequence& seq);
DenseSequence sequence_from_binary(std::span<const std::uint8_t> bytes);

/// Detects the binary form by its magic, otherwise parses JSON.
AuSequence sequence_from_bytes(std::span<const std::uint8_t> bytes);

AuSequence read_sequence(const std::filesystem::path& path);
void write_sequence(const AuSequence& seq, const std::filesystem::path& path,
                    std::optional<SequenceFormat> format = std::nullopt);

Bytes kernel_to_bytes(const ConvKernel& kernel);
ConvKernel kernel_from_bytes(std::span<const std::uint8_t> bytes);

Bytes encode_pgm(const GrayImage& image);
GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
/// One or more concatenated P5 images, as in a multi-image PGM file.
std::vector<GrayImage> decode_pgm_stream(std::span<const std::uint8_t> bytes);

std::string landmarks_to_json(std::span<const LandmarkFrame> frames);
std::vector<LandmarkFrame> landmarks_from_json(std::string_view text);

Bytes f32_to_bytes(std::span<const float> values);
std::vector<float> f32_from_bytes(std::span<const std::uint8_t> bytes);

}  // namespace auhead::io
