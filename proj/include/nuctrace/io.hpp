#pragma once

// On-disk formats: a JSON descriptor per grid/function plus a flat CSV or
// little-endian binary column of interleaved real/imag values, row-major in
// axis order; JSON manifests for rank-one representations; JSON + CSV
// exports for spectral reports; TF-plane dumps with a convention header.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nuctrace/nuclear.hpp"
#include "nuctrace/report.hpp"
#include "nuctrace/timefreq.hpp"

namespace nuctrace::io {

using json = nlohmann::ordered_json;

enum class ValueFormat { kCsv, kBinary };

json grid_descriptor(const ProductGrid& grid);
GridPtr grid_from_descriptor(const json& descriptor);

/// Writes <path> (JSON descriptor, value file reference inside) and the
/// value file next to it (.csv or .bin by format).
void save_function(const SampledFunction& f, const std::filesystem::path& json_path,
                   ValueFormat format = ValueFormat::kCsv);
SampledFunction load_function(const std::filesystem::path& json_path);

/// Real-valued variants for weights and exponent functions.
void save_real_function(const RVector& values, const GridPtr& grid,
                        const std::filesystem::path& json_path,
                        ValueFormat format = ValueFormat::kCsv);
std::pair<GridPtr, RVector> load_real_function(const std::filesystem::path& json_path);

/// TF-plane dump: the SampledFunction container plus a header recording the
/// conventions (angular flag, box half-width, frequency extent, d).
void save_tf_dump(const SampledFunction& F, const TFGrid& tf,
                  const std::filesystem::path& json_path,
                  ValueFormat format = ValueFormat::kCsv);

json spectral_report_json(const SpectralReport& report);
SpectralReport spectral_report_from_json(const json& j);
void write_spectral_report(const SpectralReport& report, const std::filesystem::path& json_path,
                           const std::filesystem::path& eigenvalue_csv_path);

/// Manifest (terms, order, space descriptors) plus per-pair function files
/// named <stem>_g<n>.json / <stem>_h<n>.json in the manifest's directory.
void save_representation(const NuclearRepresentation& T, const std::filesystem::path& manifest_path,
                         const std::string& stem, ValueFormat format = ValueFormat::kCsv);
NuclearRepresentation load_representation(const std::filesystem::path& manifest_path);

json space_descriptor_json(const SpaceDescriptor& space);
SpaceDescriptor space_descriptor_from_json(const json& j, const GridPtr& grid);

}  // namespace nuctrace::io
