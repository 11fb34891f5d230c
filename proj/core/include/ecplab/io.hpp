#pragma once

// File formats shared by the CLI and the experiment drivers: JSON with config
// manifests, CSV tables, SVG line art and raw little-endian vector files.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ecplab/geometry.hpp"

namespace ecplab::io {

using geometry::Vec2;

std::uint64_t fnv1a(std::string_view s);

// {"config": ..., "hash": "...", "timestamp": "..."}; the hash covers the
// config only, so outputs are reproducible modulo the timestamp field
nlohmann::json make_manifest(const nlohmann::json& config);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// `comment` (when nonempty) is emitted first as a '#' line
void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::vector<double>> rows, const std::string& comment = "");

struct SvgCurve {
  std::vector<Vec2> points;
  std::string color = "black";
  double width = 0.004;
};

void write_svg(const std::filesystem::path& path, std::span<const SvgCurve> curves,
               const std::string& comment = "");

// column-major f64 little-endian payload with a JSON sidecar at <path>.json
void write_vectors(const std::filesystem::path& path, const Eigen::MatrixXd& vectors);
Eigen::MatrixXd read_vectors(const std::filesystem::path& path);

// minimal structural validation of config objects
enum class FieldType { number, integer, boolean, string, array, object };
struct FieldSpec {
  const char* key;
  FieldType type;
  bool required = true;
};
void validate_object(const nlohmann::json& j, std::span<const FieldSpec> fields,
                     const std::string& context);

}  // namespace ecplab::io
