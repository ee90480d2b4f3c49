#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "odfset/expectations.hpp"
#include "odfset/grid.hpp"
#include "odfset/metrics.hpp"
#include "odfset/shapes.hpp"

namespace odfset {

/// Shortest round-trip decimal form of a double; the single formatting used
/// by every text artifact so reruns are byte-identical.
std::string format_double(double v);

// --- PGM -------------------------------------------------------------------

/// 8-bit grayscale image, same row/column convention as BinaryMask.
struct GrayImage {
  GridSpec grid;
  std::vector<std::uint8_t> pixels;
};

/// Mask PGM: 0 = false, 255 = true, maxval 255. Binary (P5) on write.
void write_mask_pgm(const BinaryMask& mask, const std::filesystem::path& path,
                    bool ascii = false);
/// Accepts P2 and P5; maxval must be 255 and samples must be 0 or 255.
/// The grid is reconstructed with the given origin and spacing.
BinaryMask read_mask_pgm(const std::filesystem::path& path, Vec2 origin = {},
                         double spacing = 1.0);

void write_gray_pgm(const GrayImage& image, const std::filesystem::path& path);

/// 16-bit quantized field: maxval 65535, value = round((v - min)/(max - min)
/// * 65535); a sidecar JSON next to it records {"min": ..., "max": ...}.
/// Sidecar path = path + ".json".
void write_field_pgm16(const ScalarField& field, const std::filesystem::path& path);
ScalarField read_field_pgm16(const std::filesystem::path& path, Vec2 origin = {},
                             double spacing = 1.0);

// --- CSV -------------------------------------------------------------------

/// Row-major, headerless, comma-separated values.
void write_field_csv(const ScalarField& field, const std::filesystem::path& path);
ScalarField read_field_csv(const std::filesystem::path& path, Vec2 origin = {},
                           double spacing = 1.0);

/// Rows "x,y"; segments separated by one blank line; closed polylines repeat
/// their first vertex as the last row.
void write_polylines_csv(const std::vector<Polyline>& lines,
                         const std::filesystem::path& path);
std::vector<Polyline> read_polylines_csv(const std::filesystem::path& path);

void write_csv_table(const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     const std::filesystem::path& path);

// --- JSON ------------------------------------------------------------------

/// Schema: {"schema": 1, "family", "law": {"type", ...params}, "seed"} plus
/// the fixed geometry fields the family uses (center / alt_center+radius /
/// slab).
void write_model_json(const RandomSetModel& model, const std::filesystem::path& path);
RandomSetModel read_model_json(const std::filesystem::path& path);
RandomSetModel model_from_json_text(const std::string& text);
std::string model_to_json_text(const RandomSetModel& model);

void write_metric_report_json(const MetricReport& report,
                              const std::filesystem::path& path);
void write_metric_report_csv(const MetricReport& report,
                             const std::filesystem::path& path);

/// Bundle: mask.pgm + boundary.csv + field.csv + manifest.json
/// {estimator, threshold_used, grid} in the given directory. extra entries
/// (e.g. q_norm, minimized loss) are merged into the manifest.
void write_set_estimate(
    const SetEstimate& estimate, const std::filesystem::path& dir,
    const std::vector<std::pair<std::string, double>>& extra = {});

}  // namespace odfset
