#pragma once

// Deterministic artifact serialization: CSV tables, PGM raster images, JSON
// round trips, content digests, and the per-directory artifact manifest.
// Every emitter is a pure string builder so outputs are byte-reproducible;
// file writing is separated from formatting.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fhspec/fhsig.hpp"
#include "fhspec/types.hpp"

namespace fhspec::io {

// Shortest decimal string that parses back to exactly v (round-trip safe).
std::string fmt(double v);

// 64-bit FNV-1a over raw bytes, and its fixed-width hex rendering.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// --- filesystem helpers -----------------------------------------------------
std::string read_file(const std::string& path);  // throws std::runtime_error
void write_file(const std::string& path, std::string_view content);
bool file_exists(const std::string& path);
void ensure_dir(const std::string& path);  // mkdir -p

// --- CSV builders -----------------------------------------------------------
// Real matrix: header "row_label\col_label,<col grid...>", one row per grid
// value, cells formatted with fmt().
std::string matrix_csv(const Mat& m, const Vec& row_grid, const Vec& col_grid,
                       const std::string& row_label, const std::string& col_label);

// Complex joint representation: "# convention" comment line, then the same
// layout with two cells (re, im) per column grid value.
std::string joint_rep_csv(const JointRep& rep);

// Observed signal: "n,re,im,missing" rows, missing flag 0/1.
std::string signal_csv(const fhsig::ObservedSignal& x);

// Hop statistic: "n,delta" rows.
std::string delta_csv(const Vec& delta);

// Binary support matrix: "bin\time,<0..T-1>" header then 0/1 cells.
std::string support_csv(const IMat& s);

// --- CSV readers (for the plot workflow; parse only this module's output) ---
struct ParsedMatrix {
  Mat values;  // complex inputs are collapsed to magnitudes
  Vec row_grid;
  Vec col_grid;
  std::string row_label;
  std::string col_label;
};
ParsedMatrix parse_matrix_csv(const std::string& content);

// Generic small-table reader: returns header cells and string rows.
struct ParsedTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
ParsedTable parse_table_csv(const std::string& content);

// --- raster images ----------------------------------------------------------
// Binary PGM (P5), max-normalized to 0..255; all-zero input renders black.
std::string pgm_image(const Mat& magnitude);

// Polyline chart: one gray level per series, y auto-scaled over all series,
// light axis border. Series may have different lengths (x spans each series).
std::string line_chart_pgm(const std::vector<Vec>& series, int width = 480, int height = 320);

// --- JSON -------------------------------------------------------------------
nlohmann::json load_json(const std::string& path);
void save_json(const std::string& path, const nlohmann::json& j);

nlohmann::json scenario_to_json(const fhsig::FhScenario& sc);
fhsig::FhScenario scenario_from_json(const nlohmann::json& j);

// --- artifact manifest -------------------------------------------------------
// MANIFEST.json: {"status": "ok"|"failed", "failed_stage": "...",
//                 "artifacts": {relative name -> "fnv1a64:<hex>"}}
struct Manifest {
  std::string status = "ok";
  std::string failed_stage;
  std::map<std::string, std::string> digests;
};

// Digest content and record it under `name`, writing the file into dir.
void add_artifact(Manifest& m, const std::string& dir, const std::string& name,
                  std::string_view content);
void write_manifest(const std::string& dir, const Manifest& m);
Manifest read_manifest(const std::string& dir);  // throws if absent/invalid

// Names in the manifest whose on-disk digest no longer matches (missing
// files count as mismatched).
std::vector<std::string> verify_manifest(const std::string& dir, const Manifest& m);

}  // namespace fhspec::io
