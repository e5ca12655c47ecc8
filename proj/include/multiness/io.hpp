#pragma once

// Text formats.
//
// Multiplex file:
//   MULTINESS v1
//   n <int>
//   m <int>
//   selfloops <0|1>
//   k i j w          (1-based; w a decimal or NA; either i < j or i > j on read)
// Pairs that never appear are observed with weight 0; NA marks a pair unobserved.
// Blank lines and lines starting with '#' are ignored.
//
// Dense matrix file: first line n, then n rows of n whitespace-separated values.
//
// All floating-point output uses 17 significant digits so values round-trip.

#include <filesystem>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "multiness/embed.hpp"
#include "multiness/solver.hpp"

namespace multiness {

using Json = nlohmann::ordered_json;

std::string format_double(double v);

MultiplexNetwork parse_multiplex(std::istream& in, bool log1p_weights = false);
MultiplexNetwork read_multiplex(const std::filesystem::path& path, bool log1p_weights = false);
void write_multiplex(const MultiplexNetwork& net, std::ostream& out);
void write_multiplex(const MultiplexNetwork& net, const std::filesystem::path& path);

Matrix parse_matrix(std::istream& in);
Matrix read_matrix(const std::filesystem::path& path);
void write_matrix(const Matrix& m, const std::filesystem::path& path);

// CSV of latent coordinates preceded by "# signature p q".
void write_embedding(const Embedding& emb, const std::filesystem::path& path);

// Everything report.json records besides the fit report itself.
struct ReportContext {
  std::string family = "gaussian";
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::string tuning_method = "fixed";
  bool include_timing = true;
};

Json report_json(const FitReport& report, const ReportContext& ctx);

// Writes F.mat, G_1.mat..G_m.mat, V.csv, U_1.csv..U_m.csv and report.json into
// dir (created if needed). Throws IoError when dir cannot be written.
void write_decomposition(const LatentDecomposition& dec, const Json& report, const std::filesystem::path& dir);

struct DenseDecomposition {
  Matrix common;
  std::vector<Matrix> individual;
};

// Reads F.mat and G_1.mat, G_2.mat, ... back from a written directory.
DenseDecomposition read_decomposition(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace multiness
