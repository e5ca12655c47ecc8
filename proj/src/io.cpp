#include "multiness/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "multiness/errors.hpp"

namespace multiness {

namespace {

constexpr const char* kMagic = "MULTINESS v1";
constexpr const char* kVersion = "1.0.0";

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

bool skippable(const std::vector<std::string>& toks) { return toks.empty() || toks.front().front() == '#'; }

long long parse_int(const std::string& s, std::size_t line, const std::string& what) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(line, what + " is not an integer: '" + s + "'");
  return v;
}

double parse_real(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(line, "weight is not a finite number or NA: '" + s + "'");
  return v;
}

struct Entry {
  std::size_t line;
  bool na;
  double weight;
};

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void check_written(std::ostream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

MultiplexNetwork parse_multiplex(std::istream& in, bool log1p_weights) {
  std::string raw;
  std::size_t line = 0;
  const char* header_keys[] = {"n", "m", "selfloops"};
  long long header[3] = {0, 0, 0};
  int stage = -1;  // -1: magic, 0..2: header fields, 3: entries
  std::unordered_map<std::uint64_t, Entry> entries;
  std::vector<std::uint64_t> order;

  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto toks = tokens(raw);
    if (skippable(toks)) continue;
    if (stage == -1) {
      if (toks.size() != 2 || toks[0] + " " + toks[1] != kMagic)
        throw ParseError(line, std::string("expected header '") + kMagic + "'");
      stage = 0;
      continue;
    }
    if (stage < 3) {
      if (toks.size() != 2 || toks[0] != header_keys[stage])
        throw ParseError(line, std::string("expected '") + header_keys[stage] + " <int>'");
      header[stage] = parse_int(toks[1], line, header_keys[stage]);
      if (stage < 2 && header[stage] < 1) throw ParseError(line, std::string(header_keys[stage]) + " must be >= 1");
      if (stage == 2 && header[2] != 0 && header[2] != 1) throw ParseError(line, "selfloops must be 0 or 1");
      ++stage;
      continue;
    }
    if (toks.size() != 4) throw ParseError(line, "expected 'k i j w'");
    const long long k = parse_int(toks[0], line, "layer index");
    long long i = parse_int(toks[1], line, "node index");
    long long j = parse_int(toks[2], line, "node index");
    if (k < 1 || k > header[1]) throw ParseError(line, "layer index " + toks[0] + " outside 1.." + std::to_string(header[1]));
    if (i < 1 || i > header[0] || j < 1 || j > header[0])
      throw ParseError(line, "node index outside 1.." + std::to_string(header[0]));
    if (i == j && header[2] == 0) throw ParseError(line, "self-loop given but selfloops is 0");
    if (i > j) std::swap(i, j);
    Entry e{line, toks[3] == "NA", 0.0};
    if (!e.na) {
      e.weight = parse_real(toks[3], line);
      if (log1p_weights) {
        if (e.weight <= -1.0) throw ParseError(line, "log1p needs weights > -1");
        e.weight = std::log1p(e.weight);
      }
    }
    const auto n = static_cast<std::uint64_t>(header[0]);
    const std::uint64_t key = (static_cast<std::uint64_t>(k - 1) * n + static_cast<std::uint64_t>(i - 1)) * n +
                              static_cast<std::uint64_t>(j - 1);
    const auto [it, inserted] = entries.emplace(key, e);
    if (!inserted) {
      const Entry& prev = it->second;
      if (prev.na != e.na || (!e.na && prev.weight != e.weight))
        throw ParseError(line, "layer " + std::to_string(k) + " pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                   ") conflicts with line " + std::to_string(prev.line));
      continue;
    }
    order.push_back(key);
  }
  if (stage < 3) throw ParseError(line, "incomplete header");

  const Index n = header[0];
  const Index m = header[1];
  const bool self_loops = header[2] == 1;
  std::vector<Matrix> layers(static_cast<std::size_t>(m), Matrix::Zero(n, n));
  ObservationMask mask = ObservationMask::full(n, m, self_loops);
  for (std::uint64_t key : order) {
    const Entry& e = entries.at(key);
    const auto nn = static_cast<std::uint64_t>(n);
    const auto j = static_cast<Index>(key % nn);
    const auto i = static_cast<Index>((key / nn) % nn);
    const auto k = static_cast<Index>(key / (nn * nn));
    if (e.na) {
      mask.set(k, i, j, false);
    } else {
      layers[k](i, j) = e.weight;
      layers[k](j, i) = e.weight;
    }
  }
  return MultiplexNetwork(std::move(layers), self_loops, std::move(mask));
}

MultiplexNetwork read_multiplex(const std::filesystem::path& path, bool log1p_weights) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_multiplex(in, log1p_weights);
}

void write_multiplex(const MultiplexNetwork& net, std::ostream& out) {
  out << kMagic << "\nn " << net.n() << "\nm " << net.m() << "\nselfloops " << (net.self_loops() ? 1 : 0) << "\n";
  for (Index k = 0; k < net.m(); ++k) {
    for (Index i = 0; i < net.n(); ++i) {
      for (Index j = net.self_loops() ? i : i + 1; j < net.n(); ++j) {
        if (!net.mask().observed(k, i, j)) {
          out << k + 1 << ' ' << i + 1 << ' ' << j + 1 << " NA\n";
        } else if (net.layer(k)(i, j) != 0.0) {
          out << k + 1 << ' ' << i + 1 << ' ' << j + 1 << ' ' << format_double(net.layer(k)(i, j)) << '\n';
        }
      }
    }
  }
}

void write_multiplex(const MultiplexNetwork& net, const std::filesystem::path& path) {
  auto out = open_out(path);
  write_multiplex(net, out);
  check_written(out, path);
}

Matrix parse_matrix(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  Index n = -1;
  Index row = 0;
  Matrix m;
  while (std::getline(in, raw)) {
    ++line;
    const auto toks = tokens(raw);
    if (skippable(toks)) continue;
    if (n < 0) {
      if (toks.size() != 1) throw ParseError(line, "expected the matrix dimension");
      n = parse_int(toks[0], line, "dimension");
      if (n < 0) throw ParseError(line, "dimension must be >= 0");
      m.resize(n, n);
      continue;
    }
    if (row >= n) throw ParseError(line, "more rows than the declared dimension");
    if (static_cast<Index>(toks.size()) != n)
      throw ParseError(line, "expected " + std::to_string(n) + " values, found " + std::to_string(toks.size()));
    for (Index j = 0; j < n; ++j) m(row, j) = parse_real(toks[static_cast<std::size_t>(j)], line);
    ++row;
  }
  if (n < 0) throw ParseError(line, "empty matrix file");
  if (row != n) throw ParseError(line, "expected " + std::to_string(n) + " rows, found " + std::to_string(row));
  return m;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return parse_matrix(in);
}

void write_matrix(const Matrix& m, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << m.rows() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_double(m(i, j));
    out << '\n';
  }
  check_written(out, path);
}

void write_embedding(const Embedding& emb, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "# signature " << emb.signature.p << ' ' << emb.signature.q << '\n';
  for (Index i = 0; i < emb.coords.rows(); ++i) {
    for (Index j = 0; j < emb.coords.cols(); ++j) out << (j ? "," : "") << format_double(emb.coords(i, j));
    out << '\n';
  }
  check_written(out, path);
}

Json report_json(const FitReport& report, const ReportContext& ctx) {
  Json j;
  j["family"] = ctx.family;
  j["lambda"] = report.lambda;
  j["alphas"] = report.alphas;
  j["delta"] = ctx.delta ? Json(*ctx.delta) : Json(nullptr);
  j["ranks"] = {{"d1", report.common_rank}, {"d2", report.individual_ranks}};
  j["objective_trace"] = report.objective_trace;
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["seed"] = ctx.seed ? Json(*ctx.seed) : Json(nullptr);
  j["versions"] = {{"multiness", kVersion},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"format", kMagic}};
  j["tuning"] = ctx.tuning_method;
  j["refitted"] = report.refitted;
  j["final_eta"] = report.final_eta;
  j["warnings"] = report.warnings;
  if (ctx.include_timing) j["timing"] = {{"wall_time_seconds", report.wall_time_seconds}};
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  check_written(out, path);
}

void write_decomposition(const LatentDecomposition& dec, const Json& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");

  auto embedding_of = [](const LowRankSym& block) {
    if (block.rank() == 0) return Embedding{Matrix(block.n(), 0), Signature{}, Vector(0)};
    return ase(block, block.rank());
  };
  write_matrix(dec.common.dense(), dir / "F.mat");
  write_embedding(embedding_of(dec.common), dir / "V.csv");
  for (Index k = 0; k < dec.m(); ++k) {
    const std::string idx = std::to_string(k + 1);
    write_matrix(dec.individual[k].dense(), dir / ("G_" + idx + ".mat"));
    write_embedding(embedding_of(dec.individual[k]), dir / ("U_" + idx + ".csv"));
  }
  write_text(dir / "report.json", report.dump(2) + "\n");
}

DenseDecomposition read_decomposition(const std::filesystem::path& dir) {
  DenseDecomposition out;
  out.common = read_matrix(dir / "F.mat");
  for (int k = 1;; ++k) {
    const auto path = dir / ("G_" + std::to_string(k) + ".mat");
    if (!std::filesystem::exists(path)) break;
    out.individual.push_back(read_matrix(path));
  }
  return out;
}

}  // namespace multiness
