#include "fhspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fhspec::io {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  if (v == std::floor(v) && std::fabs(v) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    return buf;
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

void ensure_dir(const std::string& path) {
  if (!path.empty()) std::filesystem::create_directories(path);
}

std::string matrix_csv(const Mat& m, const Vec& row_grid, const Vec& col_grid,
                       const std::string& row_label, const std::string& col_label) {
  if (m.rows() != row_grid.size() || m.cols() != col_grid.size())
    throw std::invalid_argument("matrix_csv: grid/matrix shape mismatch");
  std::string out = row_label + "\\" + col_label;
  for (Eigen::Index c = 0; c < col_grid.size(); ++c) out += "," + fmt(col_grid[c]);
  out += "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out += fmt(row_grid[r]);
    for (Eigen::Index c = 0; c < m.cols(); ++c) out += "," + fmt(m(r, c));
    out += "\n";
  }
  return out;
}

std::string joint_rep_csv(const JointRep& rep) {
  std::string out = "# convention: " + rep.convention + "\n";
  out += std::string(axis_name(rep.row_axis.axis)) + "\\" + axis_name(rep.col_axis.axis);
  for (Eigen::Index c = 0; c < rep.col_axis.grid.size(); ++c) {
    const std::string g = fmt(rep.col_axis.grid[c]);
    out += "," + g + ":re," + g + ":im";
  }
  out += "\n";
  for (Eigen::Index r = 0; r < rep.data.rows(); ++r) {
    out += fmt(rep.row_axis.grid[r]);
    for (Eigen::Index c = 0; c < rep.data.cols(); ++c)
      out += "," + fmt(rep.data(r, c).real()) + "," + fmt(rep.data(r, c).imag());
    out += "\n";
  }
  return out;
}

std::string signal_csv(const fhsig::ObservedSignal& x) {
  std::string out = "n,re,im,missing\n";
  std::size_t mi = 0;
  for (Eigen::Index n = 0; n < x.samples.size(); ++n) {
    bool miss = false;
    while (mi < x.missing.size() && x.missing[mi] < n) ++mi;
    if (mi < x.missing.size() && x.missing[mi] == n) miss = true;
    out += std::to_string(n) + "," + fmt(x.samples[n].real()) + "," + fmt(x.samples[n].imag()) +
           "," + (miss ? "1" : "0") + "\n";
  }
  return out;
}

std::string delta_csv(const Vec& delta) {
  std::string out = "n,delta\n";
  for (Eigen::Index n = 0; n < delta.size(); ++n)
    out += std::to_string(n) + "," + fmt(delta[n]) + "\n";
  return out;
}

std::string support_csv(const IMat& s) {
  std::string out = "bin\\time";
  for (Eigen::Index c = 0; c < s.cols(); ++c) out += "," + std::to_string(c);
  out += "\n";
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    out += std::to_string(r);
    for (Eigen::Index c = 0; c < s.cols(); ++c) out += s(r, c) ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

namespace {
std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}
}  // namespace

ParsedTable parse_table_csv(const std::string& content) {
  ParsedTable t;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    if (t.header.empty())
      t.header = std::move(cells);
    else
      t.rows.push_back(std::move(cells));
  }
  return t;
}

ParsedMatrix parse_matrix_csv(const std::string& content) {
  const ParsedTable t = parse_table_csv(content);
  if (t.header.empty() || t.rows.empty()) throw std::runtime_error("matrix csv: empty table");

  const auto labels = split(t.header[0], '\\');
  ParsedMatrix pm;
  pm.row_label = labels.size() > 0 ? labels[0] : "row";
  pm.col_label = labels.size() > 1 ? labels[1] : "col";

  // complex tables carry ":re"/":im" suffixed column pairs
  const bool complex_cells = t.header.size() > 1 && t.header[1].find(":re") != std::string::npos;
  const Eigen::Index n_cols =
      static_cast<Eigen::Index>(complex_cells ? (t.header.size() - 1) / 2 : t.header.size() - 1);
  const Eigen::Index n_rows = static_cast<Eigen::Index>(t.rows.size());
  pm.values.resize(n_rows, n_cols);
  pm.row_grid.resize(n_rows);
  pm.col_grid.resize(n_cols);
  for (Eigen::Index c = 0; c < n_cols; ++c) {
    std::string g = t.header[1 + (complex_cells ? 2 * c : c)];
    const auto pos = g.find(':');
    if (pos != std::string::npos) g = g.substr(0, pos);
    pm.col_grid[c] = std::strtod(g.c_str(), nullptr);
  }
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const auto& cells = t.rows[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(cells.size()) < 1 + (complex_cells ? 2 * n_cols : n_cols))
      throw std::runtime_error("matrix csv: ragged row");
    pm.row_grid[r] = std::strtod(cells[0].c_str(), nullptr);
    for (Eigen::Index c = 0; c < n_cols; ++c) {
      if (complex_cells) {
        const double re = std::strtod(cells[1 + 2 * c].c_str(), nullptr);
        const double im = std::strtod(cells[2 + 2 * c].c_str(), nullptr);
        pm.values(r, c) = std::hypot(re, im);
      } else {
        pm.values(r, c) = std::strtod(cells[1 + c].c_str(), nullptr);
      }
    }
  }
  return pm;
}

std::string pgm_image(const Mat& magnitude) {
  const Eigen::Index h = magnitude.rows(), w = magnitude.cols();
  if (h == 0 || w == 0) throw std::invalid_argument("pgm_image: empty matrix");
  const double mx = magnitude.cwiseAbs().maxCoeff();
  std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
  out.reserve(out.size() + static_cast<std::size_t>(h * w));
  for (Eigen::Index r = 0; r < h; ++r)
    for (Eigen::Index c = 0; c < w; ++c) {
      const double v = mx > 0 ? std::fabs(magnitude(r, c)) / mx : 0.0;
      out += static_cast<char>(std::lround(255.0 * std::min(1.0, v)));
    }
  return out;
}

std::string line_chart_pgm(const std::vector<Vec>& series, int width, int height) {
  if (width < 16 || height < 16) throw std::invalid_argument("line_chart_pgm: canvas too small");
  std::vector<unsigned char> px(static_cast<std::size_t>(width) * height, 0);
  auto put = [&](int x, int y, unsigned char v) {
    if (x >= 0 && x < width && y >= 0 && y < height)
      px[static_cast<std::size_t>(y) * width + x] = std::max(px[static_cast<std::size_t>(y) * width + x], v);
  };
  // border
  for (int x = 0; x < width; ++x) {
    put(x, 0, 64);
    put(x, height - 1, 64);
  }
  for (int y = 0; y < height; ++y) {
    put(0, y, 64);
    put(width - 1, y, 64);
  }

  double lo = 0.0, hi = 1e-300;
  bool any = false;
  for (const Vec& s : series)
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      lo = any ? std::min(lo, s[i]) : s[i];
      hi = any ? std::max(hi, s[i]) : s[i];
      any = true;
    }
  if (!any) hi = lo = 0.0;
  if (hi == lo) hi = lo + 1.0;

  const int margin = 4;
  auto ypix = [&](double v) {
    const double t = (v - lo) / (hi - lo);
    return (height - 1 - margin) - static_cast<int>(std::lround(t * (height - 1 - 2 * margin)));
  };
  for (std::size_t si = 0; si < series.size(); ++si) {
    const Vec& s = series[si];
    if (s.size() == 0) continue;
    const unsigned char shade =
        static_cast<unsigned char>(255 - 60 * (si % static_cast<std::size_t>(4)));
    const double dx = s.size() > 1
                          ? static_cast<double>(width - 1 - 2 * margin) /
                                static_cast<double>(s.size() - 1)
                          : 0.0;
    int px0 = margin, py0 = ypix(s[0]);
    put(px0, py0, shade);
    for (Eigen::Index i = 1; i < s.size(); ++i) {
      const int px1 = margin + static_cast<int>(std::lround(dx * static_cast<double>(i)));
      const int py1 = ypix(s[i]);
      const int steps = std::max(std::abs(px1 - px0), std::abs(py1 - py0));
      for (int k = 0; k <= steps; ++k) {
        const double f = steps == 0 ? 0.0 : static_cast<double>(k) / steps;
        put(px0 + static_cast<int>(std::lround(f * (px1 - px0))),
            py0 + static_cast<int>(std::lround(f * (py1 - py0))), shade);
      }
      px0 = px1;
      py0 = py1;
    }
  }
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(px.data()), px.size());
  return out;
}

nlohmann::json load_json(const std::string& path) {
  return nlohmann::json::parse(read_file(path));
}

void save_json(const std::string& path, const nlohmann::json& j) {
  write_file(path, j.dump(2) + "\n");
}

nlohmann::json scenario_to_json(const fhsig::FhScenario& sc) {
  nlohmann::json j;
  j["fs_hz"] = sc.fs_hz;
  j["n_samples"] = sc.n_samples;
  j["segments"] = nlohmann::json::array();
  for (const auto& s : sc.segments)
    j["segments"].push_back({{"emitter", s.emitter},
                             {"start", s.start},
                             {"end", s.end},
                             {"freq_hz", s.freq_hz},
                             {"amp_re", s.amp.real()},
                             {"amp_im", s.amp.imag()}});
  return j;
}

fhsig::FhScenario scenario_from_json(const nlohmann::json& j) {
  fhsig::FhScenario sc;
  sc.fs_hz = j.at("fs_hz").get<double>();
  sc.n_samples = j.at("n_samples").get<int>();
  for (const auto& s : j.at("segments")) {
    fhsig::HopSegment seg;
    seg.emitter = s.at("emitter").get<int>();
    seg.start = s.at("start").get<int>();
    seg.end = s.at("end").get<int>();
    seg.freq_hz = s.at("freq_hz").get<double>();
    seg.amp = Complex(s.value("amp_re", 1.0), s.value("amp_im", 0.0));
    sc.segments.push_back(seg);
  }
  fhsig::validate(sc);
  return sc;
}

void add_artifact(Manifest& m, const std::string& dir, const std::string& name,
                  std::string_view content) {
  write_file(dir + "/" + name, content);
  m.digests[name] = "fnv1a64:" + hex64(fnv1a64(content));
}

void write_manifest(const std::string& dir, const Manifest& m) {
  nlohmann::json j;
  j["status"] = m.status;
  if (!m.failed_stage.empty()) j["failed_stage"] = m.failed_stage;
  j["artifacts"] = nlohmann::json::object();
  for (const auto& [k, v] : m.digests) j["artifacts"][k] = v;
  save_json(dir + "/MANIFEST.json", j);
}

Manifest read_manifest(const std::string& dir) {
  const nlohmann::json j = load_json(dir + "/MANIFEST.json");
  Manifest m;
  m.status = j.value("status", "ok");
  m.failed_stage = j.value("failed_stage", "");
  if (j.contains("artifacts"))
    for (const auto& [k, v] : j.at("artifacts").items()) m.digests[k] = v.get<std::string>();
  return m;
}

std::vector<std::string> verify_manifest(const std::string& dir, const Manifest& m) {
  std::vector<std::string> bad;
  for (const auto& [name, digest] : m.digests) {
    const std::string path = dir + "/" + name;
    if (!file_exists(path)) {
      bad.push_back(name);
      continue;
    }
    const std::string got = "fnv1a64:" + hex64(fnv1a64(read_file(path)));
    if (got != digest) bad.push_back(name);
  }
  return bad;
}

}  // namespace fhspec::io
