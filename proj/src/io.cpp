#include "odfset/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "odfset/errors.hpp"

namespace odfset {
namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void spit(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("short write to " + path.string());
}

// PNM header tokens: whitespace-separated, '#' comments run to end of line.
struct PnmCursor {
  const std::string& data;
  std::size_t pos = 0;

  std::string token() {
    while (pos < data.size()) {
      const char c = data[pos];
      if (c == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    while (pos < data.size() &&
           !std::isspace(static_cast<unsigned char>(data[pos])) &&
           data[pos] != '#') {
      ++pos;
    }
    if (start == pos) throw ParseError("PGM: truncated header");
    return data.substr(start, pos - start);
  }

  long integer() {
    const std::string t = token();
    long v = 0;
    const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || p != t.data() + t.size()) {
      throw ParseError("PGM: expected integer, got '" + t + "'");
    }
    return v;
  }
};

struct PgmData {
  int rows = 0;
  int cols = 0;
  long maxval = 0;
  std::vector<std::uint32_t> samples;
};

PgmData read_pgm(const std::filesystem::path& path) {
  const std::string data = slurp(path);
  PnmCursor cur{data};
  const std::string magic = cur.token();
  if (magic != "P2" && magic != "P5") {
    throw ParseError(path.string() + ": not a PGM (magic '" + magic + "')");
  }
  PgmData out;
  out.cols = static_cast<int>(cur.integer());
  out.rows = static_cast<int>(cur.integer());
  out.maxval = cur.integer();
  if (out.cols < 1 || out.rows < 1 || out.maxval < 1 || out.maxval > 65535) {
    throw ParseError(path.string() + ": bad PGM dimensions or maxval");
  }
  const std::size_t n = static_cast<std::size_t>(out.rows) * out.cols;
  out.samples.resize(n);
  if (magic == "P2") {
    for (std::size_t k = 0; k < n; ++k) {
      out.samples[k] = static_cast<std::uint32_t>(cur.integer());
    }
  } else {
    ++cur.pos;  // exactly one whitespace byte after maxval
    const int bytes = out.maxval > 255 ? 2 : 1;
    if (cur.pos + n * bytes > data.size()) {
      throw ParseError(path.string() + ": truncated PGM raster");
    }
    for (std::size_t k = 0; k < n; ++k) {
      const auto* p = reinterpret_cast<const unsigned char*>(data.data() + cur.pos);
      out.samples[k] = bytes == 2
                           ? (static_cast<std::uint32_t>(p[0]) << 8) | p[1]
                           : p[0];
      cur.pos += bytes;
    }
  }
  for (std::uint32_t s : out.samples) {
    if (s > static_cast<std::uint32_t>(out.maxval)) {
      throw ParseError(path.string() + ": sample exceeds maxval");
    }
  }
  return out;
}

json vec2_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec2_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("expected a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}

json law_json(const ParamLaw& law) {
  json j;
  std::visit(
      [&](const auto& l) {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          j["type"] = "point_mass";
          j["value"] = l.value;
        } else if constexpr (std::is_same_v<T, UniformLaw>) {
          j["type"] = "uniform";
          j["a"] = l.a;
          j["b"] = l.b;
        } else if constexpr (std::is_same_v<T, BernoulliLaw>) {
          j["type"] = "bernoulli";
          j["p"] = l.p;
        } else {
          j["type"] = "discrete";
          j["values"] = l.values;
          j["probs"] = l.probs;
        }
      },
      law);
  return j;
}

ParamLaw law_from(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "point_mass") return PointMass{j.at("value").get<std::vector<double>>()};
  if (type == "uniform") {
    return UniformLaw{j.at("a").get<std::vector<double>>(),
                      j.at("b").get<std::vector<double>>()};
  }
  if (type == "bernoulli") return BernoulliLaw{j.at("p").get<double>()};
  if (type == "discrete") {
    return DiscreteLaw{j.at("values").get<std::vector<std::vector<double>>>(),
                       j.at("probs").get<std::vector<double>>()};
  }
  throw ParseError("unknown law type: " + type);
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf, p);
}

void write_mask_pgm(const BinaryMask& mask, const std::filesystem::path& path,
                    bool ascii) {
  const auto& g = mask.grid();
  std::ostringstream out;
  if (ascii) {
    out << "P2\n" << g.cols() << " " << g.rows() << "\n255\n";
    for (int i = 0; i < g.rows(); ++i) {
      for (int j = 0; j < g.cols(); ++j) {
        out << (mask.at(i, j) ? 255 : 0) << (j + 1 == g.cols() ? '\n' : ' ');
      }
    }
  } else {
    out << "P5\n" << g.cols() << " " << g.rows() << "\n255\n";
    for (std::uint8_t b : mask.bits()) out.put(b ? char(255) : char(0));
  }
  spit(path, std::move(out).str());
}

BinaryMask read_mask_pgm(const std::filesystem::path& path, Vec2 origin,
                         double spacing) {
  const PgmData pgm = read_pgm(path);
  if (pgm.maxval != 255) {
    throw ParseError(path.string() + ": mask PGM maxval must be 255");
  }
  std::vector<std::uint8_t> bits(pgm.samples.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (pgm.samples[k] != 0 && pgm.samples[k] != 255) {
      throw ParseError(path.string() + ": mask samples must be 0 or 255");
    }
    bits[k] = pgm.samples[k] == 255 ? 1 : 0;
  }
  return BinaryMask(GridSpec(origin, spacing, pgm.rows, pgm.cols), std::move(bits));
}

void write_gray_pgm(const GrayImage& image, const std::filesystem::path& path) {
  if (image.pixels.size() != image.grid.size()) {
    throw DimMismatchError("write_gray_pgm: pixel count must match grid");
  }
  std::ostringstream out;
  out << "P5\n" << image.grid.cols() << " " << image.grid.rows() << "\n255\n";
  for (std::uint8_t p : image.pixels) out.put(static_cast<char>(p));
  spit(path, std::move(out).str());
}

void write_field_pgm16(const ScalarField& field, const std::filesystem::path& path) {
  const auto& g = field.grid();
  const double lo = field.min_value();
  const double hi = field.max_value();
  const double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;
  std::ostringstream out;
  out << "P5\n" << g.cols() << " " << g.rows() << "\n65535\n";
  for (double v : field.values()) {
    const auto q = static_cast<std::uint32_t>(std::lround((v - lo) * scale));
    out.put(static_cast<char>((q >> 8) & 0xFF));
    out.put(static_cast<char>(q & 0xFF));
  }
  spit(path, std::move(out).str());
  json sidecar;
  sidecar["min"] = lo;
  sidecar["max"] = hi;
  spit(path.string() + ".json", sidecar.dump(2) + "\n");
}

ScalarField read_field_pgm16(const std::filesystem::path& path, Vec2 origin,
                             double spacing) {
  const PgmData pgm = read_pgm(path);
  if (pgm.maxval != 65535) {
    throw ParseError(path.string() + ": field PGM maxval must be 65535");
  }
  json sidecar;
  try {
    sidecar = json::parse(slurp(path.string() + ".json"));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ".json: " + e.what());
  }
  const double lo = sidecar.at("min").get<double>();
  const double hi = sidecar.at("max").get<double>();
  const double scale = (hi - lo) / 65535.0;
  std::vector<double> values(pgm.samples.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = lo + scale * pgm.samples[k];
  }
  return ScalarField(GridSpec(origin, spacing, pgm.rows, pgm.cols), std::move(values));
}

void write_field_csv(const ScalarField& field, const std::filesystem::path& path) {
  const auto& g = field.grid();
  std::string out;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) {
      out += format_double(field.at(i, j));
      out += j + 1 == g.cols() ? '\n' : ',';
    }
  }
  spit(path, out);
}

ScalarField read_field_csv(const std::filesystem::path& path, Vec2 origin,
                           double spacing) {
  std::istringstream in(slurp(path));
  std::vector<double> values;
  std::string line;
  int rows = 0;
  int cols = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int c = 0;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        values.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError(path.string() + ": bad number '" + cell + "'");
      }
      ++c;
    }
    if (cols >= 0 && c != cols) {
      throw ParseError(path.string() + ": ragged CSV rows");
    }
    cols = c;
    ++rows;
  }
  if (rows == 0) throw ParseError(path.string() + ": empty field CSV");
  return ScalarField(GridSpec(origin, spacing, rows, cols), std::move(values));
}

void write_polylines_csv(const std::vector<Polyline>& lines,
                         const std::filesystem::path& path) {
  std::string out;
  bool first = true;
  for (const Polyline& line : lines) {
    if (!first) out += '\n';
    first = false;
    for (const Vec2& p : line.points) {
      out += format_double(p.x);
      out += ',';
      out += format_double(p.y);
      out += '\n';
    }
    if (line.closed && !line.points.empty()) {
      out += format_double(line.points.front().x);
      out += ',';
      out += format_double(line.points.front().y);
      out += '\n';
    }
  }
  spit(path, out);
}

std::vector<Polyline> read_polylines_csv(const std::filesystem::path& path) {
  std::istringstream in(slurp(path));
  std::vector<Polyline> lines;
  Polyline cur;
  std::string line;
  auto flush = [&] {
    if (cur.points.empty()) return;
    if (cur.points.size() >= 4 && cur.points.front().x == cur.points.back().x &&
        cur.points.front().y == cur.points.back().y) {
      cur.points.pop_back();
      cur.closed = true;
    }
    lines.push_back(std::move(cur));
    cur = Polyline{};
  };
  while (std::getline(in, line)) {
    if (line.empty()) {
      flush();
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw ParseError(path.string() + ": expected 'x,y' row");
    }
    try {
      cur.points.push_back(
          {std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw ParseError(path.string() + ": bad coordinate in '" + line + "'");
    }
  }
  flush();
  return lines;
}

void write_csv_table(const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows,
                     const std::filesystem::path& path) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out += columns[c];
    out += c + 1 == columns.size() ? '\n' : ',';
  }
  for (const auto& row : rows) {
    if (row.size() != columns.size()) {
      throw DimMismatchError("write_csv_table: row width must match columns");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      out += format_double(row[c]);
      out += c + 1 == row.size() ? '\n' : ',';
    }
  }
  spit(path, out);
}

std::string model_to_json_text(const RandomSetModel& model) {
  json j;
  j["schema"] = 1;
  j["family"] = family_name(model.family);
  j["law"] = law_json(model.law);
  j["seed"] = model.seed;
  switch (model.family) {
    case ShapeFamily::Ball:
    case ShapeFamily::BallSqrtRadius:
      j["center"] = vec2_json(model.center);
      break;
    case ShapeFamily::FlashingDisc:
      j["alt_center"] = vec2_json(model.alt_center);
      j["radius"] = model.radius;
      break;
    case ShapeFamily::SlabOrBoundary:
      j["slab"] = json::array({model.slab_lo, model.slab_hi});
      break;
    default:
      break;
  }
  return j.dump(2) + "\n";
}

RandomSetModel model_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
  try {
    if (j.value("schema", 1) != 1) {
      throw ParseError("model JSON: unsupported schema version");
    }
    RandomSetModel model;
    model.family = family_from_name(j.at("family").get<std::string>());
    model.law = law_from(j.at("law"));
    model.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("center")) model.center = vec2_from(j["center"]);
    if (j.contains("alt_center")) model.alt_center = vec2_from(j["alt_center"]);
    if (j.contains("radius")) model.radius = j["radius"].get<double>();
    if (j.contains("slab")) {
      const Vec2 s = vec2_from(j["slab"]);
      model.slab_lo = s.x;
      model.slab_hi = s.y;
    }
    validate(model);
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model JSON: ") + e.what());
  }
}

void write_model_json(const RandomSetModel& model, const std::filesystem::path& path) {
  spit(path, model_to_json_text(model));
}

RandomSetModel read_model_json(const std::filesystem::path& path) {
  return model_from_json_text(slurp(path));
}

void write_metric_report_json(const MetricReport& report,
                              const std::filesystem::path& path) {
  json j;
  const auto& cols = metric_report_columns();
  const auto row = metric_report_row(report);
  for (std::size_t k = 0; k < cols.size(); ++k) j[cols[k]] = row[k];
  spit(path, j.dump(2) + "\n");
}

void write_metric_report_csv(const MetricReport& report,
                             const std::filesystem::path& path) {
  write_csv_table(metric_report_columns(), {metric_report_row(report)}, path);
}

void write_set_estimate(const SetEstimate& estimate,
                        const std::filesystem::path& dir,
                        const std::vector<std::pair<std::string, double>>& extra) {
  std::filesystem::create_directories(dir);
  write_mask_pgm(estimate.mask, dir / "mask.pgm");
  write_polylines_csv(estimate.boundary, dir / "boundary.csv");
  write_field_csv(estimate.source_field, dir / "field.csv");
  const GridSpec& g = estimate.mask.grid();
  json manifest;
  manifest["estimator"] = estimator_name(estimate.estimator);
  manifest["threshold_used"] = estimate.threshold_used;
  manifest["grid"] = {{"origin", vec2_json(g.origin())},
                      {"spacing", g.spacing()},
                      {"rows", g.rows()},
                      {"cols", g.cols()}};
  for (const auto& [key, value] : extra) manifest[key] = value;
  spit(dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace odfset
