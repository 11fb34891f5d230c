#include "ecplab/io.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace ecplab::io {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

nlohmann::json make_manifest(const nlohmann::json& config) {
  nlohmann::json m;
  m["config"] = config;
  std::ostringstream hash;
  hash << "0x" << std::hex << std::setw(16) << std::setfill('0') << fnv1a(config.dump());
  m["hash"] = hash.str();
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&tt));
  m["timestamp"] = buf;
  return m;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) fail(errc::io_error, "cannot open for writing: " + path.string());
  os << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) fail(errc::io_error, "cannot open: " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(errc::io_error, path.string() + ": " + e.what());
  }
  return j;
}

void write_csv(const std::filesystem::path& path, std::span<const std::string> header,
               std::span<const std::vector<double>> rows, const std::string& comment) {
  std::ofstream os(path);
  if (!os) fail(errc::io_error, "cannot open for writing: " + path.string());
  os << std::setprecision(17);
  if (!comment.empty()) os << "# " << comment << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    os << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
}

void write_svg(const std::filesystem::path& path, std::span<const SvgCurve> curves,
               const std::string& comment) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  if (xmin > xmax) {
    xmin = ymin = 0.0;
    xmax = ymax = 1.0;
  }
  const double pad = 0.05 * std::max(xmax - xmin, ymax - ymin);
  xmin -= pad; xmax += pad; ymin -= pad; ymax += pad;

  std::ofstream os(path);
  if (!os) fail(errc::io_error, "cannot open for writing: " + path.string());
  os << std::setprecision(8);
  if (!comment.empty()) os << "<!-- " << comment << " -->\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\""
     << xmin << " " << -ymax << " " << (xmax - xmin) << " " << (ymax - ymin) << "\">\n";
  for (const auto& c : curves) {
    os << "  <polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"" << c.width
       << "\" points=\"";
    for (const auto& p : c.points) os << p.x << "," << -p.y << " ";
    os << "\"/>\n";
  }
  os << "</svg>\n";
}

void write_vectors(const std::filesystem::path& path, const Eigen::MatrixXd& vectors) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(errc::io_error, "cannot open for writing: " + path.string());
  os.write(reinterpret_cast<const char*>(vectors.data()),
           static_cast<std::streamsize>(sizeof(double) * vectors.size()));
  nlohmann::json side;
  side["dtype"] = "f64le";
  side["order"] = "column";
  side["n_dofs"] = vectors.rows();
  side["n_vectors"] = vectors.cols();
  write_json(path.string() + ".json", side);
}

Eigen::MatrixXd read_vectors(const std::filesystem::path& path) {
  const nlohmann::json side = read_json(path.string() + ".json");
  const auto rows = side.at("n_dofs").get<Eigen::Index>();
  const auto cols = side.at("n_vectors").get<Eigen::Index>();
  Eigen::MatrixXd m(rows, cols);
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(errc::io_error, "cannot open: " + path.string());
  is.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double) * m.size()));
  if (!is) fail(errc::io_error, "truncated vector file: " + path.string());
  return m;
}

void validate_object(const nlohmann::json& j, std::span<const FieldSpec> fields,
                     const std::string& context) {
  if (!j.is_object()) fail(errc::io_error, context + ": expected an object");
  for (const auto& f : fields) {
    if (!j.contains(f.key)) {
      if (f.required) fail(errc::io_error, context + ": missing field '" + f.key + "'");
      continue;
    }
    const auto& v = j.at(f.key);
    bool ok = false;
    switch (f.type) {
      case FieldType::number: ok = v.is_number(); break;
      case FieldType::integer: ok = v.is_number_integer(); break;
      case FieldType::boolean: ok = v.is_boolean(); break;
      case FieldType::string: ok = v.is_string(); break;
      case FieldType::array: ok = v.is_array(); break;
      case FieldType::object: ok = v.is_object(); break;
    }
    if (!ok) fail(errc::io_error, context + ": field '" + f.key + "' has the wrong type");
  }
}

}  // namespace ecplab::io
