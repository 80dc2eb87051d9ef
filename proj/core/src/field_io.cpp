#include "balaw/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace balaw {
namespace {

constexpr char kBinaryMagic[8] = {'B', 'A', 'L', 'A', 'W', 'F', 'L', 'D'};
constexpr std::uint32_t kBinaryVersion = 1;

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

template <typename T>
void write_raw(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("field snapshot: truncated binary file");
  return v;
}

}  // namespace

void write_field_csv(const std::string& path, const ScalarField& u,
                     double time) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  const Grid& g = u.grid();
  const int dim = g.dimension();

  os << "# field snapshot v1\n";
  os << "# dimension," << dim << "\n";
  os << "# spacing," << format_double(g.spacing()) << "\n";
  os << "# origin";
  for (double o : g.origin()) os << "," << format_double(o);
  os << "\n# cells";
  for (std::int64_t c : g.cells()) os << "," << c;
  os << "\n# time," << format_double(time) << "\n";

  for (int d = 0; d < dim; ++d) os << "x" << d << ",";
  os << "value\n";

  std::vector<double> x(dim);
  os.precision(17);
  for (std::int64_t i = 0; i < g.cell_count(); ++i) {
    g.cell_center(i, x);
    for (int d = 0; d < dim; ++d) os << format_double(x[d]) << ",";
    os << format_double(u[i]) << "\n";
  }
  if (!os) throw std::runtime_error("write failed: " + path);
}

void write_field_binary(const std::string& path, const ScalarField& u,
                        double time) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  const Grid& g = u.grid();

  os.write(kBinaryMagic, sizeof(kBinaryMagic));
  write_raw(os, kBinaryVersion);
  write_raw(os, static_cast<std::uint32_t>(g.dimension()));
  for (std::int64_t c : g.cells()) write_raw(os, c);
  for (double o : g.origin()) write_raw(os, o);
  write_raw(os, g.spacing());
  write_raw(os, time);
  os.write(reinterpret_cast<const char*>(u.values().data()),
           static_cast<std::streamsize>(u.values().size() * sizeof(double)));
  if (!os) throw std::runtime_error("write failed: " + path);
}

std::pair<ScalarField, double> read_field_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path);

  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kBinaryMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("field snapshot: bad magic in " + path);
  }
  const auto version = read_raw<std::uint32_t>(is);
  if (version != kBinaryVersion) {
    throw std::runtime_error("field snapshot: unsupported version " +
                             std::to_string(version));
  }
  const auto dim = read_raw<std::uint32_t>(is);
  if (dim == 0 || dim > 16) {
    throw std::runtime_error("field snapshot: implausible dimension");
  }
  std::vector<std::int64_t> cells(dim);
  for (auto& c : cells) c = read_raw<std::int64_t>(is);
  Vec origin(dim);
  for (auto& o : origin) o = read_raw<double>(is);
  const double spacing = read_raw<double>(is);
  const double time = read_raw<double>(is);

  auto grid = std::make_shared<Grid>(origin, spacing, cells);
  std::vector<double> values(grid->cell_count());
  is.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("field snapshot: truncated values");
  return {ScalarField(std::move(grid), std::move(values)), time};
}

}  // namespace balaw
