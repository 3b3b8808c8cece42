#include "wkg/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace wkg {

namespace {

constexpr std::uint64_t kMagic = 0x574b474649454c44ull;

static_assert(std::endian::native == std::endian::little,
              "field I/O assumes a little-endian host");

void put_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint64_t get_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

struct Header {
  GridKind kind;
  std::uint64_t comps;
  std::uint64_t n;
  double extent;
  double time;
};

void write_header(std::ostream& os, const GridSpec& g, std::uint64_t comps, double t) {
  put_u64(os, kMagic);
  put_u64(os, g.kind() == GridKind::PeriodicBox3d ? 0 : 1);
  put_u64(os, comps);
  put_u64(os, static_cast<std::uint64_t>(g.points_per_axis()));
  put_f64(os, g.extent());
  put_f64(os, t);
}

Header read_header(std::istream& is, std::uint64_t expect_comps) {
  if (get_u64(is) != kMagic) throw std::runtime_error("field I/O: bad magic");
  Header h;
  h.kind = get_u64(is) == 0 ? GridKind::PeriodicBox3d : GridKind::RadialLine1d;
  h.comps = get_u64(is);
  h.n = get_u64(is);
  h.extent = get_f64(is);
  h.time = get_f64(is);
  if (h.comps != expect_comps) throw std::runtime_error("field I/O: component count mismatch");
  return h;
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& f) {
  write_header(os, f.grid(), 1, f.time());
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(sizeof(double) * f.values().size()));
}

void write_field(std::ostream& os, const Vec3Field& f) {
  write_header(os, f.grid(), 3, f.time());
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(sizeof(Vec3) * f.values().size()));
}

void write_field(std::ostream& os, const SpinorField& f) {
  write_header(os, f.grid(), 8, f.time());
  os.write(reinterpret_cast<const char*>(f.values().data()),
           static_cast<std::streamsize>(sizeof(Spinor4) * f.values().size()));
}

ScalarField read_scalar_field(std::istream& is) {
  const Header h = read_header(is, 1);
  GridSpec g(h.kind, h.extent, static_cast<std::int64_t>(h.n));
  ScalarField f(g, h.time);
  is.read(reinterpret_cast<char*>(f.values().data()),
          static_cast<std::streamsize>(sizeof(double) * f.values().size()));
  if (!is) throw std::runtime_error("field I/O: truncated payload");
  return f;
}

Vec3Field read_vec3_field(std::istream& is) {
  const Header h = read_header(is, 3);
  GridSpec g(h.kind, h.extent, static_cast<std::int64_t>(h.n));
  Vec3Field f(g, h.time);
  is.read(reinterpret_cast<char*>(f.values().data()),
          static_cast<std::streamsize>(sizeof(Vec3) * f.values().size()));
  if (!is) throw std::runtime_error("field I/O: truncated payload");
  return f;
}

SpinorField read_spinor_field(std::istream& is) {
  const Header h = read_header(is, 8);
  GridSpec g(h.kind, h.extent, static_cast<std::int64_t>(h.n));
  SpinorField f(g, h.time);
  is.read(reinterpret_cast<char*>(f.values().data()),
          static_cast<std::streamsize>(sizeof(Spinor4) * f.values().size()));
  if (!is) throw std::runtime_error("field I/O: truncated payload");
  return f;
}

namespace {
template <class T>
void save_impl(const std::string& path, const Field<T>& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("field I/O: cannot open " + path);
  write_field(os, f);
}
}  // namespace

void save_field(const std::string& path, const ScalarField& f) { save_impl(path, f); }
void save_field(const std::string& path, const Vec3Field& f) { save_impl(path, f); }
void save_field(const std::string& path, const SpinorField& f) { save_impl(path, f); }

ScalarField load_scalar_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("field I/O: cannot open " + path);
  return read_scalar_field(is);
}
Vec3Field load_vec3_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("field I/O: cannot open " + path);
  return read_vec3_field(is);
}
SpinorField load_spinor_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("field I/O: cannot open " + path);
  return read_spinor_field(is);
}

namespace {
void csv_prefix(std::ostream& os, const GridSpec& g, std::int64_t i) {
  const auto p = g.point_of(i);
  os << p[0] << ',' << p[1] << ',' << p[2];
}
}  // namespace

void write_csv(std::ostream& os, const ScalarField& f) {
  os << "x1,x2,x3,value\n" << std::setprecision(17);
  for (std::int64_t i = 0; i < f.size(); ++i) {
    csv_prefix(os, f.grid(), i);
    os << ',' << f[i] << '\n';
  }
}

void write_csv(std::ostream& os, const Vec3Field& f) {
  os << "x1,x2,x3,v1,v2,v3\n" << std::setprecision(17);
  for (std::int64_t i = 0; i < f.size(); ++i) {
    csv_prefix(os, f.grid(), i);
    os << ',' << f[i][0] << ',' << f[i][1] << ',' << f[i][2] << '\n';
  }
}

void write_csv(std::ostream& os, const SpinorField& f) {
  os << "x1,x2,x3,re0,im0,re1,im1,re2,im2,re3,im3\n" << std::setprecision(17);
  for (std::int64_t i = 0; i < f.size(); ++i) {
    csv_prefix(os, f.grid(), i);
    for (int c = 0; c < 4; ++c)
      os << ',' << f[i][static_cast<std::size_t>(c)].real() << ','
         << f[i][static_cast<std::size_t>(c)].imag();
    os << '\n';
  }
}

void write_manifest(const std::string& path, const std::map<std::string, std::string>& kv) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("manifest: cannot open " + path);
  for (const auto& [k, v] : kv) os << k << '=' << v << '\n';
}

std::map<std::string, std::string> read_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("manifest: cannot open " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("manifest: bad line: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace wkg
