#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "wkg/field.hpp"

namespace wkg {

/// Flat binary snapshot layout (all little-endian 64-bit words):
///   magic   u64  0x574b474649454c44  ("WKGFIELD")
///   kind    u64  0 = box3d, 1 = radial
///   comps   u64  1 scalar, 3 vec3, 8 spinor (4 complex)
///   n       u64  points per axis
///   extent  f64
///   time    f64
///   payload f64[node_count * comps], row-major (x fastest), components
///           interleaved per node; complex components as (re, im)
void write_field(std::ostream& os, const ScalarField& f);
void write_field(std::ostream& os, const Vec3Field& f);
void write_field(std::ostream& os, const SpinorField& f);
ScalarField read_scalar_field(std::istream& is);
Vec3Field read_vec3_field(std::istream& is);
SpinorField read_spinor_field(std::istream& is);

void save_field(const std::string& path, const ScalarField& f);
void save_field(const std::string& path, const Vec3Field& f);
void save_field(const std::string& path, const SpinorField& f);
ScalarField load_scalar_field(const std::string& path);
Vec3Field load_vec3_field(const std::string& path);
SpinorField load_spinor_field(const std::string& path);

/// CSV with header "x1,x2,x3,<components...>"; intended for small grids.
void write_csv(std::ostream& os, const ScalarField& f);
void write_csv(std::ostream& os, const Vec3Field& f);
void write_csv(std::ostream& os, const SpinorField& f);

/// Flat key=value manifest (one pair per line, keys sorted).
void write_manifest(const std::string& path, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_manifest(const std::string& path);

}  // namespace wkg
