#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lmg/analysis.hpp"
#include "lmg/geometry.hpp"
#include "lmg/qgt.hpp"
#include "lmg/spectral.hpp"

namespace lmg {

enum class FileFormat { Csv, Json };

FileFormat file_format_from_string(const std::string& s);

/// FieldFile: header
///   omega_x,xi_y,g11,g12,g22,f12,det_g,min_gap,status
/// one row per node, row-major with omega_x fastest, doubles at 17
/// significant digits. Failed rows carry "nan" values and their status.
void write_field(std::ostream& os, const QgtField& f, FileFormat fmt = FileFormat::Csv);
void write_field(const std::string& path, const QgtField& f, FileFormat fmt = FileFormat::Csv);
QgtField read_field(std::istream& is);
QgtField read_field(const std::string& path);

/// CurvatureFile: omega_x,xi_y,R,status (same node order).
void write_curvature(std::ostream& os, const CurvatureField& f, FileFormat fmt = FileFormat::Csv);
void write_curvature(const std::string& path, const CurvatureField& f,
                     FileFormat fmt = FileFormat::Csv);

/// DOS file: bin_left,bin_right,count.
void write_dos(std::ostream& os, const DosHistogram& h, FileFormat fmt = FileFormat::Csv);
void write_dos(const std::string& path, const DosHistogram& h, FileFormat fmt = FileFormat::Csv);

/// Two-column curve (x,y) with a one-line header; used by `peaks` and `fit`.
void write_curve(std::ostream& os, const Curve& c);
Curve read_curve(std::istream& is);
Curve read_curve(const std::string& path);

/// Serialize a double with 17 significant digits (lossless round-trip).
std::string format_double(double v);

}  // namespace lmg
