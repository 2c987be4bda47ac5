#pragma once

#include <filesystem>
#include <string>

#include "finiteband/pencil.hpp"
#include "finiteband/potential.hpp"

namespace finiteband {

// 17 significant digits, round-trips every double.
std::string format_double(double v);

// Matrix: rows of [re, im] pairs. Pencil: {"dim", "degree", "coeffs": [matrix, ...]} ascending powers.
std::string matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const std::string& text);
std::string pencil_to_json(const MatrixPencil& p);
MatrixPencil pencil_from_json(const std::string& text);
std::string quadruple_to_json(const PencilQuadruple& q);
PencilQuadruple quadruple_from_json(const std::string& text);

// {"bands": [E0,E1,E2], "alphas": [...], "U": matrix | "random:<seed>"}; U defaults to the identity.
HochstadtSpec hochstadt_spec_from_json(const std::string& text);
std::string hochstadt_spec_to_json(const HochstadtSpec& spec);

// Columns: x, then Q, Qp, Qpp, Qppp entries row-major as _re/_im pairs.
std::string profile_to_csv(const PotentialProfile& p);
PotentialProfile profile_from_csv(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
// Writes a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace finiteband
