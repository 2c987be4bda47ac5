#include "finiteband/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "finiteband/error.hpp"

namespace finiteband {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

json matrix_json(const CMatrix& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMatrix matrix_parse(const json& j) {
  if (!j.is_array() || j.empty()) throw Error(ErrorCode::ParseError, "matrix must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto c = static_cast<Eigen::Index>(j[0].size());
  CMatrix a(n, c);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c)
      throw Error(ErrorCode::ParseError, "matrix rows have unequal length");
    for (Eigen::Index k = 0; k < c; ++k) {
      const auto& e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) a(i, k) = e.get<double>();
      else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        a(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
      else throw Error(ErrorCode::ParseError, "matrix entry must be a number or [re, im]");
    }
  }
  return a;
}

json pencil_json(const MatrixPencil& p) {
  json coeffs = json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(matrix_json(c));
  return {{"dim", p.dim()}, {"degree", p.degree()}, {"coeffs", coeffs}};
}

MatrixPencil pencil_parse(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("coeffs"))
    throw Error(ErrorCode::ParseError, "pencil needs dim and coeffs");
  const auto dim = j.at("dim").get<std::size_t>();
  std::vector<CMatrix> coeffs;
  for (const auto& c : j.at("coeffs")) {
    CMatrix a = matrix_parse(c);
    if (static_cast<std::size_t>(a.rows()) != dim || static_cast<std::size_t>(a.cols()) != dim)
      throw Error(ErrorCode::ShapeMismatch, "pencil coefficient does not match dim");
    coeffs.push_back(std::move(a));
  }
  if (j.contains("degree") && j.at("degree").get<int>() != static_cast<int>(coeffs.size()) - 1)
    throw Error(ErrorCode::ShapeMismatch, "pencil degree disagrees with coefficient count");
  return MatrixPencil(dim, std::move(coeffs));
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

std::string matrix_to_json(const CMatrix& a) { return matrix_json(a).dump(); }
CMatrix matrix_from_json(const std::string& text) { return matrix_parse(parse_text(text)); }
std::string pencil_to_json(const MatrixPencil& p) { return pencil_json(p).dump(); }
MatrixPencil pencil_from_json(const std::string& text) { return pencil_parse(parse_text(text)); }

std::string quadruple_to_json(const PencilQuadruple& q) {
  json j = {{"bands", q.bands.edges()},
            {"F", pencil_json(q.F)},
            {"G1", pencil_json(q.G1)},
            {"G2", pencil_json(q.G2)},
            {"H", pencil_json(q.H)}};
  return j.dump(2);
}

PencilQuadruple quadruple_from_json(const std::string& text) {
  const json j = parse_text(text);
  try {
    return {pencil_parse(j.at("F")), pencil_parse(j.at("G1")), pencil_parse(j.at("G2")), pencil_parse(j.at("H")),
            BandStructure(j.at("bands").get<std::vector<double>>())};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

HochstadtSpec hochstadt_spec_from_json(const std::string& text) {
  const json j = parse_text(text);
  HochstadtSpec s;
  try {
    for (const auto& [key, _] : j.items())
      if (key != "bands" && key != "alphas" && key != "U") throw Error(ErrorCode::ParseError, "unknown field " + key);
    s.bands = j.at("bands").get<std::vector<double>>();
    s.alphas = j.at("alphas").get<std::vector<double>>();
    const std::size_t m = s.alphas.size();
    if (s.bands.size() != 3) throw Error(ErrorCode::ParseError, "bands must list E0, E1, E2");
    if (m == 0) throw Error(ErrorCode::ParseError, "alphas must not be empty");
    if (!j.contains("U")) {
      s.U = identity(m);
    } else if (j.at("U").is_string()) {
      const auto tag = j.at("U").get<std::string>();
      if (tag.rfind("random:", 0) != 0) throw Error(ErrorCode::ParseError, "U string must be random:<seed>");
      std::uint64_t seed = 0;
      const char* first = tag.data() + 7;
      const auto [ptr, ec] = std::from_chars(first, tag.data() + tag.size(), seed);
      if (ec != std::errc() || ptr != tag.data() + tag.size()) throw Error(ErrorCode::ParseError, "bad seed in U");
      s.U = random_unitary(m, seed);
    } else {
      s.U = matrix_parse(j.at("U"));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return s;
}

std::string hochstadt_spec_to_json(const HochstadtSpec& spec) {
  return json{{"bands", spec.bands}, {"alphas", spec.alphas}, {"U", matrix_json(spec.U)}}.dump(2);
}

namespace {

const char* kBlocks[4] = {"Q", "Qp", "Qpp", "Qppp"};

}  // namespace

std::string profile_to_csv(const PotentialProfile& p) {
  const auto m = static_cast<Eigen::Index>(p.dim());
  std::ostringstream out;
  out << "x";
  for (const char* b : kBlocks)
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) out << ',' << b << '_' << i << '_' << j << "_re," << b << '_' << i << '_' << j << "_im";
  out << '\n';
  for (std::size_t r = 0; r < p.size(); ++r) {
    out << format_double(p.xs[r]);
    const CMatrix* mats[4] = {&p.Q[r], &p.Qp[r], &p.Qpp[r], &p.Qppp[r]};
    for (const CMatrix* a : mats)
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
          out << ',' << format_double((*a)(i, j).real()) << ',' << format_double((*a)(i, j).imag());
    out << '\n';
  }
  return out.str();
}

PotentialProfile profile_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "empty profile");
  std::size_t cols = 1;
  for (char ch : line) cols += ch == ',';
  const double mm = std::sqrt(static_cast<double>(cols - 1) / 8.0);
  const auto m = static_cast<Eigen::Index>(std::lround(mm));
  if (m < 1 || static_cast<std::size_t>(8 * m * m + 1) != cols) throw Error(ErrorCode::ParseError, "profile header width");
  if (line.rfind("x,Q_0_0_re", 0) != 0) throw Error(ErrorCode::ParseError, "profile header");

  PotentialProfile p;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t next = std::min(line.find(',', pos), line.size());
      double d = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + next, d);
      if (ec != std::errc() || ptr != line.data() + next)
        throw Error(ErrorCode::ParseError, "bad number on line " + std::to_string(lineno));
      v.push_back(d);
      pos = next + 1;
    }
    if (v.size() != cols) throw Error(ErrorCode::ParseError, "wrong column count on line " + std::to_string(lineno));
    p.xs.push_back(v[0]);
    std::size_t k = 1;
    std::vector<CMatrix>* dest[4] = {&p.Q, &p.Qp, &p.Qpp, &p.Qppp};
    for (auto* d : dest) {
      CMatrix a(m, m);
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j, k += 2) a(i, j) = Complex(v[k], v[k + 1]);
      d->push_back(a);
    }
  }
  if (p.xs.empty()) throw Error(ErrorCode::ParseError, "profile has no rows");
  return p;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  const auto tmp = path.parent_path() / (path.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error(ErrorCode::ConfigError, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace finiteband
