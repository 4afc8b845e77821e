#include "ddrom/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ddrom::io
{

namespace
{

Json matrix_to_json(const Matrix &M)
{
  Json rows = Json::array();
  for (Index i = 0; i < M.rows(); i++)
  {
    Json row = Json::array();
    for (Index j = 0; j < M.cols(); j++)
    {
      row.push_back(M(i, j));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector &v)
{
  Json out = Json::array();
  for (Index i = 0; i < v.size(); i++)
  {
    out.push_back(v(i));
  }
  return out;
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json &j)
{
  if (j.is_number())
  {
    return {j.get<double>(), 0.0};
  }
  if (j.is_array() && j.size() == 2)
  {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw Error("expected a number or an [re, im] pair");
}

Json cmatrix_to_json(const CMatrix &M, bool real)
{
  Json rows = Json::array();
  for (Index i = 0; i < M.rows(); i++)
  {
    Json row = Json::array();
    for (Index j = 0; j < M.cols(); j++)
    {
      row.push_back(real ? Json(M(i, j).real()) : complex_to_json(M(i, j)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json cvector_to_json(const CVector &v, bool real)
{
  Json out = Json::array();
  for (Index i = 0; i < v.size(); i++)
  {
    out.push_back(real ? Json(v(i).real()) : complex_to_json(v(i)));
  }
  return out;
}

CMatrix cmatrix_from_json(const Json &j, const char *name)
{
  if (!j.is_array())
  {
    throw Error(std::string("field '") + name + "' must be an array of rows");
  }
  const Index rows = static_cast<Index>(j.size());
  const Index cols = rows > 0 ? static_cast<Index>(j[0].size()) : 0;
  CMatrix M(rows, cols);
  for (Index i = 0; i < rows; i++)
  {
    if (static_cast<Index>(j[i].size()) != cols)
    {
      throw Error(std::string("ragged rows in '") + name + "'");
    }
    for (Index k = 0; k < cols; k++)
    {
      M(i, k) = complex_from_json(j[i][k]);
    }
  }
  return M;
}

CVector cvector_from_json(const Json &j, const char *name)
{
  if (!j.is_array())
  {
    throw Error(std::string("field '") + name + "' must be an array");
  }
  CVector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); i++)
  {
    v(i) = complex_from_json(j[i]);
  }
  return v;
}

Matrix real_part(const CMatrix &M, const char *name)
{
  if (M.size() > 0 && M.imag().cwiseAbs().maxCoeff() != 0.0)
  {
    throw Error(std::string("field '") + name + "' must be real");
  }
  return M.real();
}

Json points_to_json(const CVector &p)
{
  Json out = Json::array();
  for (Index i = 0; i < p.size(); i++)
  {
    out.push_back(complex_to_json(p(i)));
  }
  return out;
}

std::vector<std::string> split_line(const std::string &line)
{
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ','))
  {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',')
  {
    cells.emplace_back();
  }
  return cells;
}

double parse_double(const std::string &s)
{
  double v = 0.0;
  const char *begin = s.data();
  const char *end = s.data() + s.size();
  if (s == "inf")
  {
    return INFINITY;
  }
  if (s == "-inf")
  {
    return -INFINITY;
  }
  if (s == "nan")
  {
    return NAN;
  }
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
  {
    throw Error("not a number: '" + s + "'");
  }
  return v;
}

}  // namespace

Json system_to_json(const DiscreteLTI &sys)
{
  return Json{{"E", matrix_to_json(sys.E)},
              {"A", matrix_to_json(sys.A)},
              {"b", vector_to_json(sys.b)},
              {"c", vector_to_json(sys.c)}};
}

DiscreteLTI system_from_json(const Json &j)
{
  for (const char *key : {"A", "b", "c"})
  {
    if (!j.contains(key))
    {
      throw Error(std::string("system JSON is missing '") + key + "'");
    }
  }
  DiscreteLTI sys;
  sys.A = real_part(cmatrix_from_json(j["A"], "A"), "A");
  sys.b = real_part(cvector_from_json(j["b"], "b"), "b");
  sys.c = real_part(cvector_from_json(j["c"], "c"), "c");
  sys.E = j.contains("E") ? real_part(cmatrix_from_json(j["E"], "E"), "E")
                          : Matrix::Identity(sys.A.rows(), sys.A.rows());
  sys.validate();
  return sys;
}

Json rom_to_json(const HermiteLoewnerROM &rom)
{
  return Json{{"E", cmatrix_to_json(rom.Er, rom.is_real)},
              {"A", cmatrix_to_json(rom.Ar, rom.is_real)},
              {"b", cvector_to_json(rom.br, rom.is_real)},
              {"c", cvector_to_json(rom.cr, rom.is_real)},
              {"points", points_to_json(rom.points)},
              {"is_real", rom.is_real},
              {"pencil_min_singular", rom.pencil_min_singular}};
}

HermiteLoewnerROM rom_from_json(const Json &j)
{
  HermiteLoewnerROM rom;
  rom.Er = cmatrix_from_json(j.at("E"), "E");
  rom.Ar = cmatrix_from_json(j.at("A"), "A");
  rom.br = cvector_from_json(j.at("b"), "b");
  rom.cr = cvector_from_json(j.at("c"), "c");
  rom.points = cvector_from_json(j.at("points"), "points");
  rom.is_real = j.value("is_real", false);
  rom.pencil_min_singular = j.value("pencil_min_singular", 0.0);
  return rom;
}

Json report_to_json(const IrkaReport &report)
{
  Json history = Json::array();
  for (const CVector &p : report.point_history)
  {
    history.push_back(points_to_json(p));
  }
  Json diags = Json::array();
  for (std::size_t i = 0; i < report.diagnostics.size(); i++)
  {
    const IterationDiagnostics &d = report.diagnostics[i];
    diags.push_back(Json{{"iteration", i + 1},
                         {"max_move", d.max_move},
                         {"max_residual", d.max_residual},
                         {"max_kappa", d.max_kappa},
                         {"nhat_used", d.nhat_used}});
  }
  return Json{{"converged", report.converged},
              {"iterations", report.iterations},
              {"final_points", points_to_json(report.final_points)},
              {"rom_poles", points_to_json(report.rom_poles)},
              {"optimality_defect", report.optimality_defect},
              {"point_history", std::move(history)},
              {"diagnostics", std::move(diags)},
              {"rom", rom_to_json(report.rom)}};
}

std::string config_hash(const Json &config)
{
  const std::string text = config.dump();
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text)
  {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v)
{
  if (std::isnan(v))
  {
    return "nan";
  }
  if (std::isinf(v))
  {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header))
{
  if (header_.empty())
  {
    throw Error("CSV header must not be empty");
  }
}

void CsvTable::add_row(const std::vector<double> &values)
{
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values)
  {
    cells.push_back(format_double(v));
  }
  add_row(std::move(cells));
}

void CsvTable::add_row(std::vector<std::string> cells)
{
  if (cells.size() != header_.size())
  {
    throw Error("CSV row width differs from header");
  }
  rows_.push_back(std::move(cells));
}

double CsvTable::value(std::size_t row, const std::string &column) const
{
  for (std::size_t k = 0; k < header_.size(); k++)
  {
    if (header_[k] == column)
    {
      return parse_double(rows_.at(row)[k]);
    }
  }
  throw Error("no CSV column named '" + column + "'");
}

std::vector<double> CsvTable::column(const std::string &name) const
{
  std::vector<double> out;
  out.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); i++)
  {
    out.push_back(value(i, name));
  }
  return out;
}

std::string CsvTable::render(const std::string &hash) const
{
  std::string out = "# config-hash: " + hash + "\n";
  const auto append = [&out](const std::vector<std::string> &cells) {
    for (std::size_t k = 0; k < cells.size(); k++)
    {
      if (k > 0)
      {
        out += ',';
      }
      out += cells[k];
    }
    out += '\n';
  };
  append(header_);
  for (const auto &row : rows_)
  {
    append(row);
  }
  return out;
}

CsvTable parse_csv(const std::string &text)
{
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<std::string>> lines;
  while (std::getline(is, line))
  {
    if (!line.empty() && line.back() == '\r')
    {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#')
    {
      continue;
    }
    lines.push_back(split_line(line));
  }
  if (lines.empty())
  {
    throw Error("CSV has no header row");
  }
  CsvTable table(lines[0]);
  for (std::size_t i = 1; i < lines.size(); i++)
  {
    table.add_row(lines[i]);
  }
  return table;
}

CsvTable samples_table(const std::vector<FrequencySample> &samples)
{
  CsvTable t({"sigma_re", "sigma_im", "M0_re", "M0_im", "M1_re", "M1_im", "residual0",
              "residual1", "kappa", "alpha", "nhat_used"});
  for (const FrequencySample &s : samples)
  {
    const double nan = std::nan("");
    t.add_row({s.sigma.real(), s.sigma.imag(), s.M0.real(), s.M0.imag(),
               s.has_derivative ? s.M1.real() : nan, s.has_derivative ? s.M1.imag() : nan,
               s.residual0, s.has_derivative ? s.residual1 : nan, s.kappa, s.alpha,
               static_cast<double>(s.nhat_used)});
  }
  return t;
}

CsvTable report_summary_table(const IrkaReport &report)
{
  CsvTable t({"iteration", "max_move", "max_residual", "max_kappa"});
  for (std::size_t i = 0; i < report.diagnostics.size(); i++)
  {
    const IterationDiagnostics &d = report.diagnostics[i];
    t.add_row({static_cast<double>(i + 1), d.max_move, d.max_residual, d.max_kappa});
  }
  return t;
}

CsvTable trajectory_table(const std::string &name, const Vector &values)
{
  CsvTable t({"k", name});
  for (Index k = 0; k < values.size(); k++)
  {
    t.add_row({static_cast<double>(k), values(k)});
  }
  return t;
}

Vector trajectory_from_csv(const std::string &text, const std::string &name)
{
  const CsvTable t = parse_csv(text);
  const std::vector<double> ks = t.column("k");
  const std::vector<double> vals = t.column(name);
  Vector out(static_cast<Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); i++)
  {
    if (ks[i] != static_cast<double>(i))
    {
      throw Error("trajectory CSV must list k = 0, 1, 2, ... in order");
    }
    out(static_cast<Index>(i)) = vals[i];
  }
  return out;
}

std::string read_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw Error("cannot open '" + path + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string &path, const std::string &content)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw Error("cannot write '" + path + "'");
  }
  out << content;
  if (!out)
  {
    throw Error("write failed for '" + path + "'");
  }
}

}  // namespace ddrom::io
