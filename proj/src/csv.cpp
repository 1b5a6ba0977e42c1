#include "ipcw/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ipcw {

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

double parse_double(const std::string& field, const std::string& what,
                    std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line_no) + ": cannot parse " +
                  what + " value '" + field + "'");
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    break;
  }
  if (line.empty() || line[0] == '#') {
    throw IoError(path.string() + ": empty file");
  }
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "z" || header[1] != "delta") {
    throw IoError(path.string() + ": header must be z,delta,x1[,x2,...]");
  }
  const int dim = static_cast<int>(header.size()) - 2;
  for (int j = 0; j < dim; ++j) {
    if (header[static_cast<std::size_t>(j) + 2] != "x" + std::to_string(j + 1)) {
      throw IoError(path.string() + ": covariate columns must be named x1..x" +
                    std::to_string(dim));
    }
  }

  std::vector<double> z, x;
  std::vector<int> delta;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw IoError("line " + std::to_string(line_no) + ": expected " +
                    std::to_string(header.size()) + " columns, got " +
                    std::to_string(fields.size()));
    }
    z.push_back(parse_double(fields[0], "z", line_no));
    const double d = parse_double(fields[1], "delta", line_no);
    if (d != 0.0 && d != 1.0) {
      throw IoError("line " + std::to_string(line_no) +
                    ": delta must be 0 or 1, got '" + fields[1] + "'");
    }
    delta.push_back(static_cast<int>(d));
    for (int j = 0; j < dim; ++j) {
      x.push_back(parse_double(fields[static_cast<std::size_t>(j) + 2],
                               "x" + std::to_string(j + 1), line_no));
    }
  }
  if (z.empty()) throw IoError(path.string() + ": no data rows");
  return Dataset(std::move(z), std::move(delta), std::move(x), dim);
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data,
                       const std::string& comment) {
  std::ofstream out = open_out(path);
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "z,delta";
  for (int j = 1; j <= data.dim(); ++j) out << ",x" << j;
  out << "\n";
  for (int i = 0; i < data.n(); ++i) {
    out << format_double(data.z(i)) << "," << data.delta(i);
    for (const double xj : data.covariate(i)) out << "," << format_double(xj);
    out << "\n";
  }
}

void write_km_csv(const std::filesystem::path& path, const StepFunction& sf,
                  const std::string& comment) {
  std::ofstream out = open_out(path);
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "u,g\n";
  for (std::size_t k = 0; k < sf.jump_locations().size(); ++k) {
    out << format_double(sf.jump_locations()[k]) << ","
        << format_double(sf.values()[k]) << "\n";
  }
}

StepFunction read_step_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    break;
  }
  std::vector<double> jumps, values;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line);
    if (fields.size() != 2) {
      throw IoError("line " + std::to_string(line_no) +
                    ": expected two columns u,g");
    }
    jumps.push_back(parse_double(fields[0], "u", line_no));
    values.push_back(parse_double(fields[1], "g", line_no));
  }
  return StepFunction(std::move(jumps), std::move(values), 0.0);
}

void write_estimates_csv(const std::filesystem::path& path,
                         const std::vector<EstimateRow>& rows, int dim,
                         const std::string& comment) {
  std::ofstream out = open_out(path);
  if (!comment.empty()) out << "# " << comment << "\n";
  for (int j = 1; j <= dim; ++j) out << "x" << j << ",";
  out << "h,estimate,flag\n";
  for (const auto& row : rows) {
    for (const double xj : row.x) out << format_double(xj) << ",";
    out << format_double(row.h) << ",";
    if (row.estimate) out << format_double(*row.estimate);
    out << "," << row.flag << "\n";
  }
}

void write_band_csv(const std::filesystem::path& path,
                    const EstimateCurve& curve, int dim,
                    const std::string& comment) {
  std::ofstream out = open_out(path);
  if (!comment.empty()) out << "# " << comment << "\n";
  for (int j = 1; j <= dim; ++j) out << "x" << j << ",";
  out << "h,estimate,lower,upper,flag\n";
  for (const auto& pt : curve.points) {
    for (const double xj : pt.x) out << format_double(xj) << ",";
    out << format_double(pt.h_used) << ",";
    if (!pt.missing()) {
      out << format_double(pt.estimate) << "," << format_double(pt.lower)
          << "," << format_double(pt.upper);
    } else {
      out << ",,";
    }
    out << "," << to_string(pt.flag) << "\n";
  }
}

void write_records_csv(const std::filesystem::path& path,
                       const SimReport& report,
                       const std::string& comment) {
  std::ofstream out = open_out(path);
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "rep,censoring_rate,sup_error,x0,halfwidth_at_x0,epsilon1,covered,"
         "failed\n";
  for (const auto& rec : report.records) {
    out << rec.rep << "," << format_double(rec.censoring_rate) << ",";
    if (rec.failed) {
      out << ",,,,," << 1 << "\n";
      continue;
    }
    out << format_double(rec.sup_error) << "," << format_double(rec.x0) << ","
        << format_double(rec.halfwidth_at_x0) << ","
        << format_double(rec.epsilon1) << "," << (rec.covered ? 1 : 0) << ","
        << 0 << "\n";
  }
}

std::vector<std::pair<double, double>> read_xy_csv(
    const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    break;
  }
  std::vector<std::pair<double, double>> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line);
    if (fields.size() < 2) {
      throw IoError("line " + std::to_string(line_no) +
                    ": expected two columns");
    }
    out.emplace_back(parse_double(fields[0], "x", line_no),
                     parse_double(fields[1], "y", line_no));
  }
  return out;
}

}  // namespace ipcw
