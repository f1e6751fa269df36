#include "mmvd/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mmvd {

namespace {

std::vector<double> parse_row(const std::string& line, const std::string& path,
                              int line_no) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) comma = line.size();
    const char* first = line.data() + pos;
    const char* last = line.data() + comma;
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t' ||
                            last[-1] == '\r'))
      --last;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": cannot parse field "
          << (values.size() + 1) << " as a number";
      throw std::invalid_argument(msg.str());
    }
    values.push_back(v);
    pos = comma + 1;
    if (comma == line.size()) break;
  }
  return values;
}

}  // namespace

FunctionalSample read_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument(path + ": cannot open file");

  std::string line;
  int line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    rows.push_back(parse_row(line, path, line_no));
    if (rows.size() > 1 && rows.back().size() != rows.front().size()) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": row has " << rows.back().size()
          << " fields, expected " << rows.front().size();
      throw std::invalid_argument(msg.str());
    }
  }
  if (rows.size() < 3)
    throw std::invalid_argument(path +
                                ": need a grid row and at least 2 curves");

  Grid grid(rows.front());
  const auto d = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd curves(static_cast<Eigen::Index>(rows.size() - 1), d);
  for (std::size_t r = 1; r < rows.size(); ++r)
    for (Eigen::Index c = 0; c < d; ++c)
      curves(static_cast<Eigen::Index>(r - 1), c) =
          rows[r][static_cast<std::size_t>(c)];
  return FunctionalSample(std::move(grid), std::move(curves));
}

void write_sample_csv(const std::string& path, const FunctionalSample& sample) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument(path + ": cannot open for writing");
  out.precision(17);
  const auto& pts = sample.grid().points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    out << (i ? "," : "") << pts[i];
  out << "\n";
  const auto& curves = sample.curves();
  for (Eigen::Index r = 0; r < curves.rows(); ++r) {
    for (Eigen::Index c = 0; c < curves.cols(); ++c)
      out << (c ? "," : "") << curves(r, c);
    out << "\n";
  }
}

}  // namespace mmvd
