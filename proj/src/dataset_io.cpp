#include "nrp/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "nrp/error.hpp"

namespace nrp {

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_dataset(std::ostream& out, const Dataset& data) {
  out << data.n() << ' ' << data.d() << ' ' << format_real(data.norm_exponent())
      << '\n';
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const Eigen::VectorXd x = data.features(i);
    out << data.labels()[i];
    for (Eigen::Index j = 0; j < x.size(); ++j) out << ' ' << format_real(x[j]);
    out << '\n';
  }
  if (const auto& cert = data.certificate()) {
    out << "# known_margin=" << format_real(cert->known_margin) << '\n';
    out << "# exact=" << (cert->exact_margin ? 1 : 0) << '\n';
    if (cert->w_star) {
      out << "# w_star=";
      for (Eigen::Index j = 0; j < cert->w_star->size(); ++j) {
        if (j > 0) out << ',';
        out << format_real((*cert->w_star)[j]);
      }
      out << '\n';
    }
  }
}

void write_dataset_file(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  write_dataset(out, data);
  if (!out) throw Error(ErrorCode::InvalidArgument, "failed writing " + path);
}

namespace {

double parse_real(const std::string& token) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::Parse, "not a number: '" + token + "'");
  }
  if (used != token.size()) {
    throw Error(ErrorCode::Parse, "trailing characters in '" + token + "'");
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

Dataset read_dataset(std::istream& in) {
  std::string line;
  long n = 0, d = 0;
  double p = 0.0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream header(line);
    std::string tn, td, tp, extra;
    if (!(header >> tn >> td >> tp) || (header >> extra)) {
      throw Error(ErrorCode::Parse, "header must be 'n d p'");
    }
    n = static_cast<long>(parse_real(tn));
    d = static_cast<long>(parse_real(td));
    p = parse_real(tp);
    break;
  }
  if (n < 1 || d < 1) throw Error(ErrorCode::Parse, "missing or invalid header");

  RowMatrix features(n, d);
  Eigen::VectorXi labels(n);
  long row = 0;
  Dataset::Certificate cert;
  bool has_margin = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = trim(body.substr(0, eq));
      const std::string value = trim(body.substr(eq + 1));
      if (key == "known_margin") {
        cert.known_margin = parse_real(value);
        has_margin = true;
      } else if (key == "exact") {
        cert.exact_margin = parse_real(value) != 0.0;
      } else if (key == "w_star") {
        std::vector<double> coords;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) coords.push_back(parse_real(trim(item)));
        cert.w_star = Eigen::Map<Eigen::VectorXd>(coords.data(),
                                                  static_cast<long>(coords.size()));
      }
      continue;
    }
    if (row >= n) throw Error(ErrorCode::Parse, "more data rows than declared");
    std::istringstream fields(line);
    std::string token;
    std::vector<double> values;
    while (fields >> token) values.push_back(parse_real(token));
    if (static_cast<long>(values.size()) != d + 1) {
      throw Error(ErrorCode::Parse,
                  "row " + std::to_string(row) + " does not have d + 1 fields");
    }
    const double y = values[0];
    if (y != 1.0 && y != -1.0) {
      throw Error(ErrorCode::BadLabel, "label of row " + std::to_string(row), row);
    }
    labels[row] = static_cast<int>(y);
    for (long j = 0; j < d; ++j) features(row, j) = values[j + 1];
    ++row;
  }
  if (row != n) throw Error(ErrorCode::Parse, "fewer data rows than declared");
  if (!has_margin) return build_dataset(features, labels, p);

  RowMatrix signed_rows = labels.cast<double>().asDiagonal() * features;
  return Dataset(std::move(signed_rows), labels, p, cert);
}

Dataset read_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  return read_dataset(in);
}

}  // namespace nrp
