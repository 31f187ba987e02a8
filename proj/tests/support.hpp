#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace test_support {

using Row = std::vector<std::string>;

inline std::vector<Row> read_csv(const std::string& name) {
  std::ifstream in(std::string(VACSTRESS_FIXTURES) + "/" + name);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::vector<Row> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    Row row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

inline double rel_err(double got, double want, double scale = 0) {
  const double s = std::max(std::abs(want), scale);
  return s == 0 ? std::abs(got) : std::abs(got - want) / s;
}

}  // namespace test_support
