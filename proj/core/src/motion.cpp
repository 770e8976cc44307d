// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/motion.hpp"

#include <fstream>
#include <sstream>

#include "gesturegen/errors.hpp"

namespace gesturegen {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

MotionSequence resample_motion(const MotionSequence& m, int target_fps) {
  if (target_fps <= 0) throw DataError("target fps must be positive");
  if (m.fps % target_fps != 0)
    throw DataError("cannot resample " + std::to_string(m.fps) + " fps to " +
                    std::to_string(target_fps) + " fps: non-integer ratio");
  int step = m.fps / target_fps;
  MotionSequence out;
  out.fps = target_fps;
  out.joint_names = m.joint_names;
  int frames = (m.frames() + step - 1) / step;
  out.positions.resize(frames, m.positions.cols());
  for (int f = 0; f < frames; ++f) out.positions.row(f) = m.positions.row(f * step);
  return out;
}

MotionSequence hip_center(const MotionSequence& m, int hip_joint) {
  if (hip_joint < 0 || hip_joint >= m.joints())
    throw DataError("hip joint index " + std::to_string(hip_joint) + " out of range");
  MotionSequence out = m;
  for (int f = 0; f < m.frames(); ++f) {
    double hx = m.positions(f, 3 * hip_joint + 0);
    double hy = m.positions(f, 3 * hip_joint + 1);
    double hz = m.positions(f, 3 * hip_joint + 2);
    for (int j = 0; j < m.joints(); ++j) {
      out.positions(f, 3 * j + 0) -= hx;
      out.positions(f, 3 * j + 1) -= hy;
      out.positions(f, 3 * j + 2) -= hz;
    }
  }
  return out;
}

void write_motion_csv(const MotionSequence& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "# fps=" << m.fps << "\n";
  const char* axes[3] = {"_x", "_y", "_z"};
  for (int j = 0; j < m.joints(); ++j)
    for (int a = 0; a < 3; ++a) out << (j || a ? "," : "") << m.joint_names[j] << axes[a];
  out << "\n";
  std::ostringstream row;
  row.precision(17);
  for (int f = 0; f < m.frames(); ++f) {
    row.str("");
    for (int c = 0; c < m.positions.cols(); ++c) {
      if (c) row << ",";
      row << m.positions(f, c);
    }
    out << row.str() << "\n";
  }
  if (!out) throw DataError("failed writing '" + path + "'");
}

MotionSequence read_motion_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open motion CSV '" + path + "'");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file", 1);
  MotionSequence m;
  if (line.rfind("# fps=", 0) != 0)
    throw ParseError(path + ": expected '# fps=<n>' header", 1);
  try {
    m.fps = std::stoi(line.substr(6));
  } catch (const std::exception&) {
    throw ParseError(path + ": bad fps value", 1);
  }
  if (m.fps <= 0) throw ParseError(path + ": fps must be positive", 1);

  if (!std::getline(in, line)) throw ParseError(path + ": missing column header", 2);
  std::vector<std::string> cols = split_csv_line(line);
  if (cols.empty() || cols.size() % 3 != 0)
    throw ParseError(path + ": column count must be a multiple of 3", 2);
  for (std::size_t i = 0; i < cols.size(); i += 3) {
    const std::string& c = cols[i];
    if (c.size() < 2 || c.substr(c.size() - 2) != "_x")
      throw ParseError(path + ": expected '<joint>_x' column, got '" + c + "'", 2);
    m.joint_names.push_back(c.substr(0, c.size() - 2));
  }

  std::vector<std::vector<double>> rows;
  int line_no = 2;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != cols.size())
      throw ParseError(path + ": expected " + std::to_string(cols.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no);
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      try {
        std::size_t used = 0;
        row[i] = std::stod(fields[i], &used);
        if (used != fields[i].size()) throw std::invalid_argument(fields[i]);
      } catch (const std::exception&) {
        throw ParseError(path + ": bad number '" + fields[i] + "'", line_no);
      }
    }
    rows.push_back(std::move(row));
  }

  m.positions.resize(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      m.positions(static_cast<int>(r), static_cast<int>(c)) = rows[r][c];
  return m;
}

}  // namespace gesturegen
