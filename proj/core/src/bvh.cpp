// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/bvh.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gesturegen/errors.hpp"

namespace gesturegen {
namespace {

struct Token {
  std::string text;
  int line = 0;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  std::string cur;
  int line = 1;
  int cur_line = 1;
  auto flush = [&] {
    if (!cur.empty()) {
      tokens.push_back({cur, cur_line});
      cur.clear();
    }
  };
  for (char c : text) {
    if (c == '\n') {
      flush();
      ++line;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      if (cur.empty()) cur_line = line;
      cur += c;
    }
  }
  flush();
  return tokens;
}

class TokenStream {
 public:
  TokenStream(std::vector<Token> tokens, std::string origin)
      : tokens_(std::move(tokens)), origin_(std::move(origin)) {}

  bool done() const { return pos_ >= tokens_.size(); }

  const Token& peek() const {
    if (done()) throw ParseError(origin_ + ": unexpected end of file", last_line());
    return tokens_[pos_];
  }

  Token next() {
    Token t = peek();
    ++pos_;
    return t;
  }

  void expect(const std::string& text) {
    Token t = next();
    if (t.text != text)
      throw ParseError(origin_ + ": expected '" + text + "', got '" + t.text + "'", t.line);
  }

  double number() {
    Token t = next();
    try {
      std::size_t used = 0;
      double v = std::stod(t.text, &used);
      if (used != t.text.size()) throw std::invalid_argument(t.text);
      return v;
    } catch (const std::exception&) {
      throw ParseError(origin_ + ": expected a number, got '" + t.text + "'", t.line);
    }
  }

  int integer() {
    Token t = peek();
    double v = number();
    if (v != std::floor(v))
      throw ParseError(origin_ + ": expected an integer, got '" + t.text + "'", t.line);
    return static_cast<int>(v);
  }

  int last_line() const { return tokens_.empty() ? 0 : tokens_.back().line; }
  const std::string& origin() const { return origin_; }

 private:
  std::vector<Token> tokens_;
  std::string origin_;
  std::size_t pos_ = 0;
};

Eigen::Vector3d parse_offset(TokenStream& ts) {
  ts.expect("OFFSET");
  Eigen::Vector3d v;
  v.x() = ts.number();
  v.y() = ts.number();
  v.z() = ts.number();
  return v;
}

void parse_joint(TokenStream& ts, Skeleton& skeleton, int parent) {
  Token name = ts.next();
  Joint joint;
  joint.name = name.text;
  joint.parent = parent;
  int index = skeleton.joint_count();
  skeleton.joints.push_back(joint);

  ts.expect("{");
  skeleton.joints[index].offset = parse_offset(ts);

  Token channels_kw = ts.next();
  if (channels_kw.text != "CHANNELS")
    throw ParseError(ts.origin() + ": expected 'CHANNELS', got '" + channels_kw.text + "'",
                     channels_kw.line);
  int n = ts.integer();
  for (int i = 0; i < n; ++i) {
    Token t = ts.next();
    try {
      skeleton.joints[index].channels.push_back(channel_from_string(t.text));
    } catch (const Error&) {
      throw ParseError(ts.origin() + ": unknown channel '" + t.text + "'", t.line);
    }
  }

  while (true) {
    Token t = ts.next();
    if (t.text == "}") break;
    if (t.text == "JOINT") {
      parse_joint(ts, skeleton, index);
    } else if (t.text == "End") {
      ts.expect("Site");
      ts.expect("{");
      skeleton.joints[index].has_end_site = true;
      skeleton.joints[index].end_site_offset = parse_offset(ts);
      ts.expect("}");
    } else {
      throw ParseError(ts.origin() + ": expected 'JOINT', 'End' or '}', got '" + t.text + "'",
                       t.line);
    }
  }
}

std::string channel_to_string(Channel c) {
  switch (c) {
    case Channel::Xposition: return "Xposition";
    case Channel::Yposition: return "Yposition";
    case Channel::Zposition: return "Zposition";
    case Channel::Xrotation: return "Xrotation";
    case Channel::Yrotation: return "Yrotation";
    case Channel::Zrotation: return "Zrotation";
  }
  throw Error("invalid channel");
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

}  // namespace

bool is_rotation(Channel c) {
  return c == Channel::Xrotation || c == Channel::Yrotation || c == Channel::Zrotation;
}

Channel channel_from_string(const std::string& s) {
  if (s == "Xposition") return Channel::Xposition;
  if (s == "Yposition") return Channel::Yposition;
  if (s == "Zposition") return Channel::Zposition;
  if (s == "Xrotation") return Channel::Xrotation;
  if (s == "Yrotation") return Channel::Yrotation;
  if (s == "Zrotation") return Channel::Zrotation;
  throw Error("unknown channel '" + s + "'");
}

int Skeleton::channel_count() const {
  int n = 0;
  for (const Joint& j : joints) n += static_cast<int>(j.channels.size());
  return n;
}

int Skeleton::find_joint(const std::string& name) const {
  for (int i = 0; i < joint_count(); ++i)
    if (joints[i].name == name) return i;
  return -1;
}

int BvhData::fps() const {
  if (frame_time <= 0.0) throw DataError("frame time must be positive");
  double fps = 1.0 / frame_time;
  double rounded = std::round(fps);
  if (std::abs(fps - rounded) > 1e-6 * fps)
    throw DataError("frame time " + std::to_string(frame_time) +
                    " is not an integer frame rate");
  return static_cast<int>(rounded);
}

BvhData parse_bvh_string(const std::string& text, const std::string& origin) {
  TokenStream ts(tokenize(text), origin);
  BvhData bvh;

  ts.expect("HIERARCHY");
  ts.expect("ROOT");
  parse_joint(ts, bvh.skeleton, -1);

  ts.expect("MOTION");
  Token frames_kw = ts.next();
  if (frames_kw.text != "Frames:")
    throw ParseError(origin + ": expected 'Frames:', got '" + frames_kw.text + "'",
                     frames_kw.line);
  int frame_count = ts.integer();
  if (frame_count < 0)
    throw ParseError(origin + ": negative frame count", frames_kw.line);

  ts.expect("Frame");
  Token time_kw = ts.next();
  if (time_kw.text != "Time:")
    throw ParseError(origin + ": expected 'Frame Time:', got '" + time_kw.text + "'",
                     time_kw.line);
  bvh.frame_time = ts.number();
  if (bvh.frame_time <= 0.0)
    throw ParseError(origin + ": frame time must be positive", time_kw.line);

  int channels = bvh.skeleton.channel_count();
  bvh.frames.resize(frame_count, channels);
  for (int f = 0; f < frame_count; ++f)
    for (int c = 0; c < channels; ++c) bvh.frames(f, c) = ts.number();
  if (!ts.done()) {
    Token t = ts.peek();
    throw ParseError(origin + ": trailing data after motion frames", t.line);
  }

  bvh.channel_offset.resize(bvh.skeleton.joint_count());
  int offset = 0;
  for (int j = 0; j < bvh.skeleton.joint_count(); ++j) {
    bvh.channel_offset[j] = offset;
    offset += static_cast<int>(bvh.skeleton.joints[j].channels.size());
  }
  return bvh;
}

BvhData parse_bvh(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open BVH file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bvh_string(buf.str(), path);
}

void write_bvh(const BvhData& bvh, const std::string& path) {
  const Skeleton& sk = bvh.skeleton;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");

  std::vector<std::vector<int>> children(sk.joint_count());
  for (int j = 0; j < sk.joint_count(); ++j)
    if (sk.joints[j].parent >= 0) children[sk.joints[j].parent].push_back(j);

  auto indent = [](int depth) { return std::string(2 * static_cast<std::size_t>(depth), ' '); };
  auto write_joint = [&](auto&& self, int j, int depth) -> void {
    const Joint& joint = sk.joints[j];
    out << indent(depth) << (joint.parent < 0 ? "ROOT " : "JOINT ") << joint.name << "\n";
    out << indent(depth) << "{\n";
    out << indent(depth + 1) << "OFFSET " << format_number(joint.offset.x()) << " "
        << format_number(joint.offset.y()) << " " << format_number(joint.offset.z()) << "\n";
    out << indent(depth + 1) << "CHANNELS " << joint.channels.size();
    for (Channel c : joint.channels) out << " " << channel_to_string(c);
    out << "\n";
    for (int child : children[j]) self(self, child, depth + 1);
    if (joint.has_end_site) {
      out << indent(depth + 1) << "End Site\n";
      out << indent(depth + 1) << "{\n";
      out << indent(depth + 2) << "OFFSET " << format_number(joint.end_site_offset.x()) << " "
          << format_number(joint.end_site_offset.y()) << " "
          << format_number(joint.end_site_offset.z()) << "\n";
      out << indent(depth + 1) << "}\n";
    }
    out << indent(depth) << "}\n";
  };

  out << "HIERARCHY\n";
  write_joint(write_joint, 0, 0);
  out << "MOTION\n";
  out << "Frames: " << bvh.frame_count() << "\n";
  out << "Frame Time: " << format_number(bvh.frame_time) << "\n";
  for (int f = 0; f < bvh.frame_count(); ++f) {
    for (int c = 0; c < bvh.frames.cols(); ++c) {
      if (c) out << " ";
      out << format_number(bvh.frames(f, c));
    }
    out << "\n";
  }
  if (!out) throw DataError("failed writing '" + path + "'");
}

Eigen::Matrix3d rotation_matrix(Channel axis, double degrees) {
  double rad = degrees * M_PI / 180.0;
  double c = std::cos(rad), s = std::sin(rad);
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  switch (axis) {
    case Channel::Xrotation:
      r(1, 1) = c; r(1, 2) = -s;
      r(2, 1) = s; r(2, 2) = c;
      break;
    case Channel::Yrotation:
      r(0, 0) = c; r(0, 2) = s;
      r(2, 0) = -s; r(2, 2) = c;
      break;
    case Channel::Zrotation:
      r(0, 0) = c; r(0, 1) = -s;
      r(1, 0) = s; r(1, 1) = c;
      break;
    default:
      throw Error("rotation_matrix needs a rotation channel");
  }
  return r;
}

std::vector<Eigen::Vector3d> forward_kinematics(const Skeleton& skeleton,
                                                const std::vector<int>& channel_offset,
                                                const Eigen::RowVectorXd& frame) {
  int n = skeleton.joint_count();
  std::vector<Eigen::Vector3d> positions(n);
  std::vector<Eigen::Matrix3d> global_rot(n);

  for (int j = 0; j < n; ++j) {
    const Joint& joint = skeleton.joints[j];
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();
    Eigen::Matrix3d local_rot = Eigen::Matrix3d::Identity();
    int base = channel_offset[j];
    for (int c = 0; c < static_cast<int>(joint.channels.size()); ++c) {
      Channel ch = joint.channels[c];
      double v = frame(base + c);
      switch (ch) {
        case Channel::Xposition: translation.x() += v; break;
        case Channel::Yposition: translation.y() += v; break;
        case Channel::Zposition: translation.z() += v; break;
        default: local_rot = local_rot * rotation_matrix(ch, v); break;
      }
    }
    Eigen::Vector3d local_pos = joint.offset + translation;
    if (joint.parent < 0) {
      positions[j] = local_pos;
      global_rot[j] = local_rot;
    } else {
      positions[j] = positions[joint.parent] + global_rot[joint.parent] * local_pos;
      global_rot[j] = global_rot[joint.parent] * local_rot;
    }
  }
  return positions;
}

MotionSequence to_motion_sequence(const BvhData& bvh) {
  MotionSequence m;
  m.fps = bvh.fps();
  int joints = bvh.skeleton.joint_count();
  for (const Joint& j : bvh.skeleton.joints) m.joint_names.push_back(j.name);
  m.positions.resize(bvh.frame_count(), 3 * joints);
  for (int f = 0; f < bvh.frame_count(); ++f) {
    std::vector<Eigen::Vector3d> pos =
        forward_kinematics(bvh.skeleton, bvh.channel_offset, bvh.frames.row(f));
    for (int j = 0; j < joints; ++j) {
      m.positions(f, 3 * j + 0) = pos[j].x();
      m.positions(f, 3 * j + 1) = pos[j].y();
      m.positions(f, 3 * j + 2) = pos[j].z();
    }
  }
  return m;
}

}  // namespace gesturegen
