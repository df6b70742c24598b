#pragma once

// Structured-text form of pmfs and channels.
//
// A file is a sequence of blocks. Blank lines and text after '#' are ignored.
//
//   joint
//   axis A 0 1            # one line per axis: name, then symbol labels
//   axis B 0 e 1
//   row 0.25 0.0 0.25     # flat row-major mass, cut into rows along the last axis
//   row 0.0 0.25 0.25
//   end
//
//   conditional v         # named channel p(output | input)
//   input 0 1
//   output 0 1
//   row 0.9 0.1           # one row per input symbol
//   row 0.1 0.9
//   end
//
// Other block kinds (distortion, reconstruction) share the same line grammar
// and are interpreted by the modules that own them.

#include <cmath>
#include <cstddef>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "info.hpp"

namespace secrecy::io {

struct Line {
  std::size_t number = 0;  // 1-based, in the source text
  std::string key;
  std::vector<std::string> args;
};

struct Block {
  std::string kind;
  std::string name;
  std::size_t line = 0;
  std::vector<Line> lines;

  const Line* find(std::string_view key) const {
    for (const auto& l : lines)
      if (l.key == key) return &l;
    return nullptr;
  }
  std::vector<const Line*> all(std::string_view key) const {
    std::vector<const Line*> out;
    for (const auto& l : lines)
      if (l.key == key) out.push_back(&l);
    return out;
  }
};

[[noreturn]] inline void fail(std::size_t line, const std::string& what) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

inline std::vector<Block> parse_blocks(std::istream& in) {
  std::vector<Block> blocks;
  Block* open = nullptr;
  std::string text;
  std::size_t number = 0;
  while (std::getline(in, text)) {
    ++number;
    if (auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    std::istringstream ls(text);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!open) {
      if (tok.size() > 2) fail(number, "block header '" + tok[0] + "' takes at most one name");
      blocks.push_back(Block{tok[0], tok.size() == 2 ? tok[1] : std::string{}, number, {}});
      open = &blocks.back();
      continue;
    }
    if (tok[0] == "end") {
      if (tok.size() != 1) fail(number, "'end' takes no arguments");
      open = nullptr;
      continue;
    }
    Line l{number, tok[0], {tok.begin() + 1, tok.end()}};
    open->lines.push_back(std::move(l));
  }
  if (open) fail(number, "block '" + open->kind + "' opened on line " + std::to_string(open->line) + " is not closed");
  return blocks;
}

inline double parse_number(const Line& l, const std::string& tok) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    fail(l.number, "'" + tok + "' is not a number");
  }
  if (used != tok.size()) fail(l.number, "'" + tok + "' is not a number");
  return v;
}

inline std::vector<double> parse_numbers(const Line& l) {
  std::vector<double> v;
  v.reserve(l.args.size());
  for (const auto& t : l.args) v.push_back(parse_number(l, t));
  return v;
}

inline JointPmf joint_from_block(const Block& b) {
  std::vector<Axis> axes;
  for (const Line* l : b.all("axis")) {
    if (l->args.size() < 2) fail(l->number, "axis needs a name and at least one symbol");
    try {
      axes.push_back(Axis{l->args[0], Alphabet({l->args.begin() + 1, l->args.end()})});
    } catch (const std::invalid_argument& e) {
      fail(l->number, e.what());
    }
  }
  if (axes.empty()) fail(b.line, "joint block has no axes");
  const std::size_t width = axes.back().alphabet.size();
  std::size_t rows_expected = 1;
  for (std::size_t k = 0; k + 1 < axes.size(); ++k) rows_expected *= axes[k].alphabet.size();

  auto rows = b.all("row");
  if (rows.size() != rows_expected)
    fail(b.line, "joint block expects " + std::to_string(rows_expected) + " rows, found " + std::to_string(rows.size()));

  auto describe = [&](std::size_t r) {
    std::string s = "row " + std::to_string(r);
    if (axes.size() > 1) {
      s += " (";
      std::size_t rem = r;
      std::vector<std::size_t> idx(axes.size() - 1);
      for (std::size_t k = axes.size() - 1; k-- > 0;) {
        idx[k] = rem % axes[k].alphabet.size();
        rem /= axes[k].alphabet.size();
      }
      for (std::size_t k = 0; k < idx.size(); ++k)
        s += (k ? "," : "") + axes[k].name + "=" + axes[k].alphabet[idx[k]];
      s += ")";
    }
    return s;
  };

  std::vector<double> mass;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto vals = parse_numbers(*rows[r]);
    if (vals.size() != width)
      fail(rows[r]->number, describe(r) + " has " + std::to_string(vals.size()) + " entries, expected " + std::to_string(width));
    for (double x : vals)
      if (!(x >= 0.0) || !std::isfinite(x)) fail(rows[r]->number, describe(r) + " has a negative or non-finite entry");
    mass.insert(mass.end(), vals.begin(), vals.end());
  }
  try {
    return JointPmf(std::move(axes), std::move(mass));
  } catch (const std::invalid_argument& e) {
    fail(b.line, e.what());
  }
}

inline ConditionalPmf conditional_from_block(const Block& b) {
  const Line* in = b.find("input");
  const Line* out = b.find("output");
  if (!in || in->args.empty()) fail(b.line, "conditional block needs an 'input' line with symbols");
  if (!out || out->args.empty()) fail(b.line, "conditional block needs an 'output' line with symbols");
  std::optional<Alphabet> ia, oa;
  try {
    ia.emplace(in->args);
  } catch (const std::invalid_argument& e) {
    fail(in->number, e.what());
  }
  try {
    oa.emplace(out->args);
  } catch (const std::invalid_argument& e) {
    fail(out->number, e.what());
  }
  auto rows = b.all("row");
  if (rows.size() != ia->size())
    fail(b.line, "conditional block expects " + std::to_string(ia->size()) + " rows, found " + std::to_string(rows.size()));
  std::vector<double> flat;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto vals = parse_numbers(*rows[r]);
    const std::string tag = "row " + std::to_string(r) + " (input '" + (*ia)[r] + "')";
    if (vals.size() != oa->size())
      fail(rows[r]->number, tag + " has " + std::to_string(vals.size()) + " entries, expected " + std::to_string(oa->size()));
    double sum = 0.0;
    for (double x : vals) {
      if (!(x >= 0.0) || !std::isfinite(x)) fail(rows[r]->number, tag + " has a negative or non-finite entry");
      sum += x;
    }
    if (std::abs(sum - 1.0) > kPmfTolerance) {
      std::ostringstream os;
      os.precision(17);
      os << tag << " sums to " << sum << ", expected 1";
      fail(rows[r]->number, os.str());
    }
    flat.insert(flat.end(), vals.begin(), vals.end());
  }
  return ConditionalPmf(*ia, *oa, std::move(flat));
}

inline void write_number_row(std::ostream& os, std::span<const double> vals) {
  os << "row";
  for (double x : vals) os << ' ' << x;
  os << '\n';
}

inline void write_joint(std::ostream& os, const JointPmf& pmf) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "joint\n";
  for (const auto& a : pmf.axes()) {
    os << "axis " << a.name;
    for (const auto& s : a.alphabet.symbols()) os << ' ' << s;
    os << '\n';
  }
  const std::size_t width = pmf.axes().back().alphabet.size();
  auto m = pmf.mass();
  for (std::size_t off = 0; off < m.size(); off += width) write_number_row(os, m.subspan(off, width));
  os << "end\n";
  os.precision(old);
}

inline void write_conditional(std::ostream& os, const std::string& name, const ConditionalPmf& ch) {
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  os << "conditional " << name << "\ninput";
  for (const auto& s : ch.input().symbols()) os << ' ' << s;
  os << "\noutput";
  for (const auto& s : ch.output().symbols()) os << ' ' << s;
  os << '\n';
  for (std::size_t r = 0; r < ch.input().size(); ++r) write_number_row(os, ch.row(r));
  os << "end\n";
  os.precision(old);
}

inline JointPmf read_joint(std::istream& in) {
  auto blocks = parse_blocks(in);
  for (const auto& b : blocks)
    if (b.kind == "joint") return joint_from_block(b);
  throw ParseError("no 'joint' block found");
}

inline ConditionalPmf read_conditional(std::istream& in, std::string_view name = {}) {
  auto blocks = parse_blocks(in);
  for (const auto& b : blocks)
    if (b.kind == "conditional" && (name.empty() || b.name == name)) return conditional_from_block(b);
  throw ParseError("no matching 'conditional' block found");
}

}  // namespace secrecy::io
