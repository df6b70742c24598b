#pragma once

// Source and scheme files in the structured-text block format of pmf_io.hpp.
//
// Source file: a `joint` block over axes A, B, E and an optional
// `distortion` block (|A| rows of |A| values, optional `dmax` line). Without
// a distortion block the Hamming distortion is used.
//
// Scheme file: `conditional v` (input = A symbols), `conditional u`
// (input = V symbols) and an optional `reconstruction` block with one row per
// V symbol listing the A symbol chosen for each B symbol. Without it the
// distortion-optimal reconstruction is derived from the source.

#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "pmf_io.hpp"
#include "region.hpp"

namespace secrecy::io {

inline SecureSource source_from_blocks(const std::vector<Block>& blocks) {
  const Block* joint = nullptr;
  const Block* dist = nullptr;
  for (const auto& b : blocks) {
    if (b.kind == "joint" && !joint) joint = &b;
    else if (b.kind == "distortion" && !dist) dist = &b;
  }
  if (!joint) throw ParseError("source file has no 'joint' block");
  JointPmf pmf = joint_from_block(*joint);
  if (pmf.rank() != 3 || !pmf.has_axis("A") || !pmf.has_axis("B") || !pmf.has_axis("E"))
    fail(joint->line, "source joint must have exactly the axes A, B, E");
  const std::size_t na = pmf.axis("A").alphabet.size();
  if (!dist) return SecureSource(pmf, hamming_distortion(na));

  std::vector<double> d;
  auto rows = dist->all("row");
  if (rows.size() != na) fail(dist->line, "distortion block expects " + std::to_string(na) + " rows");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto vals = parse_numbers(*rows[r]);
    if (vals.size() != na) fail(rows[r]->number, "distortion row " + std::to_string(r) + " needs " + std::to_string(na) + " entries");
    d.insert(d.end(), vals.begin(), vals.end());
  }
  std::optional<double> dmax;
  if (const Line* l = dist->find("dmax")) {
    if (l->args.size() != 1) fail(l->number, "dmax takes one value");
    dmax = parse_number(*l, l->args[0]);
  }
  return SecureSource(pmf, std::move(d), dmax);
}

inline SecureSource read_source(std::istream& in) { return source_from_blocks(parse_blocks(in)); }

inline AuxScheme scheme_from_blocks(const std::vector<Block>& blocks, const SecureSource& source) {
  const Block *v = nullptr, *u = nullptr, *rec = nullptr;
  for (const auto& b : blocks) {
    if (b.kind == "conditional" && b.name == "v") v = &b;
    else if (b.kind == "conditional" && b.name == "u") u = &b;
    else if (b.kind == "reconstruction") rec = &b;
  }
  if (!v) throw ParseError("scheme file has no 'conditional v' block");
  if (!u) throw ParseError("scheme file has no 'conditional u' block");
  ConditionalPmf vc = conditional_from_block(*v);
  ConditionalPmf uc = conditional_from_block(*u);
  if (!(vc.input() == source.a())) fail(v->line, "v channel input symbols must equal the source A symbols");
  if (!(uc.input() == vc.output())) fail(u->line, "u channel input symbols must equal the v channel output symbols");
  if (!rec) return make_scheme(source, std::move(vc), std::move(uc));

  auto rows = rec->all("row");
  const std::size_t nv = vc.output().size(), nb = source.b().size();
  if (rows.size() != nv) fail(rec->line, "reconstruction block expects " + std::to_string(nv) + " rows (one per V symbol)");
  std::vector<std::size_t> table;
  for (std::size_t r = 0; r < nv; ++r) {
    if (rows[r]->args.size() != nb)
      fail(rows[r]->number, "reconstruction row " + std::to_string(r) + " needs one A symbol per B symbol");
    for (const auto& lab : rows[r]->args) {
      auto idx = source.a().find(lab);
      if (!idx) fail(rows[r]->number, "'" + lab + "' is not an A symbol");
      table.push_back(*idx);
    }
  }
  return AuxScheme(std::move(vc), std::move(uc), Reconstruction(nv, nb, std::move(table)));
}

inline AuxScheme read_scheme(std::istream& in, const SecureSource& source) {
  return scheme_from_blocks(parse_blocks(in), source);
}

inline void write_source(std::ostream& os, const SecureSource& source) {
  write_joint(os, source.joint());
  const auto old = os.precision(std::numeric_limits<double>::max_digits10);
  const std::size_t n = source.a().size();
  os << "distortion\n";
  for (std::size_t r = 0; r < n; ++r) write_number_row(os, source.distortion_matrix().subspan(r * n, n));
  os << "dmax " << source.d_max() << "\nend\n";
  os.precision(old);
}

inline void write_scheme(std::ostream& os, const AuxScheme& scheme, const SecureSource& source) {
  write_conditional(os, "v", scheme.v_channel);
  write_conditional(os, "u", scheme.u_channel);
  os << "reconstruction\n";
  for (std::size_t v = 0; v < scheme.reconstruction.v_size(); ++v) {
    os << "row";
    for (std::size_t b = 0; b < scheme.reconstruction.b_size(); ++b) os << ' ' << source.a()[scheme.reconstruction(v, b)];
    os << '\n';
  }
  os << "end\n";
}

}  // namespace secrecy::io
