// SPDX-License-Identifier: Apache-2.0
#include "isoq/denotation.hpp"

#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "isoq/printer.hpp"
#include "isoq/typechecker.hpp"

namespace isoq {

std::optional<std::size_t> Basis::find(const ValuePtr& v) const {
  auto it = index.find(v);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

namespace {

class Enumerator {
 public:
  // Values of exactly `size` constructors.
  const std::vector<ValuePtr>& exactly(const TypePtr& a, std::size_t size) {
    auto key = std::make_pair(pretty_print(*a), size);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    std::vector<ValuePtr> out;
    switch (a->kind) {
      case ValueType::Kind::Unit:
        if (size == 1) out.push_back(Value::unit());
        break;
      case ValueType::Kind::Var:
        throw std::invalid_argument("cannot enumerate the opaque type " + a->name);
      case ValueType::Kind::List:
        out = exactly(unfold_list(a), size);
        break;
      case ValueType::Kind::Sum:
        if (size >= 2) {
          for (const auto& v : exactly(a->left, size - 1)) out.push_back(Value::inl(v));
          for (const auto& v : exactly(a->right, size - 1)) out.push_back(Value::inr(v));
        }
        break;
      case ValueType::Kind::Product:
        for (std::size_t k = 1; k + 2 <= size; ++k) {
          const auto& left = exactly(a->left, k);
          if (left.empty()) continue;
          const auto& right = exactly(a->right, size - 1 - k);
          for (const auto& l : left) {
            for (const auto& r : right) out.push_back(Value::pair(l, r));
          }
        }
        break;
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  std::map<std::pair<std::string, std::size_t>, std::vector<ValuePtr>> memo_;
};

bool closed_type(const ValueType& t) {
  switch (t.kind) {
    case ValueType::Kind::Unit:
      return true;
    case ValueType::Kind::Var:
      return false;
    case ValueType::Kind::List:
      return closed_type(*t.left);
    default:
      return closed_type(*t.left) && closed_type(*t.right);
  }
}

using SparseC = Eigen::SparseMatrix<std::complex<double>>;

SparseC to_sparse(const DenotationMatrix& m) {
  SparseC s(static_cast<Eigen::Index>(m.out.size()), static_cast<Eigen::Index>(m.in.size()));
  std::vector<Eigen::Triplet<std::complex<double>>> triplets;
  triplets.reserve(m.entries.size());
  for (const auto& [rc, a] : m.entries) {
    triplets.emplace_back(static_cast<Eigen::Index>(rc.first), static_cast<Eigen::Index>(rc.second), a);
  }
  s.setFromTriplets(triplets.begin(), triplets.end());
  return s;
}

double identity_deviation(const SparseC& p) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < p.outerSize(); ++k) {
    bool diagonal_seen = false;
    for (SparseC::InnerIterator it(p, k); it; ++it) {
      bool diagonal = it.row() == it.col();
      diagonal_seen = diagonal_seen || diagonal;
      worst = std::max(worst, std::abs(it.value() - (diagonal ? 1.0 : 0.0)));
    }
    if (!diagonal_seen && k < std::min(p.rows(), p.cols())) worst = std::max(worst, 1.0);
  }
  return worst;
}

std::pair<double, std::optional<double>> deviations(const SparseC& m) {
  SparseC mm = SparseC(m.adjoint()) * m;
  double iso = identity_deviation(mm);
  std::optional<double> co;
  if (m.rows() == m.cols()) {
    SparseC nn = m * SparseC(m.adjoint());
    co = identity_deviation(nn);
  }
  return {iso, co};
}

std::optional<std::vector<int>> find_list_path(const ValueType& t) {
  if (t.kind == ValueType::Kind::List) return std::vector<int>{};
  if (t.kind != ValueType::Kind::Product) return std::nullopt;
  for (int side = 0; side < 2; ++side) {
    if (auto p = find_list_path(side == 0 ? *t.left : *t.right)) {
      p->insert(p->begin(), side);
      return p;
    }
  }
  return std::nullopt;
}

const ValueType* at_path(const ValueType& t, const std::vector<int>& path) {
  const ValueType* cur = &t;
  for (int side : path) {
    if (cur->kind != ValueType::Kind::Product) return nullptr;
    cur = side == 0 ? cur->left.get() : cur->right.get();
  }
  return cur;
}

}  // namespace

Basis enumerate_values(const TypePtr& a, std::size_t bound) {
  if (!closed_type(*a)) throw std::invalid_argument("cannot enumerate the open type " + pretty_print(*a));
  Enumerator e;
  Basis b;
  b.type = a;
  b.bound = bound;
  for (std::size_t s = 1; s <= bound; ++s) {
    const auto& vs = e.exactly(a, s);
    b.values.insert(b.values.end(), vs.begin(), vs.end());
  }
  std::sort(b.values.begin(), b.values.end(), CanonicalLess{});
  for (std::size_t i = 0; i < b.values.size(); ++i) b.index.emplace(b.values[i], i);
  return b;
}

std::complex<double> DenotationMatrix::at(std::size_t row, std::size_t column) const {
  auto it = entries.find({row, column});
  return it == entries.end() ? std::complex<double>(0.0, 0.0) : it->second;
}

DenotationMatrix denote(const IsoPtr& iso, const TypePtr& a, const TypePtr& b, std::size_t bound,
                        const Program& program, const EvalOptions& options) {
  DenotationMatrix m;
  m.in = enumerate_values(a, bound);
  m.out = enumerate_values(b, bound);
  for (std::size_t j = 0; j < m.in.size(); ++j) {
    auto column = apply(iso, m.in.values[j], program, options);
    for (const auto& [w, amp] : column.entries) {
      if (auto i = m.out.find(w)) {
        m.entries[{*i, j}] = amp;
      } else {
        m.overflow.push_back(OverflowEntry{m.in.values[j], w, amp});
      }
    }
  }
  return m;
}

DenotationMatrix denote(const IsoPtr& iso, std::size_t bound, const Program& program, const EvalOptions& options) {
  auto t = check_iso({}, iso, &program);
  if (t->kind != IsoType::Kind::Base) {
    throw std::invalid_argument("iso of type " + pretty_print(*t) + " has no matrix");
  }
  return denote(iso, t->from, t->to, bound, program, options);
}

bool IsometryReport::ok(double tol) const {
  return conclusive && isometry <= tol && (!coisometry || *coisometry <= tol);
}

IsometryReport check_isometry(const DenotationMatrix& m) {
  IsometryReport r;
  r.conclusive = m.overflow.empty();
  auto [iso, co] = deviations(to_sparse(m));
  r.isometry = iso;
  r.coisometry = co;
  return r;
}

std::size_t head_list_length(const Value& v, const std::vector<int>& path) {
  const Value* cur = &v;
  for (int side : path) cur = side == 0 ? cur->first.get() : cur->second.get();
  std::size_t n = 0;
  while (cur->kind == Value::Kind::InR) {
    ++n;
    cur = cur->first->second.get();
  }
  return n;
}

bool BlockReport::ok(double tol) const {
  if (off_block > tol) return false;
  return std::all_of(blocks.begin(), blocks.end(), [&](const BlockEntry& b) {
    return b.isometry <= tol && (!b.coisometry || *b.coisometry <= tol);
  });
}

std::vector<std::vector<std::complex<double>>> dense_block(const DenotationMatrix& m, const std::vector<int>& path,
                                                           std::size_t length) {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::map<std::size_t, std::size_t> row_pos;
  std::map<std::size_t, std::size_t> col_pos;
  for (std::size_t i = 0; i < m.out.size(); ++i) {
    if (head_list_length(*m.out.values[i], path) == length) {
      row_pos[i] = rows.size();
      rows.push_back(i);
    }
  }
  for (std::size_t j = 0; j < m.in.size(); ++j) {
    if (head_list_length(*m.in.values[j], path) == length) {
      col_pos[j] = cols.size();
      cols.push_back(j);
    }
  }
  std::vector<std::vector<std::complex<double>>> out(rows.size(), std::vector<std::complex<double>>(cols.size()));
  for (const auto& [rc, a] : m.entries) {
    auto r = row_pos.find(rc.first);
    auto c = col_pos.find(rc.second);
    if (r != row_pos.end() && c != col_pos.end()) out[r->second][c->second] = a;
  }
  return out;
}

BlockReport block_decompose(const DenotationMatrix& m, double tol) {
  auto path = find_list_path(*m.in.type);
  if (!path) throw ShapeError("input type " + pretty_print(*m.in.type) + " has no head list");
  const ValueType* out_head = at_path(*m.out.type, *path);
  if (!out_head || out_head->kind != ValueType::Kind::List) {
    throw ShapeError("output type " + pretty_print(*m.out.type) + " has no list at the input's head-list position");
  }
  BlockReport report;
  report.path = *path;
  std::vector<std::size_t> in_len(m.in.size());
  std::vector<std::size_t> out_len(m.out.size());
  std::map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
  for (std::size_t j = 0; j < m.in.size(); ++j) {
    in_len[j] = head_list_length(*m.in.values[j], *path);
    groups[in_len[j]].second.push_back(j);
  }
  for (std::size_t i = 0; i < m.out.size(); ++i) {
    out_len[i] = head_list_length(*m.out.values[i], *path);
    groups[out_len[i]].first.push_back(i);
  }
  for (const auto& [rc, a] : m.entries) {
    if (out_len[rc.first] != in_len[rc.second]) report.off_block = std::max(report.off_block, std::abs(a));
  }
  for (const auto& [length, rc] : groups) {
    const auto& [rows, cols] = rc;
    std::map<std::size_t, std::size_t> row_pos;
    std::map<std::size_t, std::size_t> col_pos;
    for (std::size_t k = 0; k < rows.size(); ++k) row_pos[rows[k]] = k;
    for (std::size_t k = 0; k < cols.size(); ++k) col_pos[cols[k]] = k;
    SparseC block(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    std::vector<Eigen::Triplet<std::complex<double>>> triplets;
    for (const auto& [pos, a] : m.entries) {
      auto r = row_pos.find(pos.first);
      auto c = col_pos.find(pos.second);
      if (r == row_pos.end() || c == col_pos.end()) continue;
      triplets.emplace_back(static_cast<Eigen::Index>(r->second), static_cast<Eigen::Index>(c->second), a);
    }
    block.setFromTriplets(triplets.begin(), triplets.end());
    BlockEntry e;
    e.length = length;
    e.dim_in = cols.size();
    e.dim_out = rows.size();
    auto [iso, co] = deviations(block);
    e.isometry = iso;
    e.coisometry = co;
    e.surjective = co && *co <= tol;
    report.blocks.push_back(e);
  }
  return report;
}

double adjoint_deviation(const DenotationMatrix& m, const DenotationMatrix& inverse) {
  // inverse maps m.out back to m.in.
  double worst = 0.0;
  auto inverse_at = [&](const ValuePtr& row, const ValuePtr& col) {
    auto r = inverse.out.find(row);
    auto c = inverse.in.find(col);
    if (!r || !c) return std::complex<double>(0.0, 0.0);
    return inverse.at(*r, *c);
  };
  for (const auto& [rc, a] : m.entries) {
    const auto& w = m.out.values[rc.first];
    const auto& v = m.in.values[rc.second];
    worst = std::max(worst, std::abs(inverse_at(v, w) - std::conj(a)));
  }
  for (const auto& [rc, a] : inverse.entries) {
    auto w = m.out.find(inverse.in.values[rc.second]);
    auto v = m.in.find(inverse.out.values[rc.first]);
    std::complex<double> expected = (w && v) ? std::conj(m.at(*w, *v)) : std::complex<double>(0.0, 0.0);
    worst = std::max(worst, std::abs(a - expected));
  }
  return worst;
}

namespace {

std::string csv_field(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

std::string matrix_to_csv(const DenotationMatrix& m) {
  std::string out = "row,column,re,im\n";
  for (const auto& [rc, a] : m.entries) {
    out += csv_field(pretty_print(*m.out.values[rc.first], m.out.type)) + "," +
           csv_field(pretty_print(*m.in.values[rc.second], m.in.type)) + "," + number(a.real()) + "," +
           number(a.imag()) + "\n";
  }
  return out;
}

std::string matrix_to_json(const DenotationMatrix& m, const IsometryReport& report,
                           const std::optional<BlockReport>& blocks) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema"] = "isoq/1";
  j["type_in"] = pretty_print(*m.in.type);
  j["type_out"] = pretty_print(*m.out.type);
  j["bound"] = m.in.bound;
  j["basis_in"] = ordered_json::array();
  for (const auto& v : m.in.values) j["basis_in"].push_back(pretty_print(*v, m.in.type));
  j["basis_out"] = ordered_json::array();
  for (const auto& v : m.out.values) j["basis_out"].push_back(pretty_print(*v, m.out.type));
  j["entries"] = ordered_json::array();
  for (const auto& [rc, a] : m.entries) j["entries"].push_back({rc.first, rc.second, a.real(), a.imag()});
  j["overflow"] = ordered_json::array();
  for (const auto& o : m.overflow) {
    j["overflow"].push_back({{"input", pretty_print(*o.input, m.in.type)},
                             {"output", pretty_print(*o.output, m.out.type)},
                             {"re", o.amplitude.real()},
                             {"im", o.amplitude.imag()}});
  }
  ordered_json r;
  r["conclusive"] = report.conclusive;
  r["isometry"] = report.isometry;
  r["coisometry"] = report.coisometry ? ordered_json(*report.coisometry) : ordered_json(nullptr);
  if (blocks) {
    r["off_block"] = blocks->off_block;
    r["blocks"] = ordered_json::array();
    for (const auto& b : blocks->blocks) {
      r["blocks"].push_back({{"length", b.length},
                             {"dim_in", b.dim_in},
                             {"dim_out", b.dim_out},
                             {"isometry", b.isometry},
                             {"coisometry", b.coisometry ? ordered_json(*b.coisometry) : ordered_json(nullptr)},
                             {"surjective", b.surjective}});
    }
  }
  j["report"] = r;
  return j.dump(2) + "\n";
}

}  // namespace isoq
