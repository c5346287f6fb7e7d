#include "qfb/linalg.hpp"

namespace qfb {

void axpy(SparseVec& y, const Elem& a, const SparseVec& x) {
  if (a.is_zero()) return;
  for (const auto& [k, v] : x) {
    auto it = y.find(k);
    if (it == y.end()) {
      y.emplace(k, a * v);
    } else {
      it->second += a * v;
      if (it->second.is_zero()) y.erase(it);
    }
  }
}

SparseVec scaled(const SparseVec& x, const Elem& a) {
  SparseVec out;
  if (a.is_zero()) return out;
  for (const auto& [k, v] : x) out.emplace(k, v * a);
  return out;
}

bool is_zero(const SparseVec& x) { return x.empty(); }

void Echelon::reduce(SparseVec& v, SparseVec& combo) const {
  auto it = v.begin();
  while (it != v.end()) {
    auto row = rows_.find(it->first);
    if (row == rows_.end()) {
      ++it;
      continue;
    }
    const std::uint32_t key = it->first;
    Elem c = -it->second;
    axpy(v, c, row->second.v);
    axpy(combo, c, row->second.combo);
    it = v.upper_bound(key);
  }
}

bool Echelon::insert(const SparseVec& v_in) {
  const std::uint32_t id = static_cast<std::uint32_t>(inputs_++);
  SparseVec v = v_in;
  SparseVec combo;
  if (!v.empty()) combo.emplace(id, v.begin()->second.field()->one());
  reduce(v, combo);
  if (v.empty()) {
    if (!combo.empty()) kernel_.push_back(combo);
    return false;
  }
  const std::uint32_t pivot = v.begin()->first;
  Elem inv = v.begin()->second.inverse();
  Row r{scaled(v, inv), scaled(combo, inv)};
  // Keep rows fully reduced at their pivots.
  for (auto& [p, row] : rows_) {
    auto f = row.v.find(pivot);
    if (f == row.v.end()) continue;
    Elem c = -f->second;
    axpy(row.v, c, r.v);
    axpy(row.combo, c, r.combo);
  }
  rows_.emplace(pivot, std::move(r));
  independent_.push_back(id);
  return true;
}

bool Echelon::contains(const SparseVec& v_in) const {
  SparseVec v = v_in, combo;
  reduce(v, combo);
  return v.empty();
}

std::optional<SparseVec> Echelon::express(const SparseVec& v_in) const {
  SparseVec v = v_in, combo;
  reduce(v, combo);
  if (!v.empty()) return std::nullopt;
  SparseVec out;
  for (auto& [k, c] : combo) out.emplace(k, -c);
  return out;
}

std::vector<SparseVec> kernel_of(const FieldPtr& F, const std::vector<SparseVec>& images) {
  Echelon e;
  std::vector<SparseVec> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].empty()) out.push_back(SparseVec{{static_cast<std::uint32_t>(i), F->one()}});
    e.insert(images[i]);
  }
  for (const auto& k : e.kernel()) out.push_back(k);
  return out;
}

std::size_t rank_of(const std::vector<SparseVec>& vectors) {
  Echelon e;
  for (const auto& v : vectors) e.insert(v);
  return e.rank();
}

}  // namespace qfb
