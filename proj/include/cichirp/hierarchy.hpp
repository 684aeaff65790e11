#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

// Bookkeeping for the hierarchy of auxiliary density operators: all
// multi-indices n over the exponential modes with |n| <= depth, enumerated
// tier by tier in lexicographic order, with precomputed raise/lower
// neighbor tables.

namespace cichirp {

std::size_t count_ados(int n_modes, int depth);

class HierarchyTable {
 public:
  HierarchyTable() = default;
  HierarchyTable(int n_modes, int depth);

  int n_modes() const { return n_modes_; }
  int depth() const { return depth_; }
  int size() const { return static_cast<int>(tiers_.size()); }

  int tier(int a) const { return tiers_[a]; }
  // occupation of mode k in ADO a
  int occupation(int a, int k) const { return occ_[static_cast<std::size_t>(a) * n_modes_ + k]; }
  // position of a + e_k, or -1 when it would exceed the depth
  int up(int a, int k) const { return up_[static_cast<std::size_t>(a) * n_modes_ + k]; }
  // position of a - e_k, or -1 when occupation(a,k) == 0
  int down(int a, int k) const { return down_[static_cast<std::size_t>(a) * n_modes_ + k]; }

 private:
  int n_modes_ = 0;
  int depth_ = 0;
  std::vector<std::uint8_t> tiers_;
  std::vector<std::uint8_t> occ_;
  std::vector<int> up_;
  std::vector<int> down_;
};

}  // namespace cichirp
