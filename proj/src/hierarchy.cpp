#include "cichirp/hierarchy.hpp"

#include <map>
#include <stdexcept>

namespace cichirp {

std::size_t count_ados(int n_modes, int depth) {
  if (n_modes < 0 || depth < 0)
    throw std::runtime_error("ERROR: count_ados requires n_modes >= 0 and depth >= 0");
  // binomial(n_modes + depth, depth), stable order of operations
  std::size_t count = 1;
  for (int i = 1; i <= depth; ++i) {
    count = count * static_cast<std::size_t>(n_modes + i) / static_cast<std::size_t>(i);
  }
  return count;
}

HierarchyTable::HierarchyTable(int n_modes, int depth) : n_modes_(n_modes), depth_(depth) {
  if (n_modes < 0 || depth < 0)
    throw std::runtime_error("ERROR: hierarchy requires n_modes >= 0 and depth >= 0");
  if (depth > 200) throw std::runtime_error("ERROR: hierarchy depth unreasonably large");

  std::vector<std::vector<std::uint8_t>> indices;
  std::vector<std::uint8_t> cur(static_cast<std::size_t>(std::max(n_modes, 1)), 0);

  // enumerate tier by tier; within a tier, lexicographic in the index vector
  std::map<std::vector<std::uint8_t>, int> position;
  for (int t = 0; t <= depth; ++t) {
    std::vector<std::vector<std::uint8_t>> tier_members;
    std::vector<std::uint8_t> v(static_cast<std::size_t>(n_modes), 0);
    // recursive enumeration of compositions of t into n_modes parts
    auto emit = [&](auto&& self, int mode, int remaining) -> void {
      if (mode == n_modes) {
        if (remaining == 0) tier_members.push_back(v);
        return;
      }
      if (mode == n_modes - 1) {
        v[mode] = static_cast<std::uint8_t>(remaining);
        tier_members.push_back(v);
        v[mode] = 0;
        return;
      }
      for (int o = remaining; o >= 0; --o) {  // larger first => lexicographic descending
        v[mode] = static_cast<std::uint8_t>(o);
        self(self, mode + 1, remaining - o);
      }
      v[mode] = 0;
    };
    if (n_modes == 0) {
      if (t == 0) tier_members.push_back({});
    } else {
      emit(emit, 0, t);
    }
    for (auto& m : tier_members) {
      position[m] = static_cast<int>(indices.size());
      indices.push_back(m);
      tiers_.push_back(static_cast<std::uint8_t>(t));
    }
  }

  const std::size_t n = indices.size();
  occ_.assign(n * static_cast<std::size_t>(std::max(n_modes, 1)), 0);
  up_.assign(n * static_cast<std::size_t>(std::max(n_modes, 1)), -1);
  down_.assign(n * static_cast<std::size_t>(std::max(n_modes, 1)), -1);
  for (std::size_t a = 0; a < n; ++a) {
    for (int k = 0; k < n_modes; ++k) {
      occ_[a * n_modes + k] = indices[a][static_cast<std::size_t>(k)];
      auto probe = indices[a];
      if (tiers_[a] < depth) {
        probe[static_cast<std::size_t>(k)]++;
        auto it = position.find(probe);
        if (it != position.end()) up_[a * n_modes + k] = it->second;
        probe[static_cast<std::size_t>(k)]--;
      }
      if (probe[static_cast<std::size_t>(k)] > 0) {
        probe[static_cast<std::size_t>(k)]--;
        auto it = position.find(probe);
        if (it != position.end()) down_[a * n_modes + k] = it->second;
      }
    }
  }
}

}  // namespace cichirp
