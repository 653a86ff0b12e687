#pragma once

#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace blendkit::detail {

/// Union-find over tagged symbols, used to build pushout apexes as quotients
/// of disjoint unions. The representative of a class is its earliest element,
/// so classes come out in creation order.
class SymbolQuotient {
 public:
  std::size_t add(std::string plain_name) {
    parent_.push_back(parent_.size());
    names_.push_back(std::move(plain_name));
    return parent_.size() - 1;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

  std::size_t size() const { return parent_.size(); }

  /// Dense class index for every element, numbered in creation order.
  std::vector<std::size_t> class_of() {
    std::vector<std::size_t> dense(parent_.size(), 0);
    std::map<std::size_t, std::size_t> index;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      auto root = find(i);
      auto [it, inserted] = index.emplace(root, index.size());
      dense[i] = it->second;
    }
    return dense;
  }

  /// Canonical names: the least plain name of each class. When two classes in
  /// the same group would share a name, the later class gets "_2", "_3", ...
  /// skipping any name some class could claim on its own.
  /// `group_of_class[c]` scopes collisions (MSA ops may share names across
  /// ranks); pass empty strings for a single namespace.
  std::vector<std::string> class_names(const std::vector<std::string>& group_of_class) {
    auto cls = class_of();
    std::vector<std::string> least(group_of_class.size());
    std::vector<bool> seen(group_of_class.size(), false);
    for (std::size_t i = 0; i < cls.size(); ++i) {
      auto c = cls[i];
      if (!seen[c] || names_[i] < least[c]) least[c] = names_[i];
      seen[c] = true;
    }
    std::set<std::pair<std::string, std::string>> reserved;
    for (std::size_t c = 0; c < least.size(); ++c) reserved.emplace(group_of_class[c], least[c]);

    std::set<std::pair<std::string, std::string>> taken;
    std::vector<std::string> out(least.size());
    for (std::size_t c = 0; c < least.size(); ++c) {
      const auto& group = group_of_class[c];
      std::string name = least[c];
      if (taken.count({group, name})) {
        for (int k = 2;; ++k) {
          std::string candidate = least[c] + "_" + std::to_string(k);
          if (!taken.count({group, candidate}) && !reserved.count({group, candidate})) {
            name = std::move(candidate);
            break;
          }
        }
      }
      taken.emplace(group, name);
      out[c] = std::move(name);
    }
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::string> names_;
};

}  // namespace blendkit::detail
