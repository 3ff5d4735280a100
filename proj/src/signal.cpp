#include "temprisk/signal.hpp"

#include <numeric>
#include <sstream>

namespace temprisk {

GroupPartition::GroupPartition(Eigen::Index n, std::vector<std::vector<int>> groups)
    : n_(n), groups_(std::move(groups)) {
  if (n_ < 1) throw ValidationError("partition needs at least one component");
  std::vector<int> seen(static_cast<std::size_t>(n_), 0);
  for (const auto& g : groups_) {
    if (g.empty()) throw ValidationError("partition contains an empty group");
    for (int i : g) {
      if (i < 0 || i >= n_) {
        throw ValidationError("partition component " + std::to_string(i + 1) +
                              " outside 1.." + std::to_string(n_));
      }
      if (seen[i]++ != 0) {
        throw ValidationError("component " + std::to_string(i + 1) +
                              " appears in more than one group");
      }
    }
  }
  for (Eigen::Index i = 0; i < n_; ++i) {
    if (seen[i] == 0) {
      throw ValidationError("component " + std::to_string(i + 1) + " is not in any group");
    }
  }
}

GroupPartition GroupPartition::per_component(Eigen::Index n) {
  std::vector<std::vector<int>> g;
  for (int i = 0; i < n; ++i) g.push_back({i});
  return GroupPartition(n, std::move(g));
}

GroupPartition GroupPartition::single(Eigen::Index n) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  return GroupPartition(n, {all});
}

GroupPartition GroupPartition::parse(Eigen::Index n, const std::string& text) {
  std::vector<std::vector<int>> groups;
  std::stringstream groups_in(text);
  std::string group_text;
  while (std::getline(groups_in, group_text, ';')) {
    std::vector<int> group;
    std::stringstream items(group_text);
    std::string item;
    while (std::getline(items, item, ',')) {
      const auto first = item.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(item.substr(first), &used);
      } catch (const std::exception&) {
        throw ValidationError("bad component index '" + item + "' in groups '" + text + "'");
      }
      if (item.find_first_not_of(" \t", first + used) != std::string::npos) {
        throw ValidationError("bad component index '" + item + "' in groups '" + text + "'");
      }
      group.push_back(value - 1);
    }
    groups.push_back(std::move(group));
  }
  return GroupPartition(n, std::move(groups));
}

ShiftVector GroupPartition::expand(std::span<const int> group_shifts) const {
  if (group_shifts.size() != groups_.size()) {
    throw ShapeError("expected " + std::to_string(groups_.size()) + " group shifts, got " +
                     std::to_string(group_shifts.size()));
  }
  ShiftVector k(n_);
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    for (int i : groups_[j]) k[i] = group_shifts[j];
  }
  return k;
}

std::string GroupPartition::str() const {
  std::string out;
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    if (j) out += ';';
    for (std::size_t k = 0; k < groups_[j].size(); ++k) {
      if (k) out += ',';
      out += std::to_string(groups_[j][k] + 1);
    }
  }
  return out;
}

}  // namespace temprisk
