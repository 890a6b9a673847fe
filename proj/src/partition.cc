/*
 * Copyright 2026 The epfx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "epfx/partition.h"

#include <algorithm>
#include <set>

#include "epfx/error.h"

namespace epfx {

Partition::Partition(std::vector<FeatureId> features, std::vector<FeatureGroup> groups)
    : features_(std::move(features)), groups_(std::move(groups)) {
  std::vector<int> owner(features_.size(), -1);
  std::set<std::string> labels;
  for (size_t g = 0; g < groups_.size(); ++g) {
    auto& members = groups_[g].members;
    std::sort(members.begin(), members.end());
    if (!labels.insert(groups_[g].label).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate group label '" + groups_[g].label + "'");
    }
    for (int f : members) {
      if (f < 0 || f >= static_cast<int>(features_.size())) {
        throw Error(ErrorCode::kPartitionMismatch, "group '" + groups_[g].label +
                                                       "' references an unknown feature");
      }
      if (owner[f] != -1) {
        throw Error(ErrorCode::kPartitionMismatch,
                    "feature '" + features_[f].Name() + "' is in more than one group");
      }
      owner[f] = static_cast<int>(g);
    }
  }
  for (size_t f = 0; f < owner.size(); ++f) {
    if (owner[f] == -1) {
      throw Error(ErrorCode::kPartitionMismatch,
                  "feature '" + features_[f].Name() + "' is not in any group");
    }
  }
}

int Partition::Find(std::string_view label) const {
  for (size_t g = 0; g < groups_.size(); ++g) {
    if (groups_[g].label == label) return static_cast<int>(g);
  }
  return -1;
}

std::vector<std::string> Partition::Labels() const {
  std::vector<std::string> labels;
  for (const auto& g : groups_) labels.push_back(g.label);
  return labels;
}

Partition SuperVariablePartition(const std::vector<FeatureId>& features) {
  std::vector<FeatureGroup> groups;
  for (size_t f = 0; f < features.size(); ++f) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const FeatureGroup& g) { return g.label == features[f].group; });
    if (it == groups.end()) {
      groups.push_back({features[f].group, {}});
      it = groups.end() - 1;
    }
    it->members.push_back(static_cast<int>(f));
  }
  return Partition(features, std::move(groups));
}

Partition SingletonPartition(const std::vector<FeatureId>& features) {
  std::vector<FeatureGroup> groups;
  for (size_t f = 0; f < features.size(); ++f) {
    groups.push_back({features[f].Name(), {static_cast<int>(f)}});
  }
  return Partition(features, std::move(groups));
}

Partition MergeGroups(const Partition& partition, const std::string& label,
                      const std::vector<std::string>& members) {
  std::set<int> selected;
  for (const auto& name : members) {
    const int g = partition.Find(name);
    if (g < 0) throw Error(ErrorCode::kUnknownGroup, "unknown group '" + name + "'");
    selected.insert(g);
  }
  if (selected.empty()) throw Error(ErrorCode::kInvalidArgument, "merge needs at least one group");
  std::vector<FeatureGroup> groups;
  int merged = -1;
  for (int g = 0; g < partition.size(); ++g) {
    const auto& group = partition.groups()[g];
    if (!selected.count(g)) {
      groups.push_back(group);
      continue;
    }
    if (merged < 0) {
      merged = static_cast<int>(groups.size());
      groups.push_back({label, {}});
    }
    auto& target = groups[merged].members;
    target.insert(target.end(), group.members.begin(), group.members.end());
  }
  return Partition(partition.features(), std::move(groups));
}

Partition SplitGroup(const Partition& partition, std::string_view label, int split_hour) {
  const int g = partition.Find(label);
  if (g < 0) throw Error(ErrorCode::kUnknownGroup, "unknown group '" + std::string(label) + "'");
  if (split_hour < 1 || split_hour > kHoursPerDay - 1) {
    throw Error(ErrorCode::kInvalidArgument, "split hour must be in 1..23");
  }
  const auto& group = partition.groups()[g];
  const auto& features = partition.features();
  std::vector<int> by_hour(kHoursPerDay, -1);
  bool hourly = group.members.size() == static_cast<size_t>(kHoursPerDay);
  for (int f : group.members) {
    const FeatureId& id = features[f];
    if (!hourly || !id.IsHourly() || id.group != features[group.members.front()].group ||
        by_hour[id.hour] != -1) {
      hourly = false;
      break;
    }
    by_hour[id.hour] = f;
  }
  if (!hourly) {
    throw Error(ErrorCode::kNotHourlyGroup,
                "group '" + group.label + "' is not the 24 hours of one super-variable");
  }
  const std::string base(label);
  FeatureGroup early{base + " H0-H" + std::to_string(split_hour - 1), {}};
  FeatureGroup late{base + " H" + std::to_string(split_hour) + "-H23", {}};
  for (int h = 0; h < kHoursPerDay; ++h) {
    (h < split_hour ? early : late).members.push_back(by_hour[h]);
  }
  std::vector<FeatureGroup> groups;
  for (int i = 0; i < partition.size(); ++i) {
    if (i == g) {
      groups.push_back(std::move(early));
      groups.push_back(std::move(late));
    } else {
      groups.push_back(partition.groups()[i]);
    }
  }
  return Partition(features, std::move(groups));
}

}  // namespace epfx
