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

#ifndef EPFX_PARTITION_H_
#define EPFX_PARTITION_H_

#include <string>
#include <string_view>
#include <vector>

#include "epfx/features.h"

namespace epfx {

struct FeatureGroup {
  std::string label;
  std::vector<int> members;  // ascending feature indices
};

// Disjoint groups covering every feature of a layout exactly once.
class Partition {
 public:
  // Throws kPartitionMismatch when a feature is missing, repeated or out of
  // range, and kInvalidArgument on duplicate labels.
  Partition(std::vector<FeatureId> features, std::vector<FeatureGroup> groups);

  const std::vector<FeatureId>& features() const { return features_; }
  const std::vector<FeatureGroup>& groups() const { return groups_; }
  int size() const { return static_cast<int>(groups_.size()); }
  // Index of the group with `label`, or -1.
  int Find(std::string_view label) const;
  std::vector<std::string> Labels() const;

 private:
  std::vector<FeatureId> features_;
  std::vector<FeatureGroup> groups_;
};

// One group per super-variable label, in order of first appearance. The
// calendar column, when present, forms its own group.
Partition SuperVariablePartition(const std::vector<FeatureId>& features);

// Every feature in its own group, labelled by FeatureId::Name().
Partition SingletonPartition(const std::vector<FeatureId>& features);

// Replaces the listed groups by their union, placed where the first of them
// was. Throws kUnknownGroup.
Partition MergeGroups(const Partition& partition, const std::string& label,
                      const std::vector<std::string>& members);

// Splits a 24-hour super-variable at `split_hour` (1..23) into
// "<label> H0-H<s-1>" and "<label> H<s>-H23". Throws kUnknownGroup,
// kNotHourlyGroup or kInvalidArgument.
Partition SplitGroup(const Partition& partition, std::string_view label, int split_hour);

}  // namespace epfx

#endif  // EPFX_PARTITION_H_
