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

#ifndef EPFX_SSHAP_H_
#define EPFX_SSHAP_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "epfx/explain.h"
#include "epfx/partition.h"

namespace epfx {

// Attribution summed over the groups of a partition (SSHAP values). Efficiency
// carries over: per instance and output hour the group values sum to
// prediction - baseline.
struct SshapTensor {
  std::vector<std::string> instance_ids;
  Partition partition;
  int outputs = kHoursPerDay;
  std::vector<double> values;  // [instance][output][group]
  Eigen::MatrixXd baseline;    // instances x outputs
  Eigen::MatrixXd prediction;  // instances x outputs

  int instances() const { return static_cast<int>(instance_ids.size()); }
  int num_groups() const { return partition.size(); }
  double at(int instance, int output, int group) const {
    return values[(static_cast<size_t>(instance) * outputs + output) * num_groups() + group];
  }
  Eigen::MatrixXd Instance(int instance) const;  // outputs x groups
  Eigen::VectorXd MeanBaseline() const;
};

// Sums member attributions in ascending feature order. Throws
// kPartitionMismatch when the partition's layout differs from the tensor's.
SshapTensor Aggregate(const AttributionTensor& tensor, const Partition& partition);

}  // namespace epfx

#endif  // EPFX_SSHAP_H_
