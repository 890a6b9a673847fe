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

#include "epfx/sshap.h"

#include "epfx/error.h"

namespace epfx {

Eigen::MatrixXd SshapTensor::Instance(int instance) const {
  Eigen::MatrixXd out(outputs, num_groups());
  for (int o = 0; o < outputs; ++o) {
    for (int g = 0; g < num_groups(); ++g) out(o, g) = at(instance, o, g);
  }
  return out;
}

Eigen::VectorXd SshapTensor::MeanBaseline() const {
  if (baseline.rows() == 0) return Eigen::VectorXd::Zero(outputs);
  return baseline.colwise().mean().transpose();
}

SshapTensor Aggregate(const AttributionTensor& tensor, const Partition& partition) {
  if (partition.features() != tensor.features) {
    throw Error(ErrorCode::kPartitionMismatch,
                "partition layout does not match the attribution features");
  }
  SshapTensor out{tensor.instance_ids, partition, tensor.outputs, {}, tensor.baseline,
                  tensor.prediction};
  const int groups = partition.size();
  out.values.assign(static_cast<size_t>(tensor.instances()) * tensor.outputs * groups, 0.0);
  size_t k = 0;
  for (int i = 0; i < tensor.instances(); ++i) {
    for (int o = 0; o < tensor.outputs; ++o) {
      const double* row = tensor.values.data() + tensor.Offset(i, o, 0);
      for (const auto& group : partition.groups()) {
        double sum = 0.0;
        for (int f : group.members) sum += row[f];
        out.values[k++] = sum;
      }
    }
  }
  return out;
}

}  // namespace epfx
