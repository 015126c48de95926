#pragma once

#include <json.hpp>

#include <Eigen/Dense>

#include "trigsvm/kernel.hpp"

namespace trigsvm {

using Json = nlohmann::ordered_json;

/// {"variant": "trig", "params": {"sigma": 1.0}}
Json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const Json& j);

/// Row-major nested arrays.
Json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXd>& m);
Eigen::MatrixXd matrix_from_json(const Json& j, Index expected_cols = -1);

Json vector_to_json(const Eigen::Ref<const Eigen::VectorXd>& v);
Eigen::VectorXd vector_from_json(const Json& j);

}  // namespace trigsvm
