#include "trigsvm/json_codec.hpp"

namespace trigsvm {

Json kernel_to_json(const KernelSpec& spec) {
    Json j;
    j["variant"] = std::string(to_string(spec.family()));
    Json params = Json::object();
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, kernels::Polynomial>) {
                params["p"] = k.degree;
            } else if constexpr (std::is_same_v<K, kernels::Gaussian> ||
                                 std::is_same_v<K, kernels::Trig>) {
                params["sigma"] = k.sigma;
            } else if constexpr (std::is_same_v<K, kernels::Rbf>) {
                params["gamma"] = k.gamma;
            } else if constexpr (std::is_same_v<K, kernels::Sigmoid>) {
                params["alpha"] = k.alpha;
                params["beta"] = k.beta;
            } else {
                params["sigma"] = k.sigma;
                params["beta"] = k.beta;
            }
        },
        spec.variant());
    j["params"] = std::move(params);
    return j;
}

KernelSpec kernel_from_json(const Json& j) {
    try {
        const auto& params = j.at("params");
        switch (parse_kernel_family(j.at("variant").get<std::string>())) {
            case KernelFamily::polynomial: return KernelSpec::polynomial(params.at("p").get<int>());
            case KernelFamily::gaussian:
                return KernelSpec::gaussian(params.at("sigma").get<double>());
            case KernelFamily::rbf: return KernelSpec::rbf(params.at("gamma").get<double>());
            case KernelFamily::sigmoid:
                return KernelSpec::sigmoid(params.at("alpha").get<double>(),
                                           params.at("beta").get<double>());
            case KernelFamily::trig: return KernelSpec::trig(params.at("sigma").get<double>());
            case KernelFamily::mixed:
                return KernelSpec::mixed(params.at("sigma").get<double>(),
                                         params.at("beta").get<double>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("kernel description: ") + e.what());
    }
    throw Error(ErrorKind::parse, "kernel description: unknown variant");
}

Json matrix_to_json(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j, Index expected_cols) {
    if (!j.is_array()) throw Error(ErrorKind::parse, "matrix must be an array of rows");
    const auto rows = static_cast<Index>(j.size());
    Index cols = expected_cols;
    if (cols < 0) cols = rows > 0 ? static_cast<Index>(j[0].size()) : 0;
    Eigen::MatrixXd m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
            throw Error(ErrorKind::parse, "matrix row " + std::to_string(i) + " has wrong length");
        }
        for (Index k = 0; k < cols; ++k) {
            const auto& cell = row[static_cast<std::size_t>(k)];
            if (!cell.is_number()) throw Error(ErrorKind::parse, "matrix entry is not a number");
            m(i, k) = cell.get<double>();
        }
    }
    return m;
}

Json vector_to_json(const Eigen::Ref<const Eigen::VectorXd>& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const Json& j) {
    if (!j.is_array()) throw Error(ErrorKind::parse, "vector must be an array");
    Eigen::VectorXd v(static_cast<Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw Error(ErrorKind::parse, "vector entry is not a number");
        v(static_cast<Index>(i)) = j[i].get<double>();
    }
    return v;
}

}  // namespace trigsvm
