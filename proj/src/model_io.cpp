#include "trigsvm/model_io.hpp"

#include <fstream>
#include <sstream>

#include "trigsvm/json_codec.hpp"

namespace trigsvm {

namespace {

Json scaling_to_json(const ScalingStats& s) {
    Json j;
    j["mean"] = vector_to_json(s.mean);
    j["stddev"] = vector_to_json(s.stddev);
    j["constant"] = s.constant;
    return j;
}

ScalingStats scaling_from_json(const Json& j) {
    ScalingStats s;
    s.mean = vector_from_json(j.at("mean"));
    s.stddev = vector_from_json(j.at("stddev"));
    s.constant = j.at("constant").get<std::vector<bool>>();
    if (s.stddev.size() != s.mean.size() || static_cast<Index>(s.constant.size()) != s.mean.size()) {
        throw Error(ErrorKind::parse, "scaling arrays disagree in length");
    }
    return s;
}

template <typename Model>
void write_common(Json& j, const Model& m) {
    j["kernel"] = kernel_to_json(m.spec);
    j["bias"] = m.bias;
    j["C"] = m.C;
    j["jitter"] = m.jitter;
    j["dimension"] = m.dimension();
    if (m.scaling) j["scaling"] = scaling_to_json(*m.scaling);
    j["support_indices"] = m.support_indices;
    j["support_vectors"] = matrix_to_json(m.support_vectors);
    j["dual_coef"] = vector_to_json(m.dual_coef);
}

template <typename Model>
Model read_common(const Json& j) {
    Model m;
    m.spec = kernel_from_json(j.at("kernel"));
    m.bias = j.at("bias").get<double>();
    m.C = j.at("C").get<double>();
    m.jitter = j.value("jitter", 0.0);
    const auto dim = j.at("dimension").get<Index>();
    if (j.contains("scaling")) m.scaling = scaling_from_json(j.at("scaling"));
    m.support_indices = j.at("support_indices").get<std::vector<Index>>();
    m.support_vectors = matrix_from_json(j.at("support_vectors"), dim);
    m.dual_coef = vector_from_json(j.at("dual_coef"));
    if (m.dual_coef.size() != m.support_vectors.rows() ||
        static_cast<Index>(m.support_indices.size()) != m.support_vectors.rows()) {
        throw Error(ErrorKind::parse, "support vector arrays disagree in length");
    }
    if (m.scaling && m.scaling->dimension() != dim) {
        throw Error(ErrorKind::parse, "scaling dimension differs from the model dimension");
    }
    return m;
}

}  // namespace

std::string model_to_json(const AnyModel& model) {
    Json j;
    j["format_version"] = model_format_version;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, SvcModel>) {
                j["model_type"] = "svc";
                write_common(j, m);
            } else {
                j["model_type"] = "svr";
                j["epsilon"] = m.epsilon;
                write_common(j, m);
            }
        },
        model);
    return j.dump(2) + "\n";
}

AnyModel model_from_json(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("format_version")) {
        throw Error(ErrorKind::format, "model file lacks format_version");
    }
    if (!j["format_version"].is_number_integer() ||
        j["format_version"].get<int>() != model_format_version) {
        throw Error(ErrorKind::format, "unsupported model format_version " +
                                           j["format_version"].dump() + " (expected " +
                                           std::to_string(model_format_version) + ")");
    }
    try {
        const auto type = j.at("model_type").get<std::string>();
        if (type == "svc") return read_common<SvcModel>(j);
        if (type == "svr") {
            auto m = read_common<SvrModel>(j);
            m.epsilon = j.at("epsilon").get<double>();
            return m;
        }
        throw Error(ErrorKind::format, "unknown model_type '" + type + "'");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("malformed model file: ") + e.what());
    }
}

void save_model(const AnyModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
    out << model_to_json(model);
    if (!out) throw Error(ErrorKind::io, "failed while writing '" + path.string() + "'");
}

AnyModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return model_from_json(buffer.str());
}

SvcModel load_svc_model(const std::filesystem::path& path) {
    auto model = load_model(path);
    if (auto* m = std::get_if<SvcModel>(&model)) return std::move(*m);
    throw Error(ErrorKind::format, "'" + path.string() + "' holds a regression model");
}

SvrModel load_svr_model(const std::filesystem::path& path) {
    auto model = load_model(path);
    if (auto* m = std::get_if<SvrModel>(&model)) return std::move(*m);
    throw Error(ErrorKind::format, "'" + path.string() + "' holds a classification model");
}

}  // namespace trigsvm
