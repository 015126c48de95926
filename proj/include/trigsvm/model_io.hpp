#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include "trigsvm/svc.hpp"
#include "trigsvm/svr.hpp"

namespace trigsvm {

inline constexpr int model_format_version = 1;

using AnyModel = std::variant<SvcModel, SvrModel>;

/// JSON text of a model. Doubles are written in shortest round-trip form,
/// so a reload reproduces every coefficient bit-for-bit.
std::string model_to_json(const AnyModel& model);
AnyModel model_from_json(const std::string& text);

void save_model(const AnyModel& model, const std::filesystem::path& path);
AnyModel load_model(const std::filesystem::path& path);

SvcModel load_svc_model(const std::filesystem::path& path);
SvrModel load_svr_model(const std::filesystem::path& path);

}  // namespace trigsvm
