#pragma once

#include "trigsvm/dataset.hpp"
#include "trigsvm/error.hpp"
#include "trigsvm/gram_audit.hpp"
#include "trigsvm/kernel.hpp"
#include "trigsvm/model_io.hpp"
#include "trigsvm/model_selection.hpp"
#include "trigsvm/random.hpp"
#include "trigsvm/smo.hpp"
#include "trigsvm/svc.hpp"
#include "trigsvm/svr.hpp"
