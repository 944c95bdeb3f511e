#pragma once

#include "pareto/dominance.hpp"
#include "pareto/gp.hpp"
#include "pareto/monotonic_gp.hpp"
#include "pareto/ocsvm.hpp"

#include <string>

namespace pareto {

// JSON model (de)serialization. Hyperparameters, training data and site
// parameters are stored; factorizations are recomputed on load.

void save_gp_json(const GpModel& m, const std::string& path);
GpModel load_gp_json(const std::string& path);

void save_monotonic_json(const MonotonicGpModel& m, const std::string& path);
MonotonicGpModel load_monotonic_json(const std::string& path);

void save_ocsvm_json(const OneClassSvmModel& m, const std::string& path);
OneClassSvmModel load_ocsvm_json(const std::string& path);

void save_staircase_json(const StaircaseFrontier& m, const std::string& path);
StaircaseFrontier load_staircase_json(const std::string& path);

/// Reads the "type" field ("gp", "monotonic_gp", "ocsvm", "staircase").
std::string model_type_of(const std::string& path);

/// Loads any saved model as a ScoreFunction, dispatching on its type.
ScoreFunction load_score_function(const std::string& path);

}  // namespace pareto
