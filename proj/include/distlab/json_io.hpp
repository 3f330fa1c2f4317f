#pragma once

#include <string>

#include "distlab/core.hpp"

namespace distlab {

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);  // runs validate_instance

Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

}  // namespace distlab
