#pragma once

// Internal: per-category property registration, assembled by build_registry.

#include <vector>

#include "adi/harness/property.hpp"
#include "adi/harness/suite.hpp"

namespace adi::harness {

void register_reff_properties(std::vector<Property>& out, const Env& env);
void register_scope_properties(std::vector<Property>& out, const Env& env);
void register_fsm_properties(std::vector<Property>& out, const Env& env);
void register_topology_properties(std::vector<Property>& out, const Env& env);
void register_inspector_properties(std::vector<Property>& out, const Env& env);
void register_fuzz_properties(std::vector<Property>& out, const Env& env);

}  // namespace adi::harness
