#pragma once

#include <json.hpp>

#include "symsched/groups.hpp"
#include "symsched/machines.hpp"
#include "symsched/matmul.hpp"
#include "symsched/simulate.hpp"

namespace symsched {

using nlohmann::json;

constexpr int kFormatVersion = 1;

// all readers raise ParseError on malformed input
json element_to_json(const GroupElement& g);
GroupElement element_from_json(const json& j);

json group_to_json(const FiniteGroup& G);
FiniteGroup group_from_json(const json& j);

json hom_to_json(const Homomorphism& h);
Homomorphism hom_from_json(const json& j);  // revalidates homs that were validated on export

json machine_to_json(const MachineSpec& s);
MachineSpec machine_from_json(const json& j);

json time_to_json(const TimeModel& tm);
TimeModel time_from_json(const json& j);

json bundle_to_json(const ScheduleBundle& b);
ScheduleBundle bundle_from_json(const json& j);

json report_to_json(const CostReport& r);

}  // namespace symsched
