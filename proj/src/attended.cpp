#include "gaze360/attended.hpp"

#include <algorithm>

namespace gaze360 {

namespace {

const std::set<std::string> kRoadUserNames = {"vehicle", "pedestrian", "cyclist", "traffic sign", "traffic light"};

}  // namespace

ClassTable ClassTable::standard() {
    return ClassTable({{0, "background"},
                       {1, "vehicle"},
                       {2, "pedestrian"},
                       {3, "cyclist"},
                       {4, "traffic sign"},
                       {5, "traffic light"},
                       {6, "building"},
                       {7, "road"},
                       {8, "vegetation"},
                       {9, "sky"}},
                      {1, 2, 3, 4, 5});
}

ClassTable::ClassTable(std::map<uint16_t, std::string> names, std::set<uint16_t> road_users)
    : names_(std::move(names)), road_users_(std::move(road_users)) {
    std::set<std::string> flagged;
    for (uint16_t id : road_users_) {
        auto it = names_.find(id);
        if (it == names_.end()) fail(ErrorCode::BadConfig, "road-user class " + std::to_string(id) + " has no name");
        flagged.insert(it->second);
    }
    if (flagged != kRoadUserNames)
        fail(ErrorCode::BadConfig, "road-user set must be exactly {vehicle, pedestrian, cyclist, traffic sign, traffic light}");
}

const std::string& ClassTable::name(uint16_t class_id) const {
    auto it = names_.find(class_id);
    if (it == names_.end()) fail(ErrorCode::BadConfig, "unknown class id " + std::to_string(class_id));
    return it->second;
}

void InstanceMask::validate() const {
    for (uint16_t id : ids.values)
        if (id != 0 && !class_of.count(id))
            fail(ErrorCode::BadConfig, "instance " + std::to_string(id) + " has no class entry");
}

std::set<uint16_t> attended_instance_ids(const AttentionMap& sal, const InstanceMask& inst,
                                         const ThresholdPolicy& tau, const ClassTable& classes) {
    require_same_shape(sal.grid, inst.ids);
    const ByteGrid mask = binarize(sal, tau);

    std::set<uint16_t> attended;
    for (size_t i = 0; i < mask.values.size(); ++i) {
        if (!mask.values[i]) continue;
        const uint16_t id = inst.ids.values[i];
        if (id == 0 || attended.count(id)) continue;
        auto it = inst.class_of.find(id);
        if (it == inst.class_of.end())
            fail(ErrorCode::BadConfig, "instance " + std::to_string(id) + " has no class entry");
        if (classes.is_road_user(it->second)) attended.insert(id);
    }
    return attended;
}

SemanticMask extract_attended(const AttentionMap& sal, const InstanceMask& inst, const ThresholdPolicy& tau,
                              const ClassTable& classes) {
    const std::set<uint16_t> attended = attended_instance_ids(sal, inst, tau, classes);

    SemanticMask out;
    out.class_ids = IdGrid(inst.ids.width, inst.ids.height, 0);
    if (attended.empty()) return out;
    for (size_t i = 0; i < inst.ids.values.size(); ++i) {
        const uint16_t id = inst.ids.values[i];
        if (id != 0 && attended.count(id)) out.class_ids.values[i] = inst.class_of.at(id);
    }
    return out;
}

}  // namespace gaze360
