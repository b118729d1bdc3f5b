#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "gaze360/attention.hpp"
#include "gaze360/types.hpp"

namespace gaze360 {

// Class catalogue with the road-user whitelist. The road-user set is pinned
// to exactly {vehicle, pedestrian, cyclist, traffic sign, traffic light}.
class ClassTable {
public:
    // The default catalogue: background 0, the five road-user classes 1..5,
    // and a few static-scene classes.
    static ClassTable standard();

    // Throws BadConfig unless the road-user-flagged names are exactly the
    // five expected ones.
    ClassTable(std::map<uint16_t, std::string> names, std::set<uint16_t> road_users);

    bool is_road_user(uint16_t class_id) const { return road_users_.count(class_id) > 0; }
    const std::string& name(uint16_t class_id) const;
    const std::map<uint16_t, std::string>& names() const { return names_; }
    const std::set<uint16_t>& road_user_ids() const { return road_users_; }

private:
    std::map<uint16_t, std::string> names_;
    std::set<uint16_t> road_users_;
};

// Per-pixel instance ids (0 = background) plus the instance -> class mapping.
struct InstanceMask {
    IdGrid ids;
    std::map<uint16_t, uint16_t> class_of;

    // Throws BadConfig when a nonzero grid id lacks a class_of entry.
    void validate() const;
};

// Per-pixel class ids of attended objects (0 = background).
struct SemanticMask {
    IdGrid class_ids;
};

// The attended instance set: road-user instances whose pixels intersect the
// binarized attention map in at least one pixel.
// Throws ShapeMismatch / InvalidMap.
std::set<uint16_t> attended_instance_ids(const AttentionMap& sal, const InstanceMask& inst,
                                         const ThresholdPolicy& tau, const ClassTable& classes);

// Rasterizes the attended set: every pixel of an attended instance gets the
// instance's class id, all other pixels 0. An instance is attended as a
// whole, including its pixels outside the salient region.
SemanticMask extract_attended(const AttentionMap& sal, const InstanceMask& inst, const ThresholdPolicy& tau,
                              const ClassTable& classes);

}  // namespace gaze360
