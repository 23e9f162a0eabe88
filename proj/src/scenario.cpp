#include "kdrrf/scenario.hpp"

#include <stdexcept>

namespace kdrrf {

std::string to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::Grasping: return "grasping";
        case TaskKind::Relocating: return "relocating";
        case TaskKind::SortingFree: return "sorting_free";
        case TaskKind::SortingRegions: return "sorting_regions";
    }
    return "unknown";
}

TaskKind task_kind_from_string(const std::string& s) {
    if (s == "grasping") return TaskKind::Grasping;
    if (s == "relocating") return TaskKind::Relocating;
    if (s == "sorting_free") return TaskKind::SortingFree;
    if (s == "sorting_regions") return TaskKind::SortingRegions;
    throw std::invalid_argument("unknown task kind: " + s);
}

std::string to_string(PlannerKind kind) {
    return kind == PlannerKind::Kdrrf ? "kdrrf" : "dhrrt";
}

}  // namespace kdrrf
