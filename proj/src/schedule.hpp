#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "wsn.hpp"

namespace aggsched {

/// One scheduled packet: `gamma` raw units cross sender -> receiver on
/// `channel` during `slot` (1-based).
struct ScheduleEntry {
    int slot = 0;
    NodeId sender = 0;
    NodeId receiver = 0;
    int gamma = 0;
    int channel = 0;
    friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

/// Slot-indexed transmission plan. slots[k] holds the entries of slot k+1.
struct Schedule {
    std::vector<std::vector<ScheduleEntry>> slots;

    int slot_count() const { return static_cast<int>(slots.size()); }
    void add(const ScheduleEntry& e);  // grows the slot list as needed
    std::vector<ScheduleEntry> all_entries() const;
    long long delivered_to(NodeId sink) const;

    /// One line per entry: "slot <k>: <sender> -> <receiver> gamma=<g> ch=<c>".
    std::string to_text() const;
    static Schedule from_text(std::string_view text);
    static Schedule from_file(const std::string& path);
};

}  // namespace aggsched
