#include "schedule.hpp"

#include <fstream>
#include <sstream>

#include "error.hpp"

namespace aggsched {

void Schedule::add(const ScheduleEntry& e) {
    if (e.slot < 1) fail(Errc::parse, "schedule slot indices start at 1");
    if (slot_count() < e.slot) slots.resize(static_cast<size_t>(e.slot));
    slots[static_cast<size_t>(e.slot - 1)].push_back(e);
}

std::vector<ScheduleEntry> Schedule::all_entries() const {
    std::vector<ScheduleEntry> out;
    for (const auto& s : slots) out.insert(out.end(), s.begin(), s.end());
    return out;
}

long long Schedule::delivered_to(NodeId sink) const {
    long long sum = 0;
    for (const auto& s : slots)
        for (const auto& e : s)
            if (e.receiver == sink) sum += e.gamma;
    return sum;
}

std::string Schedule::to_text() const {
    std::ostringstream out;
    for (size_t k = 0; k < slots.size(); ++k)
        for (const auto& e : slots[k])
            out << "slot " << (k + 1) << ": " << e.sender << " -> " << e.receiver << " gamma=" << e.gamma
                << " ch=" << e.channel << '\n';
    return out.str();
}

Schedule Schedule::from_text(std::string_view text) {
    Schedule s;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        ScheduleEntry e;
        std::string slot_tok, arrow, gamma_tok, ch_tok;
        if (kw != "slot" || !(ls >> slot_tok >> e.sender >> arrow >> e.receiver >> gamma_tok >> ch_tok) ||
            arrow != "->")
            fail(Errc::parse, "schedule line " + std::to_string(line_no) + ": expected 'slot <k>: <u> -> <v> gamma=<g> ch=<c>'");
        if (slot_tok.empty() || slot_tok.back() != ':')
            fail(Errc::parse, "schedule line " + std::to_string(line_no) + ": slot index must end with ':'");
        try {
            e.slot = std::stoi(slot_tok.substr(0, slot_tok.size() - 1));
            if (gamma_tok.rfind("gamma=", 0) != 0 || ch_tok.rfind("ch=", 0) != 0) throw std::invalid_argument("kv");
            e.gamma = std::stoi(gamma_tok.substr(6));
            e.channel = std::stoi(ch_tok.substr(3));
        } catch (const std::exception&) {
            fail(Errc::parse, "schedule line " + std::to_string(line_no) + ": malformed field");
        }
        if (e.slot < 1) fail(Errc::parse, "schedule line " + std::to_string(line_no) + ": slot must be >= 1");
        std::string extra;
        if (ls >> extra) fail(Errc::parse, "schedule line " + std::to_string(line_no) + ": trailing tokens");
        s.add(e);
    }
    return s;
}

Schedule Schedule::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(Errc::io, "cannot open schedule file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return from_text(ss.str());
}

}  // namespace aggsched
