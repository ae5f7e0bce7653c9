#include "cgas/cylinder.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "cgas/errors.hpp"
#include "cgas/family.hpp"

#include "json.hpp"

namespace cgas {

void dump_clan_jsonl(const Clan& clan, const FamilyModel& fam, std::ostream& os) {
    for (size_t i = 0; i < clan.size(); ++i) {
        const Cylinder& c = clan.cylinders[i];
        nlohmann::ordered_json j;
        j["id"] = c.id;
        j["basis"] = c.basis.key;
        j["basis_contour"] = fam.materialize(c.basis).to_line();
        j["birth"] = c.birth;
        j["death"] = c.death;
        j["ancestors"] = clan.ancestors[i];
        if (!clan.labels.empty())
            j["label"] = clan.labels[i] == Label::kept ? "kept" : "erased";
        os << j.dump() << "\n";
    }
}

Clan load_clan_jsonl(const FamilyModel& fam, std::istream& is,
                     std::vector<Label>* expected_labels) {
    Clan clan;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        Cylinder c;
        c.id = j.at("id").get<int32_t>();
        c.basis = fam.resolve(Contour::parse_line(j.at("basis_contour").get<std::string>()));
        c.birth = j.at("birth").get<double>();
        c.death = j.at("death").get<double>();
        if (c.id != int32_t(clan.cylinders.size()))
            throw invariant_violation("clan jsonl: ids must be consecutive from 0");
        clan.cylinders.push_back(c);
        clan.ancestors.push_back(j.at("ancestors").get<std::vector<int32_t>>());
        if (expected_labels && j.contains("label"))
            expected_labels->push_back(j["label"] == "kept" ? Label::kept : Label::erased);
    }
    for (size_t i = 0; i < clan.size(); ++i)
        for (int32_t a : clan.ancestors[i])
            if (a < 0 || a >= int32_t(clan.size()))
                throw invariant_violation("clan jsonl: ancestor id out of range");
    return clan;
}

}  // namespace cgas
