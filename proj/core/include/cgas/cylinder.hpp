#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cgas/geometry.hpp"

namespace cgas {

// Handle to a contour inside a FamilyModel: a shape (or member) index plus a
// site translation. `key` is unique within the family and identifies the
// contour across cylinders.
struct BasisRef {
    int32_t shape = -1;
    Pt offset{0, 0};
    uint64_t key = 0;
    int32_t length = 0;

    friend bool operator==(const BasisRef& a, const BasisRef& b) { return a.key == b.key; }
};

// A contour alive on a time interval. Lives are half-open [birth, death);
// simultaneous births are ordered by id.
struct Cylinder {
    int32_t id = -1;
    BasisRef basis;
    double birth = 0;
    double death = 0;
    int32_t depth = 0;  // ancestor generation (roots are 0)
};

enum class Label : int8_t { unknown = -1, erased = 0, kept = 1 };

// A finite ancestor DAG of cylinders. `ancestors[i]` lists the ids of the
// first-generation ancestors of cylinder i: the cylinders born earlier whose
// bases are incompatible and whose lives intersect cylinder i's life.
struct Clan {
    std::vector<Cylinder> cylinders;            // ids are indices
    std::vector<std::vector<int32_t>> ancestors;
    std::vector<int32_t> roots;   // alive at the query time, basis in the query
    std::vector<Label> labels;    // filled by classify()
    size_t max_depth = 0;

    size_t size() const { return cylinders.size(); }
};

// Kept/erased classification. Cylinders without ancestors are kept; a
// cylinder is kept iff none of its first-generation ancestors is kept.
// Processes in (birth, id) order, so the result does not depend on the
// container order. Throws invariant_violation if some edge points to a
// cylinder that is not born strictly earlier (modulo the id tie rule).
void classify(Clan& clan);

class FamilyModel;

// Full structural validation: edge endpoints exist, edges respect the birth
// order, every edge joins incompatible cylinders, and the first-generation
// ancestor lists are complete within the clan. O(n^2); meant for tests and
// debugging runs.
void validate_clan(const Clan& clan, const FamilyModel& fam);

// Clan dump: JSON lines, one cylinder per line with id, basis id, birth,
// death, first-generation ancestor ids, and the kept/erased label.
void dump_clan_jsonl(const Clan& clan, const FamilyModel& fam, std::ostream& os);

// Inverse of dump_clan_jsonl; bases are resolved through the family. Labels
// present in the file are loaded into `expected_labels` when given.
Clan load_clan_jsonl(const FamilyModel& fam, std::istream& is,
                     std::vector<Label>* expected_labels = nullptr);

}  // namespace cgas
