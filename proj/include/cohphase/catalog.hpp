#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cohphase/series.hpp"

namespace cohphase {

enum class SystemId {
    Harmonic,
    PensonSolomon,
    BarutGirardello,
    GilmorePerelomov,
    HydrogenLike,
    PoschlTeller,
    InfiniteWell,
    Isotonic,
};

// A named real parameter with its validity range.  lo/hi bounds are
// inclusive unless the matching *_open flag is set; hi may be +inf.
struct ParamInfo {
    std::string name;
    double default_value;
    double lo;
    bool lo_open;
    double hi;
    bool hi_open;
    std::string doc;

    bool accepts(double v) const {
        const bool above = lo_open ? v > lo : v >= lo;
        const bool below = hi_open ? v < hi : v <= hi;
        return above && below;
    }
    std::string range_text() const;
};

struct CatalogEntry {
    SystemId id;
    std::string key;        // stable string used by the CLI and config files
    std::string summary;
    SpecKind kind;
    std::string expression; // reference definition in the expression language
    double radius;
    std::vector<ParamInfo> params;
};

// Stable-ordered catalog of the built-in state families.
const std::vector<CatalogEntry>& list_catalog();

// nullptr when no entry has the given key.
const CatalogEntry* find_entry(std::string_view key);

// Build the StateSpec for an entry.  `overrides` replaces parameter defaults
// by name; unknown names and out-of-range values raise InvalidParameter.
// Advisory notes (e.g. a non-half-integer kappa) are appended to `warnings`
// when provided.
StateSpec make(const CatalogEntry& entry, const std::map<std::string, double>& overrides = {},
               std::vector<std::string>* warnings = nullptr);
StateSpec make(SystemId id, const std::map<std::string, double>& overrides = {},
               std::vector<std::string>* warnings = nullptr);

} // namespace cohphase
