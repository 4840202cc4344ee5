#pragma once

// Result of one certified inequality check.

#include "bsmod/certified.hpp"

#include <map>
#include <string>

namespace bsmod {

enum class CheckStatus { pass, fail, inconclusive };

inline const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

struct CheckReport {
    std::string check_id;
    std::string paper_ref;
    std::map<std::string, std::string> params;
    CertifiedValue lhs;
    CertifiedValue rhs;
    double margin = 0.0; // rhs.lo - lhs.hi
    CheckStatus status = CheckStatus::inconclusive;

    /// Three-way verdict for "lhs <= rhs" at absolute tolerance tol.
    static CheckReport compare(std::string id, std::string ref, std::map<std::string, std::string> params,
                               const CertifiedValue& lhs, const CertifiedValue& rhs, double tol) {
        CheckReport r;
        r.check_id = std::move(id);
        r.paper_ref = std::move(ref);
        r.params = std::move(params);
        r.lhs = lhs;
        r.rhs = rhs;
        r.margin = rhs.lo - lhs.hi;
        if (r.margin >= -tol) r.status = CheckStatus::pass;
        else if (lhs.lo > rhs.hi + tol) r.status = CheckStatus::fail;
        else r.status = CheckStatus::inconclusive;
        return r;
    }
};

} // namespace bsmod
