#include "nambu/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>

namespace nambu {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Unsupported: return "unsupported";
    }
    return "?";
}

namespace {

std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string CheckReport::to_line(bool with_timing) const {
    std::ostringstream os;
    os << "CHECK " << name << " verdict=" << to_string(verdict) << " mode=" << mode
       << " cases=" << cases << " residual=" << residual << " seed=" << seed;
    if (witness) {
        os << " witness=\"" << witness->slots;
        if (!witness->point.empty()) {
            os << " @ (";
            for (std::size_t i = 0; i < witness->point.size(); ++i) {
                if (i) os << ",";
                os << fmt_double(witness->point[i]);
            }
            os << ")";
        }
        if (!witness->detail.empty()) os << " : " << witness->detail;
        os << "\"";
    }
    for (const auto& note : notes) os << " note=\"" << note << "\"";
    if (with_timing) os << " ms=" << fmt_double(elapsed_ms);
    return os.str();
}

std::string CheckReport::to_json(bool with_timing) const {
    nlohmann::json j;
    j["name"] = name;
    j["property"] = property;
    j["verdict"] = to_string(verdict);
    j["mode"] = mode;
    j["cases"] = cases;
    j["residual"] = residual;
    j["seed"] = seed;
    if (witness) {
        nlohmann::json w;
        w["slots"] = witness->slots;
        w["point"] = witness->point;
        w["detail"] = witness->detail;
        j["witness"] = w;
    }
    if (!notes.empty()) j["notes"] = notes;
    if (with_timing) j["ms"] = elapsed_ms;
    return j.dump();
}

}  // namespace nambu
